use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::chain::IntegerChain;
use super::complex::SimplicialComplex;
use super::simplex::Simplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("empty facet list")]
    Empty,
    #[error("facet {facet} has {found} vertices, expected {expected}")]
    NonUniformArity {
        facet: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension 0 is not supported (need n > 0)")]
    ZeroDimensional,
    #[error("facet {facet} repeats a vertex")]
    RepeatedVertex { facet: usize },
    #[error("facets {first} and {second} span the same simplex")]
    DuplicateFacet { first: usize, second: usize },
    #[error("face {face} lies in {count} facets (a closed pseudo-manifold needs exactly 2)")]
    NotPseudoManifold { face: Simplex, count: usize },
    #[error("facet adjacency graph has {components} components")]
    NotConnected { components: usize },
    #[error("orientation propagation contradicts itself at facet {facet}")]
    NotOrientable { facet: usize },
}

/// A closed, connected, coherently oriented pseudo-manifold given by its
/// facets. Vertices are `0..vertex_count`. Each facet keeps the vertex order
/// it was given in; `signs[i]` orients facet i relative to that order so that
/// the signed facet sum is a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedTriangulation {
    dimension: usize,
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
    signs: Vec<i8>,
}

/// Validates a facet list and computes coherent orientation signs by
/// breadth-first propagation from facet 0 (sign +1). Vertex ids may be any
/// nonnegative integers; they are renumbered `0..V` preserving order.
pub fn validate_triangulation(facets: Vec<Vec<usize>>) -> Result<OrientedTriangulation, TriangulationError> {
    let first = facets.first().ok_or(TriangulationError::Empty)?;
    let arity = first.len();
    if arity < 2 {
        return Err(TriangulationError::ZeroDimensional);
    }
    for (i, f) in facets.iter().enumerate() {
        if f.len() != arity {
            return Err(TriangulationError::NonUniformArity {
                facet: i,
                expected: arity,
                found: f.len(),
            });
        }
    }

    let mut ids: Vec<usize> = facets.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let renumber: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facets: Vec<Vec<usize>> = facets
        .into_iter()
        .map(|f| f.into_iter().map(|v| renumber[&v]).collect())
        .collect();

    // incidences[face] = [(facet, unsigned incidence of the face in the ordered facet)]
    let mut incidences: HashMap<Simplex, Vec<(usize, i32)>> = HashMap::new();
    let mut seen: HashMap<Simplex, usize> = HashMap::new();
    for (i, f) in facets.iter().enumerate() {
        let (sorted, perm) =
            Simplex::from_ordered(f).ok_or(TriangulationError::RepeatedVertex { facet: i })?;
        if let Some(&j) = seen.get(&sorted) {
            return Err(TriangulationError::DuplicateFacet { first: j, second: i });
        }
        for (sign, face) in sorted.faces() {
            incidences.entry(face).or_default().push((i, sign * perm));
        }
        seen.insert(sorted, i);
    }
    // deterministic error reporting: smallest offending face
    let mut bad: Vec<(&Simplex, usize)> = incidences
        .iter()
        .filter(|(_, v)| v.len() != 2)
        .map(|(f, v)| (f, v.len()))
        .collect();
    bad.sort();
    if let Some((face, count)) = bad.first() {
        return Err(TriangulationError::NotPseudoManifold {
            face: (*face).clone(),
            count: *count,
        });
    }

    let mut neighbours: Vec<Vec<(usize, i32, i32)>> = vec![Vec::new(); facets.len()];
    for pair in incidences.values() {
        let (a, ea) = pair[0];
        let (b, eb) = pair[1];
        neighbours[a].push((b, ea, eb));
        neighbours[b].push((a, eb, ea));
    }
    for n in &mut neighbours {
        n.sort_unstable();
    }

    let mut signs = vec![0i8; facets.len()];
    let mut components = 0;
    let mut contradiction: Option<usize> = None;
    for start in 0..facets.len() {
        if signs[start] != 0 {
            continue;
        }
        components += 1;
        signs[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &(g, ef, eg) in &neighbours[f] {
                // s_f * e_f + s_g * e_g = 0
                let want = (-(signs[f] as i32) * ef * eg) as i8;
                if signs[g] == 0 {
                    signs[g] = want;
                    queue.push_back(g);
                } else if signs[g] != want && contradiction.is_none() {
                    contradiction = Some(g);
                }
            }
        }
    }
    if components > 1 {
        return Err(TriangulationError::NotConnected { components });
    }
    if let Some(facet) = contradiction {
        return Err(TriangulationError::NotOrientable { facet });
    }

    Ok(OrientedTriangulation {
        dimension: arity - 1,
        vertex_count: ids.len(),
        facets,
        signs,
    })
}

impl OrientedTriangulation {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_facets(&self.facets)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex().euler_characteristic()
    }

    /// Facet `i` as a sorted simplex with its orientation coefficient.
    pub fn oriented_facet(&self, i: usize) -> (Simplex, i32) {
        let f = &self.facets[i];
        let (s, perm) = Simplex::from_ordered(f).expect("validated facet");
        (s, perm * self.signs[i] as i32)
    }

    /// The signed sum of all facets. It is a cycle because the orientation is
    /// coherent, and it generates top homology because every facet appears
    /// with coefficient +-1.
    pub fn fundamental_cycle(&self) -> FundamentalCycle {
        let mut chain = IntegerChain::new(self.dimension);
        for i in 0..self.facets.len() {
            let (s, c) = self.oriented_facet(i);
            chain.add(s, BigInt::from(c));
        }
        debug_assert!(chain.boundary().is_zero());
        FundamentalCycle {
            l1: self.facets.len() as u64,
            chain,
        }
    }

    /// Facets reordered so that each one is positively oriented as listed
    /// (odd sign flips swap the first two vertices).
    pub fn positively_ordered_facets(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .zip(&self.signs)
            .map(|(f, &s)| {
                let mut f = f.clone();
                if s < 0 {
                    f.swap(0, 1);
                }
                f
            })
            .collect()
    }

    /// SHA-256 of the canonical text form.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(super::io::write_triangulation(self).as_bytes()))
    }

    /// Whether `chain` is a fundamental cycle: a cycle equal to +-1 times the
    /// signed facet sum. In a connected closed pseudo-manifold every n-cycle is
    /// an integer multiple of that sum, so this is exactly "represents a
    /// generator of H_n".
    pub fn is_fundamental_cycle(&self, chain: &IntegerChain) -> bool {
        if chain.degree() != self.dimension || !chain.boundary().is_zero() {
            return false;
        }
        let canonical = self.fundamental_cycle().chain;
        chain == &canonical || chain == &canonical.negated()
    }

    /// Simplex counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.complex().f_vector()
    }

    /// Vertex degrees: number of facets containing each vertex.
    pub fn vertex_facet_degrees(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for f in &self.facets {
            for &v in f {
                *out.entry(v).or_insert(0) += 1;
            }
        }
        out
    }
}

/// An integral n-cycle representing the fundamental class, with its l1 norm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub chain: IntegerChain,
    pub l1: u64,
}

impl FundamentalCycle {
    /// Wraps a chain after checking it is a fundamental cycle of `t`.
    pub fn certify(t: &OrientedTriangulation, chain: IntegerChain) -> Option<FundamentalCycle> {
        if !t.is_fundamental_cycle(&chain) {
            return None;
        }
        let l1 = u64::try_from(chain.l1()).ok()?;
        Some(FundamentalCycle { chain, l1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere3() -> Vec<Vec<usize>> {
        (0..5)
            .map(|skip| (0..5).filter(|&v| v != skip).collect())
            .collect()
    }

    #[test]
    fn four_simplex_boundary_is_valid() {
        let t = validate_triangulation(sphere3()).unwrap();
        assert_eq!(t.dimension(), 3);
        assert_eq!(t.facet_count(), 5);
        assert!(t.fundamental_cycle().chain.boundary().is_zero());
        assert_eq!(t.fundamental_cycle().l1, 5);
    }

    #[test]
    fn renumbers_sparse_ids() {
        let t = validate_triangulation(vec![vec![10, 20], vec![20, 30], vec![30, 10]]).unwrap();
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.facets()[0], vec![0, 1]);
    }

    #[test]
    fn rejects_boundary() {
        let err = validate_triangulation(vec![vec![0, 1, 2]]).unwrap_err();
        assert!(matches!(err, TriangulationError::NotPseudoManifold { count: 1, .. }));
    }

    #[test]
    fn rejects_disconnected() {
        let err = validate_triangulation(vec![
            vec![0, 1],
            vec![1, 2],
            vec![2, 0],
            vec![3, 4],
            vec![4, 5],
            vec![5, 3],
        ])
        .unwrap_err();
        assert_eq!(err, TriangulationError::NotConnected { components: 2 });
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert_eq!(validate_triangulation(vec![]).unwrap_err(), TriangulationError::Empty);
        assert_eq!(
            validate_triangulation(vec![vec![0], vec![1]]).unwrap_err(),
            TriangulationError::ZeroDimensional
        );
        assert!(matches!(
            validate_triangulation(vec![vec![0, 1], vec![1, 2, 3]]).unwrap_err(),
            TriangulationError::NonUniformArity { .. }
        ));
        assert_eq!(
            validate_triangulation(vec![vec![0, 0], vec![0, 1]]).unwrap_err(),
            TriangulationError::RepeatedVertex { facet: 0 }
        );
        assert!(matches!(
            validate_triangulation(vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap_err(),
            TriangulationError::DuplicateFacet { .. }
        ));
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        // 6-vertex RP^2: a Moebius band with a disk glued along its boundary
        let rp2 = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ];
        assert!(matches!(
            validate_triangulation(rp2).unwrap_err(),
            TriangulationError::NotOrientable { .. }
        ));
    }

    #[test]
    fn orientation_signs_follow_facet_order() {
        // second facet listed with the "wrong" order gets sign -1
        let t = validate_triangulation(vec![vec![0, 1], vec![2, 1], vec![2, 0]]).unwrap();
        assert_eq!(t.signs(), &[1, -1, 1]);
        let fc = t.fundamental_cycle();
        assert!(t.is_fundamental_cycle(&fc.chain));
        assert!(t.is_fundamental_cycle(&fc.chain.negated()));
        assert!(!t.is_fundamental_cycle(&fc.chain.scaled(&BigInt::from(2))));
    }
}
