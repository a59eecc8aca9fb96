//! Finite covering triangulations built from coset tables, with projection
//! data and lifting of fundamental cycles.

pub mod cache;

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{presentation_from_complex, CosetTable, EdgeWords, Presentation};
use crate::simplicial::{
    validate_triangulation, FundamentalCycle, IntegerChain, OrientedTriangulation, Simplex, TriangulationError,
};

pub use cache::CoverCache;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("coset table does not belong to this triangulation's presentation: {0}")]
    LabelMismatch(String),
    #[error("covering complex failed validation: {0}")]
    Invalid(#[from] TriangulationError),
    #[error("chain is not a fundamental cycle of the base")]
    NotAFundamentalCycle,
}

/// A finite cover of a base triangulation. Cover vertex `v * degree + c`
/// is the copy of base vertex v on sheet (coset) c; cover facet
/// `j * degree + c` is the lift of base facet j whose first listed vertex is
/// on sheet c.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverComplex {
    pub total: OrientedTriangulation,
    pub base: OrientedTriangulation,
    pub degree: usize,
    pub vertex_map: Vec<(usize, usize)>,
    pub facet_map: Vec<usize>,
    pub presentation: Presentation,
    pub table: CosetTable,
}

/// Builds the cover of `t` for a coset table of
/// `presentation_from_complex(t, 0)`.
pub fn build_cover(t: &OrientedTriangulation, table: &CosetTable) -> Result<CoverComplex, CoverError> {
    build_cover_with(t, &presentation_from_complex(t, 0), table)
}

/// Builds the cover for a table of the given edge-labelled presentation of
/// `t`'s fundamental group.
pub fn build_cover_with(
    t: &OrientedTriangulation,
    p: &Presentation,
    table: &CosetTable,
) -> Result<CoverComplex, CoverError> {
    let words = edge_words_for(t, p)?;
    table
        .check_relators(p)
        .map_err(|e| CoverError::LabelMismatch(e.to_string()))?;
    let d = table.degree();
    let mut facets = Vec::with_capacity(t.facet_count() * d);
    let mut facet_map = Vec::with_capacity(t.facet_count() * d);
    for (j, f) in t.facets().iter().enumerate() {
        let shifts: Vec<_> = f.iter().map(|&v| words.edge_word(f[0], v)).collect();
        for c in 0..d {
            facets.push(
                f.iter()
                    .zip(&shifts)
                    .map(|(&v, w)| v * d + table.act_word(c, w))
                    .collect(),
            );
            facet_map.push(j);
        }
    }
    let total = validate_triangulation(facets)?;
    if total.vertex_count() != t.vertex_count() * d {
        return Err(CoverError::LabelMismatch("lifted vertices do not cover every sheet".into()));
    }
    let vertex_map = (0..t.vertex_count()).flat_map(|v| (0..d).map(move |c| (v, c))).collect();
    Ok(CoverComplex {
        total,
        base: t.clone(),
        degree: d,
        vertex_map,
        facet_map,
        presentation: p.clone(),
        table: table.clone(),
    })
}

fn edge_words_for(t: &OrientedTriangulation, p: &Presentation) -> Result<EdgeWords, CoverError> {
    let words = p
        .edge_words()
        .ok_or_else(|| CoverError::LabelMismatch("presentation has no edge labels".into()))?;
    let labels = p.labels().expect("edge words imply labels");
    let complex = t.complex();
    for &(u, v) in labels {
        if u >= t.vertex_count() || v >= t.vertex_count() || complex.index_of(&Simplex::from_sorted(vec![u, v])).is_none() {
            return Err(CoverError::LabelMismatch(format!("generator edge ({u}, {v}) is not an edge")));
        }
    }
    Ok(words)
}

impl CoverComplex {
    pub fn project_vertex(&self, v: usize) -> usize {
        self.vertex_map[v].0
    }

    /// Cover vertex of base vertex v on sheet c.
    pub fn vertex_on_sheet(&self, v: usize, c: usize) -> usize {
        v * self.degree + c
    }

    /// Lift of a base simplex (whose edges are edges of the base) with its
    /// first vertex on sheet `sheet`.
    pub fn lift_simplex(&self, s: &Simplex, sheet: usize) -> Simplex {
        let words = self.presentation.edge_words().expect("cover presentations are labelled");
        let vs = s.vertices();
        let lifted: Vec<usize> = vs
            .iter()
            .map(|&v| self.vertex_on_sheet(v, self.table.act_word(sheet, &words.edge_word(vs[0], v))))
            .collect();
        Simplex::from_sorted(lifted)
    }

    /// Pushes a cover chain down to the base.
    pub fn project_chain(&self, c: &IntegerChain) -> IntegerChain {
        c.pushforward(|v| self.project_vertex(v))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.total.euler_characteristic()
    }
}

/// The full preimage of a base fundamental cycle: every simplex lifted to
/// every sheet with its coefficient.
pub fn lift_fundamental_cycle(cover: &CoverComplex, c: &FundamentalCycle) -> Result<FundamentalCycle, CoverError> {
    if !cover.base.is_fundamental_cycle(&c.chain) {
        return Err(CoverError::NotAFundamentalCycle);
    }
    let mut lifted = IntegerChain::new(c.chain.degree());
    for (s, a) in c.chain.iter() {
        for sheet in 0..cover.degree {
            lifted.add(cover.lift_simplex(s, sheet), a.clone());
        }
    }
    FundamentalCycle::certify(&cover.total, lifted).ok_or(CoverError::NotAFundamentalCycle)
}

/// Outcome of [`verify_covering`]: each named check with its result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub degree: usize,
    pub base_euler: i64,
    pub total_euler: i64,
    pub checks: Vec<(String, bool)>,
}

impl CoverCertificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }
}

pub const CHECK_FACET_COUNT: &str = "facet count is degree times base";
pub const CHECK_FACET_BIJECTION: &str = "projection maps each facet bijectively onto its base facet";
pub const CHECK_FIBRES: &str = "every base facet has exactly degree lifts";
pub const CHECK_F_VECTOR: &str = "simplex counts multiply by degree";
pub const CHECK_EULER: &str = "euler characteristic multiplies by degree";
pub const CHECK_PUSHFORWARD: &str = "fundamental class pushes forward to degree times base class";

/// Re-checks all covering invariants from the stored data.
pub fn verify_covering(cover: &CoverComplex) -> CoverCertificate {
    let d = cover.degree;
    let base = &cover.base;
    let total = &cover.total;
    let mut checks = Vec::new();
    checks.push((CHECK_FACET_COUNT.to_string(), total.facet_count() == d * base.facet_count()));

    let base_sorted: Vec<Simplex> = (0..base.facet_count()).map(|j| base.oriented_facet(j).0).collect();
    let bijective = cover.facet_map.len() == total.facet_count()
        && total.facets().iter().zip(&cover.facet_map).all(|(f, &j)| {
            j < base_sorted.len()
                && Simplex::from_ordered(&f.iter().map(|&v| cover.project_vertex(v)).collect::<Vec<_>>())
                    .is_some_and(|(s, _)| s == base_sorted[j])
        });
    checks.push((CHECK_FACET_BIJECTION.to_string(), bijective));

    let mut fibre = vec![0usize; base.facet_count()];
    for &j in &cover.facet_map {
        if j < fibre.len() {
            fibre[j] += 1;
        }
    }
    checks.push((CHECK_FIBRES.to_string(), fibre.iter().all(|&k| k == d)));

    let fb = base.f_vector();
    let ft = total.f_vector();
    checks.push((
        CHECK_F_VECTOR.to_string(),
        fb.len() == ft.len() && fb.iter().zip(&ft).all(|(a, b)| a * d == *b),
    ));
    let (eb, et) = (base.euler_characteristic(), total.euler_characteristic());
    checks.push((CHECK_EULER.to_string(), et == eb * d as i64));

    let pushed = cover.project_chain(&total.fundamental_cycle().chain);
    let target = base.fundamental_cycle().chain;
    let k = BigInt::from(d);
    checks.push((
        CHECK_PUSHFORWARD.to_string(),
        pushed == target.scaled(&k) || pushed == target.scaled(&-k),
    ));
    CoverCertificate {
        degree: d,
        base_euler: eb,
        total_euler: et,
        checks,
    }
}

/// Index of each base facet by its sorted vertex set.
pub fn facet_index(t: &OrientedTriangulation) -> HashMap<Simplex, usize> {
    (0..t.facet_count()).map(|j| (t.oriented_facet(j).0, j)).collect()
}
