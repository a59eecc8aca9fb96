use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use super::matrix::{invariant_factors, SparseIntMatrix};
use super::simplex::Simplex;
use super::snf::HomologyGroup;

/// The full face poset of a set of facets, with a canonical (sorted) order of
/// simplices in each dimension.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Closes `facets` under taking faces. Facets may have mixed dimensions.
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[usize]>,
    {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for f in facets {
            let (s, _) = Simplex::from_ordered(f.as_ref()).expect("facet repeats a vertex");
            for face in s.all_faces() {
                let d = face.len() - 1;
                if sets.len() <= d {
                    sets.resize_with(d + 1, BTreeSet::new);
                }
                sets[d].insert(face);
            }
        }
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = by_dim
            .iter()
            .map(|list| list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        SimplicialComplex { by_dim, index }
    }

    /// Top dimension; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    /// Simplex counts (f-vector) from dimension 0 upward.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Boundary matrix of `C_k -> C_{k-1}`: columns are k-simplices, rows are
    /// (k-1)-simplices, entries `(-1)^i` for the face omitting vertex i. For
    /// k = 0 the matrix has no rows.
    pub fn boundary_matrix(&self, k: usize) -> SparseIntMatrix {
        let cols = self.count(k);
        if k == 0 {
            return SparseIntMatrix::new(0, cols);
        }
        let rows = self.count(k - 1);
        let mut m = SparseIntMatrix::new(rows, cols);
        for (j, s) in self.simplices(k).iter().enumerate() {
            for (sign, f) in s.faces() {
                let i = self.index[k - 1][&f];
                m.insert(i, j, sign);
            }
        }
        m
    }

    /// Integral homology in degree k, from the invariant factors of the
    /// boundary maps on either side.
    pub fn homology(&self, k: usize) -> HomologyGroup {
        let n_k = self.count(k);
        let rank_out = if k == 0 { 0 } else { invariant_factors(&self.boundary_matrix(k)).len() };
        let incoming = invariant_factors(&self.boundary_matrix(k + 1));
        let betti = n_k - rank_out - incoming.len();
        HomologyGroup::new(betti, incoming.into_iter().filter(|d| d > &BigInt::from(1)).collect())
    }

    /// Homology in all degrees 0..=dim.
    pub fn homology_all(&self) -> Vec<HomologyGroup> {
        match self.dimension() {
            None => Vec::new(),
            Some(n) => (0..=n).map(|k| self.homology(k)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle_boundary_columns_sum_to_zero() {
        let c = SimplicialComplex::from_facets([[0usize, 1, 2]]);
        let d1 = c.boundary_matrix(1).to_dense();
        assert_eq!((d1.rows(), d1.cols()), (3, 3));
        for j in 0..3 {
            let s: BigInt = (0..3).map(|i| d1.get(i, j).clone()).sum();
            assert_eq!(s, BigInt::from(0));
        }
        assert!(c.boundary_matrix(1).mul(&c.boundary_matrix(2)).is_zero());
    }

    #[test]
    fn triangle_is_contractible() {
        let c = SimplicialComplex::from_facets([[0usize, 1, 2]]);
        let h = c.homology_all();
        assert_eq!(h[0], HomologyGroup::new(1, vec![]));
        assert!(h[1].is_trivial() && h[2].is_trivial());
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let c = SimplicialComplex::from_facets([[0usize, 1], [1, 2], [0, 2]]);
        assert_eq!(c.homology(1), HomologyGroup::new(1, vec![]));
        assert_eq!(c.euler_characteristic(), 0);
    }
}
