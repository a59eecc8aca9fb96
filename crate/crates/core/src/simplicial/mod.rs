//! Exact integral simplicial chain complexes: triangulation validation and
//! orientation, boundary operators, Smith normal form, homology, and
//! fundamental cycles.

pub mod chain;
pub mod complex;
pub mod io;
pub mod matrix;
pub mod simplex;
pub mod snf;
pub mod triangulation;

pub use chain::IntegerChain;
pub use complex::SimplicialComplex;
pub use matrix::{invariant_factors, IntMatrix, SparseIntMatrix};
pub use simplex::Simplex;
pub use snf::{smith_normal_form, HomologyGroup, SnfResult};
pub use triangulation::{validate_triangulation, FundamentalCycle, OrientedTriangulation, TriangulationError};

/// Boundary matrix `C_k -> C_{k-1}` of the triangulation.
pub fn boundary_matrix(t: &OrientedTriangulation, k: usize) -> SparseIntMatrix {
    assert!(k <= t.dimension(), "boundary degree out of range");
    t.complex().boundary_matrix(k)
}

pub fn homology(t: &OrientedTriangulation, k: usize) -> HomologyGroup {
    assert!(k <= t.dimension(), "homology degree out of range");
    t.complex().homology(k)
}

pub fn fundamental_cycle(t: &OrientedTriangulation) -> FundamentalCycle {
    t.fundamental_cycle()
}
