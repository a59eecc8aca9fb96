//! Executable versions of two arguments bounding the rank of the
//! fundamental group by the size of an integral fundamental cycle: the
//! complex glued from the simplices of a cycle, and the subgroup generated
//! by one group element per simplex.

pub mod extraction;
pub mod glued;

use thiserror::Error;

use crate::covers::CoverError;

pub use extraction::{extract_generators, verify_lemma_4_2, GeneratorExtraction, SubgroupCertificate};
pub use glued::{build_glued_complex, verify_lemma_4_1, GluedCell, GluedComplex, GluedCertificate};

/// Default coset limit for the enumerations run by the certificates.
pub const DEFAULT_COSET_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("chain has nonzero boundary")]
    NotACycle,
    #[error("chain has degree {found}, triangulation has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("chain simplex {0:?} is not a facet of the triangulation")]
    NotSupported(Vec<usize>),
    #[error("image subgroup enumeration exceeded {limit} cosets")]
    SurjectivityUnresolved { limit: usize },
    #[error("image subgroup has index {index}, expected 1")]
    NotSurjective { index: usize },
    #[error("subgroup enumeration exceeded {limit} cosets")]
    Unresolved { limit: usize },
    #[error("generated subgroup has index {index}, expected 1")]
    IndexNotOne { index: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
}
