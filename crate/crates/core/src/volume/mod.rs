//! Bounds for integral simplicial volume and the stable sequence along a
//! chain of covers.
//!
//! Upper bounds are facet counts. Within a single triangulation the top
//! cycle space has rank one, so the triangulation's own signed facet sum is
//! the only simplicial fundamental cycle up to sign; smaller upper bounds
//! come only from changing the triangulation by bistellar moves. Lower
//! bounds are Betti numbers and the abelianization rank of the fundamental
//! group.

pub mod pachner;
pub mod sequence;

use serde::{Deserialize, Serialize};

use crate::groups::{abelianization_min_generators, Presentation};
use crate::simplicial::OrientedTriangulation;

pub use pachner::{apply_move, available_moves, pachner_simplify, AnnealConfig, SimplifyOutcome};
pub use sequence::{stable_sequence, LevelRecord, SequenceConfig, SequenceError, StableSequence};

/// Which bound produced the volume lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerWitness {
    Betti { degree: usize, value: usize },
    AbelianRank { value: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VolumeBound {
    pub lower: usize,
    pub upper: usize,
    pub lower_witness: LowerWitness,
    /// A triangulation of the same manifold with `upper` facets.
    pub upper_witness: OrientedTriangulation,
    pub simplification: SimplifyStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyStats {
    pub initial_facets: usize,
    pub final_facets: usize,
    pub proposals: u64,
    pub accepted: u64,
    pub unsupported_dimension: bool,
}

impl From<&SimplifyOutcome> for SimplifyStats {
    fn from(o: &SimplifyOutcome) -> Self {
        SimplifyStats {
            initial_facets: o.initial_facets,
            final_facets: o.final_facets,
            proposals: o.proposals,
            accepted: o.accepted,
            unsupported_dimension: o.unsupported_dimension,
        }
    }
}

/// Lower bound from Betti numbers and the abelianization rank of `p` (a
/// presentation of the fundamental group).
pub fn volume_lower_bound(t: &OrientedTriangulation, p: &Presentation) -> (usize, LowerWitness) {
    let mut best = (0, LowerWitness::Betti { degree: 0, value: 0 });
    for (k, h) in t.complex().homology_all().iter().enumerate() {
        if h.betti > best.0 {
            best = (h.betti, LowerWitness::Betti { degree: k, value: h.betti });
        }
    }
    let (rank, _) = abelianization_min_generators(p);
    if rank > best.0 {
        best = (rank, LowerWitness::AbelianRank { value: rank });
    }
    best
}

/// Certified interval for the integral simplicial volume of `t`.
pub fn volume_bounds(
    t: &OrientedTriangulation,
    p: &Presentation,
    seed: u64,
    move_budget: u64,
    cfg: &AnnealConfig,
) -> VolumeBound {
    let simplified = pachner_simplify(t, seed, move_budget, cfg);
    // Homology is a homeomorphism invariant; the smaller witness is cheaper.
    let (lower, lower_witness) = volume_lower_bound(&simplified.triangulation, p);
    VolumeBound {
        lower,
        upper: simplified.final_facets,
        lower_witness,
        simplification: SimplifyStats::from(&simplified),
        upper_witness: simplified.triangulation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::presentation_from_complex;
    use crate::pipeline::CatalogName;

    fn bounds(n: CatalogName) -> VolumeBound {
        let t = n.triangulation();
        let p = presentation_from_complex(&t, 0);
        volume_bounds(&t, &p, 1, 20_000, &AnnealConfig::default())
    }

    #[test]
    fn torus_interval() {
        let b = bounds(CatalogName::Torus(2));
        assert!(b.lower >= 2 && b.upper <= 14 && b.lower <= b.upper);
    }

    #[test]
    fn genus_two_lower_bound_is_four() {
        let b = bounds(CatalogName::Surface(2));
        assert_eq!(b.lower, 4);
        assert!(b.upper <= 72);
        assert_eq!(b.upper_witness.facet_count(), b.upper);
    }

    #[test]
    fn sphere_interval() {
        let b = bounds(CatalogName::Sphere(3));
        assert_eq!(b.lower, 1);
        assert!(b.upper <= 5);
    }
}
