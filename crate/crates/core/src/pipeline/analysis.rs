//! Single-manifold summaries: invariants, bounds and both certificates.

use serde::{Deserialize, Serialize};

use super::report::Budgets;
use crate::constructions::{
    build_glued_complex, extract_generators, verify_lemma_4_1, verify_lemma_4_2, GluedCertificate, SubgroupCertificate,
};
use crate::groups::{abelianization_min_generators, presentation_from_complex, tietze_simplify, RankBounds};
use crate::simplicial::OrientedTriangulation;
use crate::volume::{volume_bounds, LowerWitness, SimplifyStats};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Analysis {
    pub dimension: usize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub homology: Vec<String>,
    pub presentation_generators: usize,
    pub presentation_relators: usize,
    pub simplified_presentation: String,
    pub rank: RankBounds,
    pub rank_upper_unresolved: bool,
    pub volume_lower: usize,
    pub volume_upper: usize,
    pub volume_lower_witness: LowerWitness,
    pub simplification: SimplifyStats,
}

pub fn analyze(t: &OrientedTriangulation, budgets: &Budgets) -> Analysis {
    let p = presentation_from_complex(t, 0);
    let simp = tietze_simplify(&p, budgets.tietze_budget);
    let (lower, _) = abelianization_min_generators(&p);
    let vb = volume_bounds(t, &p, budgets.seed, budgets.move_budget, &budgets.anneal);
    Analysis {
        dimension: t.dimension(),
        f_vector: t.f_vector(),
        euler_characteristic: t.euler_characteristic(),
        homology: t.complex().homology_all().iter().map(|h| h.to_string()).collect(),
        presentation_generators: p.generator_count(),
        presentation_relators: p.relators().len(),
        simplified_presentation: simp.presentation.to_string(),
        rank: RankBounds::new(lower, simp.presentation.generator_count().max(lower)),
        rank_upper_unresolved: simp.budget_exhausted,
        volume_lower: vb.lower,
        volume_upper: vb.upper,
        volume_lower_witness: vb.lower_witness,
        simplification: vb.simplification,
    }
}

/// Both certificates on the canonical fundamental cycle. Errors are kept as
/// messages so one failing certificate does not hide the other.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub cycle_terms: usize,
    pub glued: Result<GluedCertificate, String>,
    pub extraction_generators: usize,
    pub extraction: Result<SubgroupCertificate, String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.glued.as_ref().is_ok_and(GluedCertificate::passed)
            && self.extraction.as_ref().is_ok_and(SubgroupCertificate::passed)
    }
}

pub fn verify_lemmas(t: &OrientedTriangulation) -> LemmaReport {
    let c = t.fundamental_cycle().chain;
    let glued = build_glued_complex(t, &c)
        .and_then(|x| verify_lemma_4_1(t, &x))
        .map_err(|e| e.to_string());
    let e = extract_generators(t, &c, 0);
    let extraction = verify_lemma_4_2(t, &c, &e).map_err(|e| e.to_string());
    LemmaReport {
        cycle_terms: c.len(),
        glued,
        extraction_generators: e.generators.len(),
        extraction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::CatalogName;

    #[test]
    fn genus_two_analysis() {
        let t = CatalogName::Surface(2).triangulation();
        let a = analyze(&t, &Budgets { move_budget: 20_000, ..Budgets::default() });
        assert_eq!(a.euler_characteristic, -2);
        assert_eq!(a.rank, RankBounds::new(4, 4));
        assert_eq!(a.volume_lower, 4);
        assert!(a.volume_upper <= 72);
    }

    #[test]
    fn lemmas_pass_on_torus() {
        assert!(verify_lemmas(&CatalogName::Torus(2).triangulation()).passed());
    }
}
