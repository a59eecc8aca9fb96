use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{volume_bounds, AnnealConfig, LowerWitness, SimplifyStats};
use crate::covers::{build_cover_with, CoverCache, CoverError};
use crate::groups::{abelianization_min_generators, reidemeister_schreier, tietze_simplify, CosetTable, Presentation, RankBounds};
use crate::simplicial::OrientedTriangulation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("level {level} is not a subgroup of level {}", level - 1)]
    ChainNotDescending { level: usize },
    #[error("level {level}: {source}")]
    Cover { level: usize, source: CoverError },
    #[error("level {level}: table does not act on the simplified presentation")]
    Restriction { level: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceConfig {
    pub seed: u64,
    pub move_budget: u64,
    pub anneal: AnnealConfig,
    pub tietze_budget: usize,
}

impl Default for SequenceConfig {
    fn default() -> Self {
        SequenceConfig {
            seed: 0,
            move_budget: 100_000,
            anneal: AnnealConfig::default(),
            tietze_budget: 100_000,
        }
    }
}

/// One level of the chain: a cover and the subgroup it corresponds to.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub index: usize,
    pub cover_facets: usize,
    pub volume_lower: usize,
    pub volume_upper: usize,
    pub volume_lower_witness: LowerWitness,
    pub volume_upper_witness: OrientedTriangulation,
    pub simplification: SimplifyStats,
    pub rank: RankBounds,
    /// Tietze ran out of budget; `rank.upper` is the best count reached.
    pub rank_upper_unresolved: bool,
    pub schreier_generators: usize,
    pub table_hash: String,
    pub seed: u64,
}

impl LevelRecord {
    pub fn volume_ratio(&self) -> f64 {
        self.volume_upper as f64 / self.index as f64
    }

    pub fn volume_lower_ratio(&self) -> f64 {
        self.volume_lower as f64 / self.index as f64
    }

    /// `(rank_lower - 1) / index`, unfloored.
    pub fn rank_lower_ratio(&self) -> f64 {
        (self.rank.lower as f64 - 1.0) / self.index as f64
    }

    pub fn rank_upper_ratio(&self) -> f64 {
        (self.rank.upper as f64 - 1.0) / self.index as f64
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StableSequence {
    pub levels: Vec<LevelRecord>,
    /// Running minimum of `volume_upper / index`.
    pub running_min_volume: Vec<f64>,
    /// Running minimum of `(rank_lower - 1) / index`.
    pub running_min_rank_lower: Vec<f64>,
    /// Running minimum of `(rank_upper - 1) / index`.
    pub running_min_rank_upper: Vec<f64>,
    /// Contradictions between certified bounds. Nonempty means a bug.
    pub violations: Vec<String>,
}

fn level_seed(seed: u64, level: usize) -> u64 {
    seed ^ (level as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn running_min(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut m = f64::INFINITY;
    values
        .map(|v| {
            m = m.min(v);
            m
        })
        .collect()
}

/// Walks a descending chain of coset tables of `p` (an edge-labelled
/// presentation of `t`'s group): builds each cover, bounds its volume and
/// the rank of the subgroup, and checks the bounds against each other.
pub fn stable_sequence(
    t: &OrientedTriangulation,
    p: &Presentation,
    chain: &[CosetTable],
    cfg: &SequenceConfig,
    cache: Option<&CoverCache>,
) -> Result<StableSequence, SequenceError> {
    for (k, w) in chain.windows(2).enumerate() {
        if !w[1].refines(&w[0]) {
            return Err(SequenceError::ChainNotDescending { level: k + 1 });
        }
    }
    let simplified = tietze_simplify(p, cfg.tietze_budget);
    let q = &simplified.presentation;
    let mut levels = Vec::with_capacity(chain.len());
    for (level, table) in chain.iter().enumerate() {
        let cover = match cache {
            Some(c) => c.get_or_build(t, p, table),
            None => build_cover_with(t, p, table),
        }
        .map_err(|source| SequenceError::Cover { level, source })?;
        let q_table = table
            .restrict(&simplified.kept)
            .map_err(|_| SequenceError::Restriction { level })?;
        let schreier = reidemeister_schreier(q, &q_table);
        let (rank_lower, _) = abelianization_min_generators(&schreier.presentation);
        let sub = tietze_simplify(&schreier.presentation, cfg.tietze_budget);
        let rank_upper = sub.presentation.generator_count();
        let seed = level_seed(cfg.seed, level);
        let cover_p = crate::groups::presentation_from_complex(&cover.total, 0);
        let vb = volume_bounds(&cover.total, &cover_p, seed, cfg.move_budget, &cfg.anneal);
        levels.push(LevelRecord {
            level,
            index: table.degree(),
            cover_facets: cover.total.facet_count(),
            volume_lower: vb.lower,
            volume_upper: vb.upper,
            volume_lower_witness: vb.lower_witness,
            volume_upper_witness: vb.upper_witness,
            simplification: vb.simplification,
            rank: RankBounds::new(rank_lower, rank_upper.max(rank_lower)),
            rank_upper_unresolved: sub.budget_exhausted,
            schreier_generators: schreier.presentation.generator_count(),
            table_hash: table.content_hash(),
            seed,
        });
    }
    let running_min_volume = running_min(levels.iter().map(LevelRecord::volume_ratio));
    let running_min_rank_lower = running_min(levels.iter().map(LevelRecord::rank_lower_ratio));
    let running_min_rank_upper = running_min(levels.iter().map(LevelRecord::rank_upper_ratio));
    let violations = check_levels(&levels);
    Ok(StableSequence {
        levels,
        running_min_volume,
        running_min_rank_lower,
        running_min_rank_upper,
        violations,
    })
}

/// Soundness checks that hold for any correct bounds.
pub fn check_levels(levels: &[LevelRecord]) -> Vec<String> {
    let mut out = Vec::new();
    let mut best_upper_ratio = f64::INFINITY;
    for r in levels {
        let k = r.level;
        if r.volume_lower > r.volume_upper {
            out.push(format!("level {k}: volume lower {} > upper {}", r.volume_lower, r.volume_upper));
        }
        if r.rank.lower > r.rank.upper {
            out.push(format!("level {k}: rank lower {} > upper {}", r.rank.lower, r.rank.upper));
        }
        if r.rank.lower > r.volume_upper {
            out.push(format!("level {k}: rank lower {} > volume upper {}", r.rank.lower, r.volume_upper));
        }
        // (rank_lower - 1) / index <= volume_upper / index, compared exactly
        if r.rank.lower as i64 - 1 > r.volume_upper as i64 {
            out.push(format!("level {k}: rank ratio exceeds volume ratio"));
        }
        // volume ratios are non-increasing in the exact values, so a lower
        // bound here cannot beat an earlier certified upper bound
        if r.volume_lower_ratio() > best_upper_ratio + 1e-12 {
            out.push(format!(
                "level {k}: volume lower ratio {} exceeds earlier upper ratio {best_upper_ratio}",
                r.volume_lower_ratio()
            ));
        }
        best_upper_ratio = best_upper_ratio.min(r.volume_ratio());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{low_index_subgroups, presentation_from_complex};
    use crate::pipeline::CatalogName;

    #[test]
    fn constant_chain_repeats_level_zero() {
        let t = CatalogName::Torus(2).triangulation();
        let p = presentation_from_complex(&t, 0);
        let one = CosetTable::trivial(p.generator_count());
        let cfg = SequenceConfig {
            move_budget: 2000,
            ..SequenceConfig::default()
        };
        let s = stable_sequence(&t, &p, &[one.clone(), one.clone(), one], &cfg, None).unwrap();
        assert!(s.violations.is_empty());
        let r0 = &s.levels[0];
        for r in &s.levels {
            assert_eq!(r.index, 1);
            assert_eq!(r.rank, r0.rank);
            assert_eq!(r.rank_lower_ratio(), 1.0);
        }
    }

    #[test]
    fn non_descending_chain_is_rejected() {
        let t = CatalogName::Torus(2).triangulation();
        let p = presentation_from_complex(&t, 0);
        let simp = tietze_simplify(&p, 1000);
        let index2: Vec<CosetTable> = low_index_subgroups(&simp.presentation, 2)
            .into_iter()
            .filter(|t| t.degree() == 2)
            .map(|q| q.pull_back(&simp.images).unwrap())
            .collect();
        let chain = [index2[0].clone(), index2[1].clone()];
        assert_eq!(
            stable_sequence(&t, &p, &chain, &SequenceConfig::default(), None).unwrap_err(),
            SequenceError::ChainNotDescending { level: 1 }
        );
    }
}
