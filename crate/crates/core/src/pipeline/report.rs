//! Orchestration of a gradient run and the machine-readable report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::chain::{build_chain, ChainError, ChainSpec};
use super::catalog::CatalogEntry;
use crate::constructions::{extract_generators, verify_lemma_4_2, ConstructionError};
use crate::covers::{build_cover_with, CoverCache};
use crate::groups::{
    abelianization_min_generators, presentation_from_complex, reidemeister_schreier, tietze_simplify, CosetTable,
};
use crate::simplicial::{validate_triangulation, OrientedTriangulation};
use crate::volume::sequence::check_levels;
use crate::volume::{stable_sequence, volume_lower_bound, AnnealConfig, SequenceConfig, SequenceError, StableSequence};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Budgets and the seed for one run. Everything random derives from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    pub seed: u64,
    pub move_budget: u64,
    pub tietze_budget: usize,
    pub max_cosets: usize,
    pub anneal: AnnealConfig,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            seed: 0,
            move_budget: 100_000,
            tietze_budget: 100_000,
            max_cosets: 100_000,
            anneal: AnnealConfig::default(),
        }
    }
}

impl Budgets {
    pub fn sequence_config(&self) -> SequenceConfig {
        SequenceConfig {
            seed: self.seed,
            move_budget: self.move_budget,
            anneal: self.anneal.clone(),
            tietze_budget: self.tietze_budget,
        }
    }
}

/// Generator extraction run on a level's simplified triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelLemma {
    pub cycle_terms: usize,
    pub generators: usize,
    pub index: Option<usize>,
    pub passed: bool,
    pub error: Option<String>,
}

/// One flat row per level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub level: usize,
    pub index: usize,
    pub volume_lower: usize,
    pub volume_upper: usize,
    pub volume_upper_ratio: f64,
    pub rank_lower: usize,
    pub rank_upper: usize,
    /// `(rank_lower - 1) / index` floored at 0 for display.
    pub rank_lower_ratio: f64,
    pub rank_lower_ratio_raw: f64,
    pub rank_upper_ratio: f64,
    pub inequality_holds: bool,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    /// Smallest `(rank_lower - 1) / index` seen (raw). An upper
    /// approximation of the gradient along the chain, not its limit.
    pub best_rank_lower_ratio: f64,
    pub best_rank_upper_ratio: f64,
    pub best_volume_upper_ratio: f64,
    pub inequality_holds: bool,
    pub partial: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub manifold: String,
    pub catalog: Option<CatalogEntry>,
    pub base_hash: String,
    pub chain: ChainSpec,
    pub budgets: Budgets,
    pub chain_truncated: Option<String>,
    pub tables: Vec<CosetTable>,
    pub rows: Vec<ReportRow>,
    pub sequence: StableSequence,
    pub lemmas: Vec<LevelLemma>,
    pub summary: ReportSummary,
}

impl Report {
    pub fn has_violations(&self) -> bool {
        !self.summary.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "level,index,volume_lower,volume_upper,volume_upper_ratio,rank_lower,rank_upper,rank_lower_ratio,rank_lower_ratio_raw,rank_upper_ratio,inequality,flags\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.level,
                r.index,
                r.volume_lower,
                r.volume_upper,
                r.volume_upper_ratio,
                r.rank_lower,
                r.rank_upper,
                r.rank_lower_ratio,
                r.rank_lower_ratio_raw,
                r.rank_upper_ratio,
                if r.inequality_holds { "ok" } else { "VIOLATED" },
                r.flags.join(";")
            ));
        }
        out
    }
}

fn level_lemma(w: &OrientedTriangulation) -> LevelLemma {
    let c = w.fundamental_cycle().chain;
    let e = extract_generators(w, &c, 0);
    match verify_lemma_4_2(w, &c, &e) {
        Ok(cert) => LevelLemma {
            cycle_terms: c.len(),
            generators: e.generators.len(),
            index: Some(cert.index),
            passed: cert.passed(),
            error: None,
        },
        Err(err) => LevelLemma {
            cycle_terms: c.len(),
            generators: e.generators.len(),
            index: match err {
                ConstructionError::IndexNotOne { index } => Some(index),
                _ => None,
            },
            passed: false,
            error: Some(err.to_string()),
        },
    }
}

/// Runs the whole pipeline for one manifold and chain.
pub fn run_theorem_report(
    manifold: &str,
    t: &OrientedTriangulation,
    catalog: Option<CatalogEntry>,
    spec: &ChainSpec,
    budgets: &Budgets,
    cache: Option<&CoverCache>,
) -> Result<Report, ReportError> {
    let p = presentation_from_complex(t, 0);
    let chain = build_chain(&p, spec, budgets.max_cosets)?;
    let sequence = stable_sequence(t, &p, &chain.tables, &budgets.sequence_config(), cache)?;
    let lemmas: Vec<LevelLemma> = sequence.levels.iter().map(|l| level_lemma(&l.volume_upper_witness)).collect();

    let mut violations = sequence.violations.clone();
    let mut rows = Vec::with_capacity(sequence.levels.len());
    for (l, lemma) in sequence.levels.iter().zip(&lemmas) {
        let mut flags = Vec::new();
        if l.rank_upper_unresolved {
            flags.push("rank_upper_unresolved".to_string());
        }
        if l.simplification.unsupported_dimension {
            flags.push("unsimplified_dimension".to_string());
        }
        if !lemma.passed {
            flags.push("generator_certificate_failed".to_string());
        }
        if lemma.index.is_some() && lemma.generators < l.rank.lower {
            violations.push(format!("level {}: {} generators but rank lower bound {}", l.level, lemma.generators, l.rank.lower));
        }
        let raw = l.rank_lower_ratio();
        let inequality_holds = l.rank.lower as i64 - 1 <= l.volume_upper as i64;
        rows.push(ReportRow {
            level: l.level,
            index: l.index,
            volume_lower: l.volume_lower,
            volume_upper: l.volume_upper,
            volume_upper_ratio: l.volume_ratio(),
            rank_lower: l.rank.lower,
            rank_upper: l.rank.upper,
            rank_lower_ratio: raw.max(0.0),
            rank_lower_ratio_raw: raw,
            rank_upper_ratio: l.rank_upper_ratio(),
            inequality_holds,
            flags,
        });
    }
    let min = |f: fn(&ReportRow) -> f64| rows.iter().map(f).fold(f64::INFINITY, f64::min);
    let summary = ReportSummary {
        best_rank_lower_ratio: min(|r| r.rank_lower_ratio_raw),
        best_rank_upper_ratio: min(|r| r.rank_upper_ratio),
        best_volume_upper_ratio: min(|r| r.volume_upper_ratio),
        inequality_holds: rows.iter().all(|r| r.inequality_holds),
        partial: chain.truncated.is_some(),
        violations,
    };
    Ok(Report {
        schema_version: REPORT_SCHEMA_VERSION,
        manifold: manifold.to_string(),
        catalog,
        base_hash: t.content_hash(),
        chain: *spec,
        budgets: budgets.clone(),
        chain_truncated: chain.truncated,
        tables: chain.tables,
        rows,
        sequence,
        lemmas,
        summary,
    })
}

/// Re-checks a report against its base triangulation without searching:
/// tables, covers, witnesses, recomputed lower bounds and all inequalities.
/// Returns the problems found.
pub fn validate_report(report: &Report, t: &OrientedTriangulation) -> Vec<String> {
    let mut problems = Vec::new();
    let mut fail = |s: String| problems.push(s);
    if report.schema_version != REPORT_SCHEMA_VERSION {
        fail(format!("schema version {} unsupported", report.schema_version));
        return problems;
    }
    if report.base_hash != t.content_hash() {
        fail("base triangulation hash differs".into());
        return problems;
    }
    let p = presentation_from_complex(t, 0);
    let simp = tietze_simplify(&p, report.budgets.tietze_budget);
    let levels = &report.sequence.levels;
    if levels.len() != report.tables.len() || report.rows.len() != levels.len() {
        fail("level counts disagree".into());
        return problems;
    }
    for (k, table) in report.tables.iter().enumerate() {
        let l = &levels[k];
        if k > 0 && !table.refines(&report.tables[k - 1]) {
            fail(format!("level {k}: table does not refine the previous level"));
        }
        if table.check_relators(&p).is_err() {
            fail(format!("level {k}: table is not an action of the group"));
            continue;
        }
        if table.content_hash() != l.table_hash || table.degree() != l.index {
            fail(format!("level {k}: table does not match its record"));
        }
        let cover = match build_cover_with(t, &p, table) {
            Ok(c) => c,
            Err(e) => {
                fail(format!("level {k}: {e}"));
                continue;
            }
        };
        let w = &l.volume_upper_witness;
        match validate_triangulation(w.facets().to_vec()) {
            Ok(v) if v.facet_count() == l.volume_upper && v.dimension() == t.dimension() => {
                if v.complex().homology_all() != cover.total.complex().homology_all() {
                    fail(format!("level {k}: witness homology differs from the cover"));
                }
                let (lower, _) = volume_lower_bound(&v, &presentation_from_complex(&v, 0));
                if lower != l.volume_lower {
                    fail(format!("level {k}: recomputed volume lower bound {lower} != {}", l.volume_lower));
                }
            }
            _ => fail(format!("level {k}: upper witness invalid or wrong size")),
        }
        if let Ok(q_table) = table.restrict(&simp.kept) {
            let schreier = reidemeister_schreier(&simp.presentation, &q_table);
            let (rank_lower, _) = abelianization_min_generators(&schreier.presentation);
            if rank_lower != l.rank.lower {
                fail(format!("level {k}: recomputed rank lower bound {rank_lower} != {}", l.rank.lower));
            }
            let upper = tietze_simplify(&schreier.presentation, report.budgets.tietze_budget)
                .presentation
                .generator_count();
            if upper.max(rank_lower) != l.rank.upper {
                fail(format!("level {k}: recomputed rank upper bound {upper} != {}", l.rank.upper));
            }
        } else {
            fail(format!("level {k}: table does not restrict to the simplified presentation"));
        }
        let r = &report.rows[k];
        if r.index != l.index
            || r.volume_upper != l.volume_upper
            || r.volume_lower != l.volume_lower
            || r.rank_lower != l.rank.lower
            || r.rank_upper != l.rank.upper
        {
            fail(format!("level {k}: row disagrees with its record"));
        }
    }
    for v in check_levels(levels) {
        fail(v);
    }
    for r in &report.rows {
        if r.rank_lower as i64 - 1 > r.volume_upper as i64 || !r.inequality_holds {
            fail(format!("level {}: inequality violated", r.level));
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::CatalogName;

    fn run(name: CatalogName, chain: &str, depth: usize, move_budget: u64) -> (OrientedTriangulation, Report) {
        let t = name.triangulation();
        let spec = ChainSpec {
            strategy: chain.parse().unwrap(),
            depth,
        };
        let budgets = Budgets {
            move_budget,
            ..Budgets::default()
        };
        let r = run_theorem_report(&name.to_string(), &t, Some(name.entry()), &spec, &budgets, None).unwrap();
        (t, r)
    }

    #[test]
    fn torus_report_validates() {
        let (t, r) = run(CatalogName::Torus(2), "sublattice:2", 2, 20_000);
        assert!(!r.has_violations(), "{:?}", r.summary.violations);
        assert!(r.summary.inequality_holds);
        assert_eq!(r.rows.iter().map(|r| r.index).collect::<Vec<_>>(), vec![1, 4, 16]);
        assert!(r.lemmas.iter().all(|l| l.passed));
        assert_eq!(validate_report(&r, &t), Vec::<String>::new());
        assert_eq!(r.to_csv().lines().count(), 4);
    }

    #[test]
    fn tampered_report_is_rejected() {
        let (t, mut r) = run(CatalogName::Torus(2), "sublattice:2", 1, 5_000);
        r.sequence.levels[1].rank.lower = 3;
        r.rows[1].rank_lower = 3;
        assert!(!validate_report(&r, &t).is_empty());
    }

    #[test]
    fn sphere_rank_ratio_is_floored() {
        let (_, r) = run(CatalogName::Sphere(3), "constant", 1, 1_000);
        assert_eq!(r.rows[0].rank_lower_ratio_raw, -1.0);
        assert_eq!(r.rows[0].rank_lower_ratio, 0.0);
        assert!(r.rows[0].volume_upper_ratio > 0.0);
    }

    #[test]
    fn reports_are_deterministic() {
        let (_, a) = run(CatalogName::Surface(2), "mod2-cyclic", 1, 5_000);
        let (_, b) = run(CatalogName::Surface(2), "mod2-cyclic", 1, 5_000);
        assert_eq!(a.to_json(), b.to_json());
    }
}
