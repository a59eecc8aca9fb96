//! Descending chains of finite-index subgroups, as coset tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{
    first_subgroup_of_index, free_abelian_coordinates, mod_p_characters, reidemeister_schreier, tietze_simplify,
    CosetTable, Presentation, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("cannot parse chain strategy {0:?}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("factor must be at least 2")]
    BadFactor,
    #[error("step index must be at least 2")]
    BadStepIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainStrategy {
    /// Kernels of `G_k -> H_1(G_k; Z/p)`; with `cyclic`, of the first
    /// character `G_k -> Z/p` only.
    ModP { prime: u64, cyclic: bool },
    /// Preimages of `f^k` times the free part of the abelianization.
    Sublattice { factor: usize },
    /// At each step, the first subgroup of the given index in the
    /// lexicographic low-index search.
    LowIndex { step_index: usize },
    Constant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub strategy: ChainStrategy,
    pub depth: usize,
}

impl fmt::Display for ChainStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainStrategy::ModP { prime, cyclic: false } => write!(f, "mod:{prime}"),
            ChainStrategy::ModP { prime, cyclic: true } => write!(f, "mod-cyclic:{prime}"),
            ChainStrategy::Sublattice { factor } => write!(f, "sublattice:{factor}"),
            ChainStrategy::LowIndex { step_index } => write!(f, "low-index:{step_index}"),
            ChainStrategy::Constant => write!(f, "constant"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FromStr for ChainStrategy {
    type Err = ChainError;

    /// Accepts `mod:p`, `mod-cyclic:p`, `sublattice:f`, `low-index:s`,
    /// `constant`, and the shorthands `mod2`, `mod2-cyclic`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChainError::Parse(s.to_string());
        let s = s.trim().to_ascii_lowercase();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.to_string(), Some(a.to_string())),
            None => (s.clone(), None),
        };
        let num = |a: Option<String>| a.and_then(|a| a.trim().parse::<u64>().ok()).ok_or_else(bad);
        let strategy = match head.as_str() {
            "constant" => ChainStrategy::Constant,
            "mod" | "mod-p" => ChainStrategy::ModP { prime: num(arg)?, cyclic: false },
            "mod-cyclic" => ChainStrategy::ModP { prime: num(arg)?, cyclic: true },
            "sublattice" => ChainStrategy::Sublattice { factor: num(arg)? as usize },
            "low-index" => ChainStrategy::LowIndex { step_index: num(arg)? as usize },
            _ => {
                let (body, cyclic) = match head.strip_suffix("-cyclic") {
                    Some(b) => (b, true),
                    None => (head.as_str(), false),
                };
                match body.strip_prefix("mod").and_then(|p| p.parse().ok()) {
                    Some(prime) if arg.is_none() => ChainStrategy::ModP { prime, cyclic },
                    _ => return Err(bad()),
                }
            }
        };
        strategy.validate()?;
        Ok(strategy)
    }
}

impl ChainStrategy {
    pub fn validate(&self) -> Result<(), ChainError> {
        match *self {
            ChainStrategy::ModP { prime, .. } if !is_prime(prime) => Err(ChainError::NotPrime(prime)),
            ChainStrategy::Sublattice { factor } if factor < 2 => Err(ChainError::BadFactor),
            ChainStrategy::LowIndex { step_index } if step_index < 2 => Err(ChainError::BadStepIndex),
            _ => Ok(()),
        }
    }
}

/// Coset tables over the input presentation, level 0 being the whole group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Chain {
    pub spec: ChainSpec,
    pub tables: Vec<CosetTable>,
    /// Why the chain stopped before the requested depth, if it did.
    pub truncated: Option<String>,
}

impl Chain {
    pub fn indices(&self) -> Vec<usize> {
        self.tables.iter().map(CosetTable::degree).collect()
    }
}

/// The subgroup of `G_k` as an action of `G_k`'s Schreier generators (in a
/// simplified presentation) on a finite set.
enum Step {
    /// Generator i acts on `Z/modulus^r` by adding `shifts[i]`.
    Translations { modulus: usize, shifts: Vec<Vec<usize>> },
    Table(CosetTable),
}

impl Step {
    fn degree(&self) -> usize {
        match self {
            Step::Translations { modulus, shifts } => modulus.saturating_pow(shifts.first().map_or(0, Vec::len) as u32),
            Step::Table(t) => t.degree(),
        }
    }

    fn act(&self, a: usize, w: &Word) -> usize {
        match self {
            Step::Translations { modulus, shifts } => {
                let r = shifts.first().map_or(0, Vec::len);
                let mut digits: Vec<usize> = (0..r).map(|i| a / modulus.pow(i as u32) % modulus).collect();
                for &l in w.letters() {
                    let g = l.unsigned_abs() as usize - 1;
                    for (d, &s) in digits.iter_mut().zip(&shifts[g]) {
                        *d = if l > 0 { (*d + s) % modulus } else { (*d + modulus - s) % modulus };
                    }
                }
                digits.iter().rev().fold(0, |acc, &d| acc * modulus + d)
            }
            Step::Table(t) => t.act_word(a, w),
        }
    }
}

/// Combines a table of G_k (over `q`) with an action of G_k describing
/// G_{k+1}: cosets are pairs (coset of G_k, point of the action).
fn extend(q: &Presentation, table: &CosetTable, step: impl FnOnce(&Presentation) -> Option<Step>, max_cosets: usize) -> Result<CosetTable, String> {
    let schreier = reidemeister_schreier(q, table);
    let simp = tietze_simplify(&schreier.presentation, 100_000);
    let step = step(&simp.presentation).ok_or_else(|| "no subgroup found for the next level".to_string())?;
    let (d, s) = (table.degree(), step.degree());
    if s <= 1 {
        return Err("next level would not be a proper subgroup".into());
    }
    if d.saturating_mul(s) > max_cosets {
        return Err(format!("next level has index {} > limit {max_cosets}", d as u128 * s as u128));
    }
    let perms = (0..q.generator_count())
        .map(|g| {
            (0..d * s)
                .map(|x| {
                    let (c, a) = (x % d, x / d);
                    let c2 = table.permutation(g)[c];
                    let a2 = match schreier.generator_at(c, g) {
                        Some(i) => step.act(a, &simp.images[i]),
                        None => a,
                    };
                    a2 * d + c2
                })
                .collect()
        })
        .collect();
    let t = CosetTable::from_permutations(d * s, perms).map_err(|e| e.to_string())?;
    Ok(t.standardized())
}

fn translations(modulus: usize, characters: Vec<Vec<u64>>, gens: usize) -> Step {
    Step::Translations {
        modulus,
        shifts: (0..gens).map(|g| characters.iter().map(|c| c[g] as usize).collect()).collect(),
    }
}

/// Builds the chain for `spec` over `p`, stopping early (and saying why)
/// if a level would exceed `max_cosets` or no subgroup is found.
pub fn build_chain(p: &Presentation, spec: &ChainSpec, max_cosets: usize) -> Result<Chain, ChainError> {
    spec.strategy.validate()?;
    let simp = tietze_simplify(p, 100_000);
    let q = &simp.presentation;
    let mut q_tables = vec![CosetTable::trivial(q.generator_count())];
    let mut truncated = None;
    match spec.strategy {
        ChainStrategy::Constant => {
            let one = q_tables[0].clone();
            q_tables.extend(std::iter::repeat_n(one, spec.depth));
        }
        ChainStrategy::Sublattice { factor } => {
            let coords = free_abelian_coordinates(q);
            let b = coords.first().map_or(0, Vec::len);
            for k in 1..=spec.depth {
                let Some(modulus) = factor.checked_pow(k as u32).filter(|m| m.checked_pow(b as u32).is_some_and(|i| i <= max_cosets)) else {
                    truncated = Some(format!("level {k} exceeds the coset limit {max_cosets}"));
                    break;
                };
                if b == 0 {
                    truncated = Some("abelianization has no free part".into());
                    break;
                }
                let shifts = coords
                    .iter()
                    .map(|row| row.iter().map(|&x| x.rem_euclid(modulus as i64) as usize).collect())
                    .collect();
                let step = Step::Translations { modulus, shifts };
                let perms = (0..q.generator_count())
                    .map(|g| (0..step.degree()).map(|a| step.act(a, &Word::generator(g))).collect())
                    .collect();
                let t = CosetTable::from_permutations(step.degree(), perms).expect("translations are transitive");
                q_tables.push(t.standardized());
            }
        }
        ChainStrategy::ModP { prime, cyclic } => {
            for k in 1..=spec.depth {
                let last = q_tables.last().expect("level 0 present");
                let next = extend(
                    q,
                    last,
                    |s| {
                        let mut chars = mod_p_characters(s, prime);
                        if cyclic {
                            chars.truncate(1);
                        }
                        (!chars.is_empty()).then(|| translations(prime as usize, chars, s.generator_count()))
                    },
                    max_cosets,
                );
                match next {
                    Ok(t) => q_tables.push(t),
                    Err(e) => {
                        truncated = Some(format!("level {k}: {e}"));
                        break;
                    }
                }
            }
        }
        ChainStrategy::LowIndex { step_index } => {
            for k in 1..=spec.depth {
                let last = q_tables.last().expect("level 0 present");
                let next = extend(q, last, |s| first_subgroup_of_index(s, step_index).map(Step::Table), max_cosets);
                match next {
                    Ok(t) => q_tables.push(t),
                    Err(e) => {
                        truncated = Some(format!("level {k}: {e}"));
                        break;
                    }
                }
            }
        }
    }
    let tables = q_tables
        .iter()
        .map(|t| t.pull_back(&simp.images).expect("tables of the simplified presentation pull back"))
        .collect();
    Ok(Chain {
        spec: *spec,
        tables,
        truncated,
    })
}
