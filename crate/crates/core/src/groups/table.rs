use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::presentation::Presentation;
use super::word::{generator_of, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("generator {generator} does not act as a permutation of {degree} cosets")]
    NotAPermutation { generator: usize, degree: usize },
    #[error("table has degree 0")]
    Empty,
    #[error("action is not transitive")]
    NotTransitive,
    #[error("relator {relator} does not fix coset {coset}")]
    RelatorFails { relator: usize, coset: usize },
    #[error("table has {found} generators, presentation has {expected}")]
    GeneratorCount { expected: usize, found: usize },
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    degree: usize,
    perms: Vec<Vec<usize>>,
}

/// Right action of the generators on the cosets of a finite-index subgroup.
/// Coset 0 is the subgroup itself; `act(c, g)` is the coset `c g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct CosetTable {
    degree: usize,
    perms: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl TryFrom<RawTable> for CosetTable {
    type Error = TableError;
    fn try_from(r: RawTable) -> Result<Self, TableError> {
        CosetTable::from_permutations(r.degree, r.perms)
    }
}

impl From<CosetTable> for RawTable {
    fn from(t: CosetTable) -> RawTable {
        RawTable {
            degree: t.degree,
            perms: t.perms,
        }
    }
}

impl CosetTable {
    /// Builds a table from generator permutations; checks bijectivity and
    /// transitivity.
    pub fn from_permutations(degree: usize, perms: Vec<Vec<usize>>) -> Result<Self, TableError> {
        if degree == 0 {
            return Err(TableError::Empty);
        }
        let mut inverses = Vec::with_capacity(perms.len());
        for (g, p) in perms.iter().enumerate() {
            let bad = TableError::NotAPermutation { generator: g, degree };
            if p.len() != degree {
                return Err(bad);
            }
            let mut inv = vec![usize::MAX; degree];
            for (c, &d) in p.iter().enumerate() {
                if d >= degree || inv[d] != usize::MAX {
                    return Err(bad);
                }
                inv[d] = c;
            }
            inverses.push(inv);
        }
        let t = CosetTable {
            degree,
            perms,
            inverses,
        };
        if !t.is_transitive() {
            return Err(TableError::NotTransitive);
        }
        Ok(t)
    }

    /// The table of the whole group: a single coset.
    pub fn trivial(generator_count: usize) -> Self {
        CosetTable::from_permutations(1, vec![vec![0]; generator_count]).expect("one coset")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_count(&self) -> usize {
        self.perms.len()
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.perms[g]
    }

    pub fn act(&self, c: usize, l: Letter) -> usize {
        let g = generator_of(l);
        if l > 0 {
            self.perms[g][c]
        } else {
            self.inverses[g][c]
        }
    }

    pub fn act_word(&self, c: usize, w: &Word) -> usize {
        w.letters().iter().fold(c, |c, &l| self.act(c, l))
    }

    /// Whether the word lies in the subgroup (fixes coset 0).
    pub fn contains(&self, w: &Word) -> bool {
        self.act_word(0, w) == 0
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut n = 1;
        while let Some(c) = queue.pop_front() {
            for g in 0..self.perms.len() {
                for d in [self.perms[g][c], self.inverses[g][c]] {
                    if !seen[d] {
                        seen[d] = true;
                        n += 1;
                        queue.push_back(d);
                    }
                }
            }
        }
        n == self.degree
    }

    /// Checks every relator fixes every coset.
    pub fn check_relators(&self, p: &Presentation) -> Result<(), TableError> {
        if p.generator_count() != self.generator_count() {
            return Err(TableError::GeneratorCount {
                expected: p.generator_count(),
                found: self.generator_count(),
            });
        }
        for (i, r) in p.relators().iter().enumerate() {
            for c in 0..self.degree {
                if self.act_word(c, r) != c {
                    return Err(TableError::RelatorFails { relator: i, coset: c });
                }
            }
        }
        Ok(())
    }

    /// Renumbers cosets in order of first appearance when scanning cosets in
    /// order and, within a coset, the letters `g_0, g_0^-1, g_1, ...`.
    pub fn standardized(&self) -> CosetTable {
        let n = self.degree;
        let mut new_of = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        new_of[0] = 0;
        order.push(0);
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for g in 0..self.perms.len() {
                for d in [self.perms[g][c], self.inverses[g][c]] {
                    if new_of[d] == usize::MAX {
                        new_of[d] = order.len();
                        order.push(d);
                    }
                }
            }
        }
        let perms = self
            .perms
            .iter()
            .map(|p| order.iter().map(|&c| new_of[p[c]]).collect())
            .collect();
        CosetTable::from_permutations(n, perms).expect("renumbering keeps a valid table")
    }

    pub fn is_standard(&self) -> bool {
        *self == self.standardized()
    }

    /// Action of the generators `kept[i]` only, as a table for a
    /// presentation on those generators.
    pub fn restrict(&self, kept: &[usize]) -> Result<CosetTable, TableError> {
        CosetTable::from_permutations(self.degree, kept.iter().map(|&g| self.perms[g].clone()).collect())
    }

    /// Table over another generating set whose generator `i` equals the word
    /// `images[i]` in this table's generators.
    pub fn pull_back(&self, images: &[Word]) -> Result<CosetTable, TableError> {
        let perms = images
            .iter()
            .map(|w| (0..self.degree).map(|c| self.act_word(c, w)).collect())
            .collect();
        CosetTable::from_permutations(self.degree, perms)
    }

    /// If this subgroup is contained in `parent`'s, returns the projection of
    /// cosets `c -> c'` with `0 -> 0` that intertwines the actions.
    pub fn refinement_map(&self, parent: &CosetTable) -> Option<Vec<usize>> {
        if parent.generator_count() != self.generator_count() || !self.degree.is_multiple_of(parent.degree) {
            return None;
        }
        let mut map = vec![usize::MAX; self.degree];
        map[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.perms.len() {
                for (d, e) in [
                    (self.perms[g][c], parent.perms[g][map[c]]),
                    (self.inverses[g][c], parent.inverses[g][map[c]]),
                ] {
                    if map[d] == usize::MAX {
                        map[d] = e;
                        queue.push_back(d);
                    } else if map[d] != e {
                        return None;
                    }
                }
            }
        }
        Some(map)
    }

    pub fn refines(&self, parent: &CosetTable) -> bool {
        self.refinement_map(parent).is_some()
    }

    /// SHA-256 of the permutation data, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("degree {} gens {}\n", self.degree, self.perms.len()));
        for p in &self.perms {
            let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            h.update(line.join(" "));
            h.update("\n");
        }
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutation() {
        assert!(CosetTable::from_permutations(2, vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn rejects_intransitive() {
        assert_eq!(
            CosetTable::from_permutations(2, vec![vec![0, 1]]),
            Err(TableError::NotTransitive)
        );
    }

    #[test]
    fn standardization_renumbers_by_first_appearance() {
        // a = (0 2 1)
        let t = CosetTable::from_permutations(3, vec![vec![2, 0, 1]]).unwrap();
        let s = t.standardized();
        assert_eq!(s.permutation(0), &[1, 2, 0]);
        assert!(s.is_standard());
    }

    #[test]
    fn refinement_of_cyclic_quotients() {
        // Z -> Z/4 refines Z -> Z/2
        let four = CosetTable::from_permutations(4, vec![vec![1, 2, 3, 0]]).unwrap();
        let two = CosetTable::from_permutations(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(four.refinement_map(&two), Some(vec![0, 1, 0, 1]));
        assert!(!two.refines(&four));
    }

    #[test]
    fn serde_round_trip_validates() {
        let t = CosetTable::from_permutations(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: CosetTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<CosetTable>(r#"{"degree":2,"perms":[[0,0]]}"#).is_err());
    }
}
