//! Tietze simplification by eliminating generators that occur exactly once
//! in some relator.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use super::word::{generator_of, Word};

/// A simplified presentation together with the isomorphism back to the
/// input.
///
/// Generator i of `presentation` is the original generator `kept[i]`;
/// original generator g equals the word `images[g]` in the new generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TietzeOutcome {
    pub presentation: Presentation,
    pub kept: Vec<usize>,
    pub images: Vec<Word>,
    /// The step budget ran out while eliminations were still possible.
    pub budget_exhausted: bool,
    pub eliminations: usize,
}

/// Working state for elimination, in the original generator numbering.
#[derive(Clone, Debug)]
pub struct TietzeState {
    generator_count: usize,
    alive: Vec<bool>,
    relators: Vec<Option<Word>>,
    by_len: BTreeSet<(usize, usize)>,
    occurs_in: Vec<BTreeSet<usize>>,
    canonical: HashMap<Word, usize>,
    steps: Vec<(usize, Word)>,
}

impl TietzeState {
    pub fn new(p: &Presentation) -> Self {
        let n = p.generator_count();
        let mut s = TietzeState {
            generator_count: n,
            alive: vec![true; n],
            relators: Vec::new(),
            by_len: BTreeSet::new(),
            occurs_in: vec![BTreeSet::new(); n],
            canonical: HashMap::new(),
            steps: Vec::new(),
        };
        for r in p.relators() {
            s.insert_relator(r.clone());
        }
        s
    }

    fn insert_relator(&mut self, r: Word) {
        let r = r.cyclically_reduced();
        if r.is_identity() {
            return;
        }
        let key = r.cyclic_canonical();
        if self.canonical.contains_key(&key) {
            return;
        }
        let id = self.relators.len();
        self.canonical.insert(key, id);
        self.by_len.insert((r.len(), id));
        for &l in r.letters() {
            self.occurs_in[generator_of(l)].insert(id);
        }
        self.relators.push(Some(r));
    }

    fn remove_relator(&mut self, id: usize) -> Word {
        let r = self.relators[id].take().expect("relator present");
        self.by_len.remove(&(r.len(), id));
        self.canonical.remove(&r.cyclic_canonical());
        for &l in r.letters() {
            self.occurs_in[generator_of(l)].remove(&id);
        }
        r
    }

    pub fn is_alive(&self, g: usize) -> bool {
        self.alive[g]
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn relators(&self) -> impl Iterator<Item = &Word> {
        self.relators.iter().flatten()
    }

    /// Generators occurring exactly once in relator `id`.
    fn singles(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        let r = self.relators[id].as_ref().expect("relator present");
        let gens: BTreeSet<usize> = r.letters().iter().map(|&l| generator_of(l)).collect();
        gens.into_iter().filter(move |&g| r.occurrences(g) == 1)
    }

    /// The (relator, generator) pair to eliminate next: shortest relator
    /// containing a generator exactly once, ties broken by lowest generator.
    fn next_candidate(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for &(len, id) in &self.by_len {
            if best.is_some_and(|(l, _, _)| len > l) {
                break;
            }
            if let Some(g) = self.singles(id).next() {
                if best.is_none_or(|(_, bg, _)| g < bg) {
                    best = Some((len, g, id));
                }
            }
        }
        best.map(|(_, g, id)| (id, g))
    }

    /// Eliminates generator g using relator `id`, in which g must occur
    /// exactly once. Returns false if that is not the case.
    pub fn eliminate_with(&mut self, g: usize, id: usize) -> bool {
        match &self.relators[id] {
            Some(r) if self.alive[g] && r.occurrences(g) == 1 => {}
            _ => return false,
        }
        let r = self.remove_relator(id);
        let pos = r.letters().iter().position(|&l| generator_of(l) == g).expect("occurs once");
        let rot = r.rotated(pos);
        // rot = g^e v, so g = v^-e
        let sign = rot.letters()[0].signum();
        let v = Word::from_letters(rot.letters()[1..].iter().copied());
        let expr = if sign > 0 { v.inverse() } else { v };
        self.alive[g] = false;
        let touched: Vec<usize> = self.occurs_in[g].iter().copied().collect();
        for id in touched {
            let old = self.remove_relator(id);
            let new = old.substitute(|h| if h == g { expr.clone() } else { Word::generator(h) });
            self.insert_relator(new);
        }
        self.steps.push((g, expr));
        true
    }

    /// Eliminates generators until none qualifies or `budget` eliminations
    /// have been made. Returns true if stopped by the budget.
    pub fn run(&mut self, budget: usize) -> bool {
        let mut used = 0;
        while let Some((id, g)) = self.next_candidate() {
            if used == budget {
                return true;
            }
            self.eliminate_with(g, id);
            used += 1;
        }
        false
    }

    /// Relator ids with their words, for guided strategies.
    pub fn relators_with_ids(&self) -> impl Iterator<Item = (usize, &Word)> {
        self.relators.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    pub fn finish(&self, budget_exhausted: bool) -> TietzeOutcome {
        let kept: Vec<usize> = (0..self.generator_count).filter(|&g| self.alive[g]).collect();
        let mut new_index = vec![usize::MAX; self.generator_count];
        for (i, &g) in kept.iter().enumerate() {
            new_index[g] = i;
        }
        // Resolve eliminated generators from the last step backwards: a step's
        // expression only mentions generators alive at that time.
        let mut images: Vec<Option<Word>> = (0..self.generator_count)
            .map(|g| self.alive[g].then(|| Word::generator(new_index[g])))
            .collect();
        for (g, expr) in self.steps.iter().rev() {
            let img = expr.substitute(|h| images[h].clone().expect("later generators resolved first"));
            images[*g] = Some(img);
        }
        let relators = self.relators().map(|r| r.relabel(|h| new_index[h])).collect();
        TietzeOutcome {
            presentation: Presentation::new(kept.len(), relators).expect("relabelled generators in range"),
            kept,
            images: images.into_iter().map(|w| w.expect("every generator resolved")).collect(),
            budget_exhausted,
            eliminations: self.steps.len(),
        }
    }
}

/// Simplifies `p`, making at most `budget` eliminations.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> TietzeOutcome {
    let mut s = TietzeState::new(p);
    let exhausted = s.run(budget);
    s.finish(exhausted)
}
