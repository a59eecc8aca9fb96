use std::collections::VecDeque;

use super::presentation::Presentation;
use super::table::CosetTable;
use super::word::{generator_of, letter, Word};

/// Presentation of a finite-index subgroup on its Schreier generators.
///
/// Generator i is `t(c) g t(c g)^-1` for `(c, g) = generators[i]`, where
/// `t` is the transversal of coset representatives.
#[derive(Clone, Debug)]
pub struct SchreierPresentation {
    pub presentation: Presentation,
    pub generators: Vec<(usize, usize)>,
    pub transversal: Vec<Word>,
    lookup: Vec<Vec<Option<usize>>>,
}

impl SchreierPresentation {
    /// Schreier generator carried by the edge `c --g--> c g`, or `None` for
    /// transversal tree edges.
    pub fn generator_at(&self, coset: usize, g: usize) -> Option<usize> {
        self.lookup[coset][g]
    }

    /// Rewrites a word read from `coset` into Schreier generators. If it
    /// starts and ends at coset 0 this is the same subgroup element.
    pub fn rewrite(&self, w: &Word, table: &CosetTable, coset: usize) -> (Word, usize) {
        let mut out = Word::identity();
        let mut c = coset;
        for &l in w.letters() {
            let g = generator_of(l);
            if l > 0 {
                if let Some(s) = self.lookup[c][g] {
                    out.push(letter(s, false));
                }
                c = table.act(c, l);
            } else {
                let prev = table.act(c, l);
                if let Some(s) = self.lookup[prev][g] {
                    out.push(letter(s, true));
                }
                c = prev;
            }
        }
        (out, c)
    }

    /// The Schreier generator as a word in the parent group.
    pub fn generator_word(&self, i: usize, table: &CosetTable) -> Word {
        let (c, g) = self.generators[i];
        let d = table.act(c, letter(g, false));
        self.transversal[c]
            .concat(&Word::generator(g))
            .concat(&self.transversal[d].inverse())
    }
}

/// Reidemeister–Schreier rewriting with a breadth-first Schreier
/// transversal.
pub fn reidemeister_schreier(p: &Presentation, table: &CosetTable) -> SchreierPresentation {
    let n = table.degree();
    let r = p.generator_count();
    let mut tree = vec![vec![false; r]; n];
    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..r {
            for inverse in [false, true] {
                let l = letter(g, inverse);
                let d = table.act(c, l);
                if transversal[d].is_none() {
                    let mut w = transversal[c].clone().expect("visited");
                    w.push(l);
                    transversal[d] = Some(w);
                    if inverse {
                        tree[d][g] = true;
                    } else {
                        tree[c][g] = true;
                    }
                    queue.push_back(d);
                }
            }
        }
    }
    let mut lookup = vec![vec![None; r]; n];
    let mut generators = Vec::new();
    for c in 0..n {
        for g in 0..r {
            if !tree[c][g] {
                lookup[c][g] = Some(generators.len());
                generators.push((c, g));
            }
        }
    }
    let mut sp = SchreierPresentation {
        presentation: Presentation::new(generators.len(), Vec::new()).expect("no relators"),
        generators,
        transversal: transversal.into_iter().map(|w| w.expect("transitive table")).collect(),
        lookup,
    };
    let mut relators = Vec::with_capacity(n * p.relators().len());
    for c in 0..n {
        for rel in p.relators() {
            let (w, end) = sp.rewrite(rel, table, c);
            debug_assert_eq!(end, c, "relator must fix every coset");
            relators.push(w);
        }
    }
    sp.presentation = Presentation::new(sp.generators.len(), relators).expect("generators in range");
    sp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{abelianization, low_index_subgroups, todd_coxeter};
    use crate::simplicial::HomologyGroup;

    #[test]
    fn free_group_index_two() {
        let f2 = Presentation::new(2, vec![]).unwrap();
        for t in low_index_subgroups(&f2, 2).iter().filter(|t| t.degree() == 2) {
            let s = reidemeister_schreier(&f2, t);
            assert_eq!(s.presentation.generator_count(), 3);
            assert!(s.presentation.relators().is_empty());
        }
    }

    #[test]
    fn z2_subgroups_are_z2() {
        let z2 = Presentation::from_letters(2, &[&[1, 2, -1, -2]]).unwrap();
        for t in low_index_subgroups(&z2, 4) {
            let s = reidemeister_schreier(&z2, &t);
            assert_eq!(abelianization(&s.presentation), HomologyGroup::new(2, vec![]));
        }
    }

    #[test]
    fn generator_words_lie_in_the_subgroup() {
        let s3 = Presentation::from_letters(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]).unwrap();
        let t = todd_coxeter(&s3, &[Word::generator(0)], 100).unwrap();
        let s = reidemeister_schreier(&s3, &t);
        for i in 0..s.generators.len() {
            let w = s.generator_word(i, &t);
            assert!(t.contains(&w));
            let (back, end) = s.rewrite(&w, &t, 0);
            assert_eq!(end, 0);
            assert_eq!(back, Word::generator(i));
        }
        // subgroup of order 2 in S3
        assert_eq!(abelianization(&s.presentation).torsion.len(), 1);
    }
}
