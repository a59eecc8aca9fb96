//! Subgroups of small index by backtracking over partial coset tables.
//!
//! New cosets are only introduced at the first undefined entry in row-major
//! order, so every complete table produced is already standardized and each
//! subgroup appears exactly once.

use std::ops::ControlFlow;

use super::presentation::Presentation;
use super::table::CosetTable;
use super::word::column_of;

const NONE: usize = usize::MAX;

#[derive(Clone)]
struct Partial {
    cols: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl Partial {
    fn first_gap(&self) -> Option<(usize, usize)> {
        (0..self.n).find_map(|c| (0..self.cols).find(|&x| self.rows[c][x] == NONE).map(|x| (c, x)))
    }

    fn assign(&mut self, c: usize, x: usize, d: usize) -> bool {
        if self.rows[c][x] != NONE || self.rows[d][x ^ 1] != NONE {
            return self.rows[c][x] == d && self.rows[d][x ^ 1] == c;
        }
        self.rows[c][x] = d;
        self.rows[d][x ^ 1] = c;
        true
    }

    /// Applies relator deductions to a fixpoint; false on a contradiction.
    fn close(&mut self, relators: &[Vec<usize>]) -> bool {
        let mut changed = true;
        while changed {
            changed = false;
            for c in 0..self.n {
                for r in relators {
                    let (mut f, mut i) = (c, 0usize);
                    while i < r.len() && self.rows[f][r[i]] != NONE {
                        f = self.rows[f][r[i]];
                        i += 1;
                    }
                    if i == r.len() {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c, r.len() - 1);
                    while j > i && self.rows[b][r[j] ^ 1] != NONE {
                        b = self.rows[b][r[j] ^ 1];
                        j -= 1;
                    }
                    if j == i {
                        if !self.assign(f, r[i], b) {
                            return false;
                        }
                        changed = true;
                    }
                }
            }
        }
        true
    }

    fn to_table(&self) -> CosetTable {
        let perms = (0..self.cols / 2)
            .map(|g| (0..self.n).map(|c| self.rows[c][2 * g]).collect())
            .collect();
        CosetTable::from_permutations(self.n, perms).expect("complete partial table is a transitive action")
    }
}

fn search<F>(p: &Presentation, max_index: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(CosetTable) -> ControlFlow<()>,
{
    let cols = 2 * p.generator_count();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|&l| column_of(l)).collect())
        .collect();
    let root = Partial {
        cols,
        n: 1,
        rows: vec![vec![NONE; cols]; max_index.max(1)],
    };
    let mut root = root;
    if !root.close(&relators) {
        return ControlFlow::Continue(());
    }
    descend(root, &relators, max_index, visit)
}

fn descend<F>(t: Partial, relators: &[Vec<usize>], max_index: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(CosetTable) -> ControlFlow<()>,
{
    let Some((c, x)) = t.first_gap() else {
        return visit(t.to_table());
    };
    let limit = if t.n < max_index { t.n + 1 } else { t.n };
    for d in 0..limit {
        if d < t.n && t.rows[d][x ^ 1] != NONE {
            continue;
        }
        let mut next = t.clone();
        if d == t.n {
            next.n += 1;
        }
        if next.assign(c, x, d) && next.close(relators) {
            descend(next, relators, max_index, visit)?;
        }
    }
    ControlFlow::Continue(())
}

/// All subgroups of index at most `max_index`, one standardized coset table
/// each, ordered by index and then lexicographically.
pub fn low_index_subgroups(p: &Presentation, max_index: usize) -> Vec<CosetTable> {
    let mut out = Vec::new();
    if max_index == 0 {
        return out;
    }
    let _ = search(p, max_index, &mut |t| {
        out.push(t);
        ControlFlow::Continue(())
    });
    out.sort_by_key(CosetTable::degree);
    out
}

/// The lexicographically first subgroup of exactly the given index, if one
/// exists.
pub fn first_subgroup_of_index(p: &Presentation, index: usize) -> Option<CosetTable> {
    let mut found = None;
    if index == 0 {
        return None;
    }
    let _ = search(p, index, &mut |t| {
        if t.degree() == index {
            found = Some(t);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_by_index(p: &Presentation, n: usize) -> Vec<usize> {
        let all = low_index_subgroups(p, n);
        (1..=n).map(|k| all.iter().filter(|t| t.degree() == k).count()).collect()
    }

    #[test]
    fn z2_sublattice_counts() {
        let z2 = Presentation::from_letters(2, &[&[1, 2, -1, -2]]).unwrap();
        assert_eq!(count_by_index(&z2, 4), vec![1, 3, 4, 7]);
    }

    #[test]
    fn cyclic_of_order_two() {
        let c2 = Presentation::from_letters(1, &[&[1, 1]]).unwrap();
        assert_eq!(low_index_subgroups(&c2, 2).len(), 2);
        assert_eq!(low_index_subgroups(&c2, 5).len(), 2);
    }

    #[test]
    fn trivial_group_has_only_itself() {
        let p = Presentation::new(0, vec![]).unwrap();
        assert_eq!(low_index_subgroups(&p, 4).len(), 1);
    }

    #[test]
    fn outputs_are_standard_distinct_and_satisfy_relators() {
        let s3 = Presentation::from_letters(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]).unwrap();
        let all = low_index_subgroups(&s3, 6);
        // S3 has 6 subgroups: 1, three of order 2, A3, S3
        assert_eq!(all.len(), 6);
        for (i, t) in all.iter().enumerate() {
            assert!(t.is_standard());
            t.check_relators(&s3).unwrap();
            assert!(all[..i].iter().all(|u| u != t));
        }
    }

    #[test]
    fn first_of_index_matches_full_list() {
        let f2 = Presentation::new(2, vec![]).unwrap();
        let first = first_subgroup_of_index(&f2, 3).unwrap();
        let all = low_index_subgroups(&f2, 3);
        assert_eq!(Some(&first), all.iter().find(|t| t.degree() == 3));
    }
}
