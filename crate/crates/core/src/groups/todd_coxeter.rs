use thiserror::Error;

use super::presentation::Presentation;
use super::table::CosetTable;
use super::word::{column_of, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    /// The enumeration needed more cosets than allowed. This says nothing
    /// about whether the index is finite.
    #[error("coset enumeration exceeded {limit} cosets")]
    Overflow { limit: usize },
}

const NONE: usize = usize::MAX;

struct Enumerator {
    cols: usize,
    table: Vec<usize>,
    /// Union-find parent; `parent[c] == c` for live cosets.
    parent: Vec<usize>,
    queue: Vec<usize>,
    limit: usize,
}

fn inv_col(x: usize) -> usize {
    x ^ 1
}

impl Enumerator {
    fn new(generator_count: usize, limit: usize) -> Self {
        let cols = 2 * generator_count;
        Enumerator {
            cols,
            table: vec![NONE; cols],
            parent: vec![0],
            queue: Vec::new(),
            limit,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.cols + x] = d;
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, EnumerationError> {
        if self.len() >= self.limit {
            return Err(EnumerationError::Overflow { limit: self.limit });
        }
        let n = self.len();
        self.parent.push(n);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, n);
        self.set(n, inv_col(x), c);
        Ok(n)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.set(f, inv_col(x), NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                if ex != NONE {
                    self.merge(f1, ex);
                } else {
                    let fx = self.get(f1, inv_col(x));
                    if fx != NONE {
                        self.merge(e1, fx);
                    } else {
                        self.set(e1, x, f1);
                        self.set(f1, inv_col(x), e1);
                    }
                }
            }
        }
    }

    /// Traces `w` from coset c forwards and backwards, defining new cosets to
    /// close the gap, then records the deduction or coincidence.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), EnumerationError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.get(f, w[i as usize]) != NONE {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, inv_col(w[j as usize])) != NONE {
                b = self.get(b, inv_col(w[j as usize]));
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.set(f, x, b);
                self.set(b, inv_col(x), f);
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|&l| column_of(l)).collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup` (HLT
/// strategy with coincidence handling). The result is standardized.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable, EnumerationError> {
    let mut e = Enumerator::new(p.generator_count(), max_cosets.max(1));
    let relators: Vec<Vec<usize>> = p.relators().iter().map(columns).collect();
    for w in subgroup {
        e.scan_and_fill(0, &columns(w))?;
    }
    let mut c = 0;
    while c < e.len() {
        for r in &relators {
            if !e.alive(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..e.cols {
            if e.alive(c) && e.get(c, x) == NONE {
                e.define(c, x)?;
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..e.len()).filter(|&c| e.alive(c)).collect();
    let mut new_of = vec![NONE; e.len()];
    for (i, &c) in live.iter().enumerate() {
        new_of[c] = i;
    }
    let perms = (0..p.generator_count())
        .map(|g| live.iter().map(|&c| new_of[e.get(c, 2 * g)]).collect())
        .collect();
    let table = CosetTable::from_permutations(live.len(), perms).expect("completed enumeration is a valid action");
    Ok(table.standardized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Presentation {
        Presentation::from_letters(2, &[&[1, 2, -1, -2]]).unwrap()
    }

    #[test]
    fn index_of_a_squared_b_in_z2() {
        let sub = [Word::from_letters([1, 1]), Word::from_letters([2])];
        let t = todd_coxeter(&z2(), &sub, 1000).unwrap();
        assert_eq!(t.degree(), 2);
        t.check_relators(&z2()).unwrap();
        for w in &sub {
            assert!(t.contains(w));
        }
    }

    #[test]
    fn all_generators_give_index_one() {
        let p = Presentation::from_letters(3, &[&[1, 2, 3], &[1, 1, 2, 2]]).unwrap();
        let sub: Vec<Word> = (0..3).map(Word::generator).collect();
        assert_eq!(todd_coxeter(&p, &sub, 100).unwrap().degree(), 1);
    }

    #[test]
    fn trivial_subgroup_of_finite_groups() {
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let s3 = Presentation::from_letters(2, &[&[1, 1], &[2, 2, 2], &[1, 2, 1, 2]]).unwrap();
        let t = todd_coxeter(&s3, &[], 1000).unwrap();
        assert_eq!(t.degree(), 6);
        t.check_relators(&s3).unwrap();
        // quaternion group of order 8
        let q8 = Presentation::from_letters(2, &[&[1, 1, 1, 1], &[1, 1, -2, -2], &[-2, 1, 2, 1]]).unwrap();
        assert_eq!(todd_coxeter(&q8, &[], 1000).unwrap().degree(), 8);
    }

    #[test]
    fn coincidences_collapse_to_trivial_group() {
        // <a, b | a b a^-1 b^-2, b a b^-1 a^-2> is trivial
        let p = Presentation::from_letters(2, &[&[1, 2, -1, -2, -2], &[2, 1, -2, -1, -1]]).unwrap();
        assert_eq!(todd_coxeter(&p, &[], 10_000).unwrap().degree(), 1);
    }

    #[test]
    fn infinite_index_overflows() {
        let sub = [Word::from_letters([1])];
        assert_eq!(
            todd_coxeter(&z2(), &sub, 500),
            Err(EnumerationError::Overflow { limit: 500 })
        );
    }
}
