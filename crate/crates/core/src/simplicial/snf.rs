//! Smith normal form over the integers.
//!
//! `U * A * V = S` with `U`, `V` unimodular and `S` diagonal, nonnegative,
//! each diagonal entry dividing the next. Pivoting always takes the smallest
//! nonzero absolute value in the active submatrix, which keeps coefficient
//! growth modest on the matrices that arise from desk-scale complexes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.diagonal.rows().min(self.diagonal.cols());
        (0..k)
            .map(|i| self.diagonal.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Recomputes `U * A * V` and compares with `S`; also checks that `S` is
    /// diagonal with the divisibility chain.
    pub fn holds_for(&self, a: &IntMatrix) -> bool {
        if self.left.mul(a).mul(&self.right) != self.diagonal {
            return false;
        }
        is_smith_form(&self.diagonal)
    }
}

/// True if `s` is diagonal, nonnegative, with `d_i | d_{i+1}` (zeros last).
pub fn is_smith_form(s: &IntMatrix) -> bool {
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if i != j && !s.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let k = s.rows().min(s.cols());
    let diag: Vec<&BigInt> = (0..k).map(|i| s.get(i, i)).collect();
    if diag.iter().any(|d| d.is_negative()) {
        return false;
    }
    for w in diag.windows(2) {
        if w[0].is_zero() {
            if !w[1].is_zero() {
                return false;
            }
        } else if !w[1].is_multiple_of(w[0]) {
            return false;
        }
    }
    true
}

/// Abelian group invariants: free rank and torsion coefficients (> 1).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn new(betti: usize, mut torsion: Vec<BigInt>) -> Self {
        torsion.retain(|t| t > &BigInt::from(1));
        torsion.sort();
        HomologyGroup { betti, torsion }
    }

    /// Minimal number of generators of the abelian group.
    pub fn min_generators(&self) -> usize {
        self.betti + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Checks the divisibility chain on torsion coefficients.
    pub fn is_normalized(&self) -> bool {
        self.torsion.iter().all(|t| t > &BigInt::from(1))
            && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.betti)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut work = Work::new(a.clone(), true, false);
    work.run();
    SnfResult {
        left: work.u.unwrap(),
        diagonal: work.a,
        right: work.v.unwrap(),
    }
}

/// Smith form plus the inverse of the right transform, so that coordinates
/// with respect to the new basis can be read off as `V^{-1} x`.
pub fn smith_with_right_inverse(a: &IntMatrix) -> (SnfResult, IntMatrix) {
    let mut work = Work::new(a.clone(), true, true);
    work.run();
    (
        SnfResult {
            left: work.u.unwrap(),
            diagonal: work.a,
            right: work.v.unwrap(),
        },
        work.vinv.unwrap(),
    )
}

/// Invariant factors only; skips the transform bookkeeping.
pub(crate) fn diagonal_only(a: IntMatrix) -> Vec<BigInt> {
    let mut work = Work::new(a, false, false);
    work.run();
    let k = work.a.rows().min(work.a.cols());
    (0..k)
        .map(|i| work.a.get(i, i).clone())
        .take_while(|d| !d.is_zero())
        .collect()
}

struct Work {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    vinv: Option<IntMatrix>,
}

impl Work {
    fn new(a: IntMatrix, transforms: bool, inverse: bool) -> Self {
        let (m, n) = (a.rows(), a.cols());
        Work {
            u: transforms.then(|| IntMatrix::identity(m)),
            v: transforms.then(|| IntMatrix::identity(n)),
            vinv: inverse.then(|| IntMatrix::identity(n)),
            a,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.vinv {
            vi.swap_rows(i, j);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, k);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, k);
        }
        if let Some(vi) = &mut self.vinv {
            // V' = V (I + k e_src e_dst^T)  =>  V'^{-1} = (I - k e_src e_dst^T) V^{-1}
            vi.add_row_multiple(src, dst, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(b, _, _)| &ax < b) {
                    best = Some((ax, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) {
        let (m, n) = (self.a.rows(), self.a.cols());
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.smallest_in(t) else {
                return;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.a.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..m {
                    let x = self.a.get(i, t).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.div_floor(&p);
                    self.add_row(i, t, &-q);
                    if !self.a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    let x = self.a.get(t, j).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.div_floor(&p);
                    self.add_col(j, t, &-q);
                    if !self.a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a remainder smaller than the pivot survived; re-pivot on it
                    let (pi, pj) = self.smallest_in(t).expect("nonzero pivot exists");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // pivot row and column are clear; enforce divisibility of the rest
                let offender = (t + 1..m).find(|&i| {
                    (t + 1..n).any(|j| !self.a.get(i, j).is_multiple_of(&p))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::from(1)),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: &[Vec<i64>]) -> Vec<i64> {
        let m = IntMatrix::from_rows(a);
        let r = smith_normal_form(&m);
        assert!(r.holds_for(&m));
        r.invariant_factors()
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMatrix::identity(3);
        let r = smith_normal_form(&m);
        assert_eq!(r.diagonal, m);
        assert!(r.holds_for(&m));
    }

    #[test]
    fn coprime_diagonal_merges() {
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn two_by_two_with_common_factor() {
        assert_eq!(diag(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn rectangular_and_zero() {
        assert_eq!(diag(&[vec![0, 0, 0], vec![0, 0, 0]]), Vec::<i64>::new());
        assert_eq!(diag(&[vec![4, 6, 10]]), vec![2]);
        assert_eq!(diag(&[vec![4], vec![6], vec![10]]), vec![2]);
    }

    #[test]
    fn right_inverse_is_inverse() {
        let m = IntMatrix::from_rows(&[vec![3, 5, 7], vec![2, -4, 6]]);
        let (r, vinv) = smith_with_right_inverse(&m);
        assert!(r.holds_for(&m));
        assert_eq!(r.right.mul(&vinv), IntMatrix::identity(3));
    }

    #[test]
    fn homology_group_display() {
        let g = HomologyGroup::new(2, vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(g.to_string(), "Z^2 + Z/2");
        assert_eq!(g.min_generators(), 3);
    }
}
