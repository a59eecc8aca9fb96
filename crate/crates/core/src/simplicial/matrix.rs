use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, x) in row.iter().enumerate() {
                m.data[i * c + j] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.data[i * self.cols + j] = v.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn to_sparse(&self) -> SparseIntMatrix {
        let mut s = SparseIntMatrix::new(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    s.insert(i, j, v.clone());
                }
            }
        }
        s
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Row-oriented sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: vec![BTreeMap::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry (i, j).
    pub fn insert(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        assert!(i < self.rows && j < self.cols, "entry out of range");
        let v = v.into();
        let slot = self.entries[i].entry(j).or_insert_with(BigInt::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries[i].remove(&j);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn row(&self, i: usize) -> &BTreeMap<usize, BigInt> {
        &self.entries[i]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut t = SparseIntMatrix::new(self.cols, self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            for (&j, v) in row {
                t.entries[j].insert(i, v.clone());
            }
        }
        t
    }

    /// Sparse product; used to check `d_k d_{k+1} = 0` without densifying.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for (i, row) in self.entries.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&k, a) in row {
                for (&j, b) in &other.entries[k] {
                    *acc.entry(j).or_insert_with(BigInt::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.entries[i] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }
}

/// Nonzero invariant factors of `m` (ascending, each dividing the next).
///
/// Unit pivots are eliminated sparsely first (which leaves the invariant
/// factors of the remainder unchanged apart from the removed 1s); the residue
/// goes through the dense Smith normal form.
pub fn invariant_factors(m: &SparseIntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = m.entries.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    // (column length, column) for every live nonempty column
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut col_key: Vec<Option<usize>> = vec![None; m.cols];
    for (j, r) in col_rows.iter().enumerate() {
        if !r.is_empty() {
            queue.insert((r.len(), j));
            col_key[j] = Some(r.len());
        }
    }
    let mut units = 0usize;
    let mut stale: Vec<(usize, usize)> = Vec::new();

    loop {
        // smallest column that has a unit entry; columns without one are
        // parked until something changes them
        let mut pick = None;
        for &(len, j) in queue.iter() {
            let best_row = col_rows[j]
                .iter()
                .copied()
                .filter(|&i| rows[i].get(&j).is_some_and(|v| v.abs().is_one()))
                .min_by_key(|&i| (rows[i].len(), i));
            match best_row {
                Some(i) => {
                    pick = Some((len, j, i));
                    break;
                }
                None => stale.push((len, j)),
            }
        }
        for key in stale.drain(..) {
            queue.remove(&key);
            col_key[key.1] = None;
        }
        let Some((len, pc, pr)) = pick else { break };
        queue.remove(&(len, pc));
        col_key[pc] = None;
        units += 1;

        let pivot_row = std::mem::take(&mut rows[pr]);
        let pivot_val = pivot_row[&pc].clone();
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pr);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        for r in others {
            let factor = &rows[r][&pc] * &pivot_val; // pivot is +-1, its own inverse
            for (&j, v) in &pivot_row {
                let slot = rows[r].entry(j).or_insert_with(BigInt::zero);
                let was_zero = slot.is_zero();
                *slot -= &factor * v;
                if slot.is_zero() {
                    rows[r].remove(&j);
                    col_rows[j].remove(&r);
                } else if was_zero {
                    col_rows[j].insert(r);
                }
                touched.insert(j);
            }
        }
        debug_assert!(col_rows[pc].is_empty());
        for j in pivot_row.keys() {
            touched.insert(*j);
        }
        touched.remove(&pc);
        for j in touched {
            if let Some(old) = col_key[j].take() {
                queue.remove(&(old, j));
            }
            if !col_rows[j].is_empty() {
                queue.insert((col_rows[j].len(), j));
                col_key[j] = Some(col_rows[j].len());
            }
        }
    }

    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&j| !col_rows[j].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut dense = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (a, &i) in live_rows.iter().enumerate() {
            for (j, v) in &rows[i] {
                dense.set(a, col_pos[j], v.clone());
            }
        }
        factors.extend(super::snf::diagonal_only(dense));
    }
    factors
}

/// Rank over the rationals.
pub fn rank(m: &SparseIntMatrix) -> usize {
    invariant_factors(m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factors_small() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let f = invariant_factors(&m.to_sparse());
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn unit_elimination_keeps_torsion() {
        // relation matrix of Z/2 x Z with extra unit rows
        let m = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 0], vec![1, 3, 0]]);
        let f = invariant_factors(&m.to_sparse());
        assert_eq!(f, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn product_matches_dense() {
        let a = IntMatrix::from_rows(&[vec![1, -2, 0], vec![3, 0, 5]]);
        let b = IntMatrix::from_rows(&[vec![1, 0], vec![2, 1], vec![0, -1]]);
        assert_eq!(a.to_sparse().mul(&b.to_sparse()).to_dense(), a.mul(&b));
    }
}
