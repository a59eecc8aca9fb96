//! Independent reference computations used only by tests. Nothing here
//! calls into the library's algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Mat = Vec<Vec<BigInt>>;

pub fn to_mat(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

/// Smith normal form by textbook elementary operations: smallest pivot,
/// Euclidean reduction of its row and column, and a row merge whenever the
/// pivot fails to divide the rest. Returns (U, S, V) with U A V = S.
pub fn oracle_snf(a: &Mat) -> (Mat, Mat, Mat) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut s = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the lower-right block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[i][j].is_zero() && best.is_none_or(|(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (u, s, v);
            };
            s.swap(t, pi);
            u.swap(t, pi);
            for r in s.iter_mut() {
                r.swap(t, pj);
            }
            for r in v.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = s[i][t].div_floor(&s[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let x = &s[t][j] * &q;
                        s[i][j] -= x;
                    }
                    for j in 0..rows {
                        let x = &u[t][j] * &q;
                        u[i][j] -= x;
                    }
                }
                clean &= s[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = s[t][j].div_floor(&s[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let x = &s[i][t] * &q;
                        s[i][j] -= x;
                    }
                    for i in 0..cols {
                        let x = &v[i][t] * &q;
                        v[i][j] -= x;
                    }
                }
                clean &= s[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&s[i][j] % &s[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        let x = s[i][j].clone();
                        s[t][j] += x;
                    }
                    for j in 0..rows {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for j in 0..cols {
                s[t][j] = -s[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    (u, s, v)
}

pub fn diagonal_factors(s: &Mat) -> Vec<BigInt> {
    let k = s.len().min(s.first().map_or(0, Vec::len));
    (0..k).map(|i| s[i][i].clone()).take_while(|d| !d.is_zero()).collect()
}

/// Fraction-free Gaussian elimination: (rank, determinant if square).
pub fn bareiss(a: &Mat) -> (usize, Option<BigInt>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.clone();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let x = &m[rank][c] * &m[i][j] - &m[i][c] * &m[rank][j];
                m[i][j] = x / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    let det = (rows == cols).then(|| if rank == rows { sign * prev } else { BigInt::zero() });
    (rank, det)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors as ratios of determinantal divisors (gcd of all k x k
/// minors). Exponential; for small matrices only.
pub fn determinantal_factors(a: &Mat) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Mat = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
                g = g.gcd(&bareiss(&minor).1.expect("square"));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn rank_mod_p(a: &Mat, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&pb).try_into().expect("reduced")).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow(m[rank][c], p - 2);
        for i in 0..m.len() {
            if i != rank && m[i][c] != 0 {
                let f = m[i][c] * inv % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Mat {
    (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect()
}

/// All faces of the given facets, grouped by dimension, each sorted.
pub fn closure(facets: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let top = facets.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top];
    for f in facets {
        let mut f = f.clone();
        f.sort_unstable();
        for mask in 1u32..(1 << f.len()) {
            let s: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            by_dim[s.len() - 1].insert(s);
        }
    }
    by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Boundary matrix from k-simplices (columns) to (k-1)-simplices (rows).
pub fn boundary(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Mat {
    let mut m = vec![vec![BigInt::zero(); upper.len()]; lower.len()];
    for (j, s) in upper.iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let r = lower.binary_search(&f).expect("face present");
            m[r][j] = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

/// (betti, torsion) of each degree, from ranks and the oracle SNF.
pub fn oracle_homology(facets: &[Vec<usize>]) -> Vec<(usize, Vec<BigInt>)> {
    let cells = closure(facets);
    let top = cells.len();
    let rank_of = |k: usize| -> usize {
        // rank of the boundary from degree k to k-1
        if k == 0 || k >= top {
            0
        } else {
            bareiss(&boundary(&cells[k - 1], &cells[k])).0
        }
    };
    (0..top)
        .map(|k| {
            let betti = cells[k].len() - rank_of(k) - rank_of(k + 1);
            let torsion = if k + 1 < top {
                let (_, s, _) = oracle_snf(&boundary(&cells[k], &cells[k + 1]));
                diagonal_factors(&s).into_iter().filter(|d| d > &BigInt::one()).collect()
            } else {
                Vec::new()
            };
            (betti, torsion)
        })
        .collect()
}

/// The 6-vertex real projective plane.
pub fn rp2() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 5, 1],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![3, 4, 1],
        vec![4, 5, 2],
        vec![5, 1, 3],
    ]
}

/// A random pure 2-complex on at most `max_vertices` vertices.
pub fn random_two_complex(rng: &mut impl Rng, max_vertices: usize) -> Vec<Vec<usize>> {
    let n = rng.gen_range(4..=max_vertices);
    let all = combinations(n, 3);
    let p = rng.gen_range(0.15..0.6);
    let mut facets: Vec<Vec<usize>> = all.into_iter().filter(|_| rng.gen_bool(p)).collect();
    if facets.is_empty() {
        facets.push(vec![0, 1, 2]);
    }
    facets
}
