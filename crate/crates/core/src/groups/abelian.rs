use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::presentation::Presentation;
use crate::simplicial::{invariant_factors, smith_normal_form, HomologyGroup, IntMatrix, SparseIntMatrix};

/// Interval for the minimal number of generators of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBounds {
    pub lower: usize,
    pub upper: usize,
}

impl RankBounds {
    pub fn new(lower: usize, upper: usize) -> Self {
        assert!(lower <= upper, "rank lower bound {lower} exceeds upper bound {upper}");
        RankBounds { lower, upper }
    }
}

fn relator_sparse(p: &Presentation) -> SparseIntMatrix {
    let mut m = SparseIntMatrix::new(p.relators().len(), p.generator_count());
    for (i, r) in p.relators().iter().enumerate() {
        for &l in r.letters() {
            m.insert(i, super::word::generator_of(l), l.signum());
        }
    }
    m
}

/// Abelianization as an abstract abelian group.
pub fn abelianization(p: &Presentation) -> HomologyGroup {
    let factors = invariant_factors(&relator_sparse(p));
    HomologyGroup::new(p.generator_count() - factors.len(), factors)
}

/// Minimal generator count of the abelianization, a lower bound on the rank
/// of the group.
pub fn abelianization_min_generators(p: &Presentation) -> (usize, HomologyGroup) {
    let h = abelianization(p);
    (h.min_generators(), h)
}

/// Coordinates of each generator in the free part of the abelianization.
///
/// Row `g` of the result is the image of generator g in `Z^b`, for a fixed
/// basis of the free quotient. Intended for small presentations: it runs a
/// dense Smith form with transforms.
pub fn free_abelian_coordinates(p: &Presentation) -> Vec<Vec<i64>> {
    let n = p.generator_count();
    if n == 0 {
        return Vec::new();
    }
    let rows = p.relator_matrix();
    let a = if rows.is_empty() {
        IntMatrix::zeros(1, n)
    } else {
        IntMatrix::from_rows(&rows)
    };
    let snf = smith_normal_form(&a);
    let r = snf.rank();
    // x -> x V sends the relator lattice onto the span of the diagonal, so
    // the trailing n - r coordinates of x V are free coordinates.
    (0..n)
        .map(|g| {
            (r..n)
                .map(|j| to_i64(snf.right.get(g, j)))
                .collect()
        })
        .collect()
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("abelian coordinate fits in i64")
}

/// Dimension of `H_1(G; F_p)` for prime p.
pub fn mod_p_rank(p: &Presentation, prime: u64) -> usize {
    let m = reduce_mod(&p.relator_matrix(), prime);
    p.generator_count() - row_echelon_mod(m, p.generator_count(), prime).len()
}

/// Basis of the homomorphisms `G -> Z/p`, as vectors of generator images.
/// One vector per non-pivot column of the reduced echelon form, in column
/// order, so the basis is deterministic.
pub fn mod_p_characters(p: &Presentation, prime: u64) -> Vec<Vec<u64>> {
    let n = p.generator_count();
    let m = reduce_mod(&p.relator_matrix(), prime);
    nullspace_mod(m, n, prime)
}

fn reduce_mod(rows: &[Vec<i64>], prime: u64) -> Vec<Vec<u64>> {
    let q = prime as i64;
    rows.iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(q) as u64).collect())
        .collect()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Reduced row echelon form; returns the nonzero rows with their pivot
/// columns.
fn row_echelon_mod(mut m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<(usize, Vec<u64>)> {
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + (p - f) * m[r][j]) % p;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| (row.iter().position(|&x| x != 0).expect("pivot row nonzero"), row))
        .collect()
}

fn nullspace_mod(m: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let ech = row_echelon_mod(m, cols, p);
    let pivots: Vec<usize> = ech.iter().map(|(c, _)| *c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (c, row) in &ech {
            v[*c] = (p - row[free]) % p;
        }
        basis.push(v);
    }
    basis
}
