use std::fmt;

use serde::{Deserialize, Serialize};

/// An unoriented simplex, identified by its strictly increasing vertex tuple.
///
/// Orientation lives with whoever holds the simplex (a chain coefficient or a
/// facet sign), never in the vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts `ordered` and returns the simplex together with the sign of the
    /// sorting permutation. `None` if a vertex repeats.
    pub fn from_ordered(ordered: &[usize]) -> Option<(Simplex, i32)> {
        let sign = permutation_sign(ordered)?;
        let mut v = ordered.to_vec();
        v.sort_unstable();
        Some((Simplex(v), sign))
    }

    /// Panics if `sorted` is not strictly increasing.
    pub fn from_sorted(sorted: Vec<usize>) -> Simplex {
        assert!(
            sorted.windows(2).all(|w| w[0] < w[1]),
            "simplex vertices must be strictly increasing: {sorted:?}"
        );
        Simplex(sorted)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    /// Dimension; the empty simplex has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces with their incidence signs `(-1)^i`.
    pub fn faces(&self) -> impl Iterator<Item = (i32, Simplex)> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut f = self.0.clone();
            f.remove(i);
            (if i % 2 == 0 { 1 } else { -1 }, Simplex(f))
        })
    }

    /// All nonempty faces (including `self`), as sorted subsets.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u32..(1u32 << n) {
            let f: Vec<usize> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.0[i])
                .collect();
            out.push(Simplex(f));
        }
        out
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Sign of the permutation that sorts `seq`; `None` on repeated entries.
pub fn permutation_sign(seq: &[usize]) -> Option<i32> {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return None;
            }
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
}
