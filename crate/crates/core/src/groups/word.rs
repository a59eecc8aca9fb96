use std::fmt;

use serde::{Deserialize, Serialize};

/// A letter is a signed, 1-based generator index: `+(g+1)` is generator g,
/// `-(g+1)` its inverse.
pub type Letter = i32;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = (generator + 1) as Letter;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// Coset-table column of a letter: `2g` for g, `2g + 1` for g^-1.
pub fn column_of(l: Letter) -> usize {
    2 * generator_of(l) + usize::from(l < 0)
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![letter(g, false)])
    }

    /// Freely reduces the given letters. Panics on a zero letter.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter, cancelling against the last one if inverse.
    pub fn push(&mut self, l: Letter) {
        assert!(l != 0, "zero is not a letter");
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn append(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn power(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..e.unsigned_abs() {
            w.append(&base);
        }
        w
    }

    /// Strips matching inverse letters from both ends.
    pub fn cyclically_reduced(&self) -> Word {
        let v = &self.0;
        let (mut i, mut j) = (0usize, v.len());
        while j - i >= 2 && v[i] == -v[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(v[i..j].to_vec())
    }

    /// Number of occurrences of generator g (either sign).
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|&&l| generator_of(l) == g).count()
    }

    /// Replaces each generator by a word. `image(g)` is the image of g.
    pub fn substitute(&self, mut image: impl FnMut(usize) -> Word) -> Word {
        let mut w = Word::identity();
        for &l in &self.0 {
            let img = image(generator_of(l));
            if l > 0 {
                w.append(&img);
            } else {
                w.append(&img.inverse());
            }
        }
        w
    }

    /// Renames generators; `rename(g)` must be a valid new index.
    pub fn relabel(&self, rename: impl Fn(usize) -> usize) -> Word {
        Word::from_letters(
            self.0
                .iter()
                .map(|&l| letter(rename(generator_of(l)), l < 0)),
        )
    }

    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut s = vec![0i64; generator_count];
        for &l in &self.0 {
            s[generator_of(l)] += l.signum() as i64;
        }
        s
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|&l| generator_of(l)).max()
    }

    /// Lexicographically least cyclic rotation of the word or its inverse;
    /// two cyclically reduced relators define the same normal closure
    /// contribution when their canonical forms agree.
    pub fn cyclic_canonical(&self) -> Word {
        let w = self.cyclically_reduced();
        let inv = w.inverse();
        let mut best = w.0.clone();
        for cand in [&w.0, &inv.0] {
            for r in 0..cand.len() {
                let rot: Vec<Letter> = cand[r..].iter().chain(&cand[..r]).copied().collect();
                if rot < best {
                    best = rot;
                }
            }
        }
        Word(best)
    }

    /// Rotates a cyclically reduced word so position `i` comes first.
    pub fn rotated(&self, i: usize) -> Word {
        Word(self.0[i..].iter().chain(&self.0[..i]).copied().collect())
    }
}

impl fmt::Display for Word {
    /// Letters `a..z` (uppercase for inverses) when every generator index is
    /// below 26, else a signed 1-based index list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.iter().all(|&l| generator_of(l) < 26) {
            for &l in &self.0 {
                let c = (b'a' + generator_of(l) as u8) as char;
                write!(f, "{}", if l < 0 { c.to_ascii_uppercase() } else { c })?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}
