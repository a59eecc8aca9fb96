use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::Simplex;

/// A sparse integral simplicial chain. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerChain {
    degree: usize,
    entries: BTreeMap<Simplex, BigInt>,
}

impl IntegerChain {
    pub fn new(degree: usize) -> Self {
        IntegerChain {
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `coeff` times the simplex spanned by `ordered` (in that vertex
    /// order). Degenerate tuples contribute nothing.
    pub fn add_ordered(&mut self, ordered: &[usize], coeff: impl Into<BigInt>) {
        assert_eq!(ordered.len(), self.degree + 1, "simplex degree mismatch");
        if let Some((s, sign)) = Simplex::from_ordered(ordered) {
            self.add(s, coeff.into() * sign);
        }
    }

    pub fn add(&mut self, simplex: Simplex, coeff: BigInt) {
        debug_assert_eq!(simplex.len(), self.degree + 1);
        if coeff.is_zero() {
            return;
        }
        match self.entries.entry(simplex) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, simplex: &Simplex) -> BigInt {
        self.entries.get(simplex).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &BigInt)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The l1 norm: sum of absolute values of the coefficients.
    pub fn l1(&self) -> BigInt {
        self.entries.values().map(|c| c.abs()).sum()
    }

    pub fn boundary(&self) -> IntegerChain {
        if self.degree == 0 {
            return IntegerChain::new(0);
        }
        let mut acc: BTreeMap<Simplex, BigInt> = BTreeMap::new();
        for (s, c) in &self.entries {
            for (sign, f) in s.faces() {
                *acc.entry(f).or_insert_with(BigInt::zero) += c * sign;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        IntegerChain {
            degree: self.degree - 1,
            entries: acc,
        }
    }

    pub fn scaled(&self, k: &BigInt) -> IntegerChain {
        if k.is_zero() {
            return IntegerChain::new(self.degree);
        }
        IntegerChain {
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .map(|(s, c)| (s.clone(), c * k))
                .collect(),
        }
    }

    pub fn plus(&self, other: &IntegerChain) -> IntegerChain {
        assert_eq!(self.degree, other.degree);
        let mut acc = self.entries.clone();
        for (s, c) in &other.entries {
            *acc.entry(s.clone()).or_insert_with(BigInt::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        IntegerChain {
            degree: self.degree,
            entries: acc,
        }
    }

    pub fn negated(&self) -> IntegerChain {
        self.scaled(&BigInt::from(-1))
    }

    /// Pushes the chain forward along a vertex map. Simplices whose image is
    /// degenerate are dropped, as in the simplicial chain map.
    pub fn pushforward(&self, vertex_map: impl Fn(usize) -> usize) -> IntegerChain {
        let mut out = IntegerChain::new(self.degree);
        let mut acc: BTreeMap<Simplex, BigInt> = BTreeMap::new();
        for (s, c) in &self.entries {
            let image: Vec<usize> = s.vertices().iter().map(|&v| vertex_map(v)).collect();
            if let Some((t, sign)) = Simplex::from_ordered(&image) {
                *acc.entry(t).or_insert_with(BigInt::zero) += c * sign;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.entries = acc;
        out
    }
}

impl FromIterator<(Simplex, BigInt)> for IntegerChain {
    /// Panics on an empty iterator (the degree cannot be inferred).
    fn from_iter<I: IntoIterator<Item = (Simplex, BigInt)>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let degree = it
            .peek()
            .map(|(s, _)| s.len() - 1)
            .expect("cannot infer chain degree from an empty iterator");
        let mut chain = IntegerChain::new(degree);
        for (s, c) in it {
            chain.add(s, c);
        }
        chain
    }
}
