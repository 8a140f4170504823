use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::Rat;

/// A word of class indices.
pub type Word = Vec<u16>;

/// Sparse vector over the words of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorVec {
    degree: usize,
    terms: BTreeMap<Word, Rat>,
}

impl TensorVec {
    pub fn zero(degree: usize) -> TensorVec {
        TensorVec {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(w: Word) -> TensorVec {
        let degree = w.len();
        TensorVec {
            degree,
            terms: BTreeMap::from([(w, Rat::one())]),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rat)>>(degree: usize, terms: I) -> TensorVec {
        let mut v = TensorVec::zero(degree);
        for (w, c) in terms {
            v.add_term(w, &c);
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u16]) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, w: Word, c: &Rat) {
        assert_eq!(w.len(), self.degree, "word length differs from degree");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &TensorVec) {
        self.add_scaled(&Rat::one(), other);
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &TensorVec) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), &(c * x));
        }
    }

    pub fn scale(&self, c: &Rat) -> TensorVec {
        if c.is_zero() {
            return TensorVec::zero(self.degree);
        }
        TensorVec {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Concatenation product u⊗v.
    pub fn tensor(&self, other: &TensorVec) -> TensorVec {
        let mut out = TensorVec::zero(self.degree + other.degree);
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &(x * y));
            }
        }
        out
    }
}
