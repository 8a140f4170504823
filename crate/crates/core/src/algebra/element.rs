use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{Rat, SparseVec};

/// An element of a graded algebra: coordinates in the chosen basis of each
/// degree. Belongs to the algebra whose id is `host`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgElement {
    pub(crate) host: u64,
    pub(crate) parts: BTreeMap<usize, SparseVec>,
}

impl AlgElement {
    pub(crate) fn new(host: u64) -> AlgElement {
        AlgElement {
            host,
            parts: BTreeMap::new(),
        }
    }

    pub(crate) fn homogeneous(host: u64, degree: usize, v: SparseVec) -> AlgElement {
        let mut e = AlgElement::new(host);
        if !v.is_zero() {
            e.parts.insert(degree, v);
        }
        e
    }

    pub fn host(&self) -> u64 {
        self.host
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Degrees carrying a nonzero component.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.keys().copied()
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<usize> {
        if self.parts.len() == 1 {
            self.parts.keys().next().copied()
        } else {
            None
        }
    }

    /// Coordinates in degree `n` (empty when absent).
    pub fn component(&self, n: usize) -> SparseVec {
        self.parts.get(&n).cloned().unwrap_or_default()
    }

    pub fn part(&self, n: usize) -> AlgElement {
        AlgElement::homogeneous(self.host, n, self.component(n))
    }

    pub fn parts(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.parts.iter().map(|(k, v)| (*k, v))
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        self.axpy(&Rat::one(), other)
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        self.axpy(&Rat::from_int(-1), other)
    }

    /// self + c·other.
    pub fn axpy(&self, c: &Rat, other: &AlgElement) -> AlgElement {
        assert_eq!(self.host, other.host, "elements of different algebras");
        let mut out = self.clone();
        for (n, v) in &other.parts {
            let cur = out.parts.remove(n).unwrap_or_default();
            let sum = cur.axpy(c, v);
            if !sum.is_zero() {
                out.parts.insert(*n, sum);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> AlgElement {
        let mut out = AlgElement::new(self.host);
        if c.is_zero() {
            return out;
        }
        for (n, v) in &self.parts {
            out.parts.insert(*n, v.scale(c));
        }
        out
    }

    pub fn neg(&self) -> AlgElement {
        self.scale(&Rat::from_int(-1))
    }
}
