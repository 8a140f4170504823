//! Commutative polynomials over ℚ in θ_1..θ_N, used as an oracle for divided differences.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Rat;

/// Exponent vector (one entry per variable) to coefficient; no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rat::one())
    }

    /// The variable θ_i, 0-based.
    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    pub fn monomial(exps: &[u32], c: Rat) -> Poly {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps.to_vec(), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            for (f, y) in &other.terms {
                let g: Vec<u32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, x * y);
            }
        }
        out
    }

    /// Interchanges θ_i and θ_j.
    pub fn swap(&self, i: usize, j: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, x) in &self.terms {
            let mut f = e.clone();
            f.swap(i, j);
            out.add_term(f, x.clone());
        }
        out
    }

    /// Exact quotient by θ_i − θ_j; fails when there is a remainder.
    pub fn div_difference(&self, i: usize, j: usize) -> Result<Poly> {
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        loop {
            let Some(e) = rem
                .terms
                .keys()
                .filter(|e| e[i] > 0)
                .max_by_key(|e| e[i])
                .cloned()
            else {
                break;
            };
            let c = rem.terms[&e].clone();
            let mut lower = e.clone();
            lower[i] -= 1;
            let t = Poly::monomial(&lower, c);
            q = q.add(&t);
            let divisor = Poly::var(self.nvars, i).sub(&Poly::var(self.nvars, j));
            rem = rem.sub(&t.mul(&divisor));
        }
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!("θ_{} − θ_{} does not divide", i + 1, j + 1)));
        }
        Ok(q)
    }

    /// ∂_ij p = (p − (ij).p)/(θ_i − θ_j).
    pub fn divided_difference(&self, i: usize, j: usize) -> Result<Poly> {
        self.sub(&self.swap(i, j)).div_difference(i, j)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "·θ{}", i + 1)?,
                    _ => write!(f, "·θ{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_differences() {
        let x = |i| Poly::var(3, i);
        assert_eq!(x(0).divided_difference(0, 1).unwrap(), Poly::one(3));
        assert!(x(2).divided_difference(0, 1).unwrap().is_zero());
        // ∂(θ1²) = θ1 + θ2
        let sq = x(0).mul(&x(0));
        assert_eq!(sq.divided_difference(0, 1).unwrap(), x(0).add(&x(1)));
        // symmetric polynomials are killed
        assert!(x(0).mul(&x(1)).divided_difference(0, 1).unwrap().is_zero());
    }

    #[test]
    fn exact_division_only() {
        assert!(Poly::var(2, 0).div_difference(0, 1).is_err());
        let d = Poly::var(2, 0).sub(&Poly::var(2, 1));
        let p = d.mul(&Poly::var(2, 0).add(&Poly::one(2)));
        assert_eq!(p.div_difference(0, 1).unwrap(), Poly::var(2, 0).add(&Poly::one(2)));
    }
}
