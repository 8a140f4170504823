use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::module::CrossedModule;
use super::tensor::TensorVec;
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rat};

impl CrossedModule {
    /// Ψ (or Ψ⁻¹) acting on tensor factors `pos`, `pos+1` (1-based).
    pub fn apply_braiding(&self, pos: usize, v: &TensorVec, inverse: bool) -> Result<TensorVec> {
        let n = v.degree();
        if pos == 0 || pos >= n {
            return Err(Error::Position { pos, degree: n });
        }
        let mut out = TensorVec::zero(n);
        let i = pos - 1;
        for (w, c) in v.terms() {
            let (a, b) = (w[i] as usize, w[i + 1] as usize);
            let (z, (x, y)) = if inverse {
                self.braid_pair_inv(a, b)
            } else {
                self.braid_pair(a, b)
            };
            let mut nw = w.clone();
            nw[i] = x as u16;
            nw[i + 1] = y as u16;
            if z > 0 {
                out.add_term(nw, c);
            } else {
                out.add_term(nw, &-c);
            }
        }
        Ok(out)
    }

    /// The braided integer [n; sΨ] on factors `offset+1 ..= offset+n`.
    pub fn braided_integer(&self, n: usize, sign: i8) -> BraidOp {
        BraidOp::new(BraidKind::Integer, n, sign)
    }

    /// The braided factorial [n; sΨ]!; sign −1 gives the antisymmetrizer A_n.
    pub fn braided_factorial(&self, n: usize, sign: i8) -> BraidOp {
        BraidOp::new(BraidKind::Factorial, n, sign)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BraidKind {
    Integer,
    Factorial,
}

/// A braided integer or factorial, applied without materializing a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidOp {
    pub kind: BraidKind,
    pub n: usize,
    pub sign: i8,
    /// Use Ψ⁻¹ in place of Ψ.
    pub inverse: bool,
    /// Number of leading tensor factors left untouched.
    pub offset: usize,
}

impl BraidOp {
    pub fn new(kind: BraidKind, n: usize, sign: i8) -> BraidOp {
        assert!(n >= 1 && (sign == 1 || sign == -1));
        BraidOp {
            kind,
            n,
            sign,
            inverse: false,
            offset: 0,
        }
    }

    pub fn inverted(mut self) -> BraidOp {
        self.inverse = !self.inverse;
        self
    }

    pub fn shifted(mut self, offset: usize) -> BraidOp {
        self.offset = offset;
        self
    }

    pub fn apply(&self, cm: &CrossedModule, v: &TensorVec) -> Result<TensorVec> {
        if v.degree() < self.offset + self.n {
            return Err(Error::Position {
                pos: self.offset + self.n,
                degree: v.degree(),
            });
        }
        match self.kind {
            BraidKind::Integer => self.apply_integer(cm, v),
            BraidKind::Factorial => {
                let mut w = self.apply_integer(cm, v)?;
                if self.n > 1 {
                    let rest = BraidOp {
                        n: self.n - 1,
                        offset: self.offset + 1,
                        ..*self
                    };
                    w = rest.apply(cm, &w)?;
                }
                Ok(w)
            }
        }
    }

    // Horner form: v + sΨ₁(v + sΨ₂(v + …)).
    fn apply_integer(&self, cm: &CrossedModule, v: &TensorVec) -> Result<TensorVec> {
        let s = Rat::from_int(self.sign as i64);
        let mut r = v.clone();
        for k in (1..self.n).rev() {
            let mut next = v.clone();
            next.add_scaled(&s, &cm.apply_braiding(self.offset + k, &r, self.inverse)?);
            r = next;
        }
        Ok(r)
    }

    /// Expansion as signed products of Ψ_i, each product listed left to right
    /// (so the last position acts first). Size grows like n!.
    pub fn terms(&self) -> Vec<(i64, Vec<usize>)> {
        let integer: Vec<(i64, Vec<usize>)> = (0..self.n)
            .map(|k| {
                let c = (self.sign as i64).pow(k as u32);
                (c, (1..=k).map(|i| i + self.offset).collect())
            })
            .collect();
        match self.kind {
            BraidKind::Integer => integer,
            BraidKind::Factorial if self.n == 1 => integer,
            BraidKind::Factorial => {
                let rest = BraidOp {
                    n: self.n - 1,
                    offset: self.offset + 1,
                    ..*self
                }
                .terms();
                let mut out = Vec::new();
                for (c1, p1) in &rest {
                    for (c2, p2) in &integer {
                        let mut p = p1.clone();
                        p.extend_from_slice(p2);
                        out.push((c1 * c2, p));
                    }
                }
                out
            }
        }
    }

    /// Matrix on an invariant set of words: entry (i, j) is the coefficient of
    /// `words[i]` in the image of `words[j]`.
    pub fn materialize(&self, cm: &CrossedModule, words: &[Vec<u16>]) -> Result<QMatrix> {
        let pos: HashMap<&[u16], usize> =
            words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let mut m = QMatrix::zeros(words.len(), words.len());
        for (j, w) in words.iter().enumerate() {
            let img = self.apply(cm, &TensorVec::word(w.clone()))?;
            for (u, c) in img.terms() {
                let i = *pos
                    .get(u.as_slice())
                    .ok_or_else(|| Error::Parse("word set is not invariant".into()))?;
                m.set(i, j, c.clone());
            }
        }
        Ok(m)
    }
}

/// Applies an expanded product of braidings (rightmost first).
pub(crate) fn apply_product(
    cm: &CrossedModule,
    positions: &[usize],
    v: &TensorVec,
    inverse: bool,
) -> Result<TensorVec> {
    let mut r = v.clone();
    for &p in positions.iter().rev() {
        r = cm.apply_braiding(p, &r, inverse)?;
    }
    Ok(r)
}

/// Ψ₁Ψ₂Ψ₁ = Ψ₂Ψ₁Ψ₂ on every basis word of degree 3.
pub fn yang_baxter_holds(cm: &CrossedModule) -> Result<bool> {
    let m = cm.len() as u16;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let v = TensorVec::word(vec![a, b, c]);
                if apply_product(cm, &[1, 2, 1], &v, false)? != apply_product(cm, &[2, 1, 2], &v, false)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn cm(n: usize, t: &str, signed: bool) -> CrossedModule {
        CrossedModule::from_class_str(n, t, signed).unwrap()
    }

    fn idx(cm: &CrossedModule, s: &str) -> u16 {
        cm.index_of(&Perm::parse_cycles(cm.n(), s).unwrap()).unwrap() as u16
    }

    #[test]
    fn braiding_round_trip() {
        let c = cm(4, "2", true);
        let v = TensorVec::from_terms(3, [(vec![0, 1, 2], Rat::from_int(2)), (vec![3, 3, 5], Rat::new(1, 3))]);
        for pos in 1..=2 {
            let w = c.apply_braiding(pos, &v, false).unwrap();
            assert_eq!(c.apply_braiding(pos, &w, true).unwrap(), v);
        }
        assert!(c.apply_braiding(3, &v, false).is_err());
        assert!(c.apply_braiding(0, &v, false).is_err());
    }

    #[test]
    fn unsigned_example() {
        let c = cm(3, "2", false);
        let v = TensorVec::word(vec![idx(&c, "(12)"), idx(&c, "(23)")]);
        let w = c.apply_braiding(1, &v, false).unwrap();
        assert_eq!(w, TensorVec::word(vec![idx(&c, "(13)"), idx(&c, "(12)")]));
    }

    #[test]
    fn yang_baxter_exhaustive() {
        for (n, t) in [(3, "2"), (3, "3"), (4, "2"), (4, "2+2"), (4, "3"), (4, "4")] {
            for signed in [false, true] {
                if signed && t != "2" {
                    continue;
                }
                let c = cm(n, t, signed);
                let m = c.len() as u16;
                for a in 0..m {
                    for b in 0..m {
                        for d in 0..m {
                            let v = TensorVec::word(vec![a, b, d]);
                            let l = apply_product(&c, &[1, 2, 1], &v, false).unwrap();
                            let r = apply_product(&c, &[2, 1, 2], &v, false).unwrap();
                            assert_eq!(l, r);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn factorial_expansions() {
        let c = cm(3, "2", false);
        assert_eq!(c.braided_integer(1, -1).terms(), vec![(1, vec![])]);
        assert_eq!(c.braided_integer(2, -1).terms(), vec![(1, vec![]), (-1, vec![1])]);
        assert_eq!(
            c.braided_integer(3, -1).terms(),
            vec![(1, vec![]), (-1, vec![1]), (1, vec![1, 2])]
        );
        let a3 = c.braided_factorial(3, -1).terms();
        assert_eq!(a3.len(), 6);
        assert_eq!(a3.last().unwrap(), &(-1, vec![2, 1, 2]));
    }

    #[test]
    fn applier_matches_expansion() {
        let c = cm(4, "2", true);
        for sign in [-1i8, 1] {
            for n in 1..=4 {
                for op in [c.braided_integer(n, sign), c.braided_factorial(n, sign)] {
                    for op in [op, op.inverted()] {
                        let v = TensorVec::word((0..n as u16).map(|k| (k * 5 + 1) % 6).collect());
                        let direct = op.apply(&c, &v).unwrap();
                        let mut expanded = TensorVec::zero(n);
                        for (k, p) in op.terms() {
                            let t = apply_product(&c, &p, &v, op.inverse).unwrap();
                            expanded.add_scaled(&Rat::from_int(k), &t);
                        }
                        assert_eq!(direct, expanded);
                    }
                }
            }
        }
    }

    #[test]
    fn antisymmetrizer_block_kernels() {
        // degree-3 block of (123)(45) in S_5 and of a 4-cycle in S_4
        let c5 = cm(5, "2", false);
        let g5 = Perm::parse_cycles(5, "(123)(45)").unwrap();
        let c4 = cm(4, "2", false);
        let g4 = Perm::parse_cycles(4, "(1234)").unwrap();
        for (c, g, size, ker) in [(&c5, g5, 9, 7), (&c4, g4, 16, 11)] {
            let words = c.blocks(3).into_iter().find(|(h, _)| *h == g).unwrap().1;
            assert_eq!(words.len(), size);
            let a3 = c.braided_factorial(3, -1).materialize(c, &words).unwrap();
            assert_eq!(a3.kernel_basis().len(), ker);
        }
    }
}
