//! Element expressions such as `[12][23] - 2[13][12] + 1/2 e(123)e(132)`.
//!
//! `[ij]` is the generator of the 2-cycle (ij), with `[ji] = -[ij]` in the
//! signed case and `[ji] = [ij]` otherwise; `[i,j]` is accepted for N > 9.
//! `e(…)` names any class element in cycle notation. An empty product is `1`.

use crate::algebra::{AlgElement, GradedAlgebra};
use crate::crossed::Word;
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::perm::Perm;

/// A parsed expression: signed words with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<(Rat, Word)>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {}", self.pos))
    }

    fn until(&mut self, close: u8) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != close {
            self.pos += 1;
        }
        if self.pos >= self.s.len() {
            return Err(self.err("unclosed bracket"));
        }
        let inner = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("bad utf-8"))?;
        self.pos += 1;
        Ok(inner)
    }

    fn number(&mut self) -> Option<Rat> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).ok()?;
        let mut it = text.splitn(2, '/');
        let p: i64 = it.next()?.parse().ok()?;
        let q: i64 = it.next().map_or(Some(1), |x| x.parse().ok())?;
        (q != 0).then(|| Rat::new(p, q))
    }
}

fn generator(alg: &GradedAlgebra, p: &Perm) -> Result<usize> {
    alg.cm()
        .index_of(p)
        .ok_or_else(|| Error::Parse(format!("{p} is not in the class")))
}

/// Parses an expression against the generators of `alg`.
pub fn parse(alg: &GradedAlgebra, text: &str) -> Result<Expr> {
    let n = alg.cm().n();
    let signed = alg.cm().signed();
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    while p.peek().is_some() {
        let mut coeff = Rat::one();
        match p.peek() {
            Some(b'+') => p.pos += 1,
            Some(b'-') => {
                p.pos += 1;
                coeff = -coeff;
            }
            _ if !first => return Err(p.err("expected + or -")),
            _ => {}
        }
        first = false;
        let had_number = if let Some(c) = p.number() {
            coeff = coeff * c;
            if p.peek() == Some(b'*') {
                p.pos += 1;
            }
            true
        } else {
            false
        };
        let mut word = Vec::new();
        let mut any = false;
        loop {
            match p.peek() {
                Some(b'[') => {
                    p.pos += 1;
                    let inner = p.until(b']')?.trim().to_string();
                    let pts: Option<Vec<usize>> = if inner.contains(',') {
                        inner.split(',').map(|x| x.trim().parse().ok()).collect()
                    } else {
                        inner.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
                    };
                    let pts = pts.ok_or_else(|| p.err("bad generator"))?;
                    if pts.len() != 2 || pts[0] == pts[1] || pts.iter().any(|&x| x == 0 || x > n) {
                        return Err(p.err("bad generator"));
                    }
                    let t = Perm::transposition(n, pts[0] - 1, pts[1] - 1);
                    word.push(generator(alg, &t)? as u16);
                    if signed && pts[0] > pts[1] {
                        coeff = -coeff;
                    }
                    any = true;
                }
                Some(b'e') => {
                    p.pos += 1;
                    if p.peek() != Some(b'(') {
                        return Err(p.err("expected ( after e"));
                    }
                    let start = p.pos;
                    while p.s.get(p.pos) == Some(&b'(') {
                        p.pos += 1;
                        p.until(b')')?;
                    }
                    let cyc = std::str::from_utf8(&p.s[start..p.pos]).map_err(|_| p.err("bad utf-8"))?;
                    let g = Perm::parse_cycles(n, cyc)?;
                    word.push(generator(alg, &g)? as u16);
                    any = true;
                }
                Some(b'1') if !any => {
                    p.pos += 1;
                    any = true;
                }
                Some(b'*') if any => p.pos += 1,
                _ => break,
            }
        }
        if !any && !had_number {
            return Err(p.err("empty term"));
        }
        terms.push((coeff, word));
    }
    if terms.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(Expr { terms })
}

/// Parses and normal-forms an expression.
pub fn eval(alg: &mut GradedAlgebra, text: &str) -> Result<AlgElement> {
    let e = parse(alg, text)?;
    let top = e.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0);
    alg.ensure_degree(top)?;
    let mut out = alg.zero();
    for (c, w) in &e.terms {
        out = out.axpy(c, &alg.normal_form_word(w)?);
    }
    Ok(out)
}

/// Writes an element on basis words, using `[ij]` for 2-cycles and `e(…)` otherwise.
pub fn format(alg: &GradedAlgebra, x: &AlgElement) -> Result<String> {
    let cm = alg.cm();
    let mut out = String::new();
    for (n, v) in x.parts() {
        let basis = alg.basis(n)?;
        for (j, c) in v.iter() {
            let mut c = c.clone();
            let mut word = String::new();
            for &a in &basis[*j] {
                let g = cm.element(a as usize);
                if cm.is_transpositions() {
                    let cyc = &g.cycles().into_iter().find(|c| c.len() == 2).unwrap();
                    if cm.n() > 9 {
                        word += &format!("[{},{}]", cyc[0] + 1, cyc[1] + 1);
                    } else {
                        word += &format!("[{}{}]", cyc[0] + 1, cyc[1] + 1);
                    }
                } else {
                    word += &format!("e{g}");
                }
            }
            if c.is_negative() {
                out += if out.is_empty() { "-" } else { " - " };
                c = -c;
            } else if !out.is_empty() {
                out += " + ";
            }
            if word.is_empty() {
                out += &c.to_string();
            } else if !c.is_one() {
                out += &format!("{c}{word}");
            } else {
                out += &word;
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn parses_brackets_and_signs() {
        let mut e3 = GradedAlgebra::fomin_kirillov(3, Flavor::Quadratic).unwrap();
        let x = eval(&mut e3, "[12][23] + [23][31] + [31][12]").unwrap();
        assert!(x.is_zero());
        let y = eval(&mut e3, "[21]").unwrap();
        assert_eq!(y, eval(&mut e3, "-[12]").unwrap());
        let z = eval(&mut e3, "2[12] - 1/2 [13]*[13] + 3").unwrap();
        assert_eq!(z.degrees().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn unsigned_ignores_order() {
        let mut l3 = GradedAlgebra::exterior(3, "2", Flavor::Quadratic).unwrap();
        assert_eq!(eval(&mut l3, "[21]").unwrap(), eval(&mut l3, "[12]").unwrap());
    }

    #[test]
    fn cycle_notation() {
        let mut a = GradedAlgebra::exterior(4, "3", Flavor::Quadratic).unwrap();
        let x = eval(&mut a, "e(123)e(123)").unwrap();
        assert!(x.is_zero());
        assert!(!eval(&mut a, "e(123) - e(132)").unwrap().is_zero());
    }

    #[test]
    fn round_trip() {
        let mut e3 = GradedAlgebra::fomin_kirillov(3, Flavor::Quadratic).unwrap();
        let x = eval(&mut e3, "[12][23] - 2[13][12] + 1/3").unwrap();
        let s = format(&e3, &x).unwrap();
        assert_eq!(eval(&mut e3, &s).unwrap(), x);
    }

    #[test]
    fn errors() {
        let e3 = GradedAlgebra::fomin_kirillov(3, Flavor::Quadratic).unwrap();
        assert!(parse(&e3, "[14]").is_err());
        assert!(parse(&e3, "[12").is_err());
        assert!(parse(&e3, "").is_err());
        assert!(parse(&e3, "[12] [23] x").is_err());
    }
}
