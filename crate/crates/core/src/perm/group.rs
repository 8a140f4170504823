use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of {1..N}. Stored 0-based; all text I/O is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        assert!(n <= 255, "ground set too large");
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// From a 1-based images list: `images[i-1] = σ(i)`.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Perm { images: out })
    }

    pub(crate) fn from_zero_based(images: Vec<u8>) -> Perm {
        Perm { images }
    }

    /// From 1-based cycles, e.g. `&[&[1, 2, 3], &[4, 5]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x == 0 || x > n || used[x - 1] {
                    return Err(Error::Parse(format!("bad cycle {cyc:?} for N={n}")));
                }
                used[x - 1] = true;
                images[x - 1] = (cyc[(k + 1) % cyc.len()] - 1) as u8;
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `(12)(34)`, `(1,10)` or `()`.
    pub fn parse_cycles(n: usize, s: &str) -> Result<Perm> {
        let s = s.trim();
        if s == "e" || s == "()" || s.is_empty() {
            return Ok(Perm::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for chunk in s.split('(').skip(1) {
            let body = chunk
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced cycle in `{s}`")))?;
            let pts: Vec<usize> = if body.contains(',') {
                body.split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad point in `{s}`"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad point in `{s}`")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(pts);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(n, &refs)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// 0-based image.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 1-based images list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// (p∘q)(i) = p(q(i)).
    pub fn compose(&self, q: &Perm) -> Result<Perm> {
        if self.n() != q.n() {
            return Err(Error::SizeMismatch(self.n(), q.n()));
        }
        Ok(self.mul(q))
    }

    #[inline]
    pub(crate) fn mul(&self, q: &Perm) -> Perm {
        Perm {
            images: q.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// g·a·g⁻¹, computed by relabelling the points of `a` through `g`.
    pub fn conjugate(g: &Perm, a: &Perm) -> Result<Perm> {
        if g.n() != a.n() {
            return Err(Error::SizeMismatch(g.n(), a.n()));
        }
        Ok(g.conj(a))
    }

    #[inline]
    pub(crate) fn conj(&self, a: &Perm) -> Perm {
        let mut out = vec![0u8; a.n()];
        for (i, &x) in a.images.iter().enumerate() {
            out[self.images[i] as usize] = self.images[x as usize];
        }
        Perm { images: out }
    }

    /// Cycles (0-based), each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn sign(&self) -> i64 {
        let n_cycles = self.cycles().len();
        if (self.n() - n_cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position in the lexicographic order of all permutations (Lehmer rank).
    pub fn lex_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0usize;
        let mut used = 0u64;
        for i in 0..n {
            let x = self.images[i] as usize;
            let smaller = (0..x).filter(|&y| used & (1 << y) == 0).count();
            rank = rank * (n - i) + smaller;
            used |= 1 << x;
        }
        rank
    }

    /// Writes g as t₁∘t₂∘⋯∘t_k with transpositions t_i (0-based pairs).
    pub fn transposition_factors(&self) -> Vec<(usize, usize)> {
        let mut h = self.clone();
        let mut out = Vec::new();
        for i in 0..self.n() {
            let hi = h.apply(i);
            if hi != i {
                let (lo, hi2) = (i.min(hi), i.max(hi));
                let t = Perm::transposition(self.n(), lo, hi2);
                h = t.mul(&h);
                out.push((lo, hi2));
            }
        }
        out
    }

    /// The transposition swapping 0-based points `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Perm {
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.swap(i, j);
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.n() > 9;
        let mut any = false;
        for cyc in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            let pts: Vec<String> = cyc.iter().map(|x| (x + 1).to_string()).collect();
            if wide {
                write!(f, "({})", pts.join(","))?;
            } else {
                write!(f, "({})", pts.concat())?;
            }
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cycle type: parts in weakly decreasing order, summing to N.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<CycleType> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidCycleType(format!("{parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    /// Parses `"2+2"` style strings; missing fixed points are filled in up to `n`.
    pub fn parse(n: usize, s: &str) -> Result<CycleType> {
        let bad = || Error::InvalidCycleType(s.to_string());
        let mut parts: Vec<usize> = s
            .split('+')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if parts.iter().any(|&p| p == 0) {
            return Err(bad());
        }
        let total: usize = parts.iter().sum();
        if total > n {
            return Err(bad());
        }
        parts.extend(std::iter::repeat(1).take(n - total));
        CycleType::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    pub fn is_transpositions(&self) -> bool {
        self.parts.first() == Some(&2) && self.parts[1..].iter().all(|&p| p == 1)
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> u128 {
        let n = self.n();
        let mut size: u128 = (1..=n as u128).product();
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        for (&k, &m) in &counts {
            size /= (k as u128).pow(m);
            size /= (1..=m as u128).product::<u128>();
        }
        size
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<String> = self
            .parts
            .iter()
            .filter(|&&p| p > 1)
            .map(|p| p.to_string())
            .collect();
        if nontrivial.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", nontrivial.join("+"))
        }
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Parses a full partition with explicit fixed points, e.g. `"2+1+1"`.
    fn from_str(s: &str) -> Result<CycleType> {
        let parts: Vec<usize> = s
            .split('+')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidCycleType(s.into())))
            .collect::<Result<_>>()?;
        CycleType::new(parts)
    }
}

/// All permutations of cycle type `t`, sorted lexicographically by images.
pub fn conjugacy_class(n: usize, t: &CycleType) -> Result<Vec<Perm>> {
    if t.n() != n {
        return Err(Error::InvalidCycleType(format!("{t} is not a partition of {n}")));
    }
    if t.is_identity() {
        return Err(Error::IdentityClass);
    }
    let mut lengths: Vec<usize> = t.parts.clone();
    let mut out = Vec::new();
    let mut images: Vec<u8> = (0..n as u8).collect();
    let mut assigned = vec![false; n];
    place_cycles(n, &mut lengths, &mut assigned, &mut images, &mut out);
    out.sort();
    Ok(out)
}

// Each cycle is opened at the least unassigned point, which makes every
// permutation appear exactly once.
fn place_cycles(
    n: usize,
    lengths: &mut Vec<usize>,
    assigned: &mut [bool],
    images: &mut [u8],
    out: &mut Vec<Perm>,
) {
    let Some(start) = (0..n).find(|&i| !assigned[i]) else {
        out.push(Perm::from_zero_based(images.to_vec()));
        return;
    };
    let mut distinct: Vec<usize> = lengths.clone();
    distinct.dedup();
    for len in distinct {
        let pos = lengths.iter().position(|&l| l == len).unwrap();
        lengths.remove(pos);
        assigned[start] = true;
        let mut cyc = vec![start];
        extend_cycle(n, len, &mut cyc, lengths, assigned, images, out);
        assigned[start] = false;
        lengths.insert(pos, len);
    }
}

fn extend_cycle(
    n: usize,
    len: usize,
    cyc: &mut Vec<usize>,
    lengths: &mut Vec<usize>,
    assigned: &mut [bool],
    images: &mut [u8],
    out: &mut Vec<Perm>,
) {
    if cyc.len() == len {
        for k in 0..len {
            images[cyc[k]] = cyc[(k + 1) % len] as u8;
        }
        place_cycles(n, lengths, assigned, images, out);
        for &x in cyc.iter() {
            images[x] = x as u8;
        }
        return;
    }
    for x in cyc[0] + 1..n {
        if assigned[x] {
            continue;
        }
        assigned[x] = true;
        cyc.push(x);
        extend_cycle(n, len, cyc, lengths, assigned, images, out);
        cyc.pop();
        assigned[x] = false;
    }
}

/// Whether the elements of `gens` generate all of S_N (breadth-first closure).
pub fn generates_group(gens: &[Perm], n: usize) -> Result<bool> {
    if n > 9 {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            range: "1..=9".into(),
        });
    }
    if let Some(g) = gens.iter().find(|g| g.n() != n) {
        return Err(Error::SizeMismatch(g.n(), n));
    }
    let order: usize = (1..=n).product();
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len() == order)
}

/// All of S_N in lexicographic order; the index of a permutation is its Lehmer rank.
#[derive(Clone, Debug)]
pub struct SymGroup {
    n: usize,
    elements: Vec<Perm>,
}

impl SymGroup {
    pub fn new(n: usize) -> Result<SymGroup> {
        if n == 0 || n > 8 {
            return Err(Error::OutOfRange {
                what: "N",
                value: n,
                range: "1..=8".into(),
            });
        }
        let mut elements = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            elements.push(Perm::from_zero_based(cur.clone()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        Ok(SymGroup { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> usize {
        p.lex_rank()
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn composition_convention() {
        let id = Perm::identity(3);
        assert_eq!(id.compose(&p(3, "(12)")).unwrap(), p(3, "(12)"));
        assert!(p(3, "(12)").compose(&p(3, "(12)")).unwrap().is_identity());
        let c = p(3, "(12)").compose(&p(3, "(23)")).unwrap();
        assert_eq!(c.images(), vec![2, 3, 1]);
        assert_eq!(c, p(3, "(123)"));
        assert!(Perm::identity(3).compose(&Perm::identity(4)).is_err());
    }

    #[test]
    fn conjugation_relabels() {
        let a = p(3, "(13)");
        assert_eq!(Perm::conjugate(&Perm::identity(3), &a).unwrap(), a);
        assert_eq!(Perm::conjugate(&p(3, "(12)"), &a).unwrap(), p(3, "(23)"));
        assert_eq!(Perm::conjugate(&p(3, "(123)"), &p(3, "(12)")).unwrap(), p(3, "(23)"));
        // agrees with the product definition
        let g = p(5, "(1342)");
        let b = p(5, "(125)");
        assert_eq!(g.conj(&b), g.mul(&b).mul(&g.inverse()));
    }

    #[test]
    fn class_sizes() {
        let two = CycleType::parse(3, "2").unwrap();
        assert_eq!(conjugacy_class(3, &two).unwrap().len(), 3);
        assert_eq!(conjugacy_class(4, &CycleType::parse(4, "3").unwrap()).unwrap().len(), 8);
        assert_eq!(conjugacy_class(5, &CycleType::parse(5, "4").unwrap()).unwrap().len(), 30);
        assert_eq!(
            conjugacy_class(3, &CycleType::parse(3, "1").unwrap()),
            Err(Error::IdentityClass)
        );
        for t in ["2", "2+2", "3", "3+2", "4", "5"] {
            let ct = CycleType::parse(5, t).unwrap();
            let cls = conjugacy_class(5, &ct).unwrap();
            assert_eq!(cls.len() as u128, ct.class_size());
            assert!(cls.windows(2).all(|w| w[0] < w[1]));
            assert!(cls.iter().all(|x| x.cycle_type() == ct));
        }
    }

    #[test]
    fn canonical_class_order() {
        let cls = conjugacy_class(3, &CycleType::parse(3, "2").unwrap()).unwrap();
        let names: Vec<String> = cls.iter().map(|x| x.to_string()).collect();
        assert_eq!(names, vec!["(23)", "(12)", "(13)"]);
    }

    #[test]
    fn generation() {
        let t5 = conjugacy_class(5, &CycleType::parse(5, "2").unwrap()).unwrap();
        assert!(generates_group(&t5, 5).unwrap());
        let v4 = conjugacy_class(4, &CycleType::parse(4, "2+2").unwrap()).unwrap();
        assert!(!generates_group(&v4, 4).unwrap());
        let c3 = conjugacy_class(3, &CycleType::parse(3, "3").unwrap()).unwrap();
        assert!(!generates_group(&c3, 3).unwrap());
    }

    #[test]
    fn lex_rank_matches_enumeration() {
        let g = SymGroup::new(5).unwrap();
        for (i, x) in g.elements().iter().enumerate() {
            assert_eq!(x.lex_rank(), i);
        }
    }

    #[test]
    fn transposition_factorization() {
        let g = p(6, "(1352)(46)");
        let prod = g
            .transposition_factors()
            .iter()
            .fold(Perm::identity(6), |acc, &(i, j)| acc.mul(&Perm::transposition(6, i, j)));
        assert_eq!(prod, g);
    }

    #[test]
    fn cycle_type_strings() {
        let t = CycleType::parse(5, "3+2").unwrap();
        assert_eq!(t.to_string(), "3+2");
        assert_eq!(t.parts(), &[3, 2]);
        assert_eq!(CycleType::parse(5, "2").unwrap().parts(), &[2, 1, 1, 1]);
        assert!(CycleType::parse(3, "4").is_err());
        assert!(CycleType::parse(3, "x").is_err());
        assert!(t.class_size() == 20);
    }
}
