use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::{conjugacy_class, CycleType, Perm, SymGroup};

/// A conjugacy class C ⊂ S_N with its Ad-table and, in the signed case, the
/// cocycle ζ of the Fomin-Kirillov braiding.
#[derive(Clone, Debug)]
pub struct CrossedModule {
    n: usize,
    cycle_type: CycleType,
    class: Vec<Perm>,
    index: HashMap<Perm, usize>,
    signed: bool,
    // ad[a*m + b] = index of a b a⁻¹; ad_inv[a*m + b] = index of a⁻¹ b a
    ad: Vec<u16>,
    ad_inv: Vec<u16>,
    // ζ on class × class
    zeta: Vec<i8>,
}

impl CrossedModule {
    pub fn build(n: usize, t: &CycleType, signed: bool) -> Result<CrossedModule> {
        if signed && !t.is_transpositions() {
            return Err(Error::SignedNeedsTranspositions);
        }
        let class = conjugacy_class(n, t)?;
        let m = class.len();
        if m > u16::MAX as usize {
            return Err(Error::ClassTooLarge(m));
        }
        let index: HashMap<Perm, usize> =
            class.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut ad = vec![0u16; m * m];
        let mut ad_inv = vec![0u16; m * m];
        for (a, pa) in class.iter().enumerate() {
            let pai = pa.inverse();
            for (b, pb) in class.iter().enumerate() {
                ad[a * m + b] = index[&pa.conj(pb)] as u16;
                ad_inv[a * m + b] = index[&pai.conj(pb)] as u16;
            }
        }
        let mut zeta = vec![1i8; m * m];
        if signed {
            for (a, pa) in class.iter().enumerate() {
                for (b, pb) in class.iter().enumerate() {
                    zeta[a * m + b] = zeta_transpositions(pa, pb);
                }
            }
        }
        Ok(CrossedModule {
            n,
            cycle_type: t.clone(),
            class,
            index,
            signed,
            ad,
            ad_inv,
            zeta,
        })
    }

    /// Convenience constructor from a cycle-type string such as `"2+2"`.
    pub fn from_class_str(n: usize, t: &str, signed: bool) -> Result<CrossedModule> {
        CrossedModule::build(n, &CycleType::parse(n, t)?, signed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cycle_type(&self) -> &CycleType {
        &self.cycle_type
    }

    /// |C|.
    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn class(&self) -> &[Perm] {
        &self.class
    }

    pub fn element(&self, a: usize) -> &Perm {
        &self.class[a]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn is_transpositions(&self) -> bool {
        self.cycle_type.is_transpositions()
    }

    /// Index of a b a⁻¹.
    #[inline]
    pub fn ad(&self, a: usize, b: usize) -> usize {
        self.ad[a * self.class.len() + b] as usize
    }

    /// Index of a⁻¹ b a.
    #[inline]
    pub fn ad_inv(&self, a: usize, b: usize) -> usize {
        self.ad_inv[a * self.class.len() + b] as usize
    }

    /// ζ_{a,b} for class elements a, b.
    #[inline]
    pub fn zeta(&self, a: usize, b: usize) -> i8 {
        self.zeta[a * self.class.len() + b]
    }

    /// ζ_{g,b} for an arbitrary g, from the class values by the cocycle law
    /// ζ_{gh,b} = ζ_{g,hbh⁻¹} ζ_{h,b} along a factorization of g into
    /// transpositions.
    pub fn zeta_g(&self, g: &Perm, b: usize) -> i8 {
        if !self.signed {
            return 1;
        }
        let factors = g.transposition_factors();
        let mut h = Perm::identity(self.n);
        let mut b_cur = b;
        let mut z = 1i8;
        for &(i, j) in factors.iter().rev() {
            let t = self.index[&Perm::transposition(self.n, i, j)];
            z *= self.zeta(t, b_cur);
            b_cur = self.ad(t, b_cur);
            h = Perm::transposition(self.n, i, j).mul(&h);
        }
        debug_assert_eq!(&h, g);
        z
    }

    /// g.e_b = ζ_{g,b} e_{gbg⁻¹}.
    pub fn act(&self, g: &Perm, b: usize) -> (i8, usize) {
        let target = self.index[&g.conj(&self.class[b])];
        (self.zeta_g(g, b), target)
    }

    /// ζ_{gh,b} = ζ_{g,hbh⁻¹} ζ_{h,b} for all g, h in S_N and b in C.
    pub fn cocycle_law_holds(&self) -> Result<bool> {
        let group = SymGroup::new(self.n)?;
        for g in group.elements() {
            for h in group.elements() {
                let gh = g.mul(h);
                for b in 0..self.len() {
                    let (_, hb) = self.act(h, b);
                    if self.zeta_g(&gh, b) != self.zeta_g(g, hb) * self.zeta_g(h, b) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Ψ(e_a⊗e_b) = ζ_{a,b} e_{aba⁻¹}⊗e_a.
    #[inline]
    pub fn braid_pair(&self, a: usize, b: usize) -> (i8, (usize, usize)) {
        (self.zeta(a, b), (self.ad(a, b), a))
    }

    /// Ψ⁻¹(e_c⊗e_a) = ζ_{a,a⁻¹ca}⁻¹ e_a⊗e_{a⁻¹ca}.
    #[inline]
    pub fn braid_pair_inv(&self, c: usize, a: usize) -> (i8, (usize, usize)) {
        let b = self.ad_inv(a, c);
        (self.zeta(a, b), (a, b))
    }

    /// Group-valued degree of a word: the ordered product of its letters.
    pub fn grade(&self, w: &[u16]) -> Perm {
        w.iter().fold(Perm::identity(self.n), |acc, &a| {
            acc.mul(&self.class[a as usize])
        })
    }

    /// g acting diagonally on a word, with the accumulated sign.
    pub fn act_word(&self, g: &Perm, w: &[u16]) -> (i8, Vec<u16>) {
        let mut sign = 1i8;
        let mut out = Vec::with_capacity(w.len());
        for &a in w {
            let (z, t) = self.act(g, a as usize);
            sign *= z;
            out.push(t as u16);
        }
        (sign, out)
    }

    /// Class element a acting diagonally on a word.
    pub fn act_word_by_class(&self, a: usize, w: &[u16]) -> (i8, Vec<u16>) {
        let mut sign = 1i8;
        let mut out = Vec::with_capacity(w.len());
        for &b in w {
            sign *= self.zeta(a, b as usize);
            out.push(self.ad(a, b as usize) as u16);
        }
        (sign, out)
    }

    /// All words of length `n`, grouped by grade, in lexicographic order
    /// inside each block. Blocks are ordered by first occurrence.
    pub fn blocks(&self, n: usize) -> Vec<(Perm, Vec<Vec<u16>>)> {
        let m = self.class.len();
        let mut order: Vec<Perm> = Vec::new();
        let mut map: HashMap<Perm, Vec<Vec<u16>>> = HashMap::new();
        let total = m.checked_pow(n as u32).expect("tensor power too large");
        let mut w = vec![0u16; n];
        for _ in 0..total {
            let g = self.grade(&w);
            map.entry(g.clone())
                .or_insert_with(|| {
                    order.push(g.clone());
                    Vec::new()
                })
                .push(w.clone());
            for k in (0..n).rev() {
                w[k] += 1;
                if (w[k] as usize) < m {
                    break;
                }
                w[k] = 0;
            }
        }
        order
            .into_iter()
            .map(|g| {
                let words = map.remove(&g).unwrap();
                (g, words)
            })
            .collect()
    }

    /// Index of a word in lexicographic order among all words of its length.
    pub fn word_index(&self, w: &[u16]) -> usize {
        let m = self.class.len();
        w.iter().fold(0usize, |acc, &a| acc * m + a as usize)
    }

    pub fn index_word(&self, mut idx: usize, n: usize) -> Vec<u16> {
        let m = self.class.len();
        let mut w = vec![0u16; n];
        for k in (0..n).rev() {
            w[k] = (idx % m) as u16;
            idx /= m;
        }
        w
    }
}

// The case table for transpositions (ij) acting on (jk), together with the
// square and disjoint cases.
fn zeta_transpositions(a: &Perm, b: &Perm) -> i8 {
    let pa = support_pair(a);
    let pb = support_pair(b);
    if pa == pb {
        return -1;
    }
    let shared: Vec<usize> = pa.iter().filter(|x| pb.contains(x)).copied().collect();
    if shared.is_empty() {
        return 1;
    }
    let j = shared[0];
    let i = if pa[0] == j { pa[1] } else { pa[0] };
    let k = if pb[0] == j { pb[1] } else { pb[0] };
    if (j < k && k < i) || (i < k && k < j) {
        -1
    } else {
        1
    }
}

fn support_pair(p: &Perm) -> [usize; 2] {
    let moved: Vec<usize> = (0..p.n()).filter(|&i| p.apply(i) != i).collect();
    [moved[0], moved[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(cm: &CrossedModule, s: &str) -> usize {
        cm.index_of(&Perm::parse_cycles(cm.n(), s).unwrap()).unwrap()
    }

    #[test]
    fn zeta_values() {
        let cm = CrossedModule::from_class_str(4, "2", true).unwrap();
        assert_eq!(cm.zeta(idx(&cm, "(12)"), idx(&cm, "(12)")), -1);
        assert_eq!(cm.zeta(idx(&cm, "(12)"), idx(&cm, "(34)")), 1);
        assert_eq!(cm.zeta(idx(&cm, "(12)"), idx(&cm, "(13)")), 1);
        assert_eq!(cm.zeta(idx(&cm, "(13)"), idx(&cm, "(12)")), -1);
    }

    #[test]
    fn zeta_is_order_preservation() {
        // ζ_{g,(pq)} = +1 exactly when p<q implies g(p)<g(q)
        let cm = CrossedModule::from_class_str(5, "2", true).unwrap();
        for perm in crate::perm::SymGroup::new(5).unwrap().elements() {
            for b in 0..cm.len() {
                let [p, q] = support_pair(cm.element(b));
                let expect = if perm.apply(p) < perm.apply(q) { 1 } else { -1 };
                assert_eq!(cm.zeta_g(perm, b), expect, "g={perm} b={}", cm.element(b));
            }
        }
    }

    #[test]
    fn cocycle_law() {
        for n in 2..=5 {
            assert!(CrossedModule::from_class_str(n, "2", true).unwrap().cocycle_law_holds().unwrap());
        }
    }

    #[test]
    fn signed_rejects_other_classes() {
        assert_eq!(
            CrossedModule::from_class_str(4, "3", true).unwrap_err(),
            Error::SignedNeedsTranspositions
        );
    }

    #[test]
    fn braid_examples() {
        let cm = CrossedModule::from_class_str(4, "2", false).unwrap();
        let (c, (x, y)) = cm.braid_pair(idx(&cm, "(12)"), idx(&cm, "(13)"));
        assert_eq!((c, x, y), (1, idx(&cm, "(23)"), idx(&cm, "(12)")));
        let (_, (x, y)) = cm.braid_pair(idx(&cm, "(12)"), idx(&cm, "(34)"));
        assert_eq!((x, y), (idx(&cm, "(34)"), idx(&cm, "(12)")));
        let s = CrossedModule::from_class_str(4, "2", true).unwrap();
        let a = idx(&s, "(12)");
        assert_eq!(s.braid_pair(a, a), (-1, (a, a)));
    }

    #[test]
    fn inverse_pairs() {
        for signed in [false, true] {
            let cm = CrossedModule::from_class_str(4, "2", signed).unwrap();
            for a in 0..cm.len() {
                for b in 0..cm.len() {
                    let (z, (c, d)) = cm.braid_pair(a, b);
                    let (z2, (e, f)) = cm.braid_pair_inv(c, d);
                    assert_eq!((z * z2, e, f), (1, a, b));
                }
            }
        }
    }

    #[test]
    fn blocks_partition_words() {
        let cm = CrossedModule::from_class_str(5, "3+2", false).unwrap();
        let blocks = cm.blocks(2);
        let total: usize = blocks.iter().map(|(_, w)| w.len()).sum();
        assert_eq!(total, 400);
        for (g, words) in &blocks {
            assert!(words.iter().all(|w| &cm.grade(w) == g));
        }
    }
}
