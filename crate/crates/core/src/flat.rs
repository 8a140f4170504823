//! Flat connections with constant coefficients in {0,1}: the Ad-closed
//! subsets of a conjugacy class, their strata by cardinality, and the
//! representations carried by each stratum.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::crossed::{CrossedModule, TensorVec};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, PivotSide, Rat, SparseVec};
use crate::perm::{decompose_character, CharacterTable, CycleType, Decomposition, Perm};

/// A subset of the class as a bitset over class indices.
pub type ClosedSet = u64;

/// Smallest Ad-closed superset of `x`.
pub fn closure(cm: &CrossedModule, x: u64) -> u64 {
    let m = cm.len();
    let mut cur = x;
    loop {
        let mut next = cur;
        for a in bits(cur) {
            for b in bits(cur) {
                next |= 1 << cm.ad(a, b);
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
        debug_assert!(m <= 64);
    }
}

/// Indices of the set bits.
pub fn bits(x: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| x & (1u64 << i) != 0)
}

pub fn is_closed(cm: &CrossedModule, x: u64) -> bool {
    bits(x).all(|a| bits(x).all(|b| x & (1 << cm.ad(a, b)) != 0))
}

/// Ad-closed subsets grouped by cardinality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedSetStrata {
    pub class_size: usize,
    pub strata: BTreeMap<usize, Vec<ClosedSet>>,
}

impl ClosedSetStrata {
    pub fn stratum(&self, n: usize) -> &[ClosedSet] {
        self.strata.get(&n).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn total(&self) -> usize {
        self.strata.values().map(|v| v.len()).sum()
    }

    /// Stratum sizes from the top cardinality down.
    pub fn counts_descending(&self) -> Vec<(usize, usize)> {
        self.strata.iter().rev().map(|(k, v)| (*k, v.len())).collect()
    }

    /// The largest cardinality below |C| that occurs.
    pub fn submaximal(&self) -> Option<usize> {
        self.strata.keys().rev().copied().find(|&k| k < self.class_size)
    }

    pub fn all_sets(&self) -> BTreeSet<ClosedSet> {
        self.strata.values().flatten().copied().collect()
    }
}

/// Every Ad-closed subset exactly once, in lectic order (NextClosure).
pub fn enumerate(cm: &CrossedModule) -> Result<ClosedSetStrata> {
    let m = cm.len();
    if m > 64 {
        return Err(Error::ClassTooLarge(m));
    }
    let mut strata: BTreeMap<usize, Vec<ClosedSet>> = BTreeMap::new();
    let mut a = closure(cm, 0);
    loop {
        strata.entry(a.count_ones() as usize).or_default().push(a);
        let mut advanced = false;
        for i in (0..m).rev() {
            let bit = 1u64 << i;
            if a & bit != 0 {
                continue;
            }
            let below = a & (bit - 1);
            let b = closure(cm, below | bit);
            if b & (bit - 1) == below {
                a = b;
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    for v in strata.values_mut() {
        v.sort_unstable();
    }
    Ok(ClosedSetStrata {
        class_size: m,
        strata,
    })
}

/// All closed subsets by checking each of the 2^|C| subsets.
pub fn brute_force(cm: &CrossedModule) -> Result<ClosedSetStrata> {
    let m = cm.len();
    if m > 20 {
        return Err(Error::ClassTooLarge(m));
    }
    let mut strata: BTreeMap<usize, Vec<ClosedSet>> = BTreeMap::new();
    for x in 0..(1u64 << m) {
        if is_closed(cm, x) {
            strata.entry(x.count_ones() as usize).or_default().push(x);
        }
    }
    Ok(ClosedSetStrata {
        class_size: m,
        strata,
    })
}

/// Flatness of a constant-coefficient connection, via Ψ(φ⊗φ) = φ⊗φ and via
/// φᵃ(φ^{a⁻¹ba} − φᵇ) = 0; the two tests must agree.
pub fn verify_flat(cm: &CrossedModule, phi: &[Rat]) -> Result<bool> {
    let m = cm.len();
    if phi.len() != m {
        return Err(Error::SizeMismatch(phi.len(), m));
    }
    if cm.signed() {
        return Err(Error::Unsupported("flatness uses the unsigned braiding".into()));
    }
    let mut pp = TensorVec::zero(2);
    for a in 0..m {
        for b in 0..m {
            pp.add_term(vec![a as u16, b as u16], &(&phi[a] * &phi[b]));
        }
    }
    let braided = cm.apply_braiding(1, &pp, false)?;
    let by_braiding = braided == pp;
    let by_components = (0..m).all(|a| {
        (0..m).all(|b| (&phi[a] * &(&phi[cm.ad_inv(a, b)] - &phi[b])).is_zero())
    });
    if by_braiding != by_components {
        return Err(Error::Inconsistent("flatness criteria disagree".into()));
    }
    Ok(by_braiding)
}

/// Indicator vector of a subset.
pub fn indicator(cm: &CrossedModule, x: ClosedSet) -> Vec<Rat> {
    (0..cm.len())
        .map(|a| if x & (1 << a) != 0 { Rat::one() } else { Rat::zero() })
        .collect()
}

/// Image of a subset under conjugation by g.
pub fn conjugate_set(cm: &CrossedModule, g: &Perm, x: ClosedSet) -> ClosedSet {
    bits(x).fold(0u64, |acc, a| {
        acc | 1 << cm.index_of(&g.conj(cm.element(a))).unwrap()
    })
}

/// The module V_n carried by a stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumModule {
    pub cardinality: usize,
    pub span_dim: usize,
    pub theta_in_span: bool,
    pub dim: usize,
    /// Character on the classes of the table, in table order.
    pub character: Vec<Rat>,
    pub decomposition: Decomposition,
    pub label: String,
    /// Some constituent shares its label with another irreducible.
    pub ambiguous: bool,
}

/// A permutation of the given cycle type built from consecutive cycles.
pub fn class_representative(t: &CycleType) -> Perm {
    let n = t.n();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut next = 1;
    for &p in t.parts() {
        cycles.push((next..next + p).collect());
        next += p;
    }
    let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
    Perm::from_cycles(n, &refs).expect("valid cycles")
}

/// W = span of the stratum's indicators, V = W/kθ when θ ∈ W; character from
/// traces of the conjugation action, decomposed against `table`.
pub fn stratum_module(
    cm: &CrossedModule,
    strata: &ClosedSetStrata,
    n: usize,
    table: &CharacterTable,
) -> Result<StratumModule> {
    let sets = strata.stratum(n);
    if sets.is_empty() {
        return Err(Error::OutOfRange {
            what: "stratum",
            value: n,
            range: "nonempty strata".into(),
        });
    }
    if table.n() != cm.n() {
        return Err(Error::SizeMismatch(table.n(), cm.n()));
    }
    let m = cm.len();
    let mut ech = Echelon::new(PivotSide::Low);
    for &x in sets {
        ech.insert(&SparseVec::from_pairs(bits(x).map(|a| (a, Rat::one()))));
    }
    ech.make_reduced();
    let theta = SparseVec::from_pairs((0..m).map(|a| (a, Rat::one())));
    let theta_in_span = ech.contains(&theta);
    let span_dim = ech.rank();
    let rows: Vec<(usize, SparseVec)> = ech.rows().map(|(p, r)| (*p, r.clone())).collect();
    let mut character = Vec::with_capacity(table.classes().len());
    for t in table.classes() {
        let g = class_representative(t);
        let perm: Vec<usize> = (0..m)
            .map(|a| cm.index_of(&g.conj(cm.element(a))).unwrap())
            .collect();
        let mut trace = Rat::zero();
        for (p, r) in &rows {
            let image = r.map_indices(|a| perm[a]);
            trace += image.get(*p);
        }
        if theta_in_span {
            trace -= &Rat::one();
        }
        character.push(trace);
    }
    let decomposition = decompose_character(&character, table)?;
    let ambiguous = decomposition
        .parts
        .iter()
        .any(|(lam, _)| crate::perm::irrep_label(table, lam).ambiguous);
    let label = decomposition.label(table);
    let dim = span_dim - usize::from(theta_in_span);
    Ok(StratumModule {
        cardinality: n,
        span_dim,
        theta_in_span,
        dim,
        character,
        decomposition,
        label,
        ambiguous,
    })
}

/// Submaximal stratum for the 2-cycles of S_N, checked to be exactly the
/// complements C ∖ {(ij) : j ≠ i}, i = 1..N.
pub fn submaximal_2cycles(n: usize) -> Result<Vec<ClosedSet>> {
    if n < 3 {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            range: ">= 3".into(),
        });
    }
    let cm = CrossedModule::from_class_str(n, "2", false)?;
    let strata = enumerate(&cm)?;
    let k = strata
        .submaximal()
        .ok_or_else(|| Error::Inconsistent("no submaximal stratum".into()))?;
    let found: BTreeSet<ClosedSet> = strata.stratum(k).iter().copied().collect();
    let full = (1u64 << cm.len()) - 1;
    let expected: BTreeSet<ClosedSet> = (0..n)
        .map(|i| {
            let touching = (0..cm.len())
                .filter(|&a| cm.element(a).apply(i) != i)
                .fold(0u64, |acc, a| acc | 1 << a);
            full & !touching
        })
        .collect();
    if found != expected || k != (n - 1) * (n - 2) / 2 {
        return Err(Error::Inconsistent(format!(
            "submaximal stratum of size {k} has {} sets",
            found.len()
        )));
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::irreducible_characters;

    fn cm(n: usize, t: &str) -> CrossedModule {
        CrossedModule::from_class_str(n, t, false).unwrap()
    }

    fn idx(c: &CrossedModule, s: &str) -> usize {
        c.index_of(&Perm::parse_cycles(c.n(), s).unwrap()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let c = cm(4, "2");
        assert_eq!(closure(&c, 0), 0);
        for a in 0..c.len() {
            assert_eq!(closure(&c, 1 << a), 1 << a);
        }
        let x = 1 << idx(&c, "(12)") | 1 << idx(&c, "(13)");
        assert_eq!(closure(&c, x), x | 1 << idx(&c, "(23)"));
        let y = 1 << idx(&c, "(12)") | 1 << idx(&c, "(34)");
        assert_eq!(closure(&c, y), y);
        let z = 1 << idx(&c, "(12)") | 1 << idx(&c, "(23)") | 1 << idx(&c, "(34)");
        assert_eq!(closure(&c, z), (1 << 6) - 1);
    }

    #[test]
    fn closure_operator_laws() {
        let c = cm(4, "3");
        for x in [0u64, 3, 0x11, 0x81, 0xf0, 0x5a] {
            let cx = closure(&c, x);
            assert_eq!(cx & x, x);
            assert_eq!(closure(&c, cx), cx);
            let y = x | 0x02;
            assert_eq!(closure(&c, y) & cx, cx);
        }
    }

    #[test]
    fn counts_small() {
        let counts = |n, t| enumerate(&cm(n, t)).unwrap().counts_descending();
        assert_eq!(counts(3, "2"), vec![(3, 1), (1, 3), (0, 1)]);
        assert_eq!(counts(3, "3"), vec![(2, 1), (1, 2), (0, 1)]);
        assert_eq!(counts(4, "2"), vec![(6, 1), (3, 4), (2, 3), (1, 6), (0, 1)]);
        assert_eq!(counts(4, "3"), vec![(8, 1), (4, 2), (2, 4), (1, 8), (0, 1)]);
    }

    #[test]
    fn agrees_with_brute_force() {
        for (n, t) in [(3, "2"), (3, "3"), (4, "2"), (4, "2+2"), (4, "3"), (4, "4"), (5, "2"), (5, "2+2")] {
            let c = cm(n, t);
            assert_eq!(enumerate(&c).unwrap(), brute_force(&c).unwrap(), "N={n} {t}");
        }
    }

    #[test]
    fn intersections_are_closed() {
        let c = cm(5, "2");
        let s = enumerate(&c).unwrap().all_sets();
        for &x in &s {
            for &y in &s {
                assert!(s.contains(&(x & y)));
            }
        }
    }

    #[test]
    fn flatness() {
        let c = cm(3, "2");
        let one = vec![Rat::one(); 3];
        assert!(verify_flat(&c, &one).unwrap());
        let mut phi = vec![Rat::zero(); 3];
        phi[idx(&c, "(12)")] = Rat::one();
        phi[idx(&c, "(13)")] = Rat::one();
        assert!(!verify_flat(&c, &phi).unwrap());
        let c4 = cm(4, "3");
        let (l, mu) = (Rat::new(3, 7), Rat::new(-2, 5));
        let mut phi = vec![Rat::zero(); 8];
        for s in ["(123)", "(142)", "(134)", "(243)"] {
            phi[idx(&c4, s)] = l.clone();
        }
        for s in ["(132)", "(124)", "(143)", "(234)"] {
            phi[idx(&c4, s)] = mu.clone();
        }
        assert!(verify_flat(&c4, &phi).unwrap());
    }

    #[test]
    fn every_closed_set_is_flat() {
        let c = cm(4, "2+2");
        for x in 0..(1u64 << c.len()) {
            assert_eq!(verify_flat(&c, &indicator(&c, x)).unwrap(), is_closed(&c, x));
        }
    }

    #[test]
    fn s4_modules() {
        let t = irreducible_characters(4).unwrap();
        let c = cm(4, "2");
        let s = enumerate(&c).unwrap();
        assert_eq!(stratum_module(&c, &s, 3, &t).unwrap().label, "fund");
        assert_eq!(stratum_module(&c, &s, 2, &t).unwrap().label, "2");
        let c3 = cm(4, "3");
        let s3 = enumerate(&c3).unwrap();
        assert_eq!(stratum_module(&c3, &s3, 4, &t).unwrap().label, "sign");
        assert_eq!(stratum_module(&c3, &s3, 2, &t).unwrap().label, "fund");
    }

    #[test]
    fn submaximal() {
        assert_eq!(submaximal_2cycles(4).unwrap().len(), 4);
        let s5 = submaximal_2cycles(5).unwrap();
        assert!(s5.len() == 5 && s5.iter().all(|x| x.count_ones() == 6));
        let s6 = submaximal_2cycles(6).unwrap();
        assert!(s6.len() == 6 && s6.iter().all(|x| x.count_ones() == 10));
    }

    fn set_of(c: &CrossedModule, cycles: &str) -> ClosedSet {
        cycles
            .split(' ')
            .fold(0, |acc, w| acc | 1 << idx(c, &format!("({w})")))
    }

    #[test]
    fn s5_four_cycles_f10() {
        let c = cm(5, "4");
        let s = enumerate(&c).unwrap();
        let f10 = s.stratum(10);
        assert_eq!(f10.len(), 6);
        for l in [
            "1234 1523 2435 2534 1245 1542 1354 1453 1432 1325",
            "1234 1253 2453 2354 1524 1425 1345 1543 1432 1352",
            "1523 2453 2354 1243 1452 1254 1534 1435 1342 1325",
            "1532 2435 2534 1452 1254 1345 1324 1543 1423 1235",
            "1253 2345 2543 1245 1542 1534 1435 1324 1423 1352",
            "2345 2543 1235 1243 1342 1354 1453 1425 1532 1524",
        ] {
            assert!(f10.contains(&set_of(&c, l)), "{l}");
        }
    }

    #[test]
    fn s5_labels() {
        let t = irreducible_characters(5).unwrap();
        for (cls, k, label) in [
            ("2", 6, "fund"),
            ("2+2", 5, "5\u{304}"),
            ("3", 8, "fund"),
            ("3+2", 2, "fund⊕5"),
            ("4", 10, "5\u{304}"),
            ("5", 12, "sign"),
        ] {
            let c = cm(5, cls);
            let s = enumerate(&c).unwrap();
            assert_eq!(stratum_module(&c, &s, k, &t).unwrap().label, label, "{cls}");
        }
    }
}
