use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::group::CycleType;
use crate::error::{Error, Result};
use crate::linalg::Rat;

/// A partition of N, parts weakly decreasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Partitions of `n` in reverse lexicographic order: (n), (n-1,1), ..., (1^n).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Character table of S_N. Rows are irreducibles, columns are classes; both
/// are indexed by partitions in the order of [`partitions`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTable {
    n: usize,
    classes: Vec<CycleType>,
    sizes: Vec<u64>,
    irreducibles: Vec<Partition>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn irreducibles(&self) -> &[Partition] {
        &self.irreducibles
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    pub fn class_index(&self, t: &CycleType) -> Option<usize> {
        self.classes.iter().position(|c| c == t)
    }

    pub fn irrep_index(&self, lambda: &Partition) -> Option<usize> {
        self.irreducibles.iter().position(|l| l == lambda)
    }

    /// χ_λ on every class.
    pub fn row(&self, irrep: usize) -> &[i64] {
        &self.values[irrep]
    }

    pub fn value(&self, irrep: usize, class: usize) -> i64 {
        self.values[irrep][class]
    }

    /// Index of the identity class.
    pub fn identity_class(&self) -> usize {
        self.classes.len() - 1
    }

    /// Index of the transposition class (N ≥ 2).
    pub fn transposition_class(&self) -> Option<usize> {
        self.classes.iter().position(|c| c.is_transpositions())
    }

    /// (1/|G|) Σ size·χ·ψ for integer class functions.
    /// Row and column orthogonality and Σ χ(e)² = N!, all exact.
    pub fn is_orthogonal(&self) -> bool {
        let order = self.group_order() as i128;
        let k = self.classes().len();
        let v = |i: usize, c: usize| self.value(i, c) as i128;
        for i in 0..k {
            for j in 0..k {
                let row: i128 = (0..k).map(|c| self.class_sizes()[c] as i128 * v(i, c) * v(j, c)).sum();
                let col: i128 = (0..k).map(|l| v(l, i) * v(l, j)).sum();
                let want_col = if i == j { order / self.class_sizes()[i] as i128 } else { 0 };
                if row != if i == j { order } else { 0 } || col != want_col {
                    return false;
                }
            }
        }
        let e = self.identity_class();
        (0..k).map(|l| v(l, e).pow(2)).sum::<i128>() == order
    }

    pub fn inner(&self, chi: &[Rat], psi: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for k in 0..self.classes.len() {
            acc += &(&chi[k] * &Rat::from_int(psi[k] * self.sizes[k] as i64));
        }
        acc / Rat::from_int(self.group_order() as i64)
    }
}

/// Character table by the Murnaghan–Nakayama rule.
pub fn irreducible_characters(n: usize) -> Result<CharacterTable> {
    if !(1..=8).contains(&n) {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            range: "1..=8".into(),
        });
    }
    let parts = partitions(n);
    let classes: Vec<CycleType> = parts
        .iter()
        .map(|p| CycleType::new(p.0.clone()).expect("partition"))
        .collect();
    let sizes: Vec<u64> = classes.iter().map(|c| c.class_size() as u64).collect();
    let mut memo = HashMap::new();
    let values = parts
        .iter()
        .map(|lam| {
            classes
                .iter()
                .map(|mu| murnaghan_nakayama(&lam.0, mu.parts(), &mut memo))
                .collect()
        })
        .collect();
    Ok(CharacterTable {
        n,
        classes,
        sizes,
        irreducibles: parts,
        values,
    })
}

// Rim hooks are removed via the beta-set (abacus) description: removing a
// hook of length r moves one bead from b to b - r, with sign given by the
// parity of the beads jumped over.
fn murnaghan_nakayama(
    lambda: &[usize],
    mu: &[usize],
    memo: &mut HashMap<(Vec<usize>, Vec<usize>), i64>,
) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = mu[0];
    let len = lambda.len();
    let beta: Vec<usize> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l + (len - 1 - i))
        .collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[idx] = target;
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let m = nb.len();
        let mut nl: Vec<usize> = nb.iter().enumerate().map(|(i, &x)| x - (m - 1 - i)).collect();
        while nl.last() == Some(&0) {
            nl.pop();
        }
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        total += sign * murnaghan_nakayama(&nl, &mu[1..], memo);
    }
    memo.insert(key, total);
    total
}

/// Multiplicities of the irreducibles in a class function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<(Partition, u64)>,
}

impl Decomposition {
    pub fn dimension(&self, table: &CharacterTable) -> u64 {
        let e = table.identity_class();
        self.parts
            .iter()
            .map(|(lam, m)| m * table.value(table.irrep_index(lam).unwrap(), e) as u64)
            .sum()
    }

    pub fn is_irreducible(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].1 == 1
    }

    /// Labels such as `fund⊕5`, in the order of the table's irreducibles.
    pub fn label(&self, table: &CharacterTable) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        self.parts
            .iter()
            .map(|(lam, m)| {
                let l = irrep_label(table, lam).text;
                if *m == 1 {
                    l
                } else {
                    format!("{m}·{l}")
                }
            })
            .collect::<Vec<_>>()
            .join("⊕")
    }
}

/// Decomposes a class function given on the table's classes.
pub fn decompose_character(chi: &[Rat], table: &CharacterTable) -> Result<Decomposition> {
    if chi.len() != table.classes.len() {
        return Err(Error::SizeMismatch(chi.len(), table.classes.len()));
    }
    let mut parts = Vec::new();
    for (i, lam) in table.irreducibles.iter().enumerate() {
        let m = table.inner(chi, &table.values[i]);
        if !m.is_integer() || m.is_negative() {
            return Err(Error::NotACharacter(format!("multiplicity {m} of {lam}")));
        }
        let m = m.to_i64().unwrap() as u64;
        if m > 0 {
            parts.push((lam.clone(), m));
        }
    }
    for k in 0..table.classes.len() {
        let mut v = Rat::zero();
        for (lam, m) in &parts {
            let i = table.irrep_index(lam).unwrap();
            v += &Rat::from_int(*m as i64 * table.values[i][k]);
        }
        if v != chi[k] {
            return Err(Error::NotACharacter(format!(
                "reconstruction differs on class {}",
                table.classes[k]
            )));
        }
    }
    Ok(Decomposition { parts })
}

/// Informal irreducible name: `trivial`, `sign`, `fund`, or the dimension with
/// a bar when the value on a transposition is negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepLabel {
    pub text: String,
    /// Another irreducible of S_N receives the same text.
    pub ambiguous: bool,
}

pub fn irrep_label(table: &CharacterTable, lambda: &Partition) -> IrrepLabel {
    let text = raw_label(table, lambda);
    let ambiguous = table
        .irreducibles
        .iter()
        .filter(|l| *l != lambda)
        .any(|l| raw_label(table, l) == text);
    IrrepLabel { text, ambiguous }
}

fn raw_label(table: &CharacterTable, lambda: &Partition) -> String {
    let n = table.n;
    if lambda.0 == [n] {
        return "trivial".into();
    }
    if lambda.0.iter().all(|&p| p == 1) {
        return "sign".into();
    }
    if n >= 3 && lambda.0 == [n - 1, 1] {
        return "fund".into();
    }
    let i = table.irrep_index(lambda).unwrap();
    let dim = table.value(i, table.identity_class());
    let bar = table
        .transposition_class()
        .map(|t| table.value(i, t) < 0)
        .unwrap_or(false);
    if bar {
        format!("{dim}\u{304}")
    } else {
        dim.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(n: usize, s: &str) -> CycleType {
        CycleType::parse(n, s).unwrap()
    }

    #[test]
    fn s3_table() {
        let t = irreducible_characters(3).unwrap();
        let lam = t.irrep_index(&Partition(vec![2, 1])).unwrap();
        assert_eq!(t.value(lam, t.class_index(&ct(3, "1")).unwrap()), 2);
        assert_eq!(t.value(lam, t.class_index(&ct(3, "2")).unwrap()), 0);
        assert_eq!(t.value(lam, t.class_index(&ct(3, "3")).unwrap()), -1);
    }

    #[test]
    fn trivial_and_sign_rows() {
        for n in 1..=7 {
            let t = irreducible_characters(n).unwrap();
            let triv = t.irrep_index(&Partition(vec![n])).unwrap();
            let sign = t.irrep_index(&Partition(vec![1; n])).unwrap();
            for (k, c) in t.classes().iter().enumerate() {
                assert_eq!(t.value(triv, k), 1);
                let parity = c.parts().iter().map(|p| p - 1).sum::<usize>();
                assert_eq!(t.value(sign, k), if parity % 2 == 0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn orthogonality() {
        for n in 1..=8 {
            let t = irreducible_characters(n).unwrap();
            let order = t.group_order() as i64;
            assert_eq!(order, (1..=n as i64).product::<i64>());
            let k = t.classes().len();
            for i in 0..k {
                for j in 0..k {
                    let row: i64 = (0..k)
                        .map(|c| t.class_sizes()[c] as i64 * t.value(i, c) * t.value(j, c))
                        .sum();
                    assert_eq!(row, if i == j { order } else { 0 });
                    let col: i64 = (0..k).map(|l| t.value(l, i) * t.value(l, j)).sum();
                    let expect = if i == j { order / t.class_sizes()[i] as i64 } else { 0 };
                    assert_eq!(col, expect);
                }
            }
            let e = t.identity_class();
            let sq: i64 = (0..k).map(|l| t.value(l, e).pow(2)).sum();
            assert_eq!(sq, order);
            assert!(t.is_orthogonal());
        }
    }

    #[test]
    fn regular_character() {
        let t = irreducible_characters(3).unwrap();
        let chi: Vec<Rat> = t
            .classes()
            .iter()
            .map(|c| Rat::from_int(if c.is_identity() { 6 } else { 0 }))
            .collect();
        let d = decompose_character(&chi, &t).unwrap();
        assert_eq!(
            d.parts,
            vec![
                (Partition(vec![3]), 1),
                (Partition(vec![2, 1]), 2),
                (Partition(vec![1, 1, 1]), 1)
            ]
        );
    }

    #[test]
    fn natural_permutation_character() {
        let t = irreducible_characters(4).unwrap();
        let chi: Vec<Rat> = t
            .classes()
            .iter()
            .map(|c| Rat::from_int(c.parts().iter().filter(|&&p| p == 1).count() as i64))
            .collect();
        let d = decompose_character(&chi, &t).unwrap();
        assert_eq!(d.label(&t), "trivial⊕fund");
    }

    #[test]
    fn rejects_non_characters() {
        let t = irreducible_characters(3).unwrap();
        let chi = vec![Rat::from_int(1), Rat::zero(), Rat::zero()];
        assert!(matches!(decompose_character(&chi, &t), Err(Error::NotACharacter(_))));
        assert!(irreducible_characters(9).is_err());
    }

    #[test]
    fn s5_labels() {
        let t = irreducible_characters(5).unwrap();
        let l = |p: &[usize]| irrep_label(&t, &Partition(p.to_vec()));
        assert_eq!(l(&[3, 2]).text, "5");
        assert_eq!(l(&[2, 2, 1]).text, "5\u{304}");
        assert_eq!(l(&[4, 1]).text, "fund");
        assert_eq!(l(&[2, 1, 1, 1]).text, "4\u{304}");
        assert_eq!(l(&[3, 1, 1]).text, "6");
        assert!(!l(&[3, 2]).ambiguous);
    }
}
