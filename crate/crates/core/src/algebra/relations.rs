use std::collections::HashSet;

use crate::crossed::CrossedModule;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, PivotSide, Rat, SparseVec};
use crate::perm::Perm;

/// Quadratic relations ker(id + sΨ) with s = −1 for an unsigned module and
/// s = +1 for a signed one, as vectors over word indices a·|C| + b.
/// Computed block by block over the grade of the word.
pub fn relation_space(cm: &CrossedModule) -> Vec<SparseVec> {
    let sign: i8 = if cm.signed() { 1 } else { -1 };
    let op = cm.braided_integer(2, sign);
    let mut out = Vec::new();
    for (_, words) in cm.blocks(2) {
        let mat = op.materialize(cm, &words).expect("blocks are braid-stable");
        for v in mat.kernel_basis() {
            out.push(SparseVec::from_pairs(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (cm.word_index(&words[j]), x)),
            ));
        }
    }
    out
}

/// Relations from the fixed vectors of σ(a) = a⁻¹g on C ∩ gC⁻¹, one per
/// σ-orbit and group element g: Σ_{a in orbit} e_a e_{a⁻¹g}.
pub fn relation_space_via_vg(cm: &CrossedModule) -> Result<Vec<SparseVec>> {
    if cm.signed() {
        return Err(Error::Unsupported(
            "fixed-space relations are stated for the unsigned braiding".into(),
        ));
    }
    let m = cm.len();
    let mut out = Vec::new();
    for (g, words) in cm.blocks(2) {
        let members: Vec<usize> = words.iter().map(|w| w[0] as usize).collect();
        let mut seen = HashSet::new();
        for &a in &members {
            if seen.contains(&a) {
                continue;
            }
            let mut orbit = Vec::new();
            let mut x = a;
            while seen.insert(x) {
                orbit.push(x);
                let b = cm.element(x).inverse().mul(&g);
                x = cm.index_of(&b).expect("σ stays in the class");
            }
            let pairs = orbit.iter().map(|&x| {
                let b = cm.index_of(&cm.element(x).inverse().mul(&g)).unwrap();
                (x * m + b, Rat::one())
            });
            out.push(SparseVec::from_pairs(pairs));
        }
    }
    Ok(out)
}

// word index of e_x e_y for 2-cycles x, y given as 1-based pairs, with the
// sign of [ji] = −[ij] in the signed case
fn transposition_pair(cm: &CrossedModule, x: (usize, usize), y: (usize, usize)) -> (usize, Rat) {
    let n = cm.n();
    let ix = cm.index_of(&Perm::transposition(n, x.0 - 1, x.1 - 1)).unwrap();
    let iy = cm.index_of(&Perm::transposition(n, y.0 - 1, y.1 - 1)).unwrap();
    let flips = cm.signed() as usize * ((x.0 > x.1) as usize + (y.0 > y.1) as usize);
    (ix * cm.len() + iy, Rat::from_int(if flips % 2 == 0 { 1 } else { -1 }))
}

/// The generator relations of Λ_N or E_N as usually written: squares,
/// disjoint (anti)commutation and the three-term relations.
pub fn stated_transposition_relations(cm: &CrossedModule) -> Result<Vec<SparseVec>> {
    if !cm.is_transpositions() {
        return Err(Error::NotTranspositions);
    }
    let n = cm.n();
    let p = |x, y| transposition_pair(cm, x, y);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            out.push(SparseVec::from_pairs([p((i, j), (i, j))]));
            for k in (1..=n).filter(|&k| k != i && k != j) {
                if cm.signed() {
                    // [ij][jk] + [jk][ki] + [ki][ij]
                    out.push(SparseVec::from_pairs([p((i, j), (j, k)), p((j, k), (k, i)), p((k, i), (i, j))]));
                } else {
                    out.push(SparseVec::from_pairs([p((i, j), (j, k)), p((j, k), (i, k)), p((i, k), (i, j))]));
                }
                for l in (1..=n).filter(|l| ![i, j, k].contains(l)) {
                    let (w1, c1) = p((i, j), (k, l));
                    let (w2, c2) = p((k, l), (i, j));
                    let c2 = if cm.signed() { -c2 } else { c2 };
                    out.push(SparseVec::from_pairs([(w1, c1), (w2, c2)]));
                }
            }
        }
    }
    Ok(out)
}

// explicit relations among the S_4 3-cycles, each a cyclic sum of e_x e_y
const S4_THREE_CYCLE_CHAINS: [&[&str]; 7] = [
    &["(123)", "(134)", "(142)"],
    &["(123)", "(243)", "(134)"],
    &["(134)", "(243)", "(142)"],
    &["(123)", "(142)", "(243)"],
    &["(123)", "(124)", "(134)", "(234)"],
    &["(123)", "(143)", "(243)", "(124)"],
    &["(123)", "(234)", "(142)", "(143)"],
];

/// The listed degree-2 relations of Λ_quad for the S_4 3-cycles and,
/// separately, the conjugate-transposes of the seven chain relations
/// (e_x ↦ e_{x⁻¹}, products reversed).
pub fn s4_three_cycle_relations(cm: &CrossedModule) -> Result<(Vec<SparseVec>, Vec<SparseVec>)> {
    if cm.n() != 4 || cm.cycle_type().to_string() != "3" || cm.signed() {
        return Err(Error::Unsupported("relations are listed for the unsigned S_4 3-cycles only".into()));
    }
    let m = cm.len();
    let idx = |s: &str| cm.index_of(&Perm::parse_cycles(4, s).unwrap()).unwrap();
    let word = |a: usize, b: usize| (a * m + b, Rat::one());
    let mut listed = Vec::new();
    for a in 0..m {
        listed.push(SparseVec::from_pairs([word(a, a)]));
        let b = cm.index_of(&cm.element(a).inverse()).unwrap();
        if a < b {
            listed.push(SparseVec::from_pairs([word(a, b), word(b, a)]));
        }
    }
    let mut transposed = Vec::new();
    for chain in S4_THREE_CYCLE_CHAINS {
        let xs: Vec<usize> = chain.iter().map(|s| idx(s)).collect();
        let k = xs.len();
        listed.push(SparseVec::from_pairs((0..k).map(|i| word(xs[i], xs[(i + 1) % k]))));
        let inv = |a: usize| cm.index_of(&cm.element(a).inverse()).unwrap();
        transposed.push(SparseVec::from_pairs((0..k).map(|i| word(inv(xs[(i + 1) % k]), inv(xs[i])))));
    }
    Ok((listed, transposed))
}

/// Dimensions of two spans and whether each contains the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanComparison {
    pub left_dim: usize,
    pub right_dim: usize,
    pub left_in_right: bool,
    pub right_in_left: bool,
}

impl SpanComparison {
    pub fn equal(&self) -> bool {
        self.left_in_right && self.right_in_left
    }
}

pub fn compare_spans(left: &[SparseVec], right: &[SparseVec]) -> SpanComparison {
    let span = |vs: &[SparseVec]| {
        let mut e = Echelon::new(PivotSide::Low);
        for v in vs {
            e.insert(v);
        }
        e
    };
    let (l, r) = (span(left), span(right));
    SpanComparison {
        left_dim: l.rank(),
        right_dim: r.rank(),
        left_in_right: left.iter().all(|v| r.contains(v)),
        right_in_left: right.iter().all(|v| l.contains(v)),
    }
}
