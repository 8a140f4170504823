//! Exterior algebras Λ and Fomin-Kirillov algebras E built degree by degree
//! from a crossed module, either as quadratic algebras or as quotients by the
//! kernels of the braided factorials.

mod element;
mod relations;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use element::AlgElement;
pub use relations::{
    compare_spans, relation_space, relation_space_via_vg, s4_three_cycle_relations,
    stated_transposition_relations, SpanComparison,
};

use crate::crossed::{CrossedModule, TensorVec, Word};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, PivotSide, Rat, SparseVec};
use crate::perm::Perm;

static NEXT_HOST: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    Quadratic,
    Woronowicz,
}

/// Sign s in the braiding sΨ: exterior algebras use −1 with the unsigned Ψ,
/// Fomin-Kirillov algebras use +1 with the signed Ψ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Exterior,
    FominKirillov,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Exterior => -1,
            Sign::FominKirillov => 1,
        }
    }
}

/// Resource limits for building degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_degree: Option<usize>,
    /// Refuse degrees whose working set is estimated above this many bytes.
    pub mem_limit: Option<u64>,
}

impl Limits {
    pub fn unlimited() -> Limits {
        Limits {
            max_degree: None,
            mem_limit: None,
        }
    }

    /// Default degree caps by N; `heavy` raises them.
    pub fn default_for(n: usize, heavy: bool) -> Limits {
        let max_degree = match (n, heavy) {
            (0..=3, _) => None,
            (4, false) => Some(4),
            (4, true) => Some(12),
            (5, false) => Some(3),
            (5, true) => Some(4),
            (_, false) => Some(2),
            (_, true) => Some(3),
        };
        Limits {
            max_degree,
            mem_limit: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub(crate) struct DegreeData {
    pub(crate) basis: Vec<Word>,
    // right[i·|C| + a] = coordinates of basis_{n-1}[i]·e_a in this degree
    pub(crate) right: Vec<SparseVec>,
}

/// Λ_quad, Λ_w, E_N or E_w over a crossed module.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    id: u64,
    cm: Arc<CrossedModule>,
    flavor: Flavor,
    sign: Sign,
    limits: Limits,
    quad: Vec<SparseVec>,
    degrees: Vec<DegreeData>,
    index: Vec<HashMap<Word, usize>>,
}

impl GradedAlgebra {
    /// The sign follows the crossed module: signed modules give E, unsigned Λ.
    pub fn new(cm: Arc<CrossedModule>, flavor: Flavor) -> GradedAlgebra {
        let sign = if cm.signed() {
            Sign::FominKirillov
        } else {
            Sign::Exterior
        };
        let m = cm.len();
        let quad = relation_space(&cm);
        let d0 = DegreeData {
            basis: vec![vec![]],
            right: vec![],
        };
        let d1 = DegreeData {
            basis: (0..m as u16).map(|a| vec![a]).collect(),
            right: (0..m).map(SparseVec::unit).collect(),
        };
        let mut alg = GradedAlgebra {
            id: NEXT_HOST.fetch_add(1, Ordering::Relaxed),
            cm,
            flavor,
            sign,
            limits: Limits::unlimited(),
            quad,
            degrees: Vec::new(),
            index: Vec::new(),
        };
        alg.push_degree(d0);
        alg.push_degree(d1);
        alg
    }

    /// Λ over the class of cycle type `t` in S_N.
    pub fn exterior(n: usize, t: &str, flavor: Flavor) -> Result<GradedAlgebra> {
        Ok(GradedAlgebra::new(
            Arc::new(CrossedModule::from_class_str(n, t, false)?),
            flavor,
        ))
    }

    /// E_N over the 2-cycles of S_N.
    pub fn fomin_kirillov(n: usize, flavor: Flavor) -> Result<GradedAlgebra> {
        Ok(GradedAlgebra::new(
            Arc::new(CrossedModule::from_class_str(n, "2", true)?),
            flavor,
        ))
    }

    pub fn with_limits(mut self, limits: Limits) -> GradedAlgebra {
        self.limits = limits;
        self
    }

    pub fn set_limits(&mut self, limits: Limits) {
        self.limits = limits;
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn cm(&self) -> &CrossedModule {
        &self.cm
    }

    pub fn cm_arc(&self) -> Arc<CrossedModule> {
        self.cm.clone()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Degree-2 relations as vectors over word indices a·|C| + b.
    pub fn quadratic_relations(&self) -> &[SparseVec] {
        &self.quad
    }

    fn push_degree(&mut self, d: DegreeData) {
        let idx = d
            .basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        self.degrees.push(d);
        self.index.push(idx);
    }

    /// Highest degree built so far.
    pub fn built_degree(&self) -> usize {
        self.degrees.len() - 1
    }

    /// Some built degree has dimension 0, hence so do all higher ones.
    pub fn is_exhausted(&self) -> bool {
        self.degrees.last().map(|d| d.basis.is_empty()).unwrap_or(false)
    }

    fn data(&self, n: usize) -> Result<&DegreeData> {
        self.degrees.get(n).ok_or(Error::DegreeNotBuilt(n))
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        if n >= self.degrees.len() && self.is_exhausted() {
            return Ok(0);
        }
        Ok(self.data(n)?.basis.len())
    }

    /// Chosen basis words of degree `n`, in lexicographic order.
    pub fn basis(&self, n: usize) -> Result<&[Word]> {
        if n >= self.degrees.len() && self.is_exhausted() {
            return Ok(&[]);
        }
        Ok(&self.data(n)?.basis)
    }

    pub fn basis_index(&self, n: usize, w: &[u16]) -> Option<usize> {
        self.index.get(n)?.get(w).copied()
    }

    /// Group degree of the `j`-th basis word of degree `n`.
    pub fn basis_grade(&self, n: usize, j: usize) -> Result<Perm> {
        Ok(self.cm.grade(&self.data(n)?.basis[j]))
    }

    /// Rough working-set size for building degree `n`.
    pub fn estimate_bytes(&self, n: usize) -> u64 {
        let m = self.cm.len() as u64;
        match self.flavor {
            Flavor::Quadratic => {
                let prev = self.degrees.get(n - 1).map(|d| d.basis.len()).unwrap_or(0) as u64;
                let prev2 = self.degrees.get(n - 2).map(|d| d.basis.len()).unwrap_or(0) as u64;
                let cols = prev * m;
                let gens = prev2 * self.quad.len() as u64;
                cols.saturating_mul(gens.min(cols)).saturating_mul(24)
            }
            Flavor::Woronowicz => {
                let words = m.saturating_pow(n as u32);
                // blocks are roughly words / |C| in size
                let block = (words / m.max(1)).max(1);
                words.saturating_mul(block).saturating_mul(24)
            }
        }
    }

    /// Builds all degrees up to `n`.
    pub fn ensure_degree(&mut self, n: usize) -> Result<()> {
        while self.built_degree() < n {
            let next = self.built_degree() + 1;
            self.build_degree(next)?;
        }
        Ok(())
    }

    /// Builds degree `n`; degree `n − 1` must already be built.
    pub fn build_degree(&mut self, n: usize) -> Result<usize> {
        if n < self.degrees.len() {
            return Ok(self.degrees[n].basis.len());
        }
        if n != self.degrees.len() {
            return Err(Error::DegreeNotBuilt(n - 1));
        }
        let m = self.cm.len();
        if self.is_exhausted() {
            self.push_degree(DegreeData {
                basis: vec![],
                right: vec![],
            });
            return Ok(0);
        }
        if let Some(cap) = self.limits.max_degree {
            if n > cap {
                return Err(Error::DegreeCap { degree: n, cap });
            }
        }
        if let Some(limit) = self.limits.mem_limit {
            let required = self.estimate_bytes(n);
            if required > limit {
                return Err(Error::MemoryCap {
                    degree: n,
                    required,
                    limit,
                });
            }
        }
        let data = match self.flavor {
            Flavor::Quadratic => self.build_quadratic(n),
            Flavor::Woronowicz => self.build_woronowicz(n)?,
        };
        debug_assert_eq!(data.right.len(), self.degrees[n - 1].basis.len() * m);
        let dim = data.basis.len();
        self.push_degree(data);
        Ok(dim)
    }

    // Degree n is (degree n−1)⊗V modulo the images of (degree n−2)⊗R.
    fn build_quadratic(&self, n: usize) -> DegreeData {
        let m = self.cm.len();
        let prev = &self.degrees[n - 1];
        let prev2 = &self.degrees[n - 2];
        let cols = prev.basis.len() * m;
        let mut ech = Echelon::new(PivotSide::High);
        for k in 0..prev2.basis.len() {
            for r in &self.quad {
                let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                for (idx, c) in r.iter() {
                    let (a, b) = (idx / m, idx % m);
                    for (i, x) in prev.right[k * m + a].iter() {
                        *acc.entry(i * m + b).or_insert_with(Rat::zero) += c * x;
                    }
                }
                ech.insert(&SparseVec::from_map(acc));
            }
        }
        ech.make_reduced();
        finish_degree(&ech, cols, |col| {
            let mut w = prev.basis[col / m].clone();
            w.push((col % m) as u16);
            w
        }, |i, a| i * m + a, prev.basis.len(), m)
    }

    // Degree n is V^⊗n modulo the kernel of the braided factorial, computed
    // on each grade block.
    fn build_woronowicz(&self, n: usize) -> Result<DegreeData> {
        let cm = &self.cm;
        let m = cm.len();
        let op = cm.braided_factorial(n, self.sign.value());
        let mut ech = Echelon::new(PivotSide::High);
        for (_, words) in cm.blocks(n) {
            let mat = op.materialize(cm, &words)?;
            for v in mat.kernel_basis() {
                ech.insert(&SparseVec::from_pairs(
                    v.into_iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (cm.word_index(&words[j]), x)),
                ));
            }
        }
        ech.make_reduced();
        let total = m.pow(n as u32);
        let prev = &self.degrees[n - 1];
        Ok(finish_degree(
            &ech,
            total,
            |col| cm.index_word(col, n),
            |i, a| cm.word_index(&prev.basis[i]) * m + a,
            prev.basis.len(),
            m,
        ))
    }

    /// Degree-wise dimensions from 0 to `max`.
    pub fn hilbert_series(&mut self, max: usize) -> Result<Vec<usize>> {
        self.ensure_degree(max)?;
        (0..=max).map(|n| self.dim(n)).collect()
    }

    pub fn one(&self) -> AlgElement {
        AlgElement::homogeneous(self.id, 0, SparseVec::unit(0))
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement::new(self.id)
    }

    pub fn generator(&self, a: usize) -> AlgElement {
        AlgElement::homogeneous(self.id, 1, SparseVec::unit(a))
    }

    /// The basis element `j` of degree `n`.
    pub fn basis_element(&self, n: usize, j: usize) -> AlgElement {
        AlgElement::homogeneous(self.id, n, SparseVec::unit(j))
    }

    /// Coordinates of v·e_a where v has degree `n` (degree n+1 must be built).
    fn right_letter(&self, n: usize, v: &SparseVec, a: usize) -> Result<SparseVec> {
        if n + 1 >= self.degrees.len() {
            if self.is_exhausted() {
                return Ok(SparseVec::new());
            }
            return Err(Error::DegreeNotBuilt(n + 1));
        }
        let m = self.cm.len();
        let table = &self.degrees[n + 1].right;
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, x) in v.iter() {
            for (j, y) in table[i * m + a].iter() {
                *acc.entry(*j).or_insert_with(Rat::zero) += x * y;
            }
        }
        Ok(SparseVec::from_map(acc))
    }

    /// Coordinates of the product of a word.
    pub fn normal_form_word(&self, w: &[u16]) -> Result<AlgElement> {
        let mut v = SparseVec::unit(0);
        for (k, &a) in w.iter().enumerate() {
            if v.is_zero() {
                break;
            }
            v = self.right_letter(k, &v, a as usize)?;
        }
        Ok(AlgElement::homogeneous(self.id, w.len(), v))
    }

    pub fn normal_form(&self, t: &TensorVec) -> Result<AlgElement> {
        let mut out = self.zero();
        for (w, c) in t.terms() {
            out = out.axpy(c, &self.normal_form_word(w)?);
        }
        Ok(out)
    }

    /// Expands an element back into the tensor algebra on its basis words.
    pub fn to_tensor(&self, x: &AlgElement, n: usize) -> Result<TensorVec> {
        let basis = self.basis(n)?;
        Ok(TensorVec::from_terms(
            n,
            x.component(n).iter().map(|(j, c)| (basis[*j].clone(), c.clone())),
        ))
    }

    pub fn check_host(&self, x: &AlgElement) -> Result<()> {
        if x.host != self.id {
            return Err(Error::HostMismatch);
        }
        Ok(())
    }

    pub fn multiply(&self, x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
        self.check_host(x)?;
        self.check_host(y)?;
        let mut out = self.zero();
        for (q, yv) in y.parts() {
            let basis = self.basis(q)?;
            for (p, xv) in x.parts() {
                let mut acc = SparseVec::new();
                for (j, c) in yv.iter() {
                    let mut v = xv.clone();
                    for (k, &a) in basis[*j].iter().enumerate() {
                        if v.is_zero() {
                            break;
                        }
                        v = self.right_letter(p + k, &v, a as usize)?;
                    }
                    acc = acc.axpy(c, &v);
                }
                out = out.add(&AlgElement::homogeneous(self.id, p + q, acc));
            }
        }
        Ok(out)
    }

    /// θ = Σ_a e_a.
    pub fn theta(&self) -> AlgElement {
        let m = self.cm.len();
        AlgElement::homogeneous(self.id, 1, SparseVec::from_pairs((0..m).map(|a| (a, Rat::one()))))
    }

    /// θ_i = Σ_{j≠i} e_(ij) for the 2-cycle class, i 1-based.
    pub fn theta_i(&self, i: usize) -> Result<AlgElement> {
        if !self.cm.is_transpositions() {
            return Err(Error::NotTranspositions);
        }
        let n = self.cm.n();
        if i == 0 || i > n {
            return Err(Error::OutOfRange {
                what: "i",
                value: i,
                range: format!("1..={n}"),
            });
        }
        let pairs = (1..=n).filter(|&j| j != i).map(|j| {
            let t = Perm::transposition(n, i - 1, j - 1);
            (self.cm.index_of(&t).unwrap(), Rat::one())
        });
        Ok(AlgElement::homogeneous(self.id, 1, SparseVec::from_pairs(pairs)))
    }

    /// g acting on an element through the crossed-module action.
    pub fn act(&self, g: &Perm, x: &AlgElement) -> Result<AlgElement> {
        self.check_host(x)?;
        let mut out = self.zero();
        for (n, v) in x.parts() {
            let basis = self.basis(n)?;
            for (j, c) in v.iter() {
                let (s, w) = self.cm.act_word(g, &basis[*j]);
                out = out.axpy(&(c * &Rat::from_int(s as i64)), &self.normal_form_word(&w)?);
            }
        }
        Ok(out)
    }

    /// Splits a homogeneous element by group degree of its basis words.
    pub fn grade_components(&self, x: &AlgElement) -> Result<Vec<(Perm, AlgElement)>> {
        let mut map: BTreeMap<Perm, AlgElement> = BTreeMap::new();
        for (n, v) in x.parts() {
            let basis = self.basis(n)?;
            for (j, c) in v.iter() {
                let g = self.cm.grade(&basis[*j]);
                let e = map.entry(g).or_insert_with(|| self.zero());
                *e = e.add(&AlgElement::homogeneous(self.id, n, SparseVec::from_pairs([(*j, c.clone())])));
            }
        }
        Ok(map.into_iter().collect())
    }

    pub(crate) fn degree_data(&self) -> &[DegreeData] {
        &self.degrees
    }

    pub(crate) fn restore_degrees(&mut self, degrees: Vec<DegreeData>) {
        self.degrees.clear();
        self.index.clear();
        for d in degrees {
            self.push_degree(d);
        }
    }
}

// Shared tail of both constructions: non-pivot columns become the basis,
// and every product basis_{n-1}[i]·e_a is expressed in it.
fn finish_degree<W, C>(
    ech: &Echelon,
    cols: usize,
    word_of: W,
    col_of: C,
    prev_dim: usize,
    m: usize,
) -> DegreeData
where
    W: Fn(usize) -> Word,
    C: Fn(usize, usize) -> usize,
{
    let mut basis = Vec::new();
    let mut new_index: HashMap<usize, usize> = HashMap::new();
    for col in 0..cols {
        if !ech.is_pivot(col) {
            new_index.insert(col, basis.len());
            basis.push(word_of(col));
        }
    }
    let mut right = Vec::with_capacity(prev_dim * m);
    for i in 0..prev_dim {
        for a in 0..m {
            let col = col_of(i, a);
            let v = match ech.row(col) {
                None => SparseVec::unit(new_index[&col]),
                Some(row) => SparseVec::from_pairs(
                    row.iter()
                        .filter(|(k, _)| *k != col)
                        .map(|(k, x)| (new_index[k], -x)),
                ),
            };
            right.push(v);
        }
    }
    DegreeData { basis, right }
}
