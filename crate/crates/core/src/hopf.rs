//! Braided-group structure: additive coproduct, braided partial derivatives,
//! antipode, adjoint action, the self-duality pairing and the braided Fourier
//! transform on E_3.
//!
//! Everything is written for the effective braiding sΨ, where s = +1 for the
//! Fomin-Kirillov signing and s = −1 for the exterior (super) signing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, Flavor, GradedAlgebra};
use crate::crossed::TensorVec;
use crate::error::{Error, Result};
use crate::expr;
use crate::linalg::{QMatrix, Rat, SparseVec};
use crate::perm::Perm;
use crate::poly::Poly;

/// A basis element: (degree, index into the basis of that degree).
pub type Slot = (usize, usize);

/// An element of A ⊗ A on pairs of basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tensor2 {
    terms: BTreeMap<(Slot, Slot), Rat>,
}

impl Tensor2 {
    pub fn zero() -> Tensor2 {
        Tensor2::default()
    }

    pub fn unit() -> Tensor2 {
        let mut t = Tensor2::zero();
        t.add_term((0, 0), (0, 0), &Rat::one());
        t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Slot, Slot), &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, l: Slot, r: Slot) -> Rat {
        self.terms.get(&(l, r)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, l: Slot, r: Slot, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((l, r)).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(l, r));
        }
    }

    pub fn add_scaled(&mut self, c: &Rat, other: &Tensor2) {
        for ((l, r), x) in &other.terms {
            self.add_term(*l, *r, &(c * x));
        }
    }

    /// x ⊗ y for homogeneous-coordinate elements.
    pub fn from_pair(x: &AlgElement, y: &AlgElement) -> Tensor2 {
        let mut t = Tensor2::zero();
        for (p, u) in x.parts() {
            for (q, v) in y.parts() {
                for (i, a) in u.iter() {
                    for (j, b) in v.iter() {
                        t.add_term((p, *i), (q, *j), &(a * b));
                    }
                }
            }
        }
        t
    }
}

/// An element of A ⊗ A ⊗ A, used for coassociativity.
pub type Tensor3 = BTreeMap<(Slot, Slot, Slot), Rat>;

fn add3(t: &mut Tensor3, k: (Slot, Slot, Slot), c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn sign_pow(s: i8, k: usize) -> Rat {
    if s < 0 && k % 2 == 1 {
        -Rat::one()
    } else {
        Rat::one()
    }
}

/// A finite-type graded algebra with its braided-group structure.
pub struct BraidedGroup {
    alg: GradedAlgebra,
    grams: BTreeMap<usize, QMatrix>,
}

impl BraidedGroup {
    pub fn new(alg: GradedAlgebra) -> BraidedGroup {
        BraidedGroup {
            alg,
            grams: BTreeMap::new(),
        }
    }

    pub fn fomin_kirillov(n: usize) -> Result<BraidedGroup> {
        Ok(BraidedGroup::new(GradedAlgebra::fomin_kirillov(n, Flavor::Quadratic)?))
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn algebra_mut(&mut self) -> &mut GradedAlgebra {
        &mut self.alg
    }

    pub fn into_algebra(self) -> GradedAlgebra {
        self.alg
    }

    /// s = +1 (Fomin-Kirillov) or −1 (exterior).
    pub fn s(&self) -> i8 {
        self.alg.sign().value()
    }

    pub fn ensure(&mut self, n: usize) -> Result<()> {
        self.alg.ensure_degree(n)
    }

    fn ensure_for(&mut self, x: &AlgElement, extra: usize) -> Result<()> {
        self.alg.check_host(x)?;
        if let Some(d) = x.degrees().max() {
            self.alg.ensure_degree(d + extra)?;
        }
        Ok(())
    }

    pub fn element(&self, slot: Slot) -> AlgElement {
        self.alg.basis_element(slot.0, slot.1)
    }

    fn grade(&self, slot: Slot) -> Result<Perm> {
        if slot.0 == 0 {
            return Ok(Perm::identity(self.alg.cm().n()));
        }
        self.alg.basis_grade(slot.0, slot.1)
    }

    fn generator_slot(&self, a: usize) -> Result<usize> {
        self.alg.basis_index(1, &[a as u16]).ok_or(Error::OutOfRange {
            what: "generator",
            value: a,
            range: format!("0..{}", self.alg.cm().len()),
        })
    }

    fn times_letter(&self, slot: Slot, a: usize) -> Result<SparseVec> {
        let g = self.alg.generator(a);
        Ok(self.alg.multiply(&self.element(slot), &g)?.component(slot.0 + 1))
    }

    /// Δ on one word, as the product of Δe_b = e_b⊗1 + 1⊗e_b in the braided tensor product.
    pub fn coproduct_word(&self, w: &[u16]) -> Result<Tensor2> {
        let s = self.s();
        let cm = self.alg.cm();
        let mut t = Tensor2::unit();
        for &b in w {
            let mut next = Tensor2::zero();
            for (&(l, r), c) in t.terms() {
                // (x⊗y)(1⊗e_b) = x ⊗ y e_b
                for (j, y) in self.times_letter(r, b as usize)?.iter() {
                    next.add_term(l, (r.0 + 1, *j), &(c * y));
                }
                // (x⊗y)(e_b⊗1) = s^{|y|} x (|y|.e_b) ⊗ y
                let (z, tb) = cm.act(&self.grade(r)?, b as usize);
                let coeff = c * &sign_pow(s, r.0) * Rat::from_int(z as i64);
                for (i, x) in self.times_letter(l, tb)?.iter() {
                    next.add_term((l.0 + 1, *i), r, &(&coeff * x));
                }
            }
            t = next;
        }
        Ok(t)
    }

    pub fn coproduct(&mut self, x: &AlgElement) -> Result<Tensor2> {
        self.ensure_for(x, 0)?;
        let mut out = Tensor2::zero();
        for (n, v) in x.parts() {
            let basis = self.alg.basis(n)?.to_vec();
            for (j, c) in v.iter() {
                out.add_scaled(c, &self.coproduct_word(&basis[*j])?);
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &AlgElement) -> Rat {
        x.component(0).get(0)
    }

    /// (x⊗y)(x'⊗y') = s^{deg y · deg x'} x (|y|.x') ⊗ y y'.
    pub fn tensor_mul(&self, x: &Tensor2, y: &Tensor2) -> Result<Tensor2> {
        let s = self.s();
        let mut out = Tensor2::zero();
        for (&(l1, r1), c1) in x.terms() {
            let g = self.grade(r1)?;
            for (&(l2, r2), c2) in y.terms() {
                let moved = self.alg.act(&g, &self.element(l2))?;
                let left = self.alg.multiply(&self.element(l1), &moved)?;
                let right = self.alg.multiply(&self.element(r1), &self.element(r2))?;
                let c = c1 * c2 * sign_pow(s, r1.0 * l2.0);
                for (i, a) in left.component(l1.0 + l2.0).iter() {
                    for (j, b) in right.component(r1.0 + r2.0).iter() {
                        out.add_term((l1.0 + l2.0, *i), (r1.0 + r2.0, *j), &(&c * &(a * b)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// ((Δ⊗id)Δx, (id⊗Δ)Δx).
    pub fn coassociativity(&mut self, x: &AlgElement) -> Result<(Tensor3, Tensor3)> {
        let d = self.coproduct(x)?;
        let mut left = Tensor3::new();
        let mut right = Tensor3::new();
        for (&(l, r), c) in d.terms() {
            for (&(a, b), x) in self.coproduct_word(&self.alg.basis(l.0)?[l.1].clone())?.terms() {
                add3(&mut left, (a, b, r), c * x);
            }
            for (&(a, b), x) in self.coproduct_word(&self.alg.basis(r.0)?[r.1].clone())?.terms() {
                add3(&mut right, (l, a, b), c * x);
            }
        }
        Ok((left, right))
    }

    /// D_a via [m, sΨ], or D̄_a via [m, sΨ⁻¹]: bring a letter to the front and
    /// read off the coefficient of e_a there.
    pub fn derivative(&mut self, a: usize, x: &AlgElement, bar: bool) -> Result<AlgElement> {
        self.ensure_for(x, 0)?;
        let s = self.s();
        let cm = self.alg.cm_arc();
        let mut out = self.alg.zero();
        for m in x.degrees() {
            if m == 0 {
                continue;
            }
            let t = self.alg.to_tensor(&x.part(m), m)?;
            let mut op = cm.braided_integer(m, s);
            if bar {
                op = op.inverted();
            }
            let moved = op.apply(&cm, &t)?;
            for (w, c) in moved.terms() {
                if w[0] as usize == a {
                    out = out.axpy(c, &self.alg.normal_form_word(&w[1..])?);
                }
            }
        }
        Ok(out)
    }

    /// D_a as the coefficient of e_a ⊗ (·) in Δ.
    pub fn derivative_from_coproduct(&mut self, a: usize, x: &AlgElement) -> Result<AlgElement> {
        let slot = self.generator_slot(a)?;
        let d = self.coproduct(x)?;
        let mut out = self.alg.zero();
        for (&(l, r), c) in d.terms() {
            if l == (1, slot) {
                out = out.axpy(c, &self.element(r));
            }
        }
        Ok(out)
    }

    /// S(e_a f) = −s^{deg f} (a.S f) e_a, S(1) = 1.
    pub fn antipode_word(&self, w: &[u16]) -> Result<AlgElement> {
        if w.is_empty() {
            return Ok(self.alg.one());
        }
        let a = w[0] as usize;
        let tail = self.antipode_word(&w[1..])?;
        let moved = self.alg.act(self.alg.cm().element(a), &tail)?;
        let prod = self.alg.multiply(&moved, &self.alg.generator(a))?;
        Ok(prod.scale(&-sign_pow(self.s(), w.len() - 1)))
    }

    pub fn antipode(&mut self, x: &AlgElement) -> Result<AlgElement> {
        self.ensure_for(x, 0)?;
        let mut out = self.alg.zero();
        for (n, v) in x.parts() {
            let basis = self.alg.basis(n)?.to_vec();
            for (j, c) in v.iter() {
                out = out.axpy(c, &self.antipode_word(&basis[*j])?);
            }
        }
        Ok(out)
    }

    /// ·(S⊗id)Δx and ·(id⊗S)Δx, both of which equal ε(x)1.
    pub fn convolutions(&mut self, x: &AlgElement) -> Result<(AlgElement, AlgElement)> {
        let d = self.coproduct(x)?;
        let mut left = self.alg.zero();
        let mut right = self.alg.zero();
        for (&(l, r), c) in d.terms() {
            let sl = self.antipode(&self.element(l))?;
            left = left.axpy(c, &self.alg.multiply(&sl, &self.element(r))?);
            let sr = self.antipode(&self.element(r))?;
            right = right.axpy(c, &self.alg.multiply(&self.element(l), &sr)?);
        }
        Ok((left, right))
    }

    /// Ad_{e_a}(f) = e_a f − s^{deg f}(a.f) e_a.
    pub fn adjoint(&mut self, a: usize, x: &AlgElement) -> Result<AlgElement> {
        self.ensure_for(x, 1)?;
        let s = self.s();
        let ea = self.alg.generator(a);
        let g = self.alg.cm().element(a).clone();
        let mut out = self.alg.multiply(&ea, x)?;
        for (n, _) in x.parts() {
            let moved = self.alg.act(&g, &x.part(n))?;
            let term = self.alg.multiply(&moved, &ea)?;
            out = out.axpy(&-sign_pow(s, n), &term);
        }
        Ok(out)
    }

    /// ⟨u, v⟩ on words: the coefficient of reversed(u) in [n; sΨ]!(v).
    pub fn pair_words(&self, u: &[u16], v: &[u16]) -> Result<Rat> {
        if u.len() != v.len() {
            return Ok(Rat::zero());
        }
        if u.is_empty() {
            return Ok(Rat::one());
        }
        let cm = self.alg.cm_arc();
        let img = cm
            .braided_factorial(v.len(), self.s())
            .apply(&cm, &TensorVec::word(v.to_vec()))?;
        let rev: Vec<u16> = u.iter().rev().copied().collect();
        Ok(img.coeff(&rev))
    }

    /// Gram matrix of the pairing on the degree-n basis.
    pub fn gram(&mut self, n: usize) -> Result<&QMatrix> {
        if !self.grams.contains_key(&n) {
            self.alg.ensure_degree(n)?;
            let basis = self.alg.basis(n)?.to_vec();
            let dim = basis.len();
            let cm = self.alg.cm_arc();
            let op = (n > 0).then(|| cm.braided_factorial(n, self.s()));
            let mut g = QMatrix::zeros(dim, dim);
            for (j, v) in basis.iter().enumerate() {
                let img = match &op {
                    Some(op) => op.apply(&cm, &TensorVec::word(v.clone()))?,
                    None => TensorVec::word(Vec::new()),
                };
                for (i, u) in basis.iter().enumerate() {
                    let rev: Vec<u16> = u.iter().rev().copied().collect();
                    g.set(i, j, img.coeff(&rev));
                }
            }
            self.grams.insert(n, g);
        }
        Ok(&self.grams[&n])
    }

    pub fn pairing(&mut self, x: &AlgElement, y: &AlgElement) -> Result<Rat> {
        self.alg.check_host(x)?;
        self.alg.check_host(y)?;
        let mut acc = Rat::zero();
        for (n, u) in x.parts() {
            let v = y.component(n);
            if v.is_zero() {
                continue;
            }
            let g = self.gram(n)?.clone();
            for (i, a) in u.iter() {
                for (j, b) in v.iter() {
                    acc += a * b * g.get(*i, *j);
                }
            }
        }
        Ok(acc)
    }

    /// f^A = Σ_C (G⁻¹)_{AC} e_C, so that Σ_A ⟨f, e_A⟩ f^A = f.
    pub fn dual_basis(&mut self, n: usize) -> Result<Vec<AlgElement>> {
        let g = self.gram(n)?.clone();
        let inv = g.inverse()?.ok_or(Error::SingularGram(n))?;
        Ok((0..g.rows())
            .map(|a| {
                let v = SparseVec::from_dense(inv.row(a));
                let mut e = self.alg.zero();
                for (c, x) in v.iter() {
                    e = e.axpy(x, &self.element((n, *c)));
                }
                e
            })
            .collect())
    }

    /// exp = Σ_n Σ_A e_A ⊗ f^A over degrees 0..=max.
    pub fn coevaluation(&mut self, max: usize) -> Result<Tensor2> {
        let mut t = Tensor2::zero();
        for n in 0..=max {
            self.alg.ensure_degree(n)?;
            for (a, f) in self.dual_basis(n)?.iter().enumerate() {
                t.add_scaled(&Rat::one(), &Tensor2::from_pair(&self.element((n, a)), f));
            }
        }
        Ok(t)
    }

    /// Both Leibniz rules on products of basis elements:
    /// D_a(fh) = D_a(f)h + s^{deg f} ζ_{|f|⁻¹,a} f D_{|f|⁻¹a|f|}(h) and
    /// D̄_a(fh) = D̄_a(f)h + s^{deg f}(a.f)D̄_a(h).
    pub fn leibniz_check(&mut self, pairs: &[(Slot, Slot)]) -> Result<LeibnizReport> {
        let top = pairs.iter().map(|(x, y)| x.0 + y.0).max().unwrap_or(0);
        self.ensure(top)?;
        let m = self.alg.cm().len();
        let s = self.s();
        let mut failures = Vec::new();
        for &(x, y) in pairs {
            let (f, h) = (self.element(x), self.element(y));
            let fh = self.alg.multiply(&f, &h)?;
            let grade = if x.0 == 0 {
                Perm::identity(self.alg.cm().n())
            } else {
                self.alg.basis_grade(x.0, x.1)?
            };
            let sf = sign_pow(s, x.0);
            for a in 0..m {
                let lhs = self.derivative(a, &fh, false)?;
                let (z, b) = self.alg.cm().act(&grade.inverse(), a);
                let t1 = self.derivative(a, &f, false)?;
                let t1 = self.alg.multiply(&t1, &h)?;
                let t2 = self.derivative(b, &h, false)?;
                let t2 = self.alg.multiply(&f, &t2)?;
                if lhs != t1.axpy(&(&sf * &Rat::from_int(z as i64)), &t2) {
                    failures.push((x, y, a, false));
                }
                let lhs = self.derivative(a, &fh, true)?;
                let af = self.alg.act(self.alg.cm().element(a), &f)?;
                let t1 = self.derivative(a, &f, true)?;
                let t1 = self.alg.multiply(&t1, &h)?;
                let t2 = self.derivative(a, &h, true)?;
                let t2 = self.alg.multiply(&af, &t2)?;
                if lhs != t1.axpy(&sf, &t2) {
                    failures.push((x, y, a, true));
                }
            }
        }
        Ok(LeibnizReport {
            pairs: pairs.len(),
            failures,
        })
    }

    /// All pairs of basis slots with degrees summing to `total`, keeping
    /// every `step`-th one.
    pub fn product_pairs(&mut self, total: usize, step: usize) -> Result<Vec<(Slot, Slot)>> {
        self.ensure(total)?;
        let mut out = Vec::new();
        for i in 0..=total {
            for j in 0..self.alg.dim(i)? {
                for k in 0..self.alg.dim(total - i)? {
                    out.push(((i, j), (total - i, k)));
                }
            }
        }
        Ok(out.into_iter().step_by(step.max(1)).collect())
    }

    /// 𝒯(f) = |f|.f on homogeneous pieces.
    pub fn degree_operator(&mut self, x: &AlgElement) -> Result<AlgElement> {
        self.ensure_for(x, 0)?;
        let mut out = self.alg.zero();
        for (g, piece) in self.alg.grade_components(x)? {
            out = out.add(&self.alg.act(&g, &piece)?);
        }
        Ok(out)
    }
}

/// Leibniz failures as (f slot, h slot, a, barred).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub pairs: usize,
    pub failures: Vec<(Slot, Slot, usize, bool)>,
}

/// Braided Fourier transform 𝒮(f) = (∫⊗id)(f·exp) on a finite algebra.
pub struct Fourier {
    pub group: BraidedGroup,
    pub top_word: Vec<u16>,
    top_coeff: Rat,
    pub exp: Tensor2,
}

impl Fourier {
    pub fn new(mut group: BraidedGroup, top_word: &[u16]) -> Result<Fourier> {
        let d = top_word.len();
        group.ensure(d + 1)?;
        if !group.alg.is_exhausted() || group.alg.dim(d)? != 1 {
            return Err(Error::Unsupported("needs a finite algebra with one-dimensional top".into()));
        }
        let top_coeff = group.alg.normal_form_word(top_word)?.component(d).get(0);
        if top_coeff.is_zero() {
            return Err(Error::Inconsistent("designated top word vanishes".into()));
        }
        let exp = group.coevaluation(d)?;
        Ok(Fourier {
            group,
            top_word: top_word.to_vec(),
            top_coeff,
            exp,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.top_word.len()
    }

    /// Coefficient of Top.
    pub fn integral(&self, x: &AlgElement) -> Rat {
        x.component(self.top_degree()).get(0) / &self.top_coeff
    }

    pub fn transform(&self, x: &AlgElement) -> Result<AlgElement> {
        let alg = &self.group.alg;
        alg.check_host(x)?;
        let mut out = alg.zero();
        for (&(l, r), c) in self.exp.terms() {
            let i = self.integral(&alg.multiply(x, &self.group.element(l))?);
            if !i.is_zero() {
                out = out.axpy(&(&i * c), &self.group.element(r));
            }
        }
        Ok(out)
    }

    /// The transform as a matrix on degree n → degree d−n.
    pub fn matrix(&self, n: usize) -> Result<QMatrix> {
        let d = self.top_degree();
        let src = self.group.alg.dim(n)?;
        let dst = self.group.alg.dim(d - n)?;
        let cols: Vec<Vec<Rat>> = (0..src)
            .map(|j| {
                self.transform(&self.group.element((n, j)))
                    .map(|y| y.component(d - n).to_dense(dst))
            })
            .collect::<Result<_>>()?;
        Ok(QMatrix::from_columns(&cols, dst))
    }
}

/// Basis-element inputs and expected outputs of the transform on E_3.
pub const E3_FOURIER_TABLE: [(&str, &str); 12] = [
    ("1", "[12][23][12][31]"),
    ("[12]", "[31][12][23]"),
    ("[23]", "[12][23][31]"),
    ("[31]", "[23][31][12]"),
    ("[12][23]", "[31][12]"),
    ("[23][12]", "[31][23]"),
    ("[23][31]", "[12][23]"),
    ("[31][23]", "[12][31]"),
    ("[31][12][23]", "-[12]"),
    ("[12][23][31]", "-[23]"),
    ("[23][31][12]", "-[31]"),
    ("[12][23][12][31]", "1"),
];

/// The coevaluation on E_3 as printed: (coefficient, left, right).
pub const E3_EXP_DISPLAY: [(i64, &str, &str); 12] = [
    (1, "1", "1"),
    (1, "[12]", "[12]"),
    (1, "[23]", "[23]"),
    (1, "[31]", "[31]"),
    (-1, "[12][23]", "[12][31]"),
    (1, "[23][12]", "[12][23]"),
    (1, "[23][31]", "[31][23]"),
    (-1, "[31][23]", "[31][12]"),
    (1, "[31][12][23]", "[31][12][23]"),
    (1, "[12][23][31]", "[12][23][31]"),
    (1, "[23][31][12]", "[23][31][12]"),
    (1, "[12][23][12][31]", "[12][23][12][31]"),
];

/// Fourier data on E_3 with Top the normal form of [12][23][12][31].
pub fn fourier_e3() -> Result<Fourier> {
    let group = BraidedGroup::fomin_kirillov(3)?;
    let cm = group.algebra().cm();
    let idx = |s: &str| cm.index_of(&Perm::parse_cycles(3, s).unwrap()).unwrap() as u16;
    let top = [idx("(12)"), idx("(23)"), idx("(12)"), idx("(13)")];
    // [31] = −e_(13)
    let mut f = Fourier::new(group, &top)?;
    f.top_coeff = -f.top_coeff;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierRow {
    pub input: String,
    pub expected: String,
    /// Normal form of `expected`.
    pub expected_normal: String,
    pub computed: String,
    pub matches: bool,
}

/// Each table entry compared after normal-forming both sides.
pub fn fourier_e3_table(f: &mut Fourier) -> Result<Vec<FourierRow>> {
    let mut rows = Vec::new();
    for (input, expected) in E3_FOURIER_TABLE {
        let x = expr::eval(&mut f.group.alg, input)?;
        let want = expr::eval(&mut f.group.alg, expected)?;
        let got = f.transform(&x)?;
        rows.push(FourierRow {
            input: input.to_string(),
            expected: expected.to_string(),
            expected_normal: expr::format(&f.group.alg, &want)?,
            computed: expr::format(&f.group.alg, &got)?,
            matches: got == want,
        });
    }
    Ok(rows)
}

/// The printed coevaluation, normal-formed into A ⊗ A.
pub fn e3_exp_display(f: &mut Fourier) -> Result<Tensor2> {
    let mut t = Tensor2::zero();
    for (c, l, r) in E3_EXP_DISPLAY {
        let x = expr::eval(&mut f.group.alg, l)?;
        let y = expr::eval(&mut f.group.alg, r)?;
        t.add_scaled(&Rat::from_int(c), &Tensor2::from_pair(&x, &y));
    }
    Ok(t)
}

/// Power laws of 𝒮 in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierDegree {
    pub degree: usize,
    /// 𝒮² as a multiple of the identity, when it is one.
    pub square_scalar: Option<Rat>,
    /// 𝒮³ = id; only meaningful in the middle degree.
    pub cube_is_identity: bool,
    /// 𝒮²(x) = 𝒯(x) for every basis element x of this degree.
    pub square_is_t: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierReport {
    pub rows: Vec<FourierRow>,
    /// ⟨Top, Top⟩ for Top = [12][23][12][31].
    pub top_pairing: Rat,
    /// Degrees in which the computed coevaluation equals the printed one.
    pub exp_agrees: Vec<usize>,
    pub degrees: Vec<FourierDegree>,
    pub gram_ranks: Vec<(usize, usize)>,
}

impl FourierReport {
    pub fn rows_matching(&self) -> usize {
        self.rows.iter().filter(|r| r.matches).count()
    }
}

fn restrict(t: &Tensor2, n: usize) -> Tensor2 {
    let mut out = Tensor2::zero();
    for (&(l, r), c) in t.terms() {
        if l.0 == n {
            out.add_term(l, r, c);
        }
    }
    out
}

/// Table rows, coevaluation, Gram ranks and the powers of 𝒮 on E_3.
pub fn fourier_e3_report(f: &mut Fourier) -> Result<FourierReport> {
    let rows = fourier_e3_table(f)?;
    let d = f.top_degree();
    let top = expr::eval(&mut f.group.alg, "[12][23][12][31]")?;
    let top_pairing = f.group.pairing(&top, &top)?;
    let printed = e3_exp_display(f)?;
    let exp_agrees = (0..=d)
        .filter(|&n| restrict(&printed, n) == restrict(&f.exp, n))
        .collect();
    let mut gram_ranks = Vec::new();
    for n in 0..=d {
        let g = f.group.gram(n)?;
        gram_ranks.push((g.rows(), g.rank()));
    }
    let mut degrees = Vec::new();
    for n in 0..=d {
        let s1 = f.matrix(n)?;
        let s2 = f.matrix(d - n)?.mul(&s1)?;
        let dim = s1.cols();
        let c = s2.get(0, 0).clone();
        let square_scalar = (s2 == QMatrix::identity(dim).scale(&c)).then_some(c);
        let cube_is_identity = d == 2 * n && s1.mul(&s2)? == QMatrix::identity(dim);
        let mut square_is_t = true;
        for j in 0..dim {
            let x = f.group.element((n, j));
            let twice = f.transform(&f.transform(&x)?)?;
            square_is_t &= twice == f.group.degree_operator(&x)?;
        }
        degrees.push(FourierDegree {
            degree: n,
            square_scalar,
            cube_is_identity,
            square_is_t,
        });
    }
    Ok(FourierReport {
        rows,
        top_pairing,
        exp_agrees,
        degrees,
        gram_ranks,
    })
}

/// θ_i = Σ_{j≠i} [ij] with [ji] = −[ij], i 1-based.
pub fn fk_theta(alg: &GradedAlgebra, i: usize) -> Result<AlgElement> {
    let cm = alg.cm();
    if !cm.is_transpositions() {
        return Err(Error::NotTranspositions);
    }
    let n = cm.n();
    if i == 0 || i > n {
        return Err(Error::OutOfRange {
            what: "i",
            value: i,
            range: format!("1..={n}"),
        });
    }
    let pairs = (1..=n).filter(|&j| j != i).map(|j| {
        let a = cm.index_of(&Perm::transposition(n, i - 1, j - 1)).unwrap();
        let sign = if i < j || !cm.signed() { 1 } else { -1 };
        (a, Rat::from_int(sign))
    });
    let mut e = alg.zero();
    for (a, c) in pairs {
        e = e.axpy(&c, &alg.generator(a));
    }
    Ok(e)
}

/// Image of a commutative polynomial under θ_i ↦ Σ_{j≠i}[ij].
pub fn poly_image(group: &mut BraidedGroup, p: &Poly) -> Result<AlgElement> {
    let n = group.alg.cm().n();
    if p.nvars() != n {
        return Err(Error::SizeMismatch(p.nvars(), n));
    }
    if let Some(d) = p.total_degree() {
        group.ensure(d as usize)?;
    }
    let thetas: Vec<AlgElement> = (1..=n).map(|i| fk_theta(&group.alg, i)).collect::<Result<_>>()?;
    let mut out = group.alg.zero();
    for (e, c) in p.terms() {
        let mut m = group.alg.one();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                m = group.alg.multiply(&m, &thetas[i])?;
            }
        }
        out = out.axpy(c, &m);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividedDifferenceCase {
    pub i: usize,
    pub j: usize,
    pub poly: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividedDifferenceReport {
    pub n: usize,
    pub cases: Vec<DividedDifferenceCase>,
    pub all_ok: bool,
}

/// All monomials of total degree 1..=d in N variables.
pub fn monomials(n: usize, d: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Poly>) {
        if cur.len() == n {
            if cur.iter().sum::<u32>() > 0 {
                out.push(Poly::monomial(cur, Rat::one()));
            }
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// D̄_(ij) on the image of p against the image of ∂_ij p, for all i < j.
pub fn divided_difference_check(group: &mut BraidedGroup, samples: &[Poly]) -> Result<DividedDifferenceReport> {
    let n = group.alg.cm().n();
    let mut cases = Vec::new();
    for p in samples {
        let img = poly_image(group, p)?;
        for i in 0..n {
            for j in i + 1..n {
                let a = group.alg.cm().index_of(&Perm::transposition(n, i, j)).unwrap();
                let lhs = group.derivative(a, &img, true)?;
                let rhs = poly_image(group, &p.divided_difference(i, j)?)?;
                cases.push(DividedDifferenceCase {
                    i: i + 1,
                    j: j + 1,
                    poly: p.to_string(),
                    ok: lhs == rhs,
                });
            }
        }
    }
    Ok(DividedDifferenceReport {
        n,
        all_ok: cases.iter().all(|c| c.ok),
        cases,
    })
}

#[cfg(test)]
mod tests;
