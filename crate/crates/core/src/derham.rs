//! Forms Ω = k(G)·Λ on the whole group, the exterior derivative, de Rham
//! cohomology, curvature and gauge transformations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElement, GradedAlgebra, Sign};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, PivotSide, Rat, SparseVec};
use crate::perm::{Perm, SymGroup};

/// A degree-n form: coordinate `g·dim Λⁿ + j` is the coefficient of
/// δ_g·(basis word j), with g the lexicographic rank of the group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaElement {
    pub degree: usize,
    pub coeffs: SparseVec,
}

impl OmegaElement {
    pub fn zero(degree: usize) -> OmegaElement {
        OmegaElement {
            degree,
            coeffs: SparseVec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &OmegaElement) -> OmegaElement {
        assert_eq!(self.degree, other.degree);
        OmegaElement {
            degree: self.degree,
            coeffs: self.coeffs.add(&other.coeffs),
        }
    }

    pub fn sub(&self, other: &OmegaElement) -> OmegaElement {
        assert_eq!(self.degree, other.degree);
        OmegaElement {
            degree: self.degree,
            coeffs: self.coeffs.sub(&other.coeffs),
        }
    }

    pub fn scale(&self, c: &Rat) -> OmegaElement {
        OmegaElement {
            degree: self.degree,
            coeffs: self.coeffs.scale(c),
        }
    }
}

/// A connection α ∈ Ω¹; φ = α + θ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connection {
    pub alpha: OmegaElement,
}

/// Dimension of a cohomology group, with the ranks it was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cohomology {
    pub degree: usize,
    pub dim: usize,
    pub dim_forms: usize,
    /// rank of d into this degree
    pub rank_in: usize,
    /// rank of d out of this degree
    pub rank_out: usize,
    pub representatives: Option<Vec<SparseVec>>,
}

/// The de Rham complex of G = S_N for an exterior algebra Λ.
pub struct DeRham<'a> {
    alg: &'a GradedAlgebra,
    group: SymGroup,
    // right[g·|C| + a] = rank of g·a
    right: Vec<usize>,
}

impl<'a> DeRham<'a> {
    pub fn new(alg: &'a GradedAlgebra) -> Result<DeRham<'a>> {
        if alg.sign() != Sign::Exterior {
            return Err(Error::Unsupported("forms are built on the exterior algebra".into()));
        }
        let cm = alg.cm();
        let group = SymGroup::new(cm.n())?;
        let m = cm.len();
        let mut right = vec![0usize; group.order() * m];
        for (g, pg) in group.elements().iter().enumerate() {
            for a in 0..m {
                right[g * m + a] = pg.mul(cm.element(a)).lex_rank();
            }
        }
        Ok(DeRham { alg, group, right })
    }

    /// Rank of g·a for group rank `g` and class index `a`.
    pub fn right_neighbor(&self, g: usize, a: usize) -> usize {
        self.right[g * self.alg.cm().len() + a]
    }

    pub fn group(&self) -> &SymGroup {
        &self.group
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.alg
    }

    /// dim Ωⁿ = |G|·dim Λⁿ.
    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.group.order() * self.alg.dim(n)?)
    }

    fn rank_of(&self, g: &Perm) -> usize {
        g.lex_rank()
    }

    /// A function on G as a 0-form.
    pub fn function(&self, f: &[Rat]) -> Result<OmegaElement> {
        if f.len() != self.group.order() {
            return Err(Error::SizeMismatch(f.len(), self.group.order()));
        }
        Ok(OmegaElement {
            degree: 0,
            coeffs: SparseVec::from_dense(f),
        })
    }

    /// Values of a 0-form.
    pub fn values(&self, f: &OmegaElement) -> Vec<Rat> {
        f.coeffs.to_dense(self.group.order())
    }

    /// The constant-coefficient form Σ_g δ_g λ for homogeneous λ ∈ Λ.
    pub fn invariant(&self, lambda: &AlgElement) -> Result<OmegaElement> {
        let n = lambda.degree().unwrap_or(0);
        let dim = self.alg.dim(n)?;
        let comp = lambda.component(n);
        let mut pairs = Vec::new();
        for g in 0..self.group.order() {
            for (j, c) in comp.iter() {
                pairs.push((g * dim + j, c.clone()));
            }
        }
        Ok(OmegaElement {
            degree: n,
            coeffs: SparseVec::from_pairs(pairs),
        })
    }

    /// The Λ-valued component of a form at the group element of rank `g`.
    pub fn at(&self, w: &OmegaElement, g: usize) -> Result<AlgElement> {
        let dim = self.alg.dim(w.degree)?;
        let lo = g * dim;
        let v = SparseVec::from_pairs(
            w.coeffs
                .iter()
                .filter(|(i, _)| *i >= lo && *i < lo + dim)
                .map(|(i, c)| (i - lo, c.clone())),
        );
        let mut e = self.alg.zero();
        for (j, c) in v.iter() {
            e = e.axpy(c, &self.alg.basis_element(w.degree, *j));
        }
        Ok(e)
    }

    /// (δ_x λ)(δ_y μ) = δ_x λμ when x|λ| = y, else 0.
    pub fn product(&self, u: &OmegaElement, v: &OmegaElement) -> Result<OmegaElement> {
        let (p, q) = (u.degree, v.degree);
        let (dp, dq) = (self.alg.dim(p)?, self.alg.dim(q)?);
        let dn = self.alg.dim(p + q)?;
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        let vmap = v.coeffs.to_map();
        let mut cache: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (idx, c) in u.coeffs.iter() {
            let (x, j) = (idx / dp, idx % dp);
            let grade = self.alg.basis_grade(p, j)?;
            let y = self.rank_of(&self.group.element(x).mul(&grade));
            for k in 0..dq {
                let Some(d) = vmap.get(&(y * dq + k)) else {
                    continue;
                };
                let prod = match cache.get(&(j, k)) {
                    Some(s) => s.clone(),
                    None => {
                        let s = self
                            .alg
                            .multiply(&self.alg.basis_element(p, j), &self.alg.basis_element(q, k))?
                            .component(p + q);
                        cache.insert((j, k), s.clone());
                        s
                    }
                };
                for (l, e) in prod.iter() {
                    *acc.entry(x * dn + l).or_insert_with(Rat::zero) += &(c * d) * e;
                }
            }
        }
        Ok(OmegaElement {
            degree: p + q,
            coeffs: SparseVec::from_map(acc),
        })
    }

    /// Columns of d: Ωᵏ → Ω^{k+1}, one per coordinate of Ωᵏ.
    ///
    /// (dω)(y) = Σ_a e_a ω(ya) − (−1)ᵏ ω(y) θ.
    pub fn d_columns(&self, k: usize) -> Result<Vec<SparseVec>> {
        let alg = self.alg;
        let cm = alg.cm();
        let m = cm.len();
        let dk = alg.dim(k)?;
        let dk1 = alg.dim(k + 1)?;
        if dk1 == 0 {
            return Ok(vec![SparseVec::new(); self.group.order() * dk]);
        }
        let theta = alg.theta();
        let left: Vec<Vec<SparseVec>> = (0..m)
            .map(|a| {
                (0..dk)
                    .map(|j| {
                        alg.multiply(&alg.generator(a), &alg.basis_element(k, j))
                            .map(|e| e.component(k + 1))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let sign = if k % 2 == 0 { Rat::from_int(-1) } else { Rat::one() };
        let with_theta: Vec<SparseVec> = (0..dk)
            .map(|j| {
                alg.multiply(&alg.basis_element(k, j), &theta)
                    .map(|e| e.component(k + 1).scale(&sign))
            })
            .collect::<Result<_>>()?;
        let inverses: Vec<Perm> = (0..m).map(|a| cm.element(a).inverse()).collect();
        let mut cols = Vec::with_capacity(self.group.order() * dk);
        for x in 0..self.group.order() {
            let px = self.group.element(x);
            for j in 0..dk {
                let mut pairs: Vec<(usize, Rat)> = Vec::new();
                for a in 0..m {
                    let y = self.rank_of(&px.mul(&inverses[a]));
                    pairs.extend(left[a][j].iter().map(|(l, c)| (y * dk1 + l, c.clone())));
                }
                pairs.extend(with_theta[j].iter().map(|(l, c)| (x * dk1 + l, c.clone())));
                cols.push(SparseVec::from_pairs(pairs));
            }
        }
        Ok(cols)
    }

    pub fn d(&self, w: &OmegaElement) -> Result<OmegaElement> {
        let cols = self.d_columns(w.degree)?;
        let mut out = SparseVec::new();
        for (i, c) in w.coeffs.iter() {
            out = out.axpy(c, &cols[*i]);
        }
        Ok(OmegaElement {
            degree: w.degree + 1,
            coeffs: out,
        })
    }

    fn image(&self, k: usize) -> Result<Echelon> {
        let mut ech = Echelon::new(PivotSide::Low);
        if k == 0 {
            return Ok(ech);
        }
        for c in self.d_columns(k - 1)? {
            ech.insert(&c);
        }
        Ok(ech)
    }

    /// Whether a closed form is exact.
    pub fn is_exact(&self, w: &OmegaElement) -> Result<bool> {
        Ok(self.image(w.degree)?.contains(&w.coeffs))
    }

    /// Hᵏ from two exact ranks; representatives when Ωᵏ has at most
    /// `rep_limit` coordinates.
    pub fn cohomology(&self, k: usize, rep_limit: usize) -> Result<Cohomology> {
        let dim_forms = self.dim(k)?;
        let img = self.image(k)?;
        let rank_in = img.rank();
        let out_cols = self.d_columns(k)?;
        let mut out_ech = Echelon::new(PivotSide::Low);
        for c in &out_cols {
            out_ech.insert(c);
        }
        let rank_out = out_ech.rank();
        let dim = dim_forms - rank_out - rank_in;
        let representatives = if dim_forms <= rep_limit {
            let target = self.dim(k + 1)?;
            let mut mat = crate::linalg::QMatrix::zeros(target, dim_forms);
            for (j, c) in out_cols.iter().enumerate() {
                for (i, x) in c.iter() {
                    mat.set(*i, j, x.clone());
                }
            }
            let mut ech = img.clone();
            let mut reps = Vec::new();
            for v in mat.kernel_basis() {
                let sv = SparseVec::from_dense(&v);
                if ech.insert(&sv) {
                    reps.push(sv);
                }
            }
            if reps.len() != dim {
                return Err(Error::Inconsistent("cohomology representatives".into()));
            }
            Some(reps)
        } else {
            None
        };
        Ok(Cohomology {
            degree: k,
            dim,
            dim_forms,
            rank_in,
            rank_out,
            representatives,
        })
    }

    /// θ as a form on G.
    pub fn theta(&self) -> Result<OmegaElement> {
        self.invariant(&self.alg.theta())
    }

    /// Connection with constant coefficients φᵃ given on the class.
    pub fn constant_connection(&self, phi: &[Rat]) -> Result<Connection> {
        let m = self.alg.cm().len();
        if phi.len() != m {
            return Err(Error::SizeMismatch(phi.len(), m));
        }
        let mut pairs = Vec::new();
        for g in 0..self.group.order() {
            for (a, x) in phi.iter().enumerate() {
                pairs.push((g * m + a, x - &Rat::one()));
            }
        }
        Ok(Connection {
            alpha: OmegaElement {
                degree: 1,
                coeffs: SparseVec::from_pairs(pairs),
            },
        })
    }

    /// φ = α + θ.
    pub fn phi(&self, c: &Connection) -> Result<OmegaElement> {
        Ok(c.alpha.add(&self.theta()?))
    }

    /// F = dα + α², checked against φ².
    pub fn curvature(&self, c: &Connection) -> Result<OmegaElement> {
        let f = self.d(&c.alpha)?.add(&self.product(&c.alpha, &c.alpha)?);
        let phi = self.phi(c)?;
        if self.product(&phi, &phi)? != f {
            return Err(Error::Inconsistent("dα + α² differs from φ²".into()));
        }
        Ok(f)
    }

    /// α ↦ uαu⁻¹ + u du⁻¹ for a nowhere-vanishing function u.
    pub fn gauge_transform(&self, c: &Connection, u: &[Rat]) -> Result<Connection> {
        if let Some(g) = u.iter().position(|x| x.is_zero()) {
            return Err(Error::NotInvertible(g));
        }
        let uf = self.function(u)?;
        let inv: Vec<Rat> = u.iter().map(|x| x.recip()).collect();
        let uinv = self.function(&inv)?;
        let conj = self.product(&self.product(&uf, &c.alpha)?, &uinv)?;
        let shift = self.product(&uf, &self.d(&uinv)?)?;
        Ok(Connection {
            alpha: conj.add(&shift),
        })
    }

    /// Number of a ∈ C whose component φᵃ is not identically zero.
    pub fn cardinality(&self, c: &Connection) -> Result<usize> {
        let m = self.alg.cm().len();
        let phi = self.phi(c)?;
        let mut support = vec![false; m];
        for (i, _) in phi.coeffs.iter() {
            support[i % m] = true;
        }
        Ok(support.iter().filter(|&&s| s).count())
    }

    /// Pointwise product of a 0-form with any form.
    pub fn scale_by_function(&self, f: &[Rat], w: &OmegaElement) -> Result<OmegaElement> {
        self.product(&self.function(f)?, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(n: usize, t: &str, deg: usize) -> GradedAlgebra {
        let mut a = GradedAlgebra::exterior(n, t, Flavor::Quadratic).unwrap();
        a.ensure_degree(deg).unwrap();
        a
    }

    fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
        Rat::new(rng.gen_range(-5..=5), rng.gen_range(1..=4))
    }

    fn rand_form(dr: &DeRham, k: usize, rng: &mut ChaCha8Rng) -> OmegaElement {
        let dim = dr.dim(k).unwrap();
        let v: Vec<Rat> = (0..dim).map(|_| rand_rat(rng)).collect();
        OmegaElement {
            degree: k,
            coeffs: SparseVec::from_dense(&v),
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for (n, t) in [(3, "2"), (3, "3"), (4, "2")] {
            let a = alg(n, t, 3);
            let dr = DeRham::new(&a).unwrap();
            for k in 0..=1 {
                let cols = dr.d_columns(k).unwrap();
                let next = dr.d_columns(k + 1).unwrap();
                for c in cols {
                    let mut acc = SparseVec::new();
                    for (i, x) in c.iter() {
                        acc = acc.axpy(x, &next[*i]);
                    }
                    assert!(acc.is_zero(), "N={n} class {t} degree {k}");
                }
            }
        }
    }

    #[test]
    fn constants_and_theta() {
        let a = alg(4, "2", 2);
        let dr = DeRham::new(&a).unwrap();
        let one = dr.function(&vec![Rat::one(); 24]).unwrap();
        assert!(dr.d(&one).unwrap().is_zero());
        let th = dr.theta().unwrap();
        assert!(dr.d(&th).unwrap().is_zero());
        assert!(dr.product(&th, &th).unwrap().is_zero());
        assert!(!dr.is_exact(&th).unwrap());
    }

    #[test]
    fn leibniz_samples() {
        let a = alg(3, "2", 4);
        let dr = DeRham::new(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..3 {
            let f: Vec<Rat> = (0..6).map(|_| rand_rat(&mut rng)).collect();
            let w = rand_form(&dr, k, &mut rng);
            let fw = dr.scale_by_function(&f, &w).unwrap();
            let lhs = dr.d(&fw).unwrap();
            let fo = dr.function(&f).unwrap();
            let rhs = dr
                .product(&dr.d(&fo).unwrap(), &w)
                .unwrap()
                .add(&dr.product(&fo, &dr.d(&w).unwrap()).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn s3_cohomology_profile() {
        let a = alg(3, "2", 5);
        let dr = DeRham::new(&a).unwrap();
        let dims: Vec<usize> = (0..=4).map(|k| dr.cohomology(k, 64).unwrap().dim).collect();
        assert_eq!(dims, vec![1, 1, 0, 1, 1]);
    }

    #[test]
    fn curvature_formulas_agree() {
        let a = alg(3, "2", 2);
        let dr = DeRham::new(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let alpha = rand_form(&dr, 1, &mut rng);
            dr.curvature(&Connection { alpha }).unwrap();
        }
        let zero = Connection {
            alpha: OmegaElement::zero(1),
        };
        assert!(dr.curvature(&zero).unwrap().is_zero());
        let minus = dr.constant_connection(&[Rat::zero(), Rat::zero(), Rat::zero()]).unwrap();
        assert!(dr.curvature(&minus).unwrap().is_zero());
        assert_eq!(dr.cardinality(&minus).unwrap(), 0);
        assert_eq!(dr.cardinality(&zero).unwrap(), 3);
        let single = dr.constant_connection(&[Rat::one(), Rat::zero(), Rat::zero()]).unwrap();
        assert_eq!(dr.cardinality(&single).unwrap(), 1);
    }

    #[test]
    fn gauge_covariance() {
        let a = alg(3, "2", 2);
        let dr = DeRham::new(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let alpha = rand_form(&dr, 1, &mut rng);
        let c = Connection { alpha };
        let u: Vec<Rat> = (0..6)
            .map(|_| {
                let x = rand_rat(&mut rng);
                if x.is_zero() {
                    Rat::one()
                } else {
                    x
                }
            })
            .collect();
        let cu = dr.gauge_transform(&c, &u).unwrap();
        let uinv: Vec<Rat> = u.iter().map(|x| x.recip()).collect();
        let f = dr.curvature(&c).unwrap();
        let fu = dr.curvature(&cu).unwrap();
        let conj = dr
            .product(&dr.product(&dr.function(&u).unwrap(), &f).unwrap(), &dr.function(&uinv).unwrap())
            .unwrap();
        assert_eq!(fu, conj);
        assert_eq!(dr.cardinality(&cu).unwrap(), dr.cardinality(&c).unwrap());
        // φᵃ ↦ (u / R_a u) φᵃ
        let phi = dr.phi(&c).unwrap().coeffs.to_dense(18);
        let phiu = dr.phi(&cu).unwrap().coeffs.to_dense(18);
        for g in 0..6 {
            for a_ in 0..3 {
                let ga = dr.right_neighbor(g, a_);
                assert_eq!(phiu[g * 3 + a_], &(&u[g] / &u[ga]) * &phi[g * 3 + a_]);
            }
        }
        assert_eq!(dr.gauge_transform(&c, &vec![Rat::one(); 6]).unwrap(), c);
        let mut bad = u.clone();
        bad[2] = Rat::zero();
        assert_eq!(dr.gauge_transform(&c, &bad).unwrap_err(), Error::NotInvertible(2));
    }

    #[test]
    fn theta_i_connections_are_flat() {
        let a = alg(4, "2", 2);
        let dr = DeRham::new(&a).unwrap();
        for i in 1..=4 {
            let ti = a.theta_i(i).unwrap();
            let alpha = dr.invariant(&ti.neg()).unwrap();
            assert!(dr.curvature(&Connection { alpha }).unwrap().is_zero());
        }
    }
}
