//! Invariant metrics on the class, the rack bracket, and the Hodge star on S_3.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Flavor, GradedAlgebra};
use crate::crossed::CrossedModule;
use crate::error::{Error, Result};
use crate::linalg::{is_prime_u64, QMatrix, Rat, SparseVec, CERT_PRIME};
use crate::perm::{generates_group, Perm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    Killing,
    General { alpha: Rat, beta: Rat, gamma: Rat },
    Kronecker,
}

/// A bilinear form on the span of the class, indexed by class positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metric {
    pub kind: MetricKind,
    pub matrix: QMatrix,
}

impl Metric {
    pub fn is_symmetric(&self) -> bool {
        self.matrix.is_symmetric()
    }

    /// η^{gag⁻¹,gbg⁻¹} = η^{a,b}; checking the generators (12) and (12…N) suffices.
    pub fn is_invariant(&self, cm: &CrossedModule) -> bool {
        let m = cm.len();
        let n = cm.n();
        let mut gens = vec![Perm::transposition(n, 0, 1)];
        if n > 2 {
            let long: Vec<usize> = (1..=n).collect();
            gens.push(Perm::from_cycles(n, &[&long]).expect("cycle"));
        }
        gens.iter().all(|g| {
            let p: Vec<usize> = (0..m)
                .map(|a| cm.index_of(&g.conj(cm.element(a))).unwrap())
                .collect();
            (0..m).all(|a| (0..m).all(|b| self.matrix.get(p[a], p[b]) == self.matrix.get(a, b)))
        })
    }
}

fn commuting_count(cm: &CrossedModule, a: usize, b: usize) -> i64 {
    let ab = cm.element(a).mul(cm.element(b));
    (0..cm.len())
        .filter(|&c| {
            let c = cm.element(c);
            c.mul(&ab) == ab.mul(c)
        })
        .count() as i64
}

/// η^{a,b} = #{c ∈ C : cab = abc}, counted for every pair.
pub fn killing_form_direct(cm: &CrossedModule) -> Metric {
    let m = cm.len();
    let rows = (0..m)
        .map(|a| (0..m).map(|b| commuting_count(cm, a, b)).collect())
        .collect::<Vec<Vec<i64>>>();
    Metric {
        kind: MetricKind::Killing,
        matrix: QMatrix::from_int_rows(&rows),
    }
}

/// Some g with g·x·g⁻¹ = y, for x and y of equal cycle type.
pub fn transporter(x: &Perm, y: &Perm) -> Result<Perm> {
    if x.cycle_type() != y.cycle_type() {
        return Err(Error::Inconsistent("different cycle types".into()));
    }
    let sorted = |p: &Perm| {
        let mut c = p.cycles();
        c.sort_by_key(|c| c.len());
        c
    };
    let mut images = vec![0usize; x.n()];
    for (cx, cy) in sorted(x).iter().zip(sorted(y).iter()) {
        for (i, j) in cx.iter().zip(cy.iter()) {
            images[*i] = *j + 1;
        }
    }
    Perm::from_images(&images)
}

/// Killing form from one computed row, filled in by Ad-invariance.
pub fn killing_form(cm: &CrossedModule) -> Metric {
    let m = cm.len();
    let row0: Vec<i64> = (0..m).map(|b| commuting_count(cm, 0, b)).collect();
    let a0 = cm.element(0);
    let mut rows = vec![vec![0i64; m]; m];
    for (a, row) in rows.iter_mut().enumerate() {
        let g = transporter(a0, cm.element(a)).expect("same class");
        let ginv = g.inverse();
        for (b, x) in row.iter_mut().enumerate() {
            *x = row0[cm.index_of(&ginv.conj(cm.element(b))).unwrap()];
        }
    }
    Metric {
        kind: MetricKind::Killing,
        matrix: QMatrix::from_int_rows(&rows),
    }
}

fn choose2(k: i64) -> i64 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

/// Closed-form values (diagonal, disjoint, overlapping) of the Killing form on 2-cycles.
pub fn killing_closed_form(n: usize) -> (i64, i64, i64) {
    let n = n as i64;
    (choose2(n), choose2(n - 4) + 2, choose2(n - 3))
}

/// The metric on the 2-cycles of S_N with the three invariant values.
pub fn general_metric(cm: &CrossedModule, alpha: &Rat, beta: &Rat, gamma: &Rat) -> Result<Metric> {
    if !cm.is_transpositions() {
        return Err(Error::NotTranspositions);
    }
    let m = cm.len();
    let mut mat = QMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            let x = if a == b {
                alpha
            } else if cm.element(a).mul(cm.element(b)) == cm.element(b).mul(cm.element(a)) {
                beta
            } else {
                gamma
            };
            mat.set(a, b, x.clone());
        }
    }
    Ok(Metric {
        kind: MetricKind::General {
            alpha: alpha.clone(),
            beta: beta.clone(),
            gamma: gamma.clone(),
        },
        matrix: mat,
    })
}

/// η^{a,b} = δ_{a,b⁻¹}; needs a class closed under inversion.
pub fn kronecker_metric(cm: &CrossedModule) -> Result<Metric> {
    let m = cm.len();
    let mut mat = QMatrix::zeros(m, m);
    for a in 0..m {
        let b = cm
            .index_of(&cm.element(a).inverse())
            .ok_or_else(|| Error::Unsupported("class not closed under inversion".into()))?;
        mat.set(a, b, Rat::one());
    }
    Ok(Metric {
        kind: MetricKind::Kronecker,
        matrix: mat,
    })
}

/// (α+β−2γ)^{N(N−3)/2} (α−(N−3)β+(N−4)γ)^{N−1} (α+(N−2)(N−3)/2·β+2(N−2)γ).
pub fn metric_det_formula(n: usize, alpha: &Rat, beta: &Rat, gamma: &Rat) -> Rat {
    let ni = n as i64;
    let f1 = alpha + beta - &(gamma * &Rat::from_int(2));
    let f2 = alpha - &(beta * &Rat::from_int(ni - 3)) + gamma * &Rat::from_int(ni - 4);
    let f3 = alpha
        + &(beta * &Rat::from_int((ni - 2) * (ni - 3) / 2))
        + gamma * &Rat::from_int(2 * (ni - 2));
    // for N = 2 the first two factors coincide and their exponents cancel
    let front = if n == 2 {
        Rat::one()
    } else {
        f1.pow(ni * (ni - 3) / 2) * f2.pow(ni - 1)
    };
    front * f3
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricDetSample {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub det_direct: Rat,
    pub det_formula: Rat,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricDetReport {
    pub n: usize,
    pub seed: u64,
    pub samples: Vec<MetricDetSample>,
    pub all_agree: bool,
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.gen_range(-20..=20), rng.gen_range(1..=9))
}

pub fn metric_det_sample(cm: &CrossedModule, alpha: &Rat, beta: &Rat, gamma: &Rat) -> Result<MetricDetSample> {
    let det_direct = general_metric(cm, alpha, beta, gamma)?.matrix.determinant()?;
    let det_formula = metric_det_formula(cm.n(), alpha, beta, gamma);
    Ok(MetricDetSample {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
        agree: det_direct == det_formula,
        det_direct,
        det_formula,
    })
}

/// Exact determinants of the general metric at seeded random rational points.
pub fn general_metric_det_check(n: usize, samples: usize, seed: u64) -> Result<MetricDetReport> {
    if !(2..=10).contains(&n) {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            range: "2..=10".into(),
        });
    }
    let cm = CrossedModule::from_class_str(n, "2", false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (a, b, c) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        out.push(metric_det_sample(&cm, &a, &b, &c)?);
    }
    Ok(MetricDetReport {
        n,
        seed,
        all_agree: out.iter().all(|s| s.agree),
        samples: out,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetCertificate {
    Exact { det: Rat },
    Modular { prime: u64, residue: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KillingCertificate {
    pub n: usize,
    pub size: usize,
    pub certificate: DetCertificate,
    /// The determinant agrees with the closed-form product evaluated at the Killing values.
    pub matches_formula: bool,
    pub invertible: bool,
}

/// Nonzero determinant of the Killing form on 2-cycles: exact up to N = 10,
/// modulo 62-bit primes beyond.
pub fn killing_invertibility(n: usize) -> Result<KillingCertificate> {
    if !(2..30).contains(&n) {
        return Err(Error::OutOfRange {
            what: "N",
            value: n,
            range: "2..30".into(),
        });
    }
    let cm = CrossedModule::from_class_str(n, "2", false)?;
    let eta = killing_form(&cm).matrix;
    let (al, be, ga) = killing_closed_form(n);
    let formula = metric_det_formula(n, &Rat::from_int(al), &Rat::from_int(be), &Rat::from_int(ga));
    if n <= 10 {
        let det = eta.determinant()?;
        return Ok(KillingCertificate {
            n,
            size: cm.len(),
            matches_formula: det == formula,
            invertible: !det.is_zero(),
            certificate: DetCertificate::Exact { det },
        });
    }
    let formula_mod = |p: u64| -> u64 {
        let r = formula.numer() % num_bigint::BigInt::from(p);
        let r = if r.sign() == num_bigint::Sign::Minus { r + p } else { r };
        r.try_into().unwrap()
    };
    let mut p = CERT_PRIME;
    let mut last = (p, 0);
    for _ in 0..4 {
        let residue = eta.det_mod_p(p)?;
        last = (p, residue);
        if residue != 0 {
            return Ok(KillingCertificate {
                n,
                size: cm.len(),
                matches_formula: residue == formula_mod(p),
                invertible: true,
                certificate: DetCertificate::Modular { prime: p, residue },
            });
        }
        p -= 2;
        while !is_prime_u64(p) {
            p -= 2;
        }
    }
    Ok(KillingCertificate {
        n,
        size: cm.len(),
        matches_formula: formula_mod(last.0) == 0,
        invertible: false,
        certificate: DetCertificate::Modular {
            prime: last.0,
            residue: last.1,
        },
    })
}

/// Whether Σ η^{a,b} e_a e_b vanishes in degree 2.
pub fn wedge_vanishing(alg: &mut GradedAlgebra, eta: &Metric) -> Result<bool> {
    let m = alg.cm().len();
    if eta.matrix.rows() != m || eta.matrix.cols() != m {
        return Err(Error::SizeMismatch(eta.matrix.rows(), m));
    }
    alg.ensure_degree(2)?;
    let mut acc = alg.zero();
    for a in 0..m {
        for b in 0..m {
            let c = eta.matrix.get(a, b);
            if !c.is_zero() {
                acc = acc.axpy(c, &alg.normal_form_word(&[a as u16, b as u16])?);
            }
        }
    }
    Ok(acc.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackReport {
    pub triples: usize,
    pub jacobi: bool,
    pub envelope: bool,
    /// The class generates the whole group.
    pub connected: Option<bool>,
}

/// [x_a, x_b] = x_{b⁻¹ab}.
pub fn bracket(cm: &CrossedModule, a: usize, b: usize) -> usize {
    cm.ad_inv(b, a)
}

pub fn rack_checks(cm: &CrossedModule) -> Result<RackReport> {
    let m = cm.len();
    let mut jacobi = true;
    let mut envelope = true;
    for a in 0..m {
        for b in 0..m {
            let ba = bracket(cm, a, b);
            let lhs = cm.element(a).mul(cm.element(b));
            envelope &= lhs == cm.element(b).mul(cm.element(ba));
            for c in 0..m {
                jacobi &= bracket(cm, bracket(cm, a, c), bracket(cm, b, c)) == bracket(cm, ba, c);
            }
        }
    }
    let connected = if cm.n() <= 9 {
        Some(generates_group(cm.class(), cm.n())?)
    } else {
        None
    };
    Ok(RackReport {
        triples: m * m * m,
        jacobi,
        envelope,
        connected,
    })
}

/// Star maps Λᵐ → Λ^{d−m} from the ε tensor of a designated top word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeStar {
    pub top_degree: usize,
    pub top_word: Vec<u16>,
    pub dims: Vec<usize>,
    /// `maps[m]` has entry (i, j) = coefficient of basis_{d−m}[i] in *(basis_m[j]).
    pub maps: Vec<QMatrix>,
    /// `normalizations[m]` is d_m.
    pub normalizations: Vec<Rat>,
    pub ranks: Vec<usize>,
    /// *∘* on degree m when it is a scalar multiple of the identity.
    pub square_scalars: Vec<Option<Rat>>,
}

fn scalar_of(m: &QMatrix) -> Option<Rat> {
    let n = m.rows();
    if n == 0 {
        return Some(Rat::one());
    }
    let s = m.get(0, 0).clone();
    (m.sub(&QMatrix::identity(n).scale(&s)).ok()?.max_abs().is_zero()).then_some(s)
}

fn rational_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (p, q) = (x.numer().sqrt(), x.denom().sqrt());
    (&(&p * &p) == x.numer() && &(&q * &q) == x.denom())
        .then(|| Rat::from_bigint(p) / Rat::from_bigint(q))
}

fn all_words(m: usize, len: usize) -> Vec<Vec<u16>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m as u16).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

impl HodgeStar {
    /// *(e_{a_1}⋯e_{a_m}) = d_m⁻¹ Σ ε_{a_1…a_d} e_{a_d⁻¹}⋯e_{a_{m+1}⁻¹}, with ε read
    /// off from e_{a_1}⋯e_{a_d} = ε·Top.
    pub fn build(alg: &mut GradedAlgebra, top_word: &[u16]) -> Result<HodgeStar> {
        let d = top_word.len();
        alg.ensure_degree(d + 1)?;
        if !alg.is_exhausted() || alg.dim(d)? != 1 || alg.dim(d + 1)? != 0 {
            return Err(Error::Unsupported("needs a finite algebra with one-dimensional top".into()));
        }
        let top = alg.normal_form_word(top_word)?.component(d);
        let top_coeff = top.get(0);
        if top_coeff.is_zero() {
            return Err(Error::Inconsistent("designated top word vanishes".into()));
        }
        let cm = alg.cm().clone();
        let m = cm.len();
        let inv: Vec<u16> = (0..m)
            .map(|a| {
                cm.index_of(&cm.element(a).inverse())
                    .map(|x| x as u16)
                    .ok_or_else(|| Error::Unsupported("class not closed under inversion".into()))
            })
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = (0..=d).map(|k| alg.dim(k)).collect::<Result<_>>()?;
        let mut maps = Vec::with_capacity(d + 1);
        for deg in 0..=d {
            let src = alg.basis(deg)?.to_vec();
            let tails = all_words(m, d - deg);
            let images: Vec<SparseVec> = tails
                .iter()
                .map(|u| {
                    let w: Vec<u16> = u.iter().rev().map(|&a| inv[a as usize]).collect();
                    alg.normal_form_word(&w).map(|x| x.component(d - deg))
                })
                .collect::<Result<_>>()?;
            let mut cols = Vec::with_capacity(src.len());
            for w in &src {
                let mut col = SparseVec::new();
                for (u, img) in tails.iter().zip(&images) {
                    let mut word = w.clone();
                    word.extend_from_slice(u);
                    let eps = alg.normal_form_word(&word)?.component(d).get(0) / &top_coeff;
                    col = col.axpy(&eps, img);
                }
                cols.push(col.to_dense(dims[d - deg]));
            }
            maps.push(QMatrix::from_columns(&cols, dims[d - deg]));
        }
        let mut star = HodgeStar {
            top_degree: d,
            top_word: top_word.to_vec(),
            dims,
            maps,
            normalizations: vec![Rat::one(); d + 1],
            ranks: Vec::new(),
            square_scalars: Vec::new(),
        };
        star.refresh();
        Ok(star)
    }

    fn refresh(&mut self) {
        let d = self.top_degree;
        self.ranks = self.maps.iter().map(|m| m.rank()).collect();
        self.square_scalars = (0..=d)
            .map(|k| {
                let sq = self.maps[d - k].mul(&self.maps[k]).ok()?;
                scalar_of(&sq)
            })
            .collect();
    }

    /// Rescales by d_m so that *∘* = ±id wherever the scalar has a rational square root.
    pub fn normalized(&self) -> HodgeStar {
        let d = self.top_degree;
        let mut out = self.clone();
        for k in 0..=d {
            let Some(s) = &self.square_scalars[k] else {
                continue;
            };
            if let Some(r) = rational_sqrt(&s.abs()) {
                if r.is_zero() {
                    continue;
                }
                out.normalizations[k] = r.clone();
                out.maps[k] = self.maps[k].scale(&r.recip());
            }
        }
        out.refresh();
        out
    }

    pub fn apply(&self, degree: usize, v: &[Rat]) -> Result<Vec<Rat>> {
        self.maps
            .get(degree)
            .ok_or(Error::Position {
                pos: degree,
                degree: self.top_degree,
            })?
            .mul_vec(v)
    }
}

/// The star on Λ(S_3, 2-cycles) with Top the normal form of e_(12)e_(13)e_(12)e_(23).
pub fn hodge_star_s3() -> Result<HodgeStar> {
    let mut alg = GradedAlgebra::exterior(3, "2", Flavor::Quadratic)?;
    let cm = alg.cm().clone();
    let idx = |s: &str| -> u16 { cm.index_of(&Perm::parse_cycles(3, s).unwrap()).unwrap() as u16 };
    let top = [idx("(12)"), idx("(13)"), idx("(12)"), idx("(23)")];
    HodgeStar::build(&mut alg, &top)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(n: usize, t: &str) -> CrossedModule {
        CrossedModule::from_class_str(n, t, false).unwrap()
    }

    #[test]
    fn killing_small() {
        let k = killing_form(&cm(3, "2")).matrix;
        assert_eq!(k, QMatrix::from_int_rows(&[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]));
        assert_eq!(k.determinant().unwrap(), Rat::from_int(27));
    }

    #[test]
    fn killing_fill_matches_direct_count() {
        for (n, t) in [(3, "2"), (3, "3"), (4, "2"), (4, "2+2"), (4, "3"), (4, "4"), (5, "2"), (5, "3"), (5, "3+2"), (5, "5")] {
            let c = cm(n, t);
            let k = killing_form(&c);
            assert_eq!(k, killing_form_direct(&c), "N={n} {t}");
            assert!(k.is_symmetric() && k.is_invariant(&c));
        }
    }

    #[test]
    fn killing_closed_forms() {
        for n in 3..=8 {
            let c = cm(n, "2");
            let (al, be, ga) = killing_closed_form(n);
            let g = general_metric(&c, &Rat::from_int(al), &Rat::from_int(be), &Rat::from_int(ga)).unwrap();
            assert_eq!(killing_form(&c).matrix, g.matrix, "N={n}");
        }
    }

    #[test]
    fn killing_det_matches_formula() {
        for n in 3..=8 {
            let cert = killing_invertibility(n).unwrap();
            assert!(cert.invertible && cert.matches_formula, "N={n}");
        }
    }

    #[test]
    fn det_formula_identity_point() {
        for n in 2..=6 {
            let c = cm(n, "2");
            let s = metric_det_sample(&c, &Rat::one(), &Rat::zero(), &Rat::zero()).unwrap();
            assert!(s.agree && s.det_direct.is_one());
        }
    }

    #[test]
    fn det_formula_random() {
        for n in 2..=6 {
            assert!(general_metric_det_check(n, 3, 7).unwrap().all_agree, "N={n}");
        }
    }

    #[test]
    fn det_check_is_seeded() {
        assert_eq!(general_metric_det_check(4, 2, 1).unwrap(), general_metric_det_check(4, 2, 1).unwrap());
    }

    #[test]
    fn wedge() {
        let mut a = GradedAlgebra::exterior(4, "2", Flavor::Quadratic).unwrap();
        let k = killing_form(a.cm());
        assert!(wedge_vanishing(&mut a, &k).unwrap());
        let mut bad = k.clone();
        bad.matrix.set(0, 1, k.matrix.get(0, 1) + &Rat::one());
        bad.matrix.set(1, 0, k.matrix.get(1, 0) - &Rat::one());
        assert!(!wedge_vanishing(&mut a, &bad).unwrap());
        let mut s3 = GradedAlgebra::exterior(3, "2", Flavor::Quadratic).unwrap();
        let kr = kronecker_metric(s3.cm()).unwrap();
        assert!(wedge_vanishing(&mut s3, &kr).unwrap());
    }

    #[test]
    fn kronecker_metrics() {
        let k = kronecker_metric(&cm(4, "3")).unwrap();
        assert!(k.is_symmetric() && k.matrix.get(0, 0).is_zero());
        assert!(kronecker_metric(&cm(4, "4")).unwrap().is_invariant(&cm(4, "4")));
    }

    #[test]
    fn racks() {
        let r = rack_checks(&cm(4, "2")).unwrap();
        assert!(r.jacobi && r.envelope && r.triples == 216);
        assert_eq!(r.connected, Some(true));
        for t in ["2", "2+2", "3", "3+2", "4", "5"] {
            let r = rack_checks(&cm(5, t)).unwrap();
            assert!(r.jacobi && r.envelope, "{t}");
        }
        assert_eq!(rack_checks(&cm(4, "2+2")).unwrap().connected, Some(false));
    }

    #[test]
    fn transporters() {
        let c = cm(5, "3+2");
        for a in 0..c.len() {
            let g = transporter(c.element(0), c.element(a)).unwrap();
            assert_eq!(&g.conj(c.element(0)), c.element(a));
        }
    }

    #[test]
    fn hodge_s3() {
        let h = hodge_star_s3().unwrap();
        assert_eq!(h.dims, vec![1, 3, 4, 3, 1]);
        assert_eq!(h.ranks, vec![1, 3, 4, 3, 1]);
        // *(1) is a multiple of Top
        assert_eq!(h.maps[0].get(0, 0), &Rat::from_int(-12));
        let sq = |v: &[i64]| v.iter().map(|&x| Some(Rat::from_int(x))).collect::<Vec<_>>();
        assert_eq!(h.square_scalars, sq(&[-12, -4, -3, -4, -12]));
        let n = h.normalized();
        assert_eq!(n.square_scalars, sq(&[-12, -1, -3, -1, -12]));
        assert_eq!(n.normalizations[1], Rat::from_int(2));
    }
}
