use super::*;
use crate::algebra::Flavor;

fn e(n: usize) -> BraidedGroup {
    BraidedGroup::fomin_kirillov(n).unwrap()
}

fn lam(n: usize) -> BraidedGroup {
    BraidedGroup::new(GradedAlgebra::exterior(n, "2", Flavor::Quadratic).unwrap())
}

/// All basis slots of degrees 0..=max.
fn slots(g: &mut BraidedGroup, max: usize) -> Vec<Slot> {
    g.ensure(max).unwrap();
    (0..=max)
        .flat_map(|n| (0..g.algebra().dim(n).unwrap()).map(move |j| (n, j)))
        .collect()
}

fn every_other(v: Vec<Slot>, step: usize) -> Vec<Slot> {
    v.into_iter().step_by(step).collect()
}

#[test]
fn coproduct_on_generators() {
    for mut g in [e(3), lam(3)] {
        let one = g.algebra().one();
        assert_eq!(g.coproduct(&one).unwrap(), Tensor2::unit());
        for a in 0..3 {
            let x = g.algebra().generator(a);
            let want = Tensor2::from_pair(&x, &one);
            let mut want = want;
            want.add_scaled(&Rat::one(), &Tensor2::from_pair(&one, &x));
            assert_eq!(g.coproduct(&x).unwrap(), want);
        }
    }
}

#[test]
fn coproduct_degree_two() {
    for mut g in [e(3), e(4), lam(3), lam(4)] {
        g.ensure(2).unwrap();
        let m = g.algebra().cm().len();
        let s = Rat::from_int(g.s() as i64);
        let one = g.algebra().one();
        for a in 0..m {
            for b in 0..m {
                let alg = g.algebra();
                let ab = alg.normal_form_word(&[a as u16, b as u16]).unwrap();
                let mut want = Tensor2::from_pair(&ab, &one);
                want.add_scaled(&Rat::one(), &Tensor2::from_pair(&one, &ab));
                want.add_scaled(&Rat::one(), &Tensor2::from_pair(&alg.generator(a), &alg.generator(b)));
                let (z, (c, d)) = alg.cm().braid_pair(a, b);
                let coeff = &s * &Rat::from_int(z as i64);
                want.add_scaled(&coeff, &Tensor2::from_pair(&alg.generator(c), &alg.generator(d)));
                assert_eq!(g.coproduct(&ab).unwrap(), want, "a={a} b={b}");
            }
        }
    }
}

#[test]
fn coassociative() {
    let mut g = e(3);
    for sl in slots(&mut g, 4) {
        let x = g.element(sl);
        let (l, r) = g.coassociativity(&x).unwrap();
        assert_eq!(l, r, "{sl:?}");
    }
    let mut g = e(4);
    for sl in every_other(slots(&mut g, 3), 3) {
        let x = g.element(sl);
        let (l, r) = g.coassociativity(&x).unwrap();
        assert_eq!(l, r, "{sl:?}");
    }
    let mut g = lam(3);
    for sl in slots(&mut g, 4) {
        let (l, r) = g.coassociativity(&g.element(sl)).unwrap();
        assert_eq!(l, r);
    }
}

#[test]
fn coproduct_is_multiplicative() {
    for mut g in [e(3), lam(3)] {
        let all = slots(&mut g, 4);
        for &x in &all {
            for &y in &all {
                if x.0 + y.0 > 4 {
                    continue;
                }
                let (ex, ey) = (g.element(x), g.element(y));
                let xy = g.algebra().multiply(&ex, &ey).unwrap();
                let lhs = g.coproduct(&xy).unwrap();
                let (dx, dy) = (g.coproduct(&ex).unwrap(), g.coproduct(&ey).unwrap());
                assert_eq!(lhs, g.tensor_mul(&dx, &dy).unwrap(), "{x:?} {y:?}");
            }
        }
    }
}

#[test]
fn derivatives_of_generators() {
    for mut g in [e(3), e(4), lam(3)] {
        let m = g.algebra().cm().len();
        let one = g.algebra().one();
        for a in 0..m {
            assert!(g.derivative(a, &one, false).unwrap().is_zero());
            for b in 0..m {
                let x = g.algebra().generator(b);
                let want = if a == b { g.algebra().one() } else { g.algebra().zero() };
                assert_eq!(g.derivative(a, &x, false).unwrap(), want);
                assert_eq!(g.derivative(a, &x, true).unwrap(), want);
            }
        }
    }
}

#[test]
fn derivative_two_routes() {
    for (mut g, max, step) in [(e(3), 4, 1), (e(4), 3, 2), (lam(3), 4, 1), (lam(4), 3, 3)] {
        let m = g.algebra().cm().len();
        for sl in every_other(slots(&mut g, max), step) {
            let x = g.element(sl);
            for a in 0..m {
                assert_eq!(
                    g.derivative(a, &x, false).unwrap(),
                    g.derivative_from_coproduct(a, &x).unwrap(),
                    "{sl:?} a={a}"
                );
            }
        }
    }
}

fn check_leibniz(g: &mut BraidedGroup, max: usize, step: usize) {
    let all = every_other(slots(g, max), step);
    let pairs: Vec<(Slot, Slot)> = all
        .iter()
        .flat_map(|&x| all.iter().map(move |&y| (x, y)))
        .filter(|(x, y)| x.0 + y.0 <= max)
        .collect();
    let r = g.leibniz_check(&pairs).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
}

#[test]
fn leibniz_e3() {
    check_leibniz(&mut e(3), 4, 1);
}

#[test]
fn leibniz_e4() {
    check_leibniz(&mut e(4), 3, 4);
}

#[test]
fn leibniz_super() {
    check_leibniz(&mut lam(3), 4, 1);
}

#[test]
fn antipode_intertwines_derivatives() {
    for mut g in [e(3), lam(3)] {
        let m = g.algebra().cm().len();
        for sl in slots(&mut g, 4) {
            let x = g.element(sl);
            let sx = g.antipode(&x).unwrap();
            for a in 0..m {
                let dx = g.derivative(a, &x, false).unwrap();
                let lhs = g.antipode(&dx).unwrap();
                let rhs = g.derivative(a, &sx, true).unwrap().neg();
                assert_eq!(lhs, rhs, "{sl:?} a={a}");
            }
        }
    }
}

#[test]
fn antipode_basics() {
    let mut g = e(3);
    let one = g.algebra().one();
    assert_eq!(g.antipode(&one).unwrap(), one);
    for a in 0..3 {
        let x = g.algebra().generator(a);
        assert_eq!(g.antipode(&x).unwrap(), x.neg());
    }
}

#[test]
fn antipode_convolution() {
    for (mut g, max, step) in [(e(3), 4, 1), (e(4), 3, 3), (lam(3), 4, 1)] {
        for sl in every_other(slots(&mut g, max), step) {
            let x = g.element(sl);
            let want = g.algebra().one().scale(&g.counit(&x));
            let (l, r) = g.convolutions(&x).unwrap();
            assert_eq!(l, want, "{sl:?}");
            assert_eq!(r, want, "{sl:?}");
        }
    }
}

#[test]
fn adjoint_action() {
    let mut g = e(3);
    let one = g.algebra().one();
    for a in 0..3 {
        assert!(g.adjoint(a, &one).unwrap().is_zero());
        let ea = g.algebra().generator(a);
        assert!(g.adjoint(a, &ea).unwrap().is_zero());
    }
    for mut g in [e(3), lam(3)] {
        let s = g.s();
        let all = slots(&mut g, 4);
        for &x in &all {
            for &y in &all {
                if x.0 + y.0 > 3 {
                    continue;
                }
                let (f, h) = (g.element(x), g.element(y));
                let fh = g.algebra().multiply(&f, &h).unwrap();
                for a in 0..3 {
                    let lhs = g.adjoint(a, &fh).unwrap();
                    let af = g.algebra().act(g.algebra().cm().element(a), &f).unwrap();
                    let d_t1 = g.adjoint(a, &f).unwrap();
                    let t1 = g.algebra().multiply(&d_t1, &h).unwrap();
                    let d_t2 = g.adjoint(a, &h).unwrap();
                    let t2 = g.algebra().multiply(&af, &d_t2).unwrap();
                    assert_eq!(lhs, t1.axpy(&sign_pow(s, x.0), &t2), "{x:?} {y:?} a={a}");
                }
            }
        }
    }
}

#[test]
fn pairing_basics() {
    let mut g = e(3);
    for a in 0..3 {
        for b in 0..3 {
            let (x, y) = (g.algebra().generator(a), g.algebra().generator(b));
            let want = if a == b { Rat::one() } else { Rat::zero() };
            assert_eq!(g.pairing(&x, &y).unwrap(), want);
        }
    }
    g.ensure(2).unwrap();
    let x = g.algebra().generator(0);
    let y = g.algebra().basis_element(2, 0);
    assert!(g.pairing(&x, &y).unwrap().is_zero());
    assert_eq!(g.gram(2).unwrap().rank(), 4);
    for n in 0..=4 {
        let gr = g.gram(n).unwrap().clone();
        assert_eq!(gr.rank(), gr.rows(), "degree {n}");
        assert!(gr.is_symmetric(), "degree {n}");
    }
}

#[test]
fn pairing_is_well_defined_on_words() {
    for mut g in [e(3), e(4), lam(3)] {
        g.ensure(3).unwrap();
        let m = g.algebra().cm().len() as u16;
        let words: Vec<Vec<u16>> = (0..m)
            .flat_map(|a| (0..m).flat_map(move |b| (0..m).map(move |c| vec![a, b, c])))
            .step_by(5)
            .collect();
        for u in &words {
            for v in &words {
                let x = g.algebra().normal_form_word(u).unwrap();
                let y = g.algebra().normal_form_word(v).unwrap();
                assert_eq!(g.pair_words(u, v).unwrap(), g.pairing(&x, &y).unwrap(), "{u:?} {v:?}");
            }
        }
    }
}

#[test]
fn coevaluation_reproduces() {
    let mut g = e(3);
    let exp = g.coevaluation(4).unwrap();
    for sl in slots(&mut g, 4) {
        let f = g.element(sl);
        let mut acc = g.algebra().zero();
        for (&(l, r), c) in exp.terms() {
            let p = g.pairing(&f, &g.element(l)).unwrap();
            acc = acc.axpy(&(&p * c), &g.element(r));
        }
        assert_eq!(acc, f, "{sl:?}");
    }
}

#[test]
fn fourier_table() {
    let mut f = fourier_e3().unwrap();
    let rows = fourier_e3_table(&mut f).unwrap();
    for row in &rows[1..] {
        assert!(row.matches, "{row:?}");
    }
    // 𝒮(1) = ⟨Top,Top⟩⁻¹ Top, and the pairing forces ⟨Top,Top⟩ = −1
    let top = expr::eval(&mut f.group.alg, "[12][23][12][31]").unwrap();
    let one = f.group.algebra().one();
    assert_eq!(f.transform(&one).unwrap(), top.scale(&-Rat::one()));
    assert!(!rows[0].matches);
}

#[test]
fn fourier_exp_display() {
    let mut f = fourier_e3().unwrap();
    let printed = e3_exp_display(&mut f).unwrap();
    let top = expr::eval(&mut f.group.alg, "[12][23][12][31]").unwrap();
    let mut diff = printed;
    diff.add_scaled(&-Rat::one(), &f.exp);
    let mut want = Tensor2::from_pair(&top, &top);
    want.add_scaled(&Rat::one(), &Tensor2::from_pair(&top, &top));
    assert_eq!(diff, want);
    let r = fourier_e3_report(&mut f).unwrap();
    assert_eq!(r.exp_agrees, vec![0, 1, 2, 3]);
}

#[test]
fn fourier_degree_two_dual_basis() {
    let mut f = fourier_e3().unwrap();
    let basis = ["[12][23]", "[23][12]", "[23][31]", "[31][23]"];
    let dual = ["-[12][31]", "[12][23]", "[31][23]", "-[31][12]"];
    for (i, b) in basis.iter().enumerate() {
        let x = expr::eval(&mut f.group.alg, b).unwrap();
        for (j, d) in dual.iter().enumerate() {
            let y = expr::eval(&mut f.group.alg, d).unwrap();
            let want = if i == j { Rat::one() } else { Rat::zero() };
            assert_eq!(f.group.pairing(&y, &x).unwrap(), want, "{d} {b}");
        }
    }
}

#[test]
fn fourier_powers() {
    let mut f = fourier_e3().unwrap();
    let r = fourier_e3_report(&mut f).unwrap();
    let minus = Some(-Rat::one());
    assert_eq!(r.degrees[1].square_scalar, minus);
    assert_eq!(r.degrees[3].square_scalar, minus);
    assert!(r.degrees[2].cube_is_identity);
    for n in 1..=3 {
        assert!(r.degrees[n].square_is_t, "degree {n}");
    }
    // the sign of ⟨Top,Top⟩ reaches 𝒮² through both ends
    assert_eq!(r.top_pairing, -Rat::one());
    assert_eq!(r.degrees[0].square_scalar, minus);
    assert_eq!(r.degrees[4].square_scalar, minus);
    assert!(!r.degrees[0].square_is_t);
}

#[test]
fn fourier_degree_two_is_minus_antipode() {
    let mut f = fourier_e3().unwrap();
    for j in 0..4 {
        let x = f.group.element((2, j));
        let s = f.transform(&x).unwrap();
        assert_eq!(s, f.group.antipode(&x).unwrap().scale(&-Rat::one()));
        let t = f.group.degree_operator(&s).unwrap();
        assert_eq!(t, x);
    }
}

#[test]
fn pairing_matches_coproduct() {
    // ⟨xy, z⟩ = Σ ⟨y, z₁⟩⟨x, z₂⟩, inner factors paired first
    for mut g in [e(3), lam(3)] {
        let all = slots(&mut g, 4);
        let mut checked = 0;
        for &x in &all {
            for &y in &all {
                for &z in &all {
                    if x.0 + y.0 != z.0 || x.0 == 0 || y.0 == 0 {
                        continue;
                    }
                    let (ex, ey, ez) = (g.element(x), g.element(y), g.element(z));
                    let xy = g.algebra().multiply(&ex, &ey).unwrap();
                    let lhs = g.pairing(&xy, &ez).unwrap();
                    let mut rhs = Rat::zero();
                    for (&(l, r), c) in g.coproduct(&ez).unwrap().terms() {
                        let (el, er) = (g.element(l), g.element(r));
                        rhs += c * g.pairing(&ey, &el).unwrap() * g.pairing(&ex, &er).unwrap();
                    }
                    assert_eq!(lhs, rhs, "{x:?} {y:?} {z:?}");
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, 142);
    }
}

#[test]
fn divided_differences_e3() {
    let mut g = e(3);
    let r = divided_difference_check(&mut g, &monomials(3, 3)).unwrap();
    assert!(r.all_ok, "{:?}", r.cases.iter().filter(|c| !c.ok).collect::<Vec<_>>());
}

#[test]
fn divided_differences_e4() {
    let mut g = e(4);
    let mut samples = monomials(4, 2);
    let x = |i| Poly::var(4, i);
    samples.push(x(0).mul(&x(1)).mul(&x(2)));
    samples.push(x(0).mul(&x(0)).mul(&x(1)).sub(&x(3).scale(&Rat::new(1, 2))));
    let r = divided_difference_check(&mut g, &samples).unwrap();
    assert!(r.all_ok, "{:?}", r.cases.iter().filter(|c| !c.ok).collect::<Vec<_>>());
}
