use super::*;
use crate::exact::Mat2;

fn pair_f(t1: [[f64; 2]; 2], t2: [[f64; 2]; 2]) -> PairF {
    Pair::new(Mat2(t1), Mat2(t2))
}

fn id2() -> Mat2f {
    [[1.0, 0.0], [0.0, 1.0]]
}

fn id4() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

fn random_g(rng: &mut ChaCha8Rng) -> Mat8 {
    let mut g = ident8();
    let ids = [1, 2, 3, 4, -4, -3, -2, -1];
    for _ in 0..10 {
        let i = ids[rng.gen_range(0..8)];
        let j = ids[rng.gen_range(0..8)];
        if i == j || i == -j {
            continue;
        }
        g = mul8(&g, &wedge_exp(&bvec(i), &bvec(j), rng.gen_range(-0.8..0.8)));
    }
    g
}

fn theta() -> Mat8 {
    let c = on_basis();
    let mut d = ident8();
    for i in 4..8 {
        d[i][i] = -1.0;
    }
    mul8(&c, &mul8(&d, &transpose8(&c)))
}

#[test]
fn beta_at_identity() {
    for &(m, n, r) in &[(1.0, 1.0, 0.0), (2.0, 3.0, 1.0), (0.0, 5.0, -2.0)] {
        let b = pair_f(id2(), [[0.0, -m], [n, r]]);
        let z = beta(&b, &ident8()).unwrap();
        assert!((z - C64::new(-r, 2.0 + m + n)).norm() < 1e-12, "{z}");
    }
}

#[test]
fn beta_levi_agrees_and_rejects_non_levi() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = pair_f([[1.0, 2.0], [0.5, 3.0]], [[-1.0, 1.0], [2.0, 0.25]]);
    for _ in 0..20 {
        let a = [[rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0)], [rng.gen_range(-1.0..1.0), rng.gen_range(0.5..2.0)]];
        let h = random_h(&mut rng, 1.0);
        let z1 = beta(&b, &levi(&a, &h)).unwrap();
        let z2 = beta_levi(&b, &a, &h);
        assert!((z1 - z2).norm() < 1e-10 * z1.norm().max(1.0));
    }
    assert!(beta(&b, &wedge_exp(&bvec(1), &bvec(3), 1.0)).is_err());
}

#[test]
fn witnesses_for_indefinite_pairs() {
    let b = pair_f(id2(), [[1.0, 0.0], [0.0, -1.0]]);
    let w = beta_zero_search(&b, 1e-9, 7).expect("witness");
    assert!(w.beta_abs < 1e-9);
    assert!((det_n(&w.a) - 1.0).abs() < 1e-9);
    let single = pair_f([[0.0; 2]; 2], [[1.0, 0.0], [0.0, -2.0]]);
    let w = beta_zero_search(&single, 1e-9, 1).expect("rank one witness");
    assert!(beta(&single, &levi(&w.a, &w.h)).unwrap().norm() < 1e-9);
    let pd = pair_f(id2(), [[0.0, -1.0], [1.0, 0.0]]);
    assert!(beta_zero_search(&pd, 1e-9, 7).is_none());
}

#[test]
fn iwasawa_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let th = theta();
    for _ in 0..30 {
        let g = random_g(&mut rng);
        let iw = iwasawa_p(&g).unwrap();
        assert!(diff8(&mul8(&iw.n, &mul8(&iw.m, &iw.k)), &g) < 1e-9);
        assert!(diff8(&mul8(&iw.k, &th), &mul8(&th, &iw.k)) < 1e-9);
        assert!(orth_defect(&iw.k) < 1e-9);
        assert!((det_n(&iw.k) - 1.0).abs() < 1e-9);
        for j in 0..2 {
            for i in 0..8 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((iw.n[i][j] - e).abs() < 1e-9);
            }
        }
        assert!(iw.a[1][0].abs() < 1e-9 && iw.a[0][0] > 0.0 && iw.a[1][1] > 0.0);
    }
}

#[test]
fn closed_formula_example() {
    let b = pair_f(id2(), [[0.0, -1.0], [1.0, 0.0]]);
    for ell in [1usize, 2, 4] {
        let w = whittaker_at_levi(&b, &id2(), &id4(), ell, KNorm::Scaled).unwrap();
        let k0 = bessel_k(0, 4.0).unwrap();
        assert!((w.get(0) - C64::new(k0, 0.0)).norm() < 1e-15);
        let f = factorial(ell);
        assert!((w.monomial_coeff(0) - C64::new(k0 / (f * f), 0.0)).norm() < 1e-15);
        // beta = 4i, so component v carries i^v
        let v1 = w.get(1);
        assert!((v1 - C64::new(0.0, bessel_k(1, 4.0).unwrap())).norm() < 1e-15);
    }
}

#[test]
fn su2_of_identity_and_rotations() {
    let s = su2_component(&ident8()).unwrap();
    let comps: Vec<C64> = (0..5).map(|k| C64::new(k as f64, 1.0)).collect();
    let back = s.act(&comps);
    assert!(comps.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-12));
    // K_P acts through the quotient by SU(2) x SU(2) x SU(2)
    let other = wedge_exp(&u_vec(1), &v_vec(1), 0.7);
    let mixed = mul8(&other, &wedge_exp(&u_vec(3), &u_vec(4), 0.4));
    let a = su2_component(&mixed).unwrap();
    let det = a.lift[0][0] * a.lift[1][1] - a.lift[0][1] * a.lift[1][0];
    assert!((det - 1.0).norm() < 1e-10);
}

#[test]
fn su2_is_a_homomorphism() {
    let k1 = wedge_exp(&u_vec(1), &u_vec(2), 0.9);
    let k2 = mul8(&wedge_exp(&v_vec(1), &u_vec(2), 0.3), &wedge_exp(&u_vec(5), &u_vec(6), -1.1));
    let comps: Vec<C64> = (0..7).map(|k| C64::new(1.0 + k as f64, -(k as f64) * 0.5)).collect();
    let s12 = su2_component(&mul8(&k1, &k2)).unwrap().act(&comps);
    let s1_s2 = su2_component(&k1).unwrap().act(&su2_component(&k2).unwrap().act(&comps));
    let err = s12.iter().zip(&s1_s2).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
    assert!(err < 1e-9, "{err}");
}

fn wdiff(a: &WhittakerValue, b: &WhittakerValue) -> f64 {
    a.max_diff(b) / a.max_abs().max(1e-300)
}

#[test]
fn equivariance_under_m_cap_k() {
    let b = pair_f(id2(), [[0.0, -1.0], [1.0, 0.0]]);
    let ell = 3;
    let m0 = levi(&[[1.1, 0.3], [0.0, 0.8]], &h_from_sl2(&[[1.2, 0.1], [0.0, 1.0 / 1.2]], &[[0.9, 0.0], [0.2, 1.0 / 0.9]]));
    let wm = whittaker_eval_real(&b, &m0, ell, KNorm::Scaled).unwrap();
    for th in [0.4, 1.3, 2.9] {
        for mu in [levi(&rot(th), &id4()), levi(&id2(), &h_from_sl2(&rot(th), &id2())), levi(&id2(), &h_from_sl2(&id2(), &rot(-th)))] {
            let direct = whittaker_at_levi(&b, &mul_n(&[[1.1, 0.3], [0.0, 0.8]], &levi_blocks(&mu).unwrap().0), &mul_n(&levi_blocks(&m0).unwrap().1, &levi_blocks(&mu).unwrap().1), ell, KNorm::Scaled).unwrap();
            let via = whittaker_eval_real(&b, &mul8(&m0, &mu), ell, KNorm::Scaled).unwrap();
            let rho = su2_component(&inv_orth8(&mu)).unwrap().act(&wm.comps);
            let rho = WhittakerValue { ell, comps: rho, vanishing: false };
            assert!(wdiff(&direct, &via) < 1e-9, "decomposition {}", wdiff(&direct, &via));
            assert!(wdiff(&direct, &rho) < 1e-9, "rho {}", wdiff(&direct, &rho));
        }
    }
}

#[test]
fn equivariance_under_n_and_k() {
    let b = pair_f([[1.0, 0.5], [0.0, 2.0]], [[0.0, -1.0], [1.5, 0.5]]);
    let ell = 2;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let g = random_g(&mut rng);
        let wg = whittaker_eval_real(&b, &g, ell, KNorm::Scaled).unwrap();
        let w = [0.3, -0.2, 0.7, 0.1];
        let wv: Vec8 = [0.0, 0.0, w[0], w[1], w[2], w[3], 0.0, 0.0];
        let n = wedge_exp(&bvec(1), &wv, 1.0);
        let wn = whittaker_eval_real(&b, &mul8(&n, &g), ell, KNorm::Scaled).unwrap();
        let psi = C64::from_polar(1.0, bilinear_f(&b.t1.0, &from_coords_f(&w)));
        assert!(wdiff(&wg.scale(psi), &wn) < 1e-9);
        let k = mul8(&wedge_exp(&u_vec(1), &v_vec(2), 0.6), &wedge_exp(&u_vec(5), &u_vec(8), -0.4));
        let wk = whittaker_eval_real(&b, &mul8(&g, &k), ell, KNorm::Scaled).unwrap();
        let rho = su2_component(&inv_orth8(&k)).unwrap().act(&wg.comps);
        let rho = WhittakerValue { ell, comps: rho, vanishing: false };
        assert!(wdiff(&wk, &rho) < 1e-8, "{}", wdiff(&wk, &rho));
    }
}

#[test]
fn line_integral_closed_form() {
    for v in -3..=3 {
        for &c in &[0.5, 1.0, 2.0] {
            let z = bessel_line_integral(v, c, KNorm::Scaled).unwrap();
            let want = C64::i().powi(-v) * (PI / 2.0 * (-2.0 * c).exp());
            assert!((z - want).norm() < 1e-10 * want.norm(), "v={v} c={c}: {z} vs {want}");
        }
    }
    assert!(bessel_line_integral(0, 0.0, KNorm::Scaled).is_err());
}


#[test]
fn archimedean_functional_form() {
    for &(alpha, n) in &[(2, 1), (4, 1), (2, 2)] {
        for ell in [1, 3] {
            let c = arch_functional_form(alpha, n, (1, 1, 0), ell, KNorm::Scaled).unwrap();
            assert!(c.max() < 1e-6, "{c:?}");
        }
    }
    let s = arch_functional_form(2, 1, (1, 2, 1), 2, KNorm::Standard).unwrap();
    assert!(s.max() < 1e-6, "{s:?}");
    // S = -b4 + b-4 has negative norm: outside the support
    let p = ArchParams { alpha: 2, n: 1, s_data: (1, -1, 0), t: 1.0, boost: 0.0, ell: 2, norm: KNorm::Scaled, tol: 1e-10 };
    let r = fj_arch_integral(&p).unwrap();
    assert!(!r.support_ok && r.value.max_abs() == 0.0);
    assert!(arch_functional_form(2, 1, (1, -1, 0), 2, KNorm::Scaled).is_err());
}
