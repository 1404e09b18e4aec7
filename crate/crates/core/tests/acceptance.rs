//! Acceptance suite: one line per criterion.
//!
//! Each criterion returns a [`Line`]. `status` is what gets printed; `hard`
//! collects every assertion that must hold for the process to exit 0. A
//! criterion whose stated target is false as written prints FAIL while its
//! corrected statement is still enforced through `hard`.

use std::time::Instant;

use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsk::classify::{VanishingVerdict, Verdict};
use qsk::exact::Mat2;
use qsk::jacobi::{cusp_classifier, first_nonvanishing_nu, taylor_lambda, transformation_check, JacobiForm, JacobiRing};
use qsk::pairspace::{is_pos_def, is_slice_primitive, q_of_b, t_of_b, t_triple, Pair, PairB};
use qsk::qseries::{dim_sk, is_in_space, sturm_bound};
use qsk::quaternionic::{
    cuspidality_classifier, fj_assemble, maass_relation_check, primitive_vanishing_detector, spezialschar_test, theta_lift, theta_lift_twisted, Family,
    QuatCoeffTable,
};
use qsk::siegel::{maass_lift, synthetic_siegel, SiegelCoeffTable};
use qsk::whittaker::linalg::{bvec, ident8, inv_orth8, mul8, u_vec, wedge_exp, Mat8};
use qsk::whittaker::{arch_functional_form, bessel_line_fit, beta_zero_search, su2_component, whittaker_eval_real, KNorm, PairF, WhittakerValue};

struct Line {
    status: bool,
    detail: String,
    hard: Vec<(bool, String)>,
}

impl Line {
    fn new(status: bool, detail: impl Into<String>) -> Self {
        Line { status, detail: detail.into(), hard: vec![] }
    }

    fn require(mut self, ok: bool, what: impl Into<String>) -> Self {
        self.hard.push((ok, what.into()));
        self
    }
}

fn r(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn weight20_lifts(bound: i64) -> Vec<SiegelCoeffTable> {
    let ring = JacobiRing::new((bound as usize).div_ceil(4) + 1).unwrap();
    let basis = ring.cusp_basis(20).unwrap();
    basis.iter().map(|phi| maass_lift(phi, bound).unwrap()).collect()
}

fn synthetic_sources(bound: i64) -> Vec<SiegelCoeffTable> {
    vec![
        synthetic_siegel(20, bound, |d, _| if d > 0 { r(1) } else { r(0) }).unwrap(),
        synthetic_siegel(20, bound, |d, g| if d > 0 { r(d + 3 * g) } else { r(0) }).unwrap(),
        synthetic_siegel(20, bound, |d, g| if d > 0 && g == 1 { r(d * d - 7) } else { r(0) }).unwrap(),
    ]
}

fn criterion_1() -> Line {
    let lifts = weight20_lifts(200);
    let mut total = 0;
    let mut violations = 0;
    for s in &lifts {
        let t = theta_lift(s, 200, Family::Full).unwrap();
        let rep = maass_relation_check(&t, 200).unwrap();
        total += rep.checked;
        violations += rep.violations.len();
    }
    let ok = lifts.len() == 2 && violations == 0 && total > 0;
    Line::new(ok, format!("weight 20, basis dim {}, {total} coefficients checked, {violations} violations", lifts.len())).require(ok, "Maass relation")
}

fn criterion_2() -> Line {
    let mut sources = weight20_lifts(200);
    sources.extend(synthetic_sources(200));
    let mut all_pass = true;
    let mut groups = 0;
    for s in &sources {
        let t = theta_lift(s, 200, Family::Full).unwrap();
        let rep = spezialschar_test(&t, 200);
        all_pass &= rep.pass;
        groups += rep.groups;
    }
    let mut t = theta_lift(&sources[0], 200, Family::Full).unwrap();
    let target: PairB = t.entries().map(|(b, _)| b.clone()).filter(|b| t_triple(b) == (1, 1, 6) && is_slice_primitive(b)).nth(1).unwrap();
    let v = t.get(&target).unwrap() + r(1);
    t.insert(target.clone(), v);
    let rep = spezialschar_test(&t, 200);
    let caught = !rep.pass && rep.witnesses.len() == 1 && (rep.witnesses[0].b1 == target || rep.witnesses[0].b2 == target);
    let ok = all_pass && caught;
    Line::new(ok, format!("{} tables, {groups} T-groups consistent; perturbation at {target:?} caught: {caught}", sources.len())).require(ok, "Spezialschar")
}

fn criterion_3() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bad = 0;
    for _ in 0..10_000 {
        let mut e = || rng.gen_range(-20..=20);
        let b = Pair::new(Mat2::new(e(), e(), e(), e()), Mat2::new(e(), e(), e(), e()));
        if t_of_b(&b).disc() != -q_of_b(&b) {
            bad += 1;
        }
    }
    Line::new(bad == 0, format!("10000 random pairs, {bad} mismatches")).require(bad == 0, "disc/Q identity")
}

fn criterion_4() -> Line {
    let mut sources = weight20_lifts(100);
    sources.extend(synthetic_sources(100));
    let mut same = true;
    for s in &sources {
        let base = theta_lift(s, 100, Family::Full).unwrap();
        for seed in [11, 12, 13] {
            let tw = theta_lift_twisted(s, 100, Family::Full, seed).unwrap();
            same &= base.entries().eq(tw.entries());
        }
    }
    Line::new(same, format!("{} tables x 3 twisted representative sets, identical: {same}", sources.len())).require(same, "coset independence")
}

fn rigidity(f: &JacobiForm) -> bool {
    let mut seen = std::collections::BTreeMap::new();
    for n in 0..=30i64 {
        for rr in -12..=12i64 {
            let v = f.coeff(n, rr).unwrap();
            let d = 4 * n - rr * rr;
            if d < -1 && !v.is_zero() {
                return false;
            }
            if let Some(old) = seen.insert(d, v.clone()) {
                if old != v {
                    return false;
                }
            }
        }
    }
    true
}

fn criterion_5() -> Line {
    let ring = JacobiRing::new(40).unwrap();
    let stated = [1usize, 1, 1, 1, 1, 2];
    let mut dims = vec![];
    let mut oracle = vec![];
    let mut rigid = true;
    let mut certified = true;
    for ell in (10..=20).step_by(2) {
        let basis = ring.cusp_basis(ell).unwrap();
        dims.push(basis.len());
        oracle.push(dim_sk(2 * ell - 2));
        for f in &basis {
            rigid &= rigidity(f);
            let nu0 = first_nonvanishing_nu(f, 30).unwrap().unwrap();
            let k = (ell + nu0 as i64) as u32;
            let lam = taylor_lambda(f, nu0, 30).unwrap();
            certified &= lam.series.trunc() > sturm_bound(k) && is_in_space(&lam.series, k).unwrap().in_space;
        }
    }
    for f in [ring.e4_1(), ring.e6_1(), ring.noncusp_weight10()] {
        rigid &= rigidity(&f);
    }
    let matches_oracle = dims == oracle;
    let matches_stated = dims == stated;
    Line::new(
        matches_stated && matches_oracle && rigid && certified,
        format!("cusp dims {dims:?}, dimension-formula oracle {oracle:?}, stated list {stated:?}; rigidity n<=30: {rigid}; Taylor certificates: {certified}"),
    )
    .require(matches_oracle, "cusp dims equal the dimension-formula oracle")
    .require(rigid, "index-one rigidity")
    .require(certified, "Taylor certificates")
}

fn criterion_6() -> Line {
    let ring = JacobiRing::new(42).unwrap();
    let s = Mat2::new(0, -1, 1, 0);
    let mut worst = 0.0f64;
    let mut count = 0;
    for ell in (10..=20).step_by(2) {
        for f in ring.cusp_basis(ell).unwrap() {
            let res = transformation_check(&f, &s, C64::new(0.0, 2.0), C64::new(0.1, 0.0), 40, 1.0, 1e-8).unwrap();
            worst = worst.max(res.residual);
            count += 1;
        }
    }
    let ok = worst < 1e-8;
    Line::new(ok, format!("{count} forms, max residual {worst:.2e}")).require(ok, "transformation law")
}

fn criterion_7() -> Line {
    let ring = JacobiRing::new(1001).unwrap();
    let mut ok = true;
    let mut notes = vec![];
    for ell in (10..=20).step_by(2) {
        for f in ring.cusp_basis(ell).unwrap() {
            let rep = cusp_classifier(&f, ell, 4000).unwrap();
            ok &= rep.verdict == Verdict::ConsistentWithCusp;
        }
    }
    notes.push("jacobi cusp forms cusp-consistent".to_string());
    for phi in ring.cusp_basis(20).unwrap() {
        let s = maass_lift(&phi, 4000).unwrap();
        let t = theta_lift(&s, 4000, Family::Primitive).unwrap();
        let rep = cuspidality_classifier(&t, 20).unwrap();
        ok &= rep.verdict == Verdict::ConsistentWithCusp;
        notes.push(format!("lift tail/burn-in ratio {:.2e}/{:.2e}", rep.tail_max_ratio, rep.burn_in_max_ratio));
    }
    let nc = cusp_classifier(&ring.noncusp_weight10(), 10, 4000).unwrap();
    let slope = nc.growth_slope.unwrap_or(f64::NAN);
    ok &= nc.verdict == Verdict::GrowthDetected && (slope - 8.5).abs() <= 0.3;
    notes.push(format!("non-cusp weight 10 slope {slope:.4}"));
    let grow = QuatCoeffTable::from_fn(20, 4000, Family::Primitive, |b| r(q_of_b(b)).pow(20));
    let g = cuspidality_classifier(&grow, 20).unwrap();
    ok &= g.verdict == Verdict::GrowthDetected;
    notes.push(format!("Q^l table {}", g.verdict.label()));
    Line::new(ok, notes.join("; ")).require(ok, "growth classifiers")
}

fn random_g(rng: &mut ChaCha8Rng) -> Mat8 {
    let ids = [1, 2, 3, 4, -4, -3, -2, -1];
    let mut g = ident8();
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

fn random_k(rng: &mut ChaCha8Rng) -> Mat8 {
    let mut k = ident8();
    for _ in 0..4 {
        let block = if rng.gen_bool(0.5) { 1 } else { 5 };
        let i = block + rng.gen_range(0..4);
        let j = block + rng.gen_range(0..4);
        if i != j {
            k = mul8(&k, &wedge_exp(&u_vec(i), &u_vec(j), rng.gen_range(-PI_F..PI_F)));
        }
    }
    k
}

const PI_F: f64 = std::f64::consts::PI;

fn rel_diff(a: &WhittakerValue, b: &WhittakerValue) -> f64 {
    a.max_diff(b) / a.max_abs().max(1e-300)
}

fn to_f(b: &PairB) -> PairF {
    b.map(|x| *x as f64)
}

fn criterion_8() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut n_worst, mut k_worst) = (0.0f64, 0.0f64);
    let mut points = 0;
    while points < 100 {
        let mut e = || rng.gen_range(-3i64..=3);
        let b = Pair::new(Mat2::new(e(), e(), e(), e()), Mat2::new(e(), e(), e(), e()));
        if !is_pos_def(&b) || q_of_b(&b) > 60 {
            continue;
        }
        let bf = to_f(&b);
        let ell = rng.gen_range(1..=3usize);
        let g = random_g(&mut rng);
        let wg = whittaker_eval_real(&bf, &g, ell, KNorm::Scaled).unwrap();
        let w1: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
        let v1 = [0.0, 0.0, w1[0], w1[1], w1[2], w1[3], 0.0, 0.0];
        let n = wedge_exp(&bvec(1), &v1, 1.0);
        let wn = whittaker_eval_real(&bf, &mul8(&n, &g), ell, KNorm::Scaled).unwrap();
        let psi = C64::from_polar(1.0, qsk::whittaker::linalg::bilinear_f(&bf.t1.0, &qsk::whittaker::linalg::from_coords_f(&w1)));
        n_worst = n_worst.max(rel_diff(&wg.scale(psi), &wn));
        let k = random_k(&mut rng);
        let wk = whittaker_eval_real(&bf, &mul8(&g, &k), ell, KNorm::Scaled).unwrap();
        let rho = su2_component(&inv_orth8(&k)).unwrap().act(&wg.comps);
        k_worst = k_worst.max(rel_diff(&wk, &WhittakerValue { ell, comps: rho, vanishing: false }));
        points += 1;
    }
    let mut witnesses = 0;
    let mut tried = 0;
    while tried < 20 {
        let mut e = || rng.gen_range(-4i64..=4);
        let b = Pair::new(Mat2::new(e(), e(), e(), e()), Mat2::new(e(), e(), e(), e()));
        if q_of_b(&b) >= 0 {
            continue;
        }
        tried += 1;
        if let Some(w) = beta_zero_search(&to_f(&b), 1e-9, tried as u64) {
            if w.beta_abs < 1e-6 {
                witnesses += 1;
            }
        }
    }
    let ok = n_worst < 1e-8 && k_worst < 1e-8 && witnesses == 20;
    Line::new(ok, format!("100 points: N residual {n_worst:.2e}, K residual {k_worst:.2e}; NOT_PSD witnesses {witnesses}/20")).require(ok, "Whittaker equivariance")
}

fn criterion_9() -> Line {
    let mut arch_worst = 0.0f64;
    for &(alpha, n) in &[(2, 1), (4, 1), (2, 2)] {
        for ell in [1, 2, 3] {
            arch_worst = arch_worst.max(arch_functional_form(alpha, n, (1, 1, 0), ell, KNorm::Scaled).unwrap().max());
        }
    }
    let cs = [0.5, 1.0, 2.0, 4.0];
    let (mut stated_phase, mut conj_phase) = (0.0f64, 0.0f64);
    let mut lambdas = vec![];
    for v in -3..=3 {
        let fit = bessel_line_fit(v, &cs, KNorm::Scaled).unwrap();
        let ph = C64::new(fit.phase[0], fit.phase[1]);
        stated_phase = stated_phase.max((ph - C64::i().powi(v)).norm()).max(fit.phase_spread);
        conj_phase = conj_phase.max((ph - C64::i().powi(-v)).norm()).max(fit.phase_spread);
        lambdas.push(fit.lambda);
    }
    let spread = lambdas.iter().cloned().fold(f64::MIN, f64::max) - lambdas.iter().cloned().fold(f64::MAX, f64::min);
    let arch_ok = arch_worst < 1e-6;
    let lam_ok = spread < 1e-3;
    let stated_ok = stated_phase < 1e-6;
    let conj_ok = conj_phase < 1e-6;
    Line::new(
        arch_ok && lam_ok && stated_ok,
        format!(
            "archimedean ratio residual {arch_worst:.2e}; lambda spread {spread:.2e} (lambda {:.6}); phase vs i^v {stated_phase:.2e}, vs i^-v {conj_phase:.2e}",
            lambdas[0]
        ),
    )
    .require(arch_ok, "archimedean t-ratio and rate")
    .require(lam_ok, "decay rate independent of v")
    .require(conj_ok, "phase i^-v")
}

fn criterion_10() -> Line {
    let mut tables = vec![];
    for s in weight20_lifts(200).into_iter().chain(synthetic_sources(200)) {
        tables.push(theta_lift(&s, 200, Family::Full).unwrap());
    }
    let mut witnesses_ok = true;
    let mut max_witness = 0;
    for t in &tables {
        let rep = primitive_vanishing_detector(t, 50);
        witnesses_ok &= rep.verdict == VanishingVerdict::NonzeroPrimitive && rep.witnesses.first().is_some_and(|w| w.norm <= 50);
        max_witness = max_witness.max(rep.witnesses.first().map_or(0, |w| w.norm));
    }
    let zero = theta_lift(&SiegelCoeffTable::zero(20, 200), 200, Family::Full).unwrap();
    let zero_ok = primitive_vanishing_detector(&zero, 50).verdict == VanishingVerdict::ConsistentWithZero;
    let mut support_ok = true;
    let mut nonzero = 0;
    let s = &weight20_lifts(200)[0];
    let lift = &tables[0];
    for np in -3i64..=8 {
        for mp in -3i64..=8 {
            for rp in -9i64..=9 {
                if 4 * np * mp - rp * rp > 200 {
                    continue;
                }
                let v = fj_assemble(lift, 1, 2, (np, mp, rp)).unwrap();
                let in_cone = np >= 0 && mp >= 0 && 4 * np * mp >= rp * rp;
                if !v.is_zero() {
                    nonzero += 1;
                    support_ok &= in_cone && v == s.get((mp, rp, np)).unwrap();
                }
            }
        }
    }
    let ok = witnesses_ok && zero_ok && support_ok && nonzero > 0;
    Line::new(
        ok,
        format!("{} nonzero tables, largest first witness Q = {max_witness}; zero table consistent: {zero_ok}; {nonzero} nonzero Fourier-Jacobi coefficients, all in the dual cone: {support_ok}", tables.len()),
    )
    .require(ok, "vanishing detectors")
}

fn main() {
    let criteria: [(&str, fn() -> Line); 10] = [
        ("exact Maass relation", criterion_1),
        ("Spezialschar characterization", criterion_2),
        ("disc/Q identity", criterion_3),
        ("coset independence", criterion_4),
        ("Jacobi engine", criterion_5),
        ("transformation law", criterion_6),
        ("growth classifiers", criterion_7),
        ("Whittaker equivariance", criterion_8),
        ("archimedean functional forms", criterion_9),
        ("vanishing detectors", criterion_10),
    ];
    let mut broken = vec![];
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let line = f();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {:>2} {}: {} [{secs:.1}s] {}", i + 1, name, if line.status { "PASS" } else { "FAIL" }, line.detail);
        for (ok, what) in line.hard {
            if !ok {
                broken.push(format!("criterion {}: {what}", i + 1));
            }
        }
    }
    if !broken.is_empty() {
        eprintln!("broken: {}", broken.join(", "));
        std::process::exit(1);
    }
}
