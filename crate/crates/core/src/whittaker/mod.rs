//! Generalized Whittaker functions for the Heisenberg parabolic of `SO(4,4)`.
//!
//! Group elements are real 8x8 matrices in the basis
//! `b1, b2, b3, b4, b-4, b-3, b-2, b-1`. The parabolic `P` stabilizes
//! `U = span{b1, b2}`; its Levi is `GL(U) x SO(V22)`.

pub mod bessel;
pub mod linalg;

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

pub use bessel::{bessel_k, KNorm};
use linalg::*;

use crate::error::{domain, Error, Result};
use crate::pairspace::{psd_status, Pair, PairQ, PsdStatus};

pub type PairF = Pair<f64>;

/// `(x, v1) + i (x, v2)` for `x` in `V22` coordinates.
fn pair_w(x: &[f64; 4]) -> C64 {
    C64::new((x[0] + x[3]) / SQRT_2, (x[1] + x[2]) / SQRT_2)
}

fn coords_pair(b: &PairF) -> ([f64; 4], [f64; 4]) {
    (coords_f(&b.t1.0), coords_f(&b.t2.0))
}

/// `beta(r)` for the Levi element `r = (a, h)`.
pub fn beta_levi(b: &PairF, a: &Mat2f, h: &Mat4) -> C64 {
    let hi = inv_n(h).expect("invertible V22 block");
    let (c1, c2) = coords_pair(b);
    let z1 = pair_w(&apply4(&hi, &c1));
    let z2 = pair_w(&apply4(&hi, &c2));
    let p = C64::new(a[0][0], a[0][1]);
    let q = C64::new(a[1][0], a[1][1]);
    C64::new(0.0, SQRT_2) * (z1 * p + z2 * q)
}

fn block_of(i: usize) -> usize {
    match i {
        0 | 1 => 0,
        2..=5 => 1,
        _ => 2,
    }
}

/// Check that `r` lies in the Levi `M_P(R)` and return its blocks.
pub fn levi_blocks(r: &Mat8) -> Result<(Mat2f, Mat4)> {
    let scale = max_abs8(r).max(1.0);
    for i in 0..8 {
        for j in 0..8 {
            if block_of(i) != block_of(j) && r[i][j].abs() > 1e-9 * scale {
                return domain("element does not stabilize U + V22 + U^");
            }
        }
    }
    if orth_defect(r) > 1e-8 * scale * scale {
        return domain("element is not orthogonal");
    }
    let a = [[r[0][0], r[0][1]], [r[1][0], r[1][1]]];
    let h = std::array::from_fn(|i| std::array::from_fn(|j| r[2 + i][2 + j]));
    Ok((a, h))
}

/// `beta(r) = sqrt2 i < r^{-1} (b-1 (x) T1 + b-2 (x) T2), b1 (x) w + b2 (x) i w >`
/// with `w = v1 + i v2`, for `r` in `M_P(R)`.
pub fn beta(b: &PairF, r: &Mat8) -> Result<C64> {
    levi_blocks(r)?;
    let ri = inv_orth8(r);
    let hi: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| ri[2 + i][2 + j]));
    let (c1, c2) = coords_pair(b);
    let y1 = apply4(&hi, &c1);
    let y2 = apply4(&hi, &c2);
    let x1: [f64; 4] = std::array::from_fn(|k| ri[7][7] * y1[k] + ri[7][6] * y2[k]);
    let x2: [f64; 4] = std::array::from_fn(|k| ri[6][7] * y1[k] + ri[6][6] * y2[k]);
    Ok(C64::new(0.0, SQRT_2) * (pair_w(&x1) + C64::i() * pair_w(&x2)))
}

/// An element `r = (a, h)` of `M_P(R)^0` with `det a = 1` and `beta(r) ~ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaWitness {
    pub a: Mat2f,
    pub h: Mat4,
    pub beta_abs: f64,
}

fn rot(t: f64) -> Mat2f {
    [[t.cos(), -t.sin()], [t.sin(), t.cos()]]
}

fn random_sl2(rng: &mut ChaCha8Rng, spread: f64) -> Mat2f {
    let s = rng.gen_range(-spread..spread);
    let d = [[s.exp(), 0.0], [0.0, (-s).exp()]];
    mul_n(&mul_n(&rot(rng.gen_range(0.0..2.0 * PI)), &d), &rot(rng.gen_range(0.0..2.0 * PI)))
}

/// Random element of `SO(V22)^0`.
pub fn random_h(rng: &mut ChaCha8Rng, spread: f64) -> Mat4 {
    let g1 = random_sl2(rng, spread);
    let g2 = random_sl2(rng, spread);
    h_from_sl2(&g1, &g2)
}

/// An `SO(V22)^0` element carrying a vector of negative norm into `V-`.
fn h_into_negative(t: &Mat2f) -> Option<Mat4> {
    let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
    if det >= 0.0 {
        return None;
    }
    let tt = mul_n(&transpose_n(t), t);
    let (_, mut v) = sym_eigen(&tt);
    if det_n(&v) < 0.0 {
        for row in v.iter_mut() {
            row[1] = -row[1];
        }
    }
    let tv = mul_n(t, &v);
    let d1 = (tv[0][0].powi(2) + tv[1][0].powi(2)).sqrt();
    let d2 = det / d1;
    let u = [[tv[0][0] / d1, tv[0][1] / d2], [tv[1][0] / d1, tv[1][1] / d2]];
    let k = (-d2 / d1).sqrt();
    let g1 = mul_n(&[[k, 0.0], [0.0, 1.0 / k]], &transpose_n(&u));
    Some(h_from_sl2(&g1, &transpose_n(&v)))
}

/// Search `M_P(R)^0` for an exact zero of `beta`, restricted to `det a = 1`
/// so that rescaling cannot fake one. Returns the verified witness.
pub fn beta_zero_search(b: &PairF, tol: f64, seed: u64) -> Option<BetaWitness> {
    let (c1, c2) = coords_pair(b);
    let scale = c1.iter().chain(c2.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    let check = |a: Mat2f, h: Mat4| -> Option<BetaWitness> {
        let r = levi(&a, &h);
        let bv = beta(b, &r).ok()?.norm();
        (bv < tol).then_some(BetaWitness { a, h, beta_abs: bv })
    };
    let mut minor = 0.0f64;
    for i in 0..4 {
        for j in i + 1..4 {
            minor = minor.max((c1[i] * c2[j] - c1[j] * c2[i]).abs());
        }
    }
    if minor < 1e-12 * scale * scale {
        let t = if c1.iter().any(|x| x.abs() > 0.0) { b.t1.0 } else { b.t2.0 };
        let hmap = h_into_negative(&t)?;
        return check([[1.0, 0.0], [0.0, 1.0]], inv_n(&hmap)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..4000 {
        let h = if attempt == 0 {
            std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
        } else {
            random_h(&mut rng, 0.5 + 2.0 * (attempt as f64 / 4000.0))
        };
        let hi = inv_n(&h)?;
        let z1 = pair_w(&apply4(&hi, &c1));
        let z2 = pair_w(&apply4(&hi, &c2));
        let im = (z1 * z2.conj()).im;
        if im < -1e-9 * z1.norm() * z2.norm() {
            let lam = 1.0 / (-im).sqrt();
            let (p, q) = (z2 * lam, -z1 * lam);
            let a = [[p.re, p.im], [q.re, q.im]];
            if let Some(w) = check(a, h) {
                return Some(w);
            }
        }
    }
    None
}

/// Factors of `g = n m k`.
#[derive(Clone, Debug)]
pub struct Iwasawa {
    pub n: Mat8,
    pub m: Mat8,
    pub k: Mat8,
    pub a: Mat2f,
    pub h: Mat4,
}

fn kappa() -> Mat8 {
    let mut m = ident8();
    for i in [1usize, 3, 4, 6] {
        m[i][i] = -1.0;
    }
    m
}

fn gram_schmidt4(first: &[[f64; 4]; 2]) -> Option<[[f64; 4]; 4]> {
    let mut basis: Vec<[f64; 4]> = first.to_vec();
    for e in 0..4 {
        if basis.len() == 4 {
            break;
        }
        let mut v = [0.0; 4];
        v[e] = 1.0;
        for b in &basis {
            let d: f64 = (0..4).map(|i| v[i] * b[i]).sum();
            for i in 0..4 {
                v[i] -= d * b[i];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.map(|x| x / n));
        }
    }
    let mut m: [[f64; 4]; 4] = [basis[0], basis[1], basis[2], basis[3]];
    // rows are the basis vectors; fix orientation with the last one
    if det_n(&m) < 0.0 {
        m[3] = m[3].map(|x| -x);
    }
    Some(m)
}

/// Decompose `g` in `SO(V)(R)^0` as `n m k` with `n` in `N_P`, `m` in
/// `M_P(R)^0` gauge-fixed (upper-triangular `U` block with positive
/// diagonal and positive symmetric `V22` block) and `k` in `K`.
pub fn iwasawa_p(g: &Mat8) -> Result<Iwasawa> {
    let fail = |m: &str| Error::DecompositionFailed(m.to_string());
    let gi = inv_orth8(g);
    let c = on_basis();
    let ct = transpose8(&c);
    // g^{-1} U in orthonormal coordinates
    let x: Vec<Vec8> = (0..2).map(|j| apply8(&ct, &std::array::from_fn(|i| gi[i][j]))).collect();
    let plus = |v: &Vec8| -> [f64; 4] { [v[0], v[1], v[2], v[3]] };
    let dot4 = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|i| a[i] * b[i]).sum::<f64>();
    let n0 = dot4(&plus(&x[0]), &plus(&x[0])).sqrt();
    if n0 < 1e-300 {
        return Err(fail("degenerate U'"));
    }
    let y0: Vec8 = x[0].map(|v| v / n0);
    let d = dot4(&plus(&x[1]), &plus(&y0));
    let mut y1: Vec8 = std::array::from_fn(|i| x[1][i] - d * y0[i]);
    let n1 = dot4(&plus(&y1), &plus(&y1)).sqrt();
    if n1 < 1e-300 {
        return Err(fail("degenerate U'"));
    }
    y1 = y1.map(|v| v / n1);
    let minus = |v: &Vec8| -> [f64; 4] { [v[4], v[5], v[6], v[7]] };
    let kp = gram_schmidt4(&[plus(&y0), plus(&y1)]).ok_or_else(|| fail("completion"))?;
    let km = gram_schmidt4(&[minus(&y0), minus(&y1)]).ok_or_else(|| fail("completion"))?;
    let mut kb = [[0.0; 8]; 8];
    for i in 0..4 {
        for j in 0..4 {
            kb[i][j] = kp[i][j];
            kb[4 + i][4 + j] = km[i][j];
        }
    }
    let mut k = mul8(&c, &mul8(&kb, &ct));
    let mut p = mul8(g, &inv_orth8(&k));
    let mut a: Mat2f = [[p[0][0], p[0][1]], [p[1][0], p[1][1]]];
    if det_n(&a) < 0.0 {
        let kap = kappa();
        k = mul8(&kap, &k);
        p = mul8(&p, &kap);
        a = [[p[0][0], p[0][1]], [p[1][0], p[1][1]]];
    }
    let h: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| p[2 + i][2 + j]));
    // a = t o with t upper triangular, o in SO(2)
    let r2n = (a[1][0].powi(2) + a[1][1].powi(2)).sqrt();
    let (cc, ss) = (a[1][0] / r2n, a[1][1] / r2n);
    let o2 = [[ss, -cc], [cc, ss]];
    let t = mul_n(&a, &transpose_n(&o2));
    // h = hp o with hp symmetric positive in orthonormal coordinates
    let c4 = on_basis4();
    let ht = mul_n(&transpose_n(&c4), &mul_n(&h, &c4));
    let (pp, oo) = polar(&ht);
    let hp = mul_n(&c4, &mul_n(&pp, &transpose_n(&c4)));
    let ho = mul_n(&c4, &mul_n(&oo, &transpose_n(&c4)));
    let mu = levi(&o2, &ho);
    let m = levi(&t, &hp);
    let k = mul8(&mu, &k);
    let n = mul8(&p, &inv_orth8(&levi(&a, &h)));
    let res = diff8(&mul8(&n, &mul8(&m, &k)), g);
    if !(res < 1e-9 * max_abs8(g).max(1.0).powi(3)) {
        return Err(fail(&format!("residual {res:e}")));
    }
    Ok(Iwasawa { n, m, k, a: t, h: hp })
}

/// `(w1, w2, z)` with `log n = b1 ^ w1 + b2 ^ w2 + z b1 ^ b2`.
pub fn unipotent_log(n: &Mat8) -> ([f64; 4], [f64; 4]) {
    let nm = add8(n, &ident8(), -1.0);
    let x = add8(&nm, &mul8(&nm, &nm), -0.5);
    let w = |col: usize| -> [f64; 4] { std::array::from_fn(|i| -x[2 + i][col]) };
    (w(7), w(6))
}

/// The distinguished `sl2` triple `e+, h+, f+` as complex bivectors.
fn sl2_triple() -> [[[C64; 8]; 8]; 3] {
    let cv = |v: Vec8| v.map(|x| C64::new(x, 0.0));
    let (u1, u2, v1, v2) = (cv(u_vec(1)), cv(u_vec(2)), cv(v_vec(1)), cv(v_vec(2)));
    let i = C64::i();
    let comb = |a: &[C64; 8], s: C64, b: &[C64; 8]| -> [C64; 8] { std::array::from_fn(|k| a[k] + s * b[k]) };
    let biv = |a: &[C64; 8], b: &[C64; 8]| -> [[C64; 8]; 8] { std::array::from_fn(|r| std::array::from_fn(|c| a[r] * b[c] - b[r] * a[c])) };
    let e = biv(&comb(&u1, -i, &u2), &comb(&v1, -i, &v2)).map(|r| r.map(|x| x * 0.5));
    let hh1 = biv(&u1, &u2);
    let hh2 = biv(&v1, &v2);
    let h: [[C64; 8]; 8] = std::array::from_fn(|r| std::array::from_fn(|c| i * (hh1[r][c] + hh2[r][c])));
    let f = biv(&comb(&u1, i, &u2), &comb(&v1, i, &v2)).map(|r| r.map(|x| x * -0.5));
    [e, h, f]
}

fn solve3(m: [[C64; 3]; 3], rhs: [C64; 3]) -> Option<[C64; 3]> {
    let mut a = m;
    let mut b = rhs;
    for k in 0..3 {
        let p = (k..3).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))?;
        if a[p][k].norm() < 1e-300 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..3 {
            let f = a[i][k] / a[k][k];
            for j in k..3 {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
            let t = b[k];
            b[i] -= f * t;
        }
    }
    let mut x = [C64::new(0.0, 0.0); 3];
    for k in (0..3).rev() {
        let s: C64 = (k + 1..3).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

/// The action of `k` on `V_l = Sym^{2l}(V2)` through the distinguished `sl2`.
#[derive(Clone, Debug)]
pub struct Su2Component {
    /// Adjoint action on `(e+, h+, f+)`: column `j` holds `Ad(k) e_j`.
    pub adjoint: [[C64; 3]; 3],
    /// An `SL2(C)` lift `[[alpha, beta], [gamma, delta]]` with `x -> alpha x + gamma y`,
    /// `y -> beta x + delta y`.
    pub lift: [[C64; 2]; 2],
}

pub fn su2_component(k: &Mat8) -> Result<Su2Component> {
    let tri = sl2_triple();
    let kc = k.map(|r| r.map(|x| C64::new(x, 0.0)));
    let conj_apply = |x: &[[C64; 8]; 8]| -> [[C64; 8]; 8] {
        let mut t = [[C64::new(0.0, 0.0); 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                let mut s = C64::new(0.0, 0.0);
                for p in 0..8 {
                    if kc[i][p].norm() == 0.0 {
                        continue;
                    }
                    for q in 0..8 {
                        s += kc[i][p] * x[p][q] * kc[j][q];
                    }
                }
                t[i][j] = s;
            }
        }
        t
    };
    let inner = |a: &[[C64; 8]; 8], b: &[[C64; 8]; 8]| -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..8 {
            for j in 0..8 {
                s += a[i][j].conj() * b[i][j];
            }
        }
        s
    };
    let gm: [[C64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| inner(&tri[i], &tri[j])));
    let mut adj = [[C64::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let y = conj_apply(&tri[j]);
        let rhs = std::array::from_fn(|i| inner(&tri[i], &y));
        let coef = solve3(gm, rhs).ok_or_else(|| Error::Domain("singular sl2 Gram".into()))?;
        let mut res = 0.0f64;
        let mut size = 0.0f64;
        for r in 0..8 {
            for c in 0..8 {
                let fit: C64 = (0..3).map(|i| coef[i] * tri[i][r][c]).sum();
                res = res.max((y[r][c] - fit).norm());
                size = size.max(y[r][c].norm());
            }
        }
        if res > 1e-8 * size.max(1.0) {
            return domain(format!("k does not preserve the distinguished sl2 (residual {res:e})"));
        }
        for i in 0..3 {
            adj[i][j] = coef[i];
        }
    }
    // monomial coordinates: e+ ~ -x^2, h+ ~ 2xy, f+ ~ y^2
    let p = [C64::new(-1.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 0.0)];
    let rm: [[C64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| p[i] * adj[i][j] / p[j]));
    let (alpha, gamma) = if rm[0][0].norm() >= rm[2][0].norm() {
        let a = rm[0][0].sqrt();
        (a, rm[1][0] / (a * 2.0))
    } else {
        let g = rm[2][0].sqrt();
        (rm[1][0] / (g * 2.0), g)
    };
    let (beta, delta) = if alpha.norm() >= gamma.norm() {
        let b = rm[0][1] / alpha;
        (b, (C64::new(1.0, 0.0) + b * gamma) / alpha)
    } else {
        let d = rm[2][1] / gamma;
        (((alpha * d) - 1.0) / gamma, d)
    };
    Ok(Su2Component { adjoint: adj, lift: [[alpha, beta], [gamma, delta]] })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl Su2Component {
    /// Act on a vector of components in the normalized basis
    /// `x^(l+v) y^(l-v) / ((l+v)! (l-v)!)`.
    pub fn act(&self, comps: &[C64]) -> Vec<C64> {
        let two_l = comps.len() - 1;
        let l = two_l / 2;
        let [[al, be], [ga, de]] = self.lift;
        let poly: Vec<C64> = (0..=two_l).map(|a| comps[a] / (factorial(a) * factorial(two_l - a))).collect();
        let mut out = vec![C64::new(0.0, 0.0); two_l + 1];
        // x^a y^b -> (al x + ga y)^a (be x + de y)^b
        for a in 0..=two_l {
            if poly[a].norm() == 0.0 {
                continue;
            }
            let b = two_l - a;
            for i in 0..=a {
                let ci = al.powu(i as u32) * ga.powu((a - i) as u32) * binom(a, i);
                for j in 0..=b {
                    let cj = be.powu(j as u32) * de.powu((b - j) as u32) * binom(b, j);
                    out[i + j] += poly[a] * ci * cj;
                }
            }
        }
        let _ = l;
        (0..=two_l).map(|a| out[a] * (factorial(a) * factorial(two_l - a))).collect()
    }
}

/// Value of a Whittaker function: components in the basis
/// `x^(l+v) y^(l-v) / ((l+v)! (l-v)!)`, `v = -l..l`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhittakerValue {
    pub ell: usize,
    pub comps: Vec<C64>,
    pub vanishing: bool,
}

impl WhittakerValue {
    pub fn zero(ell: usize) -> Self {
        WhittakerValue { ell, comps: vec![C64::new(0.0, 0.0); 2 * ell + 1], vanishing: true }
    }

    /// Component `v`.
    pub fn get(&self, v: i32) -> C64 {
        self.comps[(v + self.ell as i32) as usize]
    }

    /// Coefficient of the bare monomial `x^(l+v) y^(l-v)`.
    pub fn monomial_coeff(&self, v: i32) -> C64 {
        let l = self.ell as i32;
        self.get(v) / (factorial((l + v) as usize) * factorial((l - v) as usize))
    }

    pub fn max_diff(&self, o: &WhittakerValue) -> f64 {
        self.comps.iter().zip(o.comps.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0f64, |m, a| m.max(a.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        WhittakerValue { ell: self.ell, comps: self.comps.iter().map(|c| c * s).collect(), vanishing: self.vanishing }
    }
}

impl Serialize for WhittakerValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("WhittakerValue", 3)?;
        st.serialize_field("ell", &self.ell)?;
        let c: Vec<[f64; 2]> = self.comps.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("comps", &c)?;
        st.serialize_field("vanishing", &self.vanishing)?;
        st.end()
    }
}

/// The closed formula on `M_P(R)^0`:
/// `det(a)^l |det a| sum_v (beta/|beta|)^v K_v(|beta|) x^(l+v) y^(l-v) / ((l+v)!(l-v)!)`.
pub fn whittaker_at_levi(b: &PairF, a: &Mat2f, h: &Mat4, ell: usize, norm: KNorm) -> Result<WhittakerValue> {
    let bt = beta_levi(b, a, h);
    let r = bt.norm();
    if r == 0.0 {
        return Ok(WhittakerValue::zero(ell));
    }
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let pref = d.powi(ell as i32) * d.abs();
    let ph = bt / r;
    let l = ell as i32;
    let comps = (-l..=l).map(|v| ph.powi(v) * (pref * norm.eval(v, r).unwrap_or(0.0))).collect();
    Ok(WhittakerValue { ell, comps, vanishing: false })
}

/// `W_B(g)` for a positive semi-definite real pair: decompose `g = n m k` and
/// combine the `N_P` character, the closed formula at `m` and the action of
/// `k^{-1}` on `V_l`.
pub fn whittaker_eval_real(b: &PairF, g: &Mat8, ell: usize, norm: KNorm) -> Result<WhittakerValue> {
    let iw = iwasawa_p(g)?;
    let wm = whittaker_at_levi(b, &iw.a, &iw.h, ell, norm)?;
    let (w1, w2) = unipotent_log(&iw.n);
    let (c1, c2) = coords_pair(b);
    let arg = bilinear_f(&from_coords_f(&c1), &from_coords_f(&w1)) + bilinear_f(&from_coords_f(&c2), &from_coords_f(&w2));
    let phase = C64::from_polar(1.0, arg);
    let kinv = inv_orth8(&iw.k);
    let su = su2_component(&kinv)?;
    let comps = su.act(&wm.comps).into_iter().map(|z| z * phase).collect();
    Ok(WhittakerValue { ell, comps, vanishing: wm.vanishing })
}

/// `W_B(g)` for a rational pair; vanishes unless `B` is positive
/// semi-definite.
pub fn whittaker_eval(b: &PairQ, g: &Mat8, ell: usize, norm: KNorm) -> Result<WhittakerValue> {
    if let PsdStatus::NotPsd { .. } = psd_status(b, 1e-9, 0)? {
        return Ok(WhittakerValue::zero(ell));
    }
    whittaker_eval_real(&b.map(|x| x.to_f64().unwrap()), g, ell, norm)
}

/// Trapezoid rule on `[-len, len]` with step halving until two successive
/// levels agree to `tol` (relative to the largest entry).
fn trapezoid_vec(f: &dyn Fn(f64) -> Result<Vec<C64>>, len: f64, h0: f64, tol: f64) -> Result<Vec<C64>> {
    let mut h = h0;
    let mut prev: Option<Vec<C64>> = None;
    for _ in 0..14 {
        let n = (len / h).ceil() as i64;
        let mut acc: Option<Vec<C64>> = None;
        for k in -n..=n {
            let v = f(k as f64 * h)?;
            match acc.as_mut() {
                None => acc = Some(v),
                Some(a) => a.iter_mut().zip(v).for_each(|(x, y)| *x += y),
            }
        }
        let cur: Vec<C64> = acc.unwrap().into_iter().map(|x| x * h).collect();
        if let Some(p) = &prev {
            let size = cur.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let diff = cur.iter().zip(p).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            if diff <= tol * size.max(1e-300) {
                return Ok(cur);
            }
        }
        prev = Some(cur);
        h *= 0.5;
    }
    Err(Error::Quadrature("trapezoid rule did not converge".into()))
}

/// `I(v, c) = int_R (|s + ic| / (s + ic))^v K_v(|s + ic|) ds`.
pub fn bessel_line_integral(v: i32, c: f64, norm: KNorm) -> Result<C64> {
    if !(c > 0.0) {
        return domain("bessel_line_integral needs c > 0");
    }
    let len = c + 80.0 / norm.rate();
    let f = |s: f64| -> Result<Vec<C64>> {
        let z = C64::new(s, c);
        let r = z.norm();
        Ok(vec![(C64::new(r, 0.0) / z).powi(v) * norm.eval(v, r)?])
    };
    Ok(trapezoid_vec(&f, len, 0.25, 1e-13)?[0])
}

/// Fit `I(v, c) ~ kappa * phase * exp(-lambda c)` over a sweep of `c`.
#[derive(Clone, Debug, Serialize)]
pub struct LineFit {
    pub v: i32,
    pub cs: Vec<f64>,
    pub values: Vec<[f64; 2]>,
    pub phase: [f64; 2],
    pub phase_spread: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub fit_residual: f64,
}

pub fn bessel_line_fit(v: i32, cs: &[f64], norm: KNorm) -> Result<LineFit> {
    if cs.len() < 2 {
        return domain("need at least two values of c");
    }
    let vals: Vec<C64> = cs.iter().map(|&c| bessel_line_integral(v, c, norm)).collect::<Result<_>>()?;
    let phases: Vec<C64> = vals.iter().map(|z| z / z.norm()).collect();
    let phase = phases[0];
    let spread = phases.iter().fold(0.0f64, |m, p| m.max((p - phase).norm()));
    let ys: Vec<f64> = vals.iter().map(|z| z.norm().ln()).collect();
    let (slope, icept, res) = linear_fit(cs, &ys);
    Ok(LineFit {
        v,
        cs: cs.to_vec(),
        values: vals.iter().map(|z| [z.re, z.im]).collect(),
        phase: [phase.re, phase.im],
        phase_spread: spread,
        kappa: icept.exp(),
        lambda: -slope,
        fit_residual: res,
    })
}

/// Least squares line `y = a x + b`; returns `(a, b, max residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - a * mx;
    let res = xs.iter().zip(ys).fold(0.0f64, |m, (x, y)| m.max((y - a * x - b).abs()));
    (a, b, res)
}

/// Input for the archimedean Fourier-Jacobi integral.
#[derive(Clone, Debug, Serialize)]
pub struct ArchParams {
    pub alpha: i64,
    pub n: i64,
    /// `S = -n' b4 - m' b-4 - (r'/alpha) y_alpha^`
    pub s_data: (i64, i64, i64),
    pub t: f64,
    /// boost parameter of `u` in `SO(y^perp)`: `b4 -> e^a b4`, `b-4 -> e^-a b-4`
    pub boost: f64,
    pub ell: usize,
    pub norm: KNorm,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArchResult {
    pub value: WhittakerValue,
    /// `(S, u v2)`
    pub sigma: f64,
    /// `2 sqrt2 pi (n sqrt(alpha) - t sigma)`
    pub c: f64,
    pub support_ok: bool,
}

/// Real coordinates of `S = -n' b4 - m' b-4 - (r'/alpha)(b3 - (alpha/2) b-3)`.
pub fn s_coords(alpha: i64, s: (i64, i64, i64)) -> [f64; 4] {
    let (np, mp, rp) = s;
    [-(rp as f64) / alpha as f64, -(np as f64), -(mp as f64), rp as f64 / 2.0]
}

/// Rational pair `[n y_alpha, S]`.
pub fn arch_pair_q(alpha: i64, n: i64, s: (i64, i64, i64)) -> PairQ {
    use num_bigint::BigInt;
    let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let (np, mp, rp) = s;
    let t1 = crate::pairspace::from_coords([r(n, 1), r(0, 1), r(0, 1), r(n * alpha, 2)]);
    let t2 = crate::pairspace::from_coords([r(-rp, alpha), r(-np, 1), r(-mp, 1), r(rp, 2)]);
    Pair::new(t1, t2)
}

/// `int_R W_[2 pi n y_alpha, 2 pi S](x(s) g(t, u) g_y) ds` with
/// `x(s) = exp(s b1 ^ b-2)`, `g(t, u) = (diag(1, t), u)` and `g_y` the boost
/// carrying `v1` to `y_alpha / sqrt(alpha)`.
pub fn fj_arch_integral(p: &ArchParams) -> Result<ArchResult> {
    if p.alpha <= 0 || p.alpha % 2 != 0 || p.n <= 0 || !(p.t > 0.0) {
        return domain("need alpha in 2Z>0, n >= 1 and t > 0");
    }
    let sc = s_coords(p.alpha, p.s_data);
    let u: Mat4 = [[1.0, 0.0, 0.0, 0.0], [0.0, p.boost.exp(), 0.0, 0.0], [0.0, 0.0, (-p.boost).exp(), 0.0], [0.0, 0.0, 0.0, 1.0]];
    let v2 = [0.0, 1.0 / SQRT_2, 1.0 / SQRT_2, 0.0];
    let uv2 = apply4(&u, &v2);
    let sigma = bilinear_f(&from_coords_f(&sc), &from_coords_f(&uv2));
    let alpha = p.alpha as f64;
    let nf = p.n as f64;
    let c = 2.0 * SQRT_2 * PI * (nf * alpha.sqrt() - p.t * sigma);
    let q = arch_pair_q(p.alpha, p.n, p.s_data);
    let support_ok = !matches!(psd_status(&q, 1e-9, 0)?, PsdStatus::NotPsd { .. }) && c > 0.0;
    if !support_ok {
        return Ok(ArchResult { value: WhittakerValue::zero(p.ell), sigma, c, support_ok });
    }
    let two_pi = 2.0 * PI;
    let y = [1.0, 0.0, 0.0, alpha / 2.0].map(|x| x * nf * two_pi);
    let b: PairF = Pair::new(crate::exact::Mat2(from_coords_f(&y)), crate::exact::Mat2(from_coords_f(&sc.map(|x| x * two_pi))));
    let gy: Mat4 = [[(2.0 / alpha).sqrt(), 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, (alpha / 2.0).sqrt()]];
    let base = levi(&[[1.0, 0.0], [0.0, p.t]], &mul_n(&u, &gy));
    let (b1, bm2) = (bvec(1), bvec(-2));
    let f = |s: f64| -> Result<Vec<C64>> {
        let g = mul8(&wedge_exp(&b1, &bm2, s), &base);
        Ok(whittaker_eval_real(&b, &g, p.ell, p.norm)?.comps)
    };
    // |beta| >= 2 sqrt2 pi n sqrt(alpha) t |s|
    let rate = p.norm.rate() * 2.0 * SQRT_2 * PI * nf * alpha.sqrt() * p.t;
    let len = (60.0 + (p.ell as f64) * 2.0) / rate + 1.0;
    let comps = trapezoid_vec(&f, len, len / 64.0, p.tol)?;
    Ok(ArchResult { value: WhittakerValue { ell: p.ell, comps, vanishing: false }, sigma, c, support_ok })
}

/// Residuals of the archimedean integral against
/// `t^l exp(-lambda c(t, u)) i^v w`, with `lambda` the norm's decay rate.
#[derive(Clone, Debug, Serialize)]
pub struct ArchCheck {
    pub alpha: i64,
    pub n: i64,
    /// `|I(t')/I(t) / ((t'/t)^l exp(-lambda (c' - c))) - 1|`, max over components
    pub t_ratio: f64,
    /// same with `u` varied at fixed `t`
    pub rate: f64,
    /// `|I_v / (i^v I_0) - 1|`, max over `v`
    pub phase: f64,
}

impl ArchCheck {
    pub fn max(&self) -> f64 {
        self.t_ratio.max(self.rate).max(self.phase)
    }
}

pub fn arch_functional_form(alpha: i64, n: i64, s_data: (i64, i64, i64), ell: usize, norm: KNorm) -> Result<ArchCheck> {
    let mk = |t: f64, boost: f64| ArchParams { alpha, n, s_data, t, boost, ell, norm, tol: 1e-12 };
    let base = fj_arch_integral(&mk(1.0, 0.0))?;
    if !base.support_ok {
        return domain("S lies outside the support");
    }
    let ratio_err = |a: &ArchResult, b: &ArchResult, model: f64| -> f64 {
        (-(ell as i32)..=ell as i32).fold(0.0f64, |m, v| m.max((b.value.get(v) / a.value.get(v) / model - 1.0).norm()))
    };
    let lam = norm.rate();
    let mut t_ratio = 0.0f64;
    for tp in [0.7, 1.3, 1.6] {
        let other = fj_arch_integral(&mk(tp, 0.0))?;
        let model = tp.powi(ell as i32) * (-lam * (other.c - base.c)).exp();
        t_ratio = t_ratio.max(ratio_err(&base, &other, model));
    }
    let mut rate = 0.0f64;
    for boost in [-0.3, 0.25] {
        let other = fj_arch_integral(&mk(1.0, boost))?;
        let model = (-lam * (other.c - base.c)).exp();
        rate = rate.max(ratio_err(&base, &other, model));
    }
    let w0 = base.value.get(0);
    let phase = (-(ell as i32)..=ell as i32).fold(0.0f64, |m, v| m.max((base.value.get(v) / (C64::i().powi(v) * w0) - 1.0).norm()));
    Ok(ArchCheck { alpha, n, t_ratio, rate, phase })
}

#[cfg(test)]
mod tests;
