//! Index-1 Jacobi forms stored by discriminant: `c(n, r) = C(4n - r^2)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::classify::{classify, ClassifierReport};
use crate::error::{domain, Error, Result};
use crate::exact::Mat2;
use crate::qseries::{delta, eisenstein, eisenstein_e2, eta_power, modular_basis, QSeries};

/// A Jacobi form of index 1 given by `C(N)` for `-1 <= N <= dmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiForm {
    pub name: String,
    pub weight: i64,
    pub index: i64,
    pub cuspidal: Option<bool>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl JacobiForm {
    fn from_parts(name: &str, weight: i64, num: Vec<BigInt>, den: BigInt) -> Self {
        JacobiForm { name: name.to_string(), weight, index: 1, cuspidal: None, num, den }.normalized()
    }

    /// Build from explicit `C(N)`, `N = -1, 0, 1, ...`.
    pub fn from_disc_coeffs(name: &str, weight: i64, c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        Self::from_parts(name, weight, num, den)
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            self.num.iter_mut().for_each(|x| *x = -&*x);
        }
        let g = self.num.iter().fold(self.den.clone(), |g, x| g.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.num.iter_mut().for_each(|x| *x /= &g);
            self.den /= &g;
        }
        self
    }

    /// Largest discriminant `4n - r^2` covered.
    pub fn dmax(&self) -> i64 {
        self.num.len() as i64 - 2
    }

    /// Largest `n` for which every `c(n, r)` is covered.
    pub fn trunc(&self) -> i64 {
        self.dmax() / 4
    }

    /// `C(N)` with `N = 4n - r^2`.
    pub fn coeff_disc(&self, d: i64) -> Result<BigRational> {
        if d < -1 {
            return Ok(BigRational::zero());
        }
        if d > self.dmax() {
            return Err(Error::InsufficientPrecision(format!("discriminant {d} beyond {}", self.dmax())));
        }
        Ok(BigRational::new(self.num[(d + 1) as usize].clone(), self.den.clone()))
    }

    pub fn coeff(&self, n: i64, r: i64) -> Result<BigRational> {
        self.coeff_disc(4 * n - r * r)
    }

    pub fn coeff_f64(&self, d: i64) -> f64 {
        if d < -1 || d > self.dmax() {
            return 0.0;
        }
        ratio_f64(&self.num[(d + 1) as usize], &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn combine(&self, o: &Self, a: &BigRational, b: &BigRational, name: &str) -> Result<Self> {
        if self.weight != o.weight {
            return domain("weights differ");
        }
        let len = self.num.len().min(o.num.len());
        let den = &self.den * &o.den * a.denom() * b.denom();
        let fa = a.numer() * &o.den * b.denom();
        let fb = b.numer() * &self.den * a.denom();
        let num = (0..len).map(|i| &self.num[i] * &fa + &o.num[i] * &fb).collect();
        Ok(Self::from_parts(name, self.weight, num, den))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, &BigRational::one(), &BigRational::one(), &format!("{} + {}", self.name, o.name))
    }

    pub fn lin(&self, a: &BigRational, o: &Self, b: &BigRational, name: &str) -> Result<Self> {
        self.combine(o, a, b, name)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_parts(&self.name, self.weight, num, &self.den * c.denom())
    }

    /// Product with an elliptic modular form `f` of weight `k`.
    pub fn mul_elliptic(&self, f: &QSeries, k: i64, name: &str) -> Self {
        let dmax = self.dmax().min(4 * f.trunc() as i64 + 3);
        let (fnum, fden) = f.numerators();
        let mut num = vec![BigInt::zero(); (dmax + 2) as usize];
        for d in -1..=dmax {
            let mut s = BigInt::zero();
            let mut j = 0i64;
            while d - 4 * j >= -1 {
                let a = &fnum[j as usize];
                if !a.is_zero() {
                    s += a * &self.num[(d - 4 * j + 1) as usize];
                }
                j += 1;
            }
            num[(d + 1) as usize] = s;
        }
        Self::from_parts(name, self.weight + k, num, &self.den * fden)
    }

    /// `C(N) -> N C(N)`.
    fn times_disc(&self) -> Self {
        let num = self.num.iter().enumerate().map(|(i, x)| x * BigInt::from(i as i64 - 1)).collect();
        Self::from_parts(&self.name, self.weight, num, self.den.clone())
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// Cusp condition through the truncation: `C(N) = 0` for `N <= 0`.
    pub fn check_cusp(&self) -> bool {
        self.num[0].is_zero() && self.num[1].is_zero()
    }

    /// Evaluate `sum c(n, r) q^n zeta^r` over `n <= trunc` in floating point.
    pub fn eval(&self, tau: C64, z: C64, trunc: i64) -> C64 {
        let t = tau - C64::new(tau.re.round(), 0.0);
        let q = (C64::new(0.0, 2.0 * PI) * t).exp();
        let zeta = (C64::new(0.0, 2.0 * PI) * z).exp();
        let zinv = zeta.inv();
        let mut acc = C64::new(0.0, 0.0);
        let mut qn = C64::new(1.0, 0.0);
        for n in 0..=trunc.min(self.trunc()) {
            let rmax = ((4 * n + 1) as f64).sqrt() as i64;
            let mut s = C64::new(self.coeff_f64(4 * n), 0.0);
            let (mut zp, mut zm) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
            for r in 1..=rmax {
                zp *= zeta;
                zm *= zinv;
                let c = self.coeff_f64(4 * n - r * r);
                if c != 0.0 {
                    s += (zp + zm) * c;
                }
            }
            acc += s * qn;
            qn *= q;
        }
        acc
    }

    /// JSON view `{"weight", "index", "coeffs": {"n,r": "p/q"}}` for `n <= trunc`.
    pub fn to_json(&self, trunc: i64) -> serde_json::Value {
        let mut coeffs = BTreeMap::new();
        for n in 0..=trunc.min(self.trunc()) {
            let rmax = ((4 * n + 1) as f64).sqrt() as i64;
            for r in -rmax..=rmax {
                let c = self.coeff(n, r).unwrap();
                if !c.is_zero() {
                    coeffs.insert(format!("{n},{r}"), c.to_string());
                }
            }
        }
        serde_json::json!({"weight": self.weight, "index": self.index, "name": self.name, "coeffs": coeffs})
    }
}

fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    BigRational::new(a.clone(), b.clone()).to_f64().unwrap_or(f64::NAN)
}

/// The weak forms `phi_{-2,1} = theta_odd^2 / eta^6` and `phi_{0,1}`, valid
/// through `q^n`.
pub fn weak_jacobi_generators(n: usize) -> Result<(JacobiForm, JacobiForm)> {
    if n < 2 {
        return domain("weak_jacobi_generators needs n >= 2");
    }
    let p = eta_power(-6, n)?;
    let mut s0 = vec![BigInt::zero(); n + 1];
    let mut s1 = vec![BigInt::zero(); n + 1];
    let mut a = 0usize;
    while a * (a + 1) <= n {
        s0[a * (a + 1)] -= 2;
        a += 1;
    }
    let mut a = 0usize;
    while a * a <= n {
        s1[a * a] += if a == 0 { 1 } else { 2 };
        a += 1;
    }
    let s0 = QSeries::from_ints(s0).mul(&p);
    let s1 = QSeries::from_ints(s1).mul(&p);
    let dmax = 4 * n as i64;
    let mut c = vec![BigRational::zero(); (dmax + 2) as usize];
    for m in 0..=n {
        c[4 * m + 1] = s0.coeff(m)?;
        c[4 * m] = s1.coeff(m)?;
    }
    let phim2 = JacobiForm::from_disc_coeffs("phi_-2,1", -2, &c);
    let e2 = eisenstein_e2(n);
    let r = |x: i64| BigRational::from_integer(x.into());
    let phi0 = phim2.times_disc().lin(&r(-6), &phim2.mul_elliptic(&e2, 0, "").with_weight(-2), &r(-5), "phi_0,1")?.with_weight(0);
    Ok((phim2, phi0))
}

impl JacobiForm {
    fn with_weight(mut self, w: i64) -> Self {
        self.weight = w;
        self
    }
}

/// Named holomorphic and cusp forms built from the weak generators.
#[derive(Clone, Debug)]
pub struct JacobiRing {
    pub n: usize,
    pub phi_m2: JacobiForm,
    pub phi_0: JacobiForm,
    pub e4: QSeries,
    pub e6: QSeries,
    pub delta: QSeries,
}

impl JacobiRing {
    pub fn new(n: usize) -> Result<Self> {
        let (phi_m2, phi_0) = weak_jacobi_generators(n)?;
        Ok(JacobiRing { n, phi_m2, phi_0, e4: eisenstein(4, n)?, e6: eisenstein(6, n)?, delta: delta(n)? })
    }

    /// `E_{4,1} = (E4 phi_0 - E6 phi_-2) / 12`.
    pub fn e4_1(&self) -> JacobiForm {
        let a = self.phi_0.mul_elliptic(&self.e4, 4, "");
        let b = self.phi_m2.mul_elliptic(&self.e6, 6, "");
        a.lin(&BigRational::new(1.into(), 12.into()), &b, &BigRational::new((-1).into(), 12.into()), "E_4,1").unwrap()
    }

    /// `E_{6,1} = (E6 phi_0 - E4^2 phi_-2) / 12`.
    pub fn e6_1(&self) -> JacobiForm {
        let a = self.phi_0.mul_elliptic(&self.e6, 6, "");
        let b = self.phi_m2.mul_elliptic(&self.e4.pow(2), 8, "");
        a.lin(&BigRational::new(1.into(), 12.into()), &b, &BigRational::new((-1).into(), 12.into()), "E_6,1").unwrap()
    }

    pub fn phi10_1(&self) -> JacobiForm {
        let mut f = self.phi_m2.mul_elliptic(&self.delta, 12, "phi_10,1");
        f.cuspidal = Some(true);
        f
    }

    pub fn phi12_1(&self) -> JacobiForm {
        let mut f = self.phi_0.mul_elliptic(&self.delta, 12, "phi_12,1");
        f.cuspidal = Some(true);
        f
    }

    /// The weight-10 non-cusp form `E4 E_{6,1}`.
    pub fn noncusp_weight10(&self) -> JacobiForm {
        let mut f = self.e6_1().mul_elliptic(&self.e4, 4, "E4*E_6,1");
        f.cuspidal = Some(false);
        f
    }

    /// Basis `M_{l-10} phi_10,1 + M_{l-12} phi_12,1` of the index-1 cusp forms.
    pub fn cusp_basis(&self, ell: i64) -> Result<Vec<JacobiForm>> {
        if ell % 2 != 0 || ell < 10 {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        for (base, shift) in [(self.phi10_1(), 10), (self.phi12_1(), 12)] {
            if ell - shift < 0 {
                continue;
            }
            for (i, f) in modular_basis((ell - shift) as u32, self.n)?.iter().enumerate() {
                let mut g = base.mul_elliptic(f, ell - shift, &format!("{}*M{}[{i}]", base.name, ell - shift));
                g.cuspidal = Some(true);
                out.push(g);
            }
        }
        Ok(out)
    }
}

/// Index-1 cusp forms of weight `l` valid through `q^n`; empty for odd or small `l`.
pub fn jacobi_cusp_basis(ell: i64, n: usize) -> Result<Vec<JacobiForm>> {
    JacobiRing::new(n)?.cusp_basis(ell)
}

/// `lambda_nu = (2 pi i)^nu / nu! * sum_n (sum_r c(n, r) r^nu) q^n`; the
/// transcendental prefactor is kept symbolic.
#[derive(Clone, Debug, Serialize)]
pub struct TaylorLambda {
    pub nu: u32,
    pub unit: String,
    pub series: QSeries,
}

pub fn taylor_lambda(phi: &JacobiForm, nu: u32, n: usize) -> Result<TaylorLambda> {
    if n as i64 > phi.trunc() {
        return Err(Error::InsufficientPrecision(format!("q^{n} beyond truncation {}", phi.trunc())));
    }
    let mut c = Vec::with_capacity(n + 1);
    for m in 0..=n as i64 {
        let rmax = ((4 * m + 1) as f64).sqrt() as i64;
        let mut s = BigRational::zero();
        for r in -rmax..=rmax {
            let v = phi.coeff(m, r)?;
            if !v.is_zero() {
                s += v * BigRational::from_integer(BigInt::from(r).pow(nu));
            }
        }
        c.push(s);
    }
    Ok(TaylorLambda { nu, unit: format!("(2*pi*i)^{nu}/{nu}!"), series: QSeries::from_rationals(&c) })
}

/// Smallest `nu` with `lambda_nu != 0` through `q^n`.
pub fn first_nonvanishing_nu(phi: &JacobiForm, n: usize) -> Result<Option<u32>> {
    for nu in 0..=(2 * phi.weight.max(4) as u32 + 4) {
        if !taylor_lambda(phi, nu, n)?.series.is_zero() {
            return Ok(Some(nu));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformResidual {
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`
    pub residual: f64,
    pub tail_estimate: f64,
    pub scale: f64,
}

/// Relative size of `phi(g tau, z/(c tau + d)) - (c tau + d)^k e(m c z^2 / (c tau + d)) phi(tau, z)`,
/// with a tail estimate for the truncation at `q^n`.
pub fn transformation_check(phi: &JacobiForm, g: &Mat2<i64>, tau: C64, z: C64, n: i64, index_m: f64, tol: f64) -> Result<TransformResidual> {
    if g.det() != 1 {
        return domain("gamma must lie in SL2(Z)");
    }
    if n > phi.trunc() {
        return Err(Error::InsufficientPrecision(format!("q^{n} beyond truncation {}", phi.trunc())));
    }
    let [[a, b], [c, d]] = g.0.map(|r| r.map(|x| x as f64));
    let j = tau * c + d;
    let tau2 = (tau * a + b) / j;
    let z2 = z / j;
    let scale = (-1..=phi.dmax()).fold(0.0f64, |m, dd| m.max(phi.coeff_f64(dd).abs())).max(1e-300);
    let lhs = phi.eval(tau2, z2, n) / scale;
    let factor = j.powi(phi.weight as i32) * (C64::new(0.0, 2.0 * PI * index_m * c) * z * z / j).exp();
    let rhs = factor * phi.eval(tau, z, n) / scale;
    // coefficients are bounded by A (N + 2)^{k+2} for the covered range
    let w = (phi.weight.abs() + 2) as i32;
    let amp = (-1..=phi.dmax()).fold(0.0f64, |m, dd| m.max(phi.coeff_f64(dd).abs() / scale / ((dd + 2) as f64).powi(w)));
    let mut tail = 0.0;
    for t in [tau, tau2] {
        let qa = (-2.0 * PI * t.im).exp();
        let za = (2.0 * PI * z.im.abs().max(z2.im.abs())).exp();
        let mut m = n + 1;
        loop {
            let rmax = ((4 * m + 1) as f64).sqrt();
            let term = amp * ((4 * m + 2) as f64).powi(w) * qa.powi(m as i32) * (2.0 * rmax + 1.0) * za.powf(rmax);
            tail += term * if t == tau { factor.norm() } else { 1.0 };
            if term < 1e-30 * tail.max(1e-300) || m > n + 10_000 {
                break;
            }
            m += 1;
        }
    }
    let size = lhs.norm().max(rhs.norm());
    if size == 0.0 {
        return Ok(TransformResidual { residual: 0.0, tail_estimate: tail, scale });
    }
    let tail = tail / size;
    if tail > tol {
        return Err(Error::InsufficientPrecision(format!("tail estimate {tail:e} exceeds {tol:e}")));
    }
    Ok(TransformResidual { residual: (lhs - rhs).norm() / size, tail_estimate: tail, scale })
}

/// Growth classifier on `|c(n, r)| / |D|^{(l+1)/2}` over `0 < |D| <= d_max`.
pub fn cusp_classifier(phi: &JacobiForm, ell: i64, d_max: i64) -> Result<ClassifierReport> {
    let top = d_max.min(phi.dmax());
    if top < d_max {
        return Err(Error::InsufficientData(format!("form covers |D| <= {}, asked for {d_max}", phi.dmax())));
    }
    let pts: Vec<(f64, f64)> = (1..=top).map(|d| (d as f64, phi.coeff_f64(d).abs())).collect();
    classify(&pts, ell, top as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{dim_sk, is_in_space, ThetaSeries};

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn generator_examples() {
        let (a, b) = weak_jacobi_generators(6).unwrap();
        assert_eq!(a.coeff(0, 1).unwrap(), r(1));
        assert_eq!(a.coeff(0, -1).unwrap(), r(1));
        assert_eq!(a.coeff(0, 0).unwrap(), r(-2));
        assert_eq!(a.coeff(1, 1).unwrap(), r(8));
        assert_eq!(a.coeff(1, 0).unwrap(), r(-12));
        assert_eq!(b.coeff(0, 0).unwrap(), r(10));
        assert_eq!(b.coeff(0, 1).unwrap(), r(1));
        assert_eq!(b.coeff(1, 1).unwrap(), r(-64));
        assert_eq!(b.coeff(1, 0).unwrap(), r(108));
        assert_eq!(b.coeff(1, 2).unwrap(), r(10));
        assert!(weak_jacobi_generators(1).is_err());
    }

    /// `theta(z)^2` with `theta` one of the four Jacobi thetas, in `q^{1/8}`
    /// and integral `zeta` exponents.
    fn theta_sq(kind: u8, trunc8: i64) -> (ThetaSeries, QSeries) {
        let half = matches!(kind, 1 | 2);
        let sign = matches!(kind, 1 | 4);
        let mut terms = Vec::new();
        for a in -40i64..=40 {
            let (e, rr) = if half { ((2 * a + 1) * (2 * a + 1), 2 * a + 1) } else { (4 * a * a, 2 * a) };
            if e <= trunc8 {
                terms.push((e, rr, if sign && a.rem_euclid(2) == 1 { -1 } else { 1 }));
            }
        }
        let mut sq = ThetaSeries::new(8, 1, trunc8);
        let mut at0 = vec![BigInt::zero(); trunc8 as usize + 1];
        for &(e1, r1, s1) in &terms {
            for &(e2, r2, s2) in &terms {
                if e1 + e2 <= trunc8 {
                    sq.add_term(e1 + e2, (r1 + r2) / 2, r(s1 * s2));
                    at0[(e1 + e2) as usize] += s1 * s2;
                }
            }
        }
        (sq, QSeries::from_ints(at0))
    }

    fn strip(series: &QSeries, lead: usize) -> QSeries {
        let c = series.coeffs();
        QSeries::from_rationals(&c[lead..])
    }

    /// Compare a 2D oracle (exponents in q^{1/8}) with a form for n <= nmax.
    fn agrees(oracle: &ThetaSeries, phi: &JacobiForm, nmax: i64) {
        for ((e, rr), v) in &oracle.coeffs {
            if *e > 8 * nmax {
                continue;
            }
            assert_eq!(e % 8, 0, "non-integral q exponent");
            assert_eq!(phi.coeff(e / 8, *rr).unwrap(), *v, "c({}, {rr})", e / 8);
        }
        for n in 0..=nmax {
            for rr in -(2 * n + 1)..=(2 * n + 1) {
                assert_eq!(oracle.get(8 * n, rr), phi.coeff(n, rr).unwrap(), "c({n},{rr})");
            }
        }
    }

    #[test]
    fn generators_against_theta_oracle() {
        let nmax = 30i64;
        let t8 = 8 * nmax + 8;
        let (phim2, phi0) = weak_jacobi_generators(nmax as usize + 2).unwrap();
        // theta_1^2 / eta^6: the q^{1/4} factors cancel
        let (t1, _) = theta_sq(1, t8 + 2);
        let eta6inv = eta_power(-6, nmax as usize + 2).unwrap();
        let mut scaled = ThetaSeries::new(8, 1, t8);
        for ((e, rr), v) in &t1.coeffs {
            if (e - 2) % 8 == 0 && e - 2 <= t8 {
                scaled.add_term(e - 2, *rr, v.clone());
            }
        }
        let eta8 = {
            let c = eta6inv.coeffs();
            let mut v = vec![BigRational::zero(); (8 * (c.len() - 1)) + 1];
            for (i, x) in c.iter().enumerate() {
                v[8 * i] = x.clone();
            }
            QSeries::from_rationals(&v)
        };
        agrees(&scaled.mul_q(&eta8, 0), &phim2, nmax);
        // 4 sum theta_i(z)^2 / theta_i(0)^2
        let mut sum = ThetaSeries::new(8, 1, t8);
        for kind in [2u8, 3, 4] {
            let (sq, at0) = theta_sq(kind, t8 + 2);
            let lead = at0.valuation().unwrap();
            let inv = strip(&at0, lead).inverse().unwrap();
            let q = sq.mul_q(&inv, -(lead as i64));
            for ((e, rr), v) in &q.coeffs {
                if *e <= t8 - 8 {
                    sum.add_term(*e, *rr, v * r(4));
                }
            }
        }
        sum.trunc = t8 - 8;
        agrees(&sum, &phi0, nmax);
    }

    #[test]
    fn index_one_rigidity_exhaustive() {
        let ring = JacobiRing::new(32).unwrap();
        let forms = [ring.phi_m2.clone(), ring.phi_0.clone(), ring.e4_1(), ring.e6_1(), ring.phi10_1(), ring.phi12_1()];
        for f in &forms {
            let mut seen: BTreeMap<i64, BigRational> = BTreeMap::new();
            for n in 0..=30 {
                for rr in -11..=11 {
                    let v = f.coeff(n, rr).unwrap();
                    assert_eq!(v, f.coeff(n, -rr).unwrap());
                    let d = 4 * n - rr * rr;
                    if d < -1 {
                        assert!(v.is_zero());
                    }
                    if let Some(old) = seen.insert(d, v.clone()) {
                        assert_eq!(old, v, "{} at D={d}", f.name);
                    }
                }
            }
        }
    }

    #[test]
    fn eisenstein_jacobi_forms() {
        let ring = JacobiRing::new(8).unwrap();
        let e4 = ring.e4_1();
        assert_eq!(e4.coeff(0, 0).unwrap(), r(1));
        assert_eq!(e4.coeff(0, 1).unwrap(), r(0));
        // E_{4,1} = 1 + (zeta^2 + 56 zeta + 126 + 56 zeta^-1 + zeta^-2) q + ...
        assert_eq!(e4.coeff(1, 0).unwrap(), r(126));
        assert_eq!(e4.coeff(1, 1).unwrap(), r(56));
        assert_eq!(e4.coeff(1, 2).unwrap(), r(1));
        let e6 = ring.e6_1();
        assert_eq!(e6.coeff(1, 0).unwrap(), r(-330));
        assert_eq!(e6.coeff(1, 1).unwrap(), r(-88));
        assert_eq!(e6.coeff(1, 2).unwrap(), r(1));
    }

    #[test]
    fn cusp_basis_dims_and_support() {
        let ring = JacobiRing::new(12).unwrap();
        for ell in (10..=20).step_by(2) {
            let b = ring.cusp_basis(ell).unwrap();
            assert_eq!(b.len(), dim_sk(2 * ell - 2), "weight {ell}");
            for f in &b {
                assert!(f.check_cusp());
                assert_eq!(f.coeff(0, 0).unwrap(), r(0));
                assert_eq!(f.weight, ell);
            }
        }
        assert!(ring.cusp_basis(11).unwrap().is_empty());
        assert!(ring.cusp_basis(8).unwrap().is_empty());
        let phi10 = ring.phi10_1();
        // phi_10,1 = (zeta - 2 + zeta^-1) q + ...
        assert_eq!(phi10.coeff(1, 1).unwrap(), r(1));
        assert_eq!(phi10.coeff(1, 0).unwrap(), r(-2));
    }

    #[test]
    fn taylor_coefficients() {
        let ring = JacobiRing::new(12).unwrap();
        for ell in (10..=20).step_by(2) {
            for f in ring.cusp_basis(ell).unwrap() {
                assert!(taylor_lambda(&f, 1, 10).unwrap().series.is_zero());
                let l0 = taylor_lambda(&f, 0, 10).unwrap();
                for n in 0..=10i64 {
                    let direct: BigRational = (-7..=7).map(|rr| f.coeff(n, rr).unwrap()).sum();
                    assert_eq!(l0.series.coeff(n as usize).unwrap(), direct);
                }
                let nu0 = first_nonvanishing_nu(&f, 10).unwrap().unwrap();
                let lam = taylor_lambda(&f, nu0, 10).unwrap();
                let cert = is_in_space(&lam.series, (ell + nu0 as i64) as u32).unwrap();
                assert!(cert.in_space, "{} nu0={nu0}", f.name);
            }
        }
        assert_eq!(first_nonvanishing_nu(&ring.phi10_1(), 10).unwrap(), Some(2));
    }

    #[test]
    fn transformation_law() {
        let ring = JacobiRing::new(42).unwrap();
        let s = Mat2::new(0, -1, 1, 0);
        let t = Mat2::new(1, 1, 0, 1);
        let tau = C64::new(0.0, 2.0);
        let z = C64::new(0.1, 0.0);
        for f in [ring.phi10_1(), ring.phi12_1(), ring.e4_1()] {
            let id = transformation_check(&f, &Mat2::identity(), tau, z, 40, 1.0, 1e-8).unwrap();
            assert_eq!(id.residual, 0.0);
            let tt = transformation_check(&f, &t, tau, z, 40, 1.0, 1e-8).unwrap();
            assert_eq!(tt.residual, 0.0);
            let ss = transformation_check(&f, &s, tau, z, 40, 1.0, 1e-8).unwrap();
            assert!(ss.residual < 1e-8, "{}: {}", f.name, ss.residual);
        }
        // a wrong weight fails the law
        let bad = ring.phi10_1().with_weight(12);
        assert!(transformation_check(&bad, &s, tau, z, 40, 1.0, 1e-8).unwrap().residual > 1e-3);
    }
}
