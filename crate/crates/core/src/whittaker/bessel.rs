//! Modified Bessel functions of the second kind.
//!
//! The default normalization is `K_v(x) = 1/2 int_0^inf t^(v-1) e^(-x(t+1/t)) dt`,
//! which is the classical `K_v` evaluated at `2x`.

use crate::error::{domain, Error, Result};

/// Which Bessel normalization feeds the Whittaker formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KNorm {
    /// `K_v(x) = K_v^classical(2x)`.
    Scaled,
    /// The classical `K_v`.
    Standard,
}

impl KNorm {
    pub fn eval(self, v: i32, x: f64) -> Result<f64> {
        match self {
            KNorm::Scaled => bessel_k(v, x),
            KNorm::Standard => bessel_k(v, x / 2.0),
        }
    }

    /// Decay rate `lambda` with `K_v(x) ~ e^(-lambda x)`.
    pub fn rate(self) -> f64 {
        match self {
            KNorm::Scaled => 2.0,
            KNorm::Standard => 1.0,
        }
    }
}

/// `K_v(x) = int_0^inf cosh(v u) exp(-2x cosh u) du` by the trapezoid rule
/// with step halving; the integrand is entire and doubly-exponentially
/// decaying, so the rule converges geometrically.
pub fn bessel_k(v: i32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("bessel_k needs x > 0, got {x}"));
    }
    let v = v.unsigned_abs() as f64;
    // log of the integrand without the factor (1 + e^{-2vu}) / 2
    let lf = |u: f64| v * u - 2.0 * x * u.cosh();
    let f = |u: f64| (lf(u)).exp() * 0.5 * (1.0 + (-2.0 * v * u).exp());
    // peak location of v u - 2x cosh u
    let peak = if v > 0.0 { (v / (2.0 * x)).asinh() } else { 0.0 };
    let top = lf(peak);
    let mut upper = peak + 1.0;
    while lf(upper) > top - 80.0 {
        upper += 1.0;
    }
    let mut h = upper / 16.0;
    let mut prev = f64::NAN;
    for _ in 0..20 {
        let n = (upper / h).ceil() as usize;
        let mut s = 0.5 * f(0.0);
        for k in 1..=n {
            s += f(k as f64 * h);
        }
        let val = s * h;
        if (val - prev).abs() <= 1e-14 * val.abs() {
            return Ok(val);
        }
        prev = val;
        h *= 0.5;
    }
    Err(Error::Quadrature(format!("bessel_k({v}, {x}) did not converge")))
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Classical `K_0(z)` and `K_1(z)` from their ascending series (small z).
pub fn classical_k01_series(z: f64) -> (f64, f64) {
    let y = z * z / 4.0;
    let (mut i0, mut i1) = (0.0, 0.0);
    let (mut k0s, mut k1s) = (0.0, 0.0);
    let mut term = 1.0; // y^k / (k!)^2
    let mut h = 0.0; // harmonic number H_k
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            term *= y / (kf * kf);
            h += 1.0 / kf;
        }
        i0 += term;
        let t1 = term / (kf + 1.0); // y^k / (k! (k+1)!)
        i1 += t1;
        k0s += term * h;
        let psi_sum = (h - EULER_GAMMA) + (h + 1.0 / (kf + 1.0) - EULER_GAMMA);
        k1s += t1 * psi_sum;
        if term < 1e-300 {
            break;
        }
    }
    let i1 = i1 * z / 2.0;
    let lz = (z / 2.0).ln();
    let k0 = -(lz + EULER_GAMMA) * i0 + k0s;
    let k1 = 1.0 / z + lz * i1 - z / 4.0 * k1s;
    (k0, k1)
}

/// Classical `K_v(z)` by upward recurrence from the series values.
pub fn classical_k_series(v: i32, z: f64) -> f64 {
    let v = v.unsigned_abs();
    let (mut a, mut b) = classical_k01_series(z);
    if v == 0 {
        return a;
    }
    for n in 1..v {
        let c = a + 2.0 * n as f64 / z * b;
        a = b;
        b = c;
    }
    b
}

/// Classical `K_v(z)` from the large-argument asymptotic expansion.
pub fn classical_k_asymptotic(v: i32, z: f64) -> f64 {
    let mu = 4.0 * (v as f64) * (v as f64);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        let next = term * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * z);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp() * sum
}
