//! Truncated q-expansions with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::exact::sigma;

/// A power series `sum_{n <= trunc} a_n q^n`, stored as integer numerators
/// over one common denominator.
#[derive(Clone, Debug)]
pub struct QSeries {
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for QSeries {
    fn eq(&self, o: &Self) -> bool {
        self.trunc() == o.trunc() && self.num.iter().zip(&o.num).all(|(a, b)| a * &o.den == b * &self.den)
    }
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QSeries {
    pub fn from_ints(num: Vec<BigInt>) -> Self {
        assert!(!num.is_empty(), "a series needs at least the constant term");
        QSeries { num, den: BigInt::one() }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::from_ints(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_rationals(c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        QSeries { num, den }.normalized()
    }

    pub fn zero(trunc: usize) -> Self {
        Self::from_ints(vec![BigInt::zero(); trunc + 1])
    }

    pub fn one(trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.num[0] = BigInt::one();
        s
    }

    /// Coefficients are known through `q^trunc`.
    pub fn trunc(&self) -> usize {
        self.num.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Result<BigRational> {
        self.num
            .get(n)
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .ok_or_else(|| Error::InsufficientPrecision(format!("q^{n} beyond truncation {}", self.trunc())))
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..=self.trunc()).map(|n| self.coeff(n).unwrap()).collect()
    }

    pub fn numerators(&self) -> (&[BigInt], &BigInt) {
        (&self.num, &self.den)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Smallest `n` with `a_n != 0`.
    pub fn valuation(&self) -> Option<usize> {
        self.num.iter().position(|x| !x.is_zero())
    }

    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.trunc());
        QSeries { num: self.num[..=n].to_vec(), den: self.den.clone() }
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            self.num.iter_mut().for_each(|x| *x = -&*x);
        }
        if !self.den.is_one() {
            let g = self.num.iter().fold(self.den.clone(), |g, x| g.gcd(x));
            if !g.is_one() && !g.is_zero() {
                self.num.iter_mut().for_each(|x| *x /= &g);
                self.den /= &g;
            }
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        self.lin(o, 1)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.lin(o, -1)
    }

    fn lin(&self, o: &Self, sign: i32) -> Self {
        let t = self.trunc().min(o.trunc());
        let num = (0..=t)
            .map(|i| {
                let b = &o.num[i] * &self.den;
                let a = &self.num[i] * &o.den;
                if sign > 0 {
                    a + b
                } else {
                    a - b
                }
            })
            .collect();
        QSeries { num, den: &self.den * &o.den }.normalized()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QSeries { num: self.num.iter().map(|x| x * c.numer()).collect(), den: &self.den * c.denom() }.normalized()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let t = self.trunc().min(o.trunc());
        let mut num = vec![BigInt::zero(); t + 1];
        for (i, a) in self.num.iter().enumerate().take(t + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate().take(t + 1 - i) {
                if !b.is_zero() {
                    num[i + j] += a * b;
                }
            }
        }
        QSeries { num, den: &self.den * &o.den }.normalized()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.trunc());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(0)?;
        if c0.is_zero() {
            return domain("series with zero constant term is not invertible");
        }
        let t = self.trunc();
        let a = self.coeffs();
        let mut b = vec![BigRational::zero(); t + 1];
        b[0] = c0.recip();
        for n in 1..=t {
            let mut s = BigRational::zero();
            for k in 1..=n {
                if !a[k].is_zero() {
                    s += &a[k] * &b[n - k];
                }
            }
            b[n] = -s * &b[0];
        }
        Ok(QSeries::from_rationals(&b))
    }

    /// Multiply by `q^k`, keeping the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let t = self.trunc();
        let mut num = vec![BigInt::zero(); t + 1];
        for i in 0..=t.saturating_sub(k) {
            if i + k <= t {
                num[i + k] = self.num[i].clone();
            }
        }
        QSeries { num, den: self.den.clone() }
    }

    /// `q d/dq`.
    pub fn theta_op(&self) -> Self {
        QSeries { num: self.num.iter().enumerate().map(|(n, x)| x * BigInt::from(n)).collect(), den: self.den.clone() }.normalized()
    }

    /// Evaluate at a complex `q` (floating point).
    pub fn eval(&self, q: num_complex::Complex64) -> num_complex::Complex64 {
        let d = self.den.to_f64().unwrap();
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        let mut p = num_complex::Complex64::new(1.0, 0.0);
        for x in &self.num {
            acc += p * (x.to_f64().unwrap() / d);
            p *= q;
        }
        acc
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).take(8) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})q^{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: BTreeMap<String, String> =
            self.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(n, c)| (n.to_string(), c.to_string())).collect();
        let mut st = s.serialize_struct("QSeries", 2)?;
        st.serialize_field("trunc", &self.trunc())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Bernoulli numbers `B_0 .. B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for k in 0..m {
            s += rat(binom.clone()) * &b[k];
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b[m] = -s / rat(BigInt::from(m + 1));
    }
    b
}

/// `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`.
pub fn eisenstein(k: u32, n: usize) -> Result<QSeries> {
    if k < 4 || k % 2 == 1 {
        return domain(format!("eisenstein needs even k >= 4, got {k}"));
    }
    eisenstein_any(k, n)
}

/// The quasi-modular `E_2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn eisenstein_e2(n: usize) -> QSeries {
    eisenstein_any(2, n).expect("k = 2")
}

fn eisenstein_any(k: u32, n: usize) -> Result<QSeries> {
    if n == 0 {
        return Ok(QSeries::one(0));
    }
    let bk = bernoulli(k as usize)[k as usize].clone();
    let c = -rat(BigInt::from(2 * k)) / bk;
    let mut coeffs = vec![BigRational::one()];
    for m in 1..=n {
        coeffs.push(&c * rat(sigma(k - 1, m as u64)));
    }
    Ok(QSeries::from_rationals(&coeffs))
}

/// `prod_{n >= 1} (1 - q^n)` by the pentagonal number theorem.
pub fn euler_product(n: usize) -> QSeries {
    let mut c = vec![BigInt::zero(); n + 1];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e <= n {
                any = true;
                c[e] += if kk.rem_euclid(2) == 0 { 1 } else { -1 };
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    QSeries::from_ints(c)
}

/// `prod_{n >= 1} (1 - q^n)^e`, i.e. `eta^e` without the factor `q^{e/24}`.
pub fn eta_power(e: i32, n: usize) -> Result<QSeries> {
    if n == 0 {
        return domain("truncation must be positive");
    }
    let p = euler_product(n).pow(e.unsigned_abs());
    if e >= 0 {
        Ok(p)
    } else {
        p.inverse()
    }
}

/// `Delta = q prod (1 - q^n)^24`.
pub fn delta(n: usize) -> Result<QSeries> {
    Ok(eta_power(24, n)?.shift(1))
}

/// A `(q, zeta)` expansion with exponents in `(1/qd) Z` and `(1/zd) Z`;
/// keys are the scaled integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaSeries {
    pub qd: i64,
    pub zd: i64,
    /// valid through scaled q-exponent `trunc`
    pub trunc: i64,
    pub coeffs: BTreeMap<(i64, i64), BigRational>,
}

impl ThetaSeries {
    pub fn new(qd: i64, zd: i64, trunc: i64) -> Self {
        ThetaSeries { qd, zd, trunc, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, n: i64, r: i64, c: BigRational) {
        if n > self.trunc || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((n, r)).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(n, r));
        }
    }

    pub fn get(&self, n: i64, r: i64) -> BigRational {
        self.coeffs.get(&(n, r)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.qd != o.qd || self.zd != o.zd {
            return domain("exponent scales differ");
        }
        let lo_a = self.coeffs.keys().map(|k| k.0).min().unwrap_or(0);
        let lo_b = o.coeffs.keys().map(|k| k.0).min().unwrap_or(0);
        let trunc = (self.trunc + lo_b).min(o.trunc + lo_a);
        let mut out = ThetaSeries::new(self.qd, self.zd, trunc);
        for ((n1, r1), c1) in &self.coeffs {
            for ((n2, r2), c2) in &o.coeffs {
                if n1 + n2 > trunc {
                    break;
                }
                out.add_term(n1 + n2, r1 + r2, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiply by a one-variable series in `q^{1/qd}` shifted by `q^{shift/qd}`.
    pub fn mul_q(&self, f: &QSeries, shift: i64) -> Self {
        let lo = self.coeffs.keys().map(|k| k.0).min().unwrap_or(0);
        let trunc = (self.trunc + shift).min(f.trunc() as i64 + shift + lo);
        let fc = f.coeffs();
        let mut out = ThetaSeries::new(self.qd, self.zd, trunc);
        for ((n, r), c) in &self.coeffs {
            for (k, a) in fc.iter().enumerate() {
                if n + k as i64 + shift > trunc {
                    break;
                }
                if !a.is_zero() {
                    out.add_term(n + k as i64 + shift, *r, c * a);
                }
            }
        }
        out
    }

    /// The coefficient series of `zeta^{r/zd}` as a one-variable series.
    pub fn slice(&self, r: i64) -> BTreeMap<i64, BigRational> {
        self.coeffs.iter().filter(|((_, rr), _)| *rr == r).map(|((n, _), c)| (*n, c.clone())).collect()
    }
}

/// The odd theta `sum_n (-1)^n q^{(n+1/2)^2/2} zeta^{n+1/2}` with exponents
/// in `q^{1/8}` and `zeta^{1/2}`, valid through `q^n`.
pub fn jacobi_theta_odd(n: usize) -> Result<ThetaSeries> {
    if n == 0 {
        return domain("truncation must be positive");
    }
    let trunc = 8 * n as i64;
    let mut t = ThetaSeries::new(8, 2, trunc);
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for m in [k, -k - 1] {
            let e = (2 * m + 1) * (2 * m + 1);
            if e <= trunc {
                any = true;
                t.add_term(e, 2 * m + 1, rat(if m.rem_euclid(2) == 0 { 1 } else { -1 }));
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    Ok(t)
}

/// Dimension of `M_k(SL2(Z))`.
pub fn dim_mk(k: i64) -> usize {
    if k < 0 || k % 2 != 0 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Dimension of `S_k(SL2(Z))`.
pub fn dim_sk(k: i64) -> usize {
    if k < 12 {
        0
    } else {
        dim_mk(k) - 1
    }
}

/// Reduced row echelon form of the series with pivots at distinct powers.
fn echelon(rows: Vec<QSeries>) -> Vec<QSeries> {
    let mut rows: Vec<Vec<BigRational>> = rows.iter().map(|r| r.coeffs()).collect();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    let mut col = 0;
    while col < ncols && !rows.is_empty() {
        if let Some(p) = rows.iter().position(|r| !r[col].is_zero()) {
            let mut piv = rows.swap_remove(p);
            let inv = piv[col].recip();
            piv.iter_mut().for_each(|x| *x *= &inv);
            for r in rows.iter_mut().chain(out.iter_mut()) {
                if !r[col].is_zero() {
                    let f = r[col].clone();
                    for (x, y) in r.iter_mut().zip(&piv) {
                        *x -= &f * y;
                    }
                }
            }
            out.push(piv);
        }
        col += 1;
    }
    out.iter().map(|r| QSeries::from_rationals(r)).collect()
}

fn monomials(k: u32, n: usize, min_delta: u32) -> Result<Vec<QSeries>> {
    if k % 2 == 1 {
        return Ok(vec![]);
    }
    let e4 = eisenstein(4, n)?;
    let e6 = eisenstein(6, n)?;
    let d = delta(n)?;
    let mut out = Vec::new();
    let mut c = min_delta;
    while 12 * c <= k {
        let rest = k - 12 * c;
        let mut b = 0;
        while 6 * b <= rest {
            if (rest - 6 * b) % 4 == 0 {
                let a = (rest - 6 * b) / 4;
                out.push(e4.pow(a).mul(&e6.pow(b)).mul(&d.pow(c)));
                // one monomial per power of Delta suffices for a basis
                break;
            }
            b += 1;
        }
        c += 1;
    }
    Ok(out)
}

/// Echelonized basis of `M_k`.
pub fn modular_basis(k: u32, n: usize) -> Result<Vec<QSeries>> {
    Ok(echelon(monomials(k, n, 0)?))
}

/// Echelonized basis of the cusp space `S_k`.
pub fn cusp_basis(k: u32, n: usize) -> Result<Vec<QSeries>> {
    if k % 2 == 1 {
        return domain("odd weight");
    }
    Ok(echelon(monomials(k, n, 1)?))
}

/// Outcome of a membership test: the coefficients of `f` in the
/// echelonized basis of `M_k` and how far the match was verified.
#[derive(Clone, Debug, Serialize)]
pub struct SpaceCertificate {
    pub weight: u32,
    pub in_space: bool,
    pub combination: Vec<String>,
    pub sturm_bound: usize,
    pub checked_through: usize,
}

/// Sturm bound for level one: agreement through `q^{floor(k/12)}` determines a form.
pub fn sturm_bound(k: u32) -> usize {
    (k / 12) as usize + 1
}

pub fn is_in_space(f: &QSeries, k: u32) -> Result<SpaceCertificate> {
    let sb = sturm_bound(k);
    if f.trunc() < sb {
        return Err(Error::InsufficientPrecision(format!("need q^{sb} for weight {k}, have q^{}", f.trunc())));
    }
    let basis = modular_basis(k, f.trunc())?;
    let mut rest = f.clone();
    let mut comb = Vec::new();
    for b in &basis {
        let p = b.valuation().expect("basis element is nonzero");
        let c = rest.coeff(p)?;
        rest = rest.sub(&b.scale(&c));
        comb.push(c.to_string());
    }
    Ok(SpaceCertificate { weight: k, in_space: rest.is_zero(), combination: comb, sturm_bound: sb, checked_through: f.trunc() })
}
