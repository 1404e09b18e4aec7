//! Genus-two Siegel coefficient tables, the Maass lift of index-one Jacobi
//! cusp forms, and the `M'` coordinates `S = -n b4 - m b-4 - (r/alpha) y^v`.
//!
//! A half-integral matrix `[[a, b/2], [b/2, c]]` is stored as `(a, b, c)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_samples, ClassifierReport, VanishingReport, Witness};
use crate::error::{domain, Error, Result};
use crate::exact::{divisors, Mat2};
use crate::jacobi::JacobiForm;
use crate::pairspace::from_coords;

pub type Form = (i64, i64, i64);

/// `4ac - b^2`.
pub fn det4(t: Form) -> i64 {
    4 * t.0 * t.2 - t.1 * t.1
}

pub fn form_content(t: Form) -> i64 {
    t.0.gcd(&t.1).gcd(&t.2)
}

/// `tU T U` for `U = [[p, q], [r, s]]`.
pub fn act(t: Form, u: &Mat2<i64>) -> Form {
    let (a, b, c) = t;
    let [[p, q], [r, s]] = u.0;
    (a * p * p + b * p * r + c * r * r, 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, a * q * q + b * q * s + c * s * s)
}

pub fn is_psd(t: Form) -> bool {
    t.0 >= 0 && t.2 >= 0 && det4(t) >= 0
}

/// Reduction of a positive definite form under `SL2(Z)`:
/// `|b| <= a <= c`, and `b >= 0` when `|b| = a` or `a = c`.
pub fn reduce_sl2(t: Form) -> Result<Form> {
    let (mut a, mut b, mut c) = t;
    if !(a > 0 && det4(t) > 0) {
        return domain(format!("{t:?} is not positive definite"));
    }
    loop {
        if b.abs() > a || b == -a {
            // translate b into (-a, a]
            let k = Integer::div_floor(&(b + a - 1), &(2 * a));
            c = a * k * k - b * k + c;
            b -= 2 * a * k;
            continue;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return Ok((a, b, c));
    }
}

/// Canonical `GL2(Z)` representative of a positive semi-definite form:
/// `0 <= b <= a <= c`, or `(0, 0, k)` on the boundary.
pub fn reduce_gl2(t: Form) -> Result<Form> {
    if !is_psd(t) {
        return domain(format!("{t:?} is not positive semi-definite"));
    }
    if det4(t) == 0 {
        return Ok((0, 0, t.0.gcd(&t.2)));
    }
    let (a, b, c) = reduce_sl2(t)?;
    Ok((a, b.abs(), c))
}

/// Reduced positive definite forms with `4ac - b^2 <= bound`.
pub fn reduced_forms(bound: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= bound {
        for b in 0..=a {
            let mut c = a;
            while 4 * a * c - b * b <= bound {
                out.push((a, b, c));
                c += 1;
            }
        }
        a += 1;
    }
    out
}

fn rat(x: &str) -> Result<BigRational> {
    x.trim().parse::<BigRational>().map_err(|e| Error::Parse(format!("bad rational {x:?}: {e}")))
}

/// Siegel coefficients `B[T]` on `GL2(Z)`-reduced keys with `4ac - b^2 <= bound`,
/// plus the boundary keys `(0, 0, k)` for `k <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelCoeffTable {
    pub weight: i64,
    pub bound: i64,
    pub cuspidal: bool,
    entries: BTreeMap<Form, BigRational>,
}

impl SiegelCoeffTable {
    fn keys(bound: i64) -> impl Iterator<Item = Form> {
        (0..=bound).map(|k| (0, 0, k)).chain(reduced_forms(bound))
    }

    fn build(weight: i64, bound: i64, mut f: impl FnMut(Form) -> Result<BigRational>) -> Result<Self> {
        if bound < 0 {
            return domain("bound must be nonnegative");
        }
        let entries = Self::keys(bound).map(|t| Ok((t, f(t)?))).collect::<Result<BTreeMap<_, _>>>()?;
        let cuspidal = entries.iter().all(|(t, v)| det4(*t) > 0 || v.is_zero());
        Ok(SiegelCoeffTable { weight, bound, cuspidal, entries })
    }

    pub fn zero(weight: i64, bound: i64) -> Self {
        Self::build(weight, bound, |_| Ok(BigRational::zero())).expect("zero table")
    }

    /// `B[T]`; zero off the semi-definite cone.
    pub fn get(&self, t: Form) -> Result<BigRational> {
        if !is_psd(t) {
            return Ok(BigRational::zero());
        }
        let key = reduce_gl2(t)?;
        self.entries
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::OutOfBound(format!("{t:?} (4ac-b^2 = {}) beyond bound {}", det4(t), self.bound)))
    }

    /// Overwrite the value of the orbit of `t`.
    pub fn set(&mut self, t: Form, v: BigRational) -> Result<()> {
        let key = reduce_gl2(t)?;
        match self.entries.get_mut(&key) {
            Some(slot) => *slot = v,
            None => return Err(Error::OutOfBound(format!("{t:?} beyond bound {}", self.bound))),
        }
        self.cuspidal = self.entries.iter().all(|(t, v)| det4(*t) > 0 || v.is_zero());
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Form, &BigRational)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((a, b, c), v)| (format!("{a},{b},{c}"), serde_json::Value::String(v.to_string())))
            .collect();
        serde_json::json!({ "weight": self.weight, "bound": self.bound, "cuspidal": self.cuspidal, "entries": entries })
    }

    /// Inverse of [`to_json`](Self::to_json); absent keys are zero.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let int = |k: &str| v.get(k).and_then(|x| x.as_i64()).ok_or_else(|| Error::Parse(format!("missing integer field {k:?}")));
        let (weight, bound) = (int("weight")?, int("bound")?);
        let raw = v.get("entries").and_then(|e| e.as_object()).ok_or_else(|| Error::Parse("missing entries object".into()))?;
        let mut given = BTreeMap::new();
        for (k, x) in raw {
            let parts: Vec<i64> = k.split(',').map(|p| p.trim().parse::<i64>()).collect::<std::result::Result<_, _>>().map_err(|_| Error::Parse(format!("bad key {k:?}")))?;
            let [a, b, c] = parts[..] else { return Err(Error::Parse(format!("bad key {k:?}"))) };
            let s = x.as_str().ok_or_else(|| Error::Parse(format!("value of {k:?} is not a string")))?;
            given.insert(reduce_gl2((a, b, c))?, rat(s)?);
        }
        let t = Self::build(weight, bound, |t| Ok(given.remove(&t).unwrap_or_else(BigRational::zero)))?;
        if let Some(k) = given.keys().next() {
            return Err(Error::OutOfBound(format!("entry {k:?} beyond bound {bound}")));
        }
        Ok(t)
    }
}

/// Maass lift `B[(a,b,c)] = sum_{d | (a,b,c)} d^{l-1} c(ac/d^2, b/d)`.
pub fn maass_lift(phi: &JacobiForm, bound: i64) -> Result<SiegelCoeffTable> {
    if phi.index != 1 {
        return domain("maass_lift needs an index-one form");
    }
    if phi.cuspidal == Some(false) || !phi.check_cusp() {
        return domain(format!("{} is not a cusp form", phi.name));
    }
    if phi.dmax() < bound {
        return Err(Error::InsufficientPrecision(format!("{} covers discriminants <= {}, need {bound}", phi.name, phi.dmax())));
    }
    let ell = phi.weight;
    if ell < 1 {
        return domain("weight must be positive");
    }
    let mut t = SiegelCoeffTable::build(ell, bound, |t| {
        let g = form_content(t);
        if g == 0 {
            return Ok(BigRational::zero());
        }
        let mut s = BigRational::zero();
        for d in divisors(g) {
            let w = BigInt::from(d).pow((ell - 1) as u32);
            s += phi.coeff_disc(det4(t) / (d * d))? * BigRational::from_integer(w);
        }
        Ok(s)
    })?;
    t.cuspidal = true;
    Ok(t)
}

/// Table `B[T] = f(4ac - b^2, content)`.
pub fn synthetic_siegel(weight: i64, bound: i64, f: impl Fn(i64, i64) -> BigRational) -> Result<SiegelCoeffTable> {
    SiegelCoeffTable::build(weight, bound, |t| Ok(f(det4(t), form_content(t))))
}

/// The vector `-c b4 - (b/2)(b3 - b-3) - a b-4` of `V22`.
pub fn siegel_to_mprime(t: Form) -> Mat2<BigRational> {
    let (a, b, c) = t;
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    from_coords([r(-b, 2), r(-c, 1), r(-a, 1), r(b, 2)])
}

/// `S = -n b4 - m b-4 - (r/alpha) y^v` with `y^v = b3 - (alpha/2) b-3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MPrimeIndex {
    pub n: i64,
    pub m: i64,
    pub r: i64,
    pub alpha: i64,
}

impl MPrimeIndex {
    pub fn new(n: i64, m: i64, r: i64, alpha: i64) -> Result<Self> {
        if alpha <= 0 || alpha % 2 != 0 {
            return domain(format!("alpha must be positive and even, got {alpha}"));
        }
        Ok(MPrimeIndex { n, m, r, alpha })
    }

    /// `alpha (S,S) = 2 alpha n m - r^2`.
    pub fn scaled_norm(&self) -> i64 {
        2 * self.alpha * self.n * self.m - self.r * self.r
    }

    /// `(S,S) = 2nm - r^2/alpha`.
    pub fn norm(&self) -> BigRational {
        BigRational::new(self.scaled_norm().into(), self.alpha.into())
    }

    pub fn in_dual_cone(&self) -> bool {
        self.n >= 0 && self.m >= 0 && self.scaled_norm() >= 0
    }

    pub fn content(&self) -> i64 {
        self.n.gcd(&self.m).gcd(&self.r)
    }

    pub fn vector(&self) -> Mat2<BigRational> {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        from_coords([r(-self.r, self.alpha), r(-self.n, 1), r(-self.m, 1), r(self.r, 2)])
    }

    /// The Siegel index `(a, b, c) = (m, r, n)` at `alpha = 2`.
    pub fn to_siegel(&self) -> Result<Form> {
        if self.alpha != 2 {
            return domain("the Siegel dictionary needs alpha = 2");
        }
        Ok((self.m, self.r, self.n))
    }

    pub fn from_siegel(t: Form) -> Self {
        MPrimeIndex { n: t.2, m: t.0, r: t.1, alpha: 2 }
    }
}

/// `A[S]` on all `S` with `0 <= n, m <= nmax` and `0 <= 2 alpha nm - r^2 <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct MPrimeCoeffTable {
    pub weight: i64,
    pub alpha: i64,
    pub bound: i64,
    pub nmax: i64,
    entries: BTreeMap<(i64, i64, i64), BigRational>,
}

impl MPrimeCoeffTable {
    fn indices(alpha: i64, bound: i64, nmax: i64) -> impl Iterator<Item = (i64, i64, i64)> {
        (0..=nmax).flat_map(move |n| {
            (0..=nmax).flat_map(move |m| {
                let top = ((2 * alpha * n * m) as f64).sqrt() as i64 + 1;
                (-top..=top).filter_map(move |r| {
                    let s = 2 * alpha * n * m - r * r;
                    (0..=bound).contains(&s).then_some((n, m, r))
                })
            })
        })
    }

    /// Tabulate `f` on every index in range.
    pub fn build(weight: i64, alpha: i64, bound: i64, nmax: i64, f: impl Fn(MPrimeIndex) -> Result<BigRational>) -> Result<Self> {
        MPrimeIndex::new(0, 0, 0, alpha)?;
        if bound < 0 || nmax < 0 {
            return domain("bounds must be nonnegative");
        }
        let entries = Self::indices(alpha, bound, nmax)
            .map(|(n, m, r)| Ok(((n, m, r), f(MPrimeIndex { n, m, r, alpha })?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(MPrimeCoeffTable { weight, alpha, bound, nmax, entries })
    }

    /// The `alpha = 2` table `A[S(a,b,c)] = B[(a,b,c)]`.
    pub fn from_siegel(t: &SiegelCoeffTable, nmax: i64) -> Result<Self> {
        Self::build(t.weight, 2, t.bound, nmax, |s| t.get(s.to_siegel()?))
    }

    pub fn get(&self, s: MPrimeIndex) -> Result<BigRational> {
        if s.alpha != self.alpha {
            return domain(format!("alpha {} does not match table alpha {}", s.alpha, self.alpha));
        }
        if !s.in_dual_cone() {
            return Ok(BigRational::zero());
        }
        self.entries.get(&(s.n, s.m, s.r)).cloned().ok_or_else(|| Error::OutOfBound(format!("{s:?} outside the table")))
    }

    pub fn entries(&self) -> impl Iterator<Item = (MPrimeIndex, &BigRational)> {
        let alpha = self.alpha;
        self.entries.iter().map(move |(&(n, m, r), v)| (MPrimeIndex { n, m, r, alpha }, v))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((n, m, r), v)| (format!("{n},{m},{r}"), serde_json::Value::String(v.to_string())))
            .collect();
        serde_json::json!({ "weight": self.weight, "alpha": self.alpha, "bound": self.bound, "nmax": self.nmax, "entries": entries })
    }
}

/// The `m`-th Fourier-Jacobi coefficient as an `(n, r)` table.
pub fn fj_slice(a: &MPrimeCoeffTable, m: i64) -> Result<BTreeMap<(i64, i64), BigRational>> {
    if m < 0 || m > a.nmax {
        return Err(Error::OutOfBound(format!("slice m = {m} outside 0..={}", a.nmax)));
    }
    Ok(a.entries.iter().filter(|((_, mm, _), _)| *mm == m).map(|(&(n, _, r), v)| ((n, r), v.clone())).collect())
}

/// Growth of `|A[S]|` against `(S,S)^{(l+1)/2}` over `(S,S) > 0`.
pub fn mprime_hecke_classifier(a: &MPrimeCoeffTable, ell: i64) -> Result<ClassifierReport> {
    if ell < 5 {
        return domain("the Hecke-bound classifier needs weight >= 5");
    }
    let pts: Vec<(f64, f64)> = a
        .entries()
        .filter(|(s, _)| s.scaled_norm() > 0)
        .map(|(s, v)| (s.norm().to_f64().unwrap_or(f64::NAN), v.abs().to_f64().unwrap_or(f64::INFINITY)))
        .collect();
    if pts.len() < 100 {
        return Err(Error::InsufficientData(format!("{} indices with (S,S) > 0, need 100", pts.len())));
    }
    let x_max = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    classify_samples(&pts, ell, x_max)
}

/// Nonzero `A[S]` at primitive `S`.
pub fn mprime_primitive_vanishing(a: &MPrimeCoeffTable) -> Result<VanishingReport<MPrimeIndex>> {
    if a.bound < 50 {
        return domain("primitive vanishing scan needs bound >= 50");
    }
    let nonzero = a
        .entries()
        .filter(|(_, v)| !v.is_zero())
        .map(|(s, v)| (Witness { index: s, value: v.to_string(), norm: s.scaled_norm() }, s.content() == 1))
        .collect();
    Ok(VanishingReport::from_nonzero(
        a.bound,
        a.entries.len(),
        nonzero,
        "all nonzero coefficients sit at imprimitive S; a genuine modular table of this kind vanishes identically",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{VanishingVerdict, Verdict};
    use crate::jacobi::JacobiRing;
    use crate::pairspace::{basis, bilinear};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::OnceLock;

    fn ring() -> &'static JacobiRing {
        static R: OnceLock<JacobiRing> = OnceLock::new();
        R.get_or_init(|| JacobiRing::new(80).unwrap())
    }

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn random_gl2(rng: &mut ChaCha8Rng) -> Mat2<i64> {
        let mut u = Mat2::identity();
        for _ in 0..rng.gen_range(1..8) {
            let k = rng.gen_range(-2..=2);
            let e = match rng.gen_range(0..4) {
                0 => Mat2::new(1, k, 0, 1),
                1 => Mat2::new(1, 0, k, 1),
                2 => Mat2::new(0, 1, 1, 0),
                _ => Mat2::new(-1, 0, 0, 1),
            };
            u = u.mul(&e);
        }
        u
    }

    #[test]
    fn reduction_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for t in reduced_forms(60) {
            assert_eq!(reduce_gl2(t).unwrap(), t);
            for _ in 0..5 {
                let u = random_gl2(&mut rng);
                assert_eq!(reduce_gl2(act(t, &u)).unwrap(), t);
            }
        }
        assert_eq!(reduce_gl2((4, 4, 1)).unwrap(), (0, 0, 1));
        assert_eq!(reduce_gl2((2, 4, 2)).unwrap(), (0, 0, 2));
        assert_eq!(reduce_sl2((2, -1, 3)).unwrap(), (2, -1, 3));
        assert_eq!(reduce_sl2((2, 1, 3)).unwrap(), (2, 1, 3));
        assert!(reduce_gl2((1, 3, 1)).is_err());
    }

    #[test]
    fn maass_lift_examples() {
        let phi = ring().phi10_1();
        let t = maass_lift(&phi, 200).unwrap();
        assert!(t.cuspidal);
        for &(a, b, c) in &[(1, 1, 1), (1, 0, 3), (2, 1, 5), (3, 2, 7)] {
            assert_eq!(t.get((a, b, c)).unwrap(), phi.coeff(a * c, b).unwrap());
        }
        for &(a, b, c) in &[(1, 1, 1), (1, 0, 1), (1, 1, 3), (2, 1, 2)] {
            let want = phi.coeff(4 * a * c, 2 * b).unwrap() + phi.coeff(a * c, b).unwrap() * r(1 << 9);
            assert_eq!(t.get((2 * a, 2 * b, 2 * c)).unwrap(), want);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let forms = reduced_forms(40);
        for _ in 0..100 {
            let f = forms[rng.gen_range(0..forms.len())];
            let u = random_gl2(&mut rng);
            let g = act(f, &u);
            if det4(g) <= 200 {
                assert_eq!(t.get(g).unwrap(), t.get(f).unwrap());
            }
        }
        assert!(matches!(maass_lift(&phi, 10_000), Err(Error::InsufficientPrecision(_))));
        assert!(maass_lift(&ring().noncusp_weight10(), 50).is_err());
    }

    #[test]
    fn content_recursion() {
        let phi = ring().phi12_1();
        let t = maass_lift(&phi, 150).unwrap();
        for (&(a, b, c), v) in t.entries() {
            if det4((a, b, c)) > 0 && form_content((a, b, c)) == 1 {
                assert_eq!(v, &phi.coeff(a * c, b).unwrap());
            }
        }
    }

    #[test]
    fn synthetic_examples() {
        let ones = synthetic_siegel(20, 50, |d, _| if d > 0 { r(1) } else { r(0) }).unwrap();
        assert!(ones.cuspidal);
        assert_eq!(ones.get((3, 1, 4)).unwrap(), r(1));
        let disc = synthetic_siegel(20, 50, |d, _| r(d)).unwrap();
        assert_eq!(disc.get((2, 3, 5)).unwrap(), r(31));
        let prim = synthetic_siegel(20, 50, |d, g| if d > 0 && g == 1 { r(1) } else { r(0) }).unwrap();
        assert_eq!(prim.get((2, 2, 2)).unwrap(), r(0));
        assert_eq!(prim.get((2, 1, 2)).unwrap(), r(1));
        assert!(matches!(prim.get((10, 0, 10)), Err(Error::OutOfBound(_))));
        let back = SiegelCoeffTable::from_json(&disc.to_json()).unwrap();
        assert_eq!(back, disc);
    }

    #[test]
    fn mprime_dictionary() {
        let v = siegel_to_mprime((1, 0, 1));
        let want = basis(4).add(&basis(-4)).map(|x| -BigRational::from_integer((*x).into()));
        assert_eq!(v, want);
        assert!(siegel_to_mprime((0, 0, 0)).is_zero());
        for &t in &[(1, 1, 2), (3, -2, 5), (0, 0, 4)] {
            let s = MPrimeIndex::from_siegel(t);
            assert_eq!(s.vector(), siegel_to_mprime(t));
            assert_eq!(s.to_siegel().unwrap(), t);
            assert_eq!(s.scaled_norm(), det4(t));
        }
    }

    proptest! {
        #[test]
        fn mprime_norm_matches_pairing(n in -20i64..20, m in -20i64..20, r in -30i64..30, half in 1i64..5) {
            let s = MPrimeIndex::new(n, m, r, 2 * half).unwrap();
            let v = s.vector();
            prop_assert_eq!(bilinear(&v, &v), s.norm());
        }

        #[test]
        fn gl2_reduction_is_invariant(a in 1i64..30, b in -30i64..30, c in 1i64..30, k in -3i64..3) {
            prop_assume!(4 * a * c > b * b);
            let t = (a, b, c);
            for u in [Mat2::new(1, k, 0, 1), Mat2::new(0, 1, 1, 0), Mat2::new(1, 0, k, -1)] {
                prop_assert_eq!(reduce_gl2(act(t, &u)).unwrap(), reduce_gl2(t).unwrap());
            }
        }
    }

    #[test]
    fn slices() {
        let phi = ring().phi10_1();
        let b = maass_lift(&phi, 120).unwrap();
        let a = MPrimeCoeffTable::from_siegel(&b, 12).unwrap();
        assert!(fj_slice(&a, 0).unwrap().values().all(Zero::is_zero));
        for ((n, r), v) in fj_slice(&a, 1).unwrap() {
            assert_eq!(v, phi.coeff(n, r).unwrap());
        }
        for (s, v) in a.entries() {
            assert!(s.in_dual_cone());
            if s.scaled_norm() == 0 {
                assert!(v.is_zero());
            }
        }
        let z = MPrimeCoeffTable::from_siegel(&SiegelCoeffTable::zero(10, 120), 12).unwrap();
        assert!(fj_slice(&z, 3).unwrap().values().all(Zero::is_zero));
        assert!(fj_slice(&z, 13).is_err());
    }

    #[test]
    fn mprime_classifier_and_vanishing() {
        let b = maass_lift(&ring().phi10_1(), 300).unwrap();
        let a = MPrimeCoeffTable::from_siegel(&b, 20).unwrap();
        assert_eq!(mprime_hecke_classifier(&a, 10).unwrap().verdict, Verdict::ConsistentWithCusp);
        let grow = MPrimeCoeffTable::build(10, 2, 300, 20, |s| Ok(s.norm().pow(10))).unwrap();
        assert_eq!(mprime_hecke_classifier(&grow, 10).unwrap().verdict, Verdict::GrowthDetected);
        let zero = MPrimeCoeffTable::build(10, 2, 300, 20, |_| Ok(r(0))).unwrap();
        assert_eq!(mprime_hecke_classifier(&zero, 10).unwrap().verdict, Verdict::ConsistentWithCusp);
        let small = MPrimeCoeffTable::build(10, 2, 20, 2, |_| Ok(r(0))).unwrap();
        assert!(matches!(mprime_hecke_classifier(&small, 10), Err(Error::InsufficientData(_))));

        let v = mprime_primitive_vanishing(&zero).unwrap();
        assert_eq!(v.verdict, VanishingVerdict::ConsistentWithZero);
        assert!(v.warning.is_none());
        let v = mprime_primitive_vanishing(&a).unwrap();
        assert_eq!(v.verdict, VanishingVerdict::NonzeroPrimitive);
        assert!(!v.witnesses.is_empty());
        let imprim = MPrimeCoeffTable::build(10, 2, 300, 20, |s| Ok(if s.content() > 1 && s.scaled_norm() > 0 { r(1) } else { r(0) })).unwrap();
        let v = mprime_primitive_vanishing(&imprim).unwrap();
        assert_eq!(v.verdict, VanishingVerdict::ConsistentWithZero);
        assert!(v.warning.is_some());
    }
}
