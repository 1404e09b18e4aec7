//! Quaternionic coefficient tables `Lambda[B]` indexed by integral pairs,
//! the theta lift from Siegel cusp forms, and the checks that run on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassifierReport, VanishingReport, Witness, MIN_RANGE};
use crate::error::{domain, Error, Result};
use crate::exact::{all_right_divisors, divisors, hecke_coset_reps, pair_times, Mat2};
use crate::orbits::normal_form_pair;
use crate::pairspace::{content, from_coords, is_pos_def, is_slice_primitive, q_of_b, t_triple, Pair, PairB};
use crate::siegel::{det4, reduce_sl2, Form, SiegelCoeffTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    ThetaLift,
    Synthetic,
    External,
}

/// Which pairs a lifted table stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Every factorization `c = mn` of every reduced `T`, plus Hecke translates.
    Full,
    /// One slice-primitive pair per reduced `T`.
    Primitive,
}

const CANONICALIZATION: &str = "normal form [y_alpha, -n b4 - m b-4 + r b-3] and its right Hecke translates";

/// `SL2(Z)`-reduced positive definite forms with `4ac - b^2 <= bound`.
pub fn sl2_reduced_forms(bound: i64) -> Vec<Form> {
    let mut out = Vec::new();
    for (a, b, c) in crate::siegel::reduced_forms(bound) {
        out.push((a, b, c));
        if b > 0 && b < a && a < c {
            out.push((a, -b, c));
        }
    }
    out
}

/// Pairs covering every reduced `T` with `disc <= bound`; each pair `B`
/// has `T(B)` reduced or a Hecke translate of one that does.
pub fn family_pairs(bound: i64, family: Family) -> Vec<PairB> {
    let mut out = Vec::new();
    for (a, b, c) in sl2_reduced_forms(bound) {
        let ms: Vec<i64> = match family {
            Family::Full => divisors(c),
            Family::Primitive => vec![1],
        };
        for m in ms {
            let b0 = normal_form_pair(2 * a, c / m, m, -b);
            if family == Family::Full {
                let d = det4((a, b, c));
                let mut n = 2;
                while d * n * n <= bound {
                    for r in hecke_coset_reps(n).expect("n >= 1") {
                        out.push(pair_times(&b0, &r));
                    }
                    n += 1;
                }
            }
            out.push(b0);
        }
    }
    out
}

/// `Lambda[B]` for the lift of a cuspidal Siegel table:
/// the sum over right divisors `r` of `|det r|^{l-1} B[T(B r^{-1})]`.
pub fn theta_value(bxi: &SiegelCoeffTable, b: &PairB) -> Result<BigRational> {
    theta_value_with(bxi, b, |_| Mat2::identity())
}

fn theta_value_with(bxi: &SiegelCoeffTable, b: &PairB, mut twist: impl FnMut(&Mat2<i64>) -> Mat2<i64>) -> Result<BigRational> {
    if !is_pos_def(b) {
        return Ok(BigRational::zero());
    }
    let mut s = BigRational::zero();
    for (r, quotient) in all_right_divisors(b) {
        // the representative gamma r gives B (gamma r)^{-1} = quotient gamma^{-1}
        let g = twist(&r);
        let ginv = g.inv_unimodular().ok_or_else(|| Error::Domain("twist is not unimodular".into()))?;
        let bp = pair_times(&quotient, &ginv);
        let w = BigInt::from(r.det().abs()).pow((bxi.weight - 1) as u32);
        s += bxi.get(t_triple(&bp))? * BigRational::from_integer(w);
    }
    Ok(s)
}

/// A table of quaternionic coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatCoeffTable {
    pub weight: i64,
    pub provenance: Provenance,
    pub bound: i64,
    pub cuspidal: bool,
    pub canonicalization: String,
    entries: BTreeMap<PairB, BigRational>,
    source: Option<SiegelCoeffTable>,
}

impl QuatCoeffTable {
    pub fn new(weight: i64, provenance: Provenance, bound: i64, cuspidal: bool) -> Self {
        QuatCoeffTable { weight, provenance, bound, cuspidal, canonicalization: "raw pairs".into(), entries: BTreeMap::new(), source: None }
    }

    /// Tabulate `f` over a family of pairs.
    pub fn from_fn(weight: i64, bound: i64, family: Family, f: impl Fn(&PairB) -> BigRational) -> Self {
        let mut t = Self::new(weight, Provenance::Synthetic, bound, true);
        t.canonicalization = CANONICALIZATION.into();
        for b in family_pairs(bound, family) {
            let v = f(&b);
            t.entries.insert(b, v);
        }
        t
    }

    pub fn insert(&mut self, b: PairB, v: BigRational) {
        self.entries.insert(b, v);
    }

    pub fn get(&self, b: &PairB) -> Option<&BigRational> {
        self.entries.get(b)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&PairB, &BigRational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Zero::is_zero)
    }

    pub fn source(&self) -> Option<&SiegelCoeffTable> {
        self.source.as_ref()
    }

    /// `Lambda[B]` from the stored entries, the lifted source, or the
    /// support condition of a cuspidal table.
    pub fn value(&self, b: &PairB) -> Result<BigRational> {
        if let Some(v) = self.entries.get(b) {
            return Ok(v.clone());
        }
        if self.cuspidal && !is_pos_def(b) {
            return Ok(BigRational::zero());
        }
        match &self.source {
            Some(s) => theta_value(s, b),
            None => Err(Error::InsufficientData(format!("no coefficient stored for {b:?}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(b, v)| serde_json::json!({ "B": b, "value": v.to_string() }))
            .collect();
        serde_json::json!({
            "weight": self.weight,
            "provenance": self.provenance,
            "bound": self.bound,
            "cuspidal": self.cuspidal,
            "canonicalization": self.canonicalization,
            "entries": entries,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
        let int = |k: &str| field(k)?.as_i64().ok_or_else(|| Error::Parse(format!("field {k:?} is not an integer")));
        let provenance: Provenance = serde_json::from_value(field("provenance")?.clone()).map_err(|e| Error::Parse(format!("provenance: {e}")))?;
        let cuspidal = v.get("cuspidal").and_then(|x| x.as_bool()).unwrap_or(false);
        let mut t = Self::new(int("weight")?, provenance, int("bound")?, cuspidal);
        if let Some(c) = v.get("canonicalization").and_then(|x| x.as_str()) {
            t.canonicalization = c.into();
        }
        let list = field("entries")?.as_array().ok_or_else(|| Error::Parse("entries must be an array".into()))?;
        for e in list {
            let b: PairB = serde_json::from_value(e.get("B").cloned().unwrap_or_default()).map_err(|x| Error::Parse(format!("bad pair: {x}")))?;
            let s = e.get("value").and_then(|x| x.as_str()).ok_or_else(|| Error::Parse("entry value must be a string".into()))?;
            let val = s.parse::<BigRational>().map_err(|x| Error::Parse(format!("bad value {s:?}: {x}")))?;
            t.entries.insert(b, val);
        }
        Ok(t)
    }
}

fn check_lift_input(bxi: &SiegelCoeffTable, bound: i64) -> Result<()> {
    let ell = bxi.weight;
    if ell % 2 != 0 || ell < 16 {
        return domain(format!("theta lift needs even weight >= 16, got {ell}"));
    }
    if !bxi.cuspidal {
        return domain("theta lift needs a cuspidal Siegel table");
    }
    if bound < 1 {
        return domain("bound must be positive");
    }
    if bound > bxi.bound {
        return Err(Error::OutOfBound(format!("Q_max {bound} exceeds the Siegel bound {}", bxi.bound)));
    }
    Ok(())
}

/// The theta lift of a cuspidal Siegel table on a family of pairs with
/// `Q(B) <= bound`.
pub fn theta_lift(bxi: &SiegelCoeffTable, bound: i64, family: Family) -> Result<QuatCoeffTable> {
    check_lift_input(bxi, bound)?;
    let mut t = QuatCoeffTable::new(bxi.weight, Provenance::ThetaLift, bound, true);
    t.canonicalization = CANONICALIZATION.into();
    for b in family_pairs(bound, family) {
        let v = theta_value(bxi, &b)?;
        t.entries.insert(b, v);
    }
    t.source = Some(bxi.clone());
    Ok(t)
}

/// [`theta_lift`] with every divisor representative `r` replaced by
/// `gamma r` for a random unimodular `gamma`.
pub fn theta_lift_twisted(bxi: &SiegelCoeffTable, bound: i64, family: Family, seed: u64) -> Result<QuatCoeffTable> {
    check_lift_input(bxi, bound)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = QuatCoeffTable::new(bxi.weight, Provenance::ThetaLift, bound, true);
    t.canonicalization = CANONICALIZATION.into();
    for b in family_pairs(bound, family) {
        let v = theta_value_with(bxi, &b, |_| random_gl2(&mut rng))?;
        t.entries.insert(b, v);
    }
    t.source = Some(bxi.clone());
    Ok(t)
}

/// A random element of `GL2(Z)` as a short word in elementary matrices.
pub fn random_gl2(rng: &mut impl Rng) -> Mat2<i64> {
    let mut u = Mat2::identity();
    for _ in 0..rng.gen_range(1..6) {
        let k = rng.gen_range(-3..=3);
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

/// `Lambda[B]` for slice-primitive `B`, keyed by the reduced form of `T(B)`.
#[derive(Clone, Debug)]
pub struct PrimIndex {
    values: BTreeMap<Form, (PairB, BigRational)>,
    cuspidal: bool,
}

impl PrimIndex {
    /// Fails with a Maass violation when two slice-primitive pairs with
    /// equivalent `T` carry different values.
    pub fn build(table: &QuatCoeffTable) -> Result<Self> {
        let mut values: BTreeMap<Form, (PairB, BigRational)> = BTreeMap::new();
        for (b, v) in table.entries() {
            if !is_pos_def(b) || !is_slice_primitive(b) {
                continue;
            }
            let key = reduce_sl2(t_triple(b))?;
            match values.get(&key) {
                Some((b0, v0)) if v0 != v => {
                    return Err(Error::MaassViolation(format!("{b0:?} and {b:?} share T = {key:?} but carry {v0} and {v}")));
                }
                Some(_) => {}
                None => {
                    values.insert(key, (b.clone(), v.clone()));
                }
            }
        }
        Ok(PrimIndex { values, cuspidal: table.cuspidal })
    }

    pub fn get(&self, b: &PairB) -> Result<BigRational> {
        if !is_pos_def(b) {
            if self.cuspidal {
                return Ok(BigRational::zero());
            }
            return Err(Error::SearchExhausted(format!("{b:?} is not positive definite")));
        }
        let key = reduce_sl2(t_triple(b))?;
        self.values
            .get(&key)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::SearchExhausted(format!("no slice-primitive pair with T equivalent to {key:?} in the table")))
    }
}

/// `Lambda^prim[B]`: the value at a slice-primitive pair with the same `T`.
pub fn lambda_prim(table: &QuatCoeffTable, b: &PairB) -> Result<BigRational> {
    let idx = PrimIndex::build(table)?;
    if is_slice_primitive(b) {
        if let Some(v) = table.get(b) {
            return Ok(v.clone());
        }
    }
    idx.get(b)
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub b: PairB,
    pub stored: String,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaassReport {
    pub pass: bool,
    pub bound: i64,
    pub checked: usize,
    pub violations: Vec<Mismatch>,
}

/// `Lambda[B] = sum_r |det r|^{l-1} Lambda^prim[B r^{-1}]` for every stored
/// `B > 0` with `Q(B) <= bound`.
pub fn maass_relation_check(table: &QuatCoeffTable, bound: i64) -> Result<MaassReport> {
    let idx = PrimIndex::build(table)?;
    let mut violations = Vec::new();
    let mut missing = Vec::new();
    let mut checked = 0;
    for (b, v) in table.entries() {
        if !is_pos_def(b) || q_of_b(b) > bound {
            continue;
        }
        checked += 1;
        let mut s = BigRational::zero();
        for (r, quotient) in all_right_divisors(b) {
            match idx.get(&quotient) {
                Ok(x) => s += x * BigRational::from_integer(BigInt::from(r.det().abs()).pow((table.weight - 1) as u32)),
                Err(_) => missing.push(quotient),
            }
        }
        if &s != v {
            violations.push(Mismatch { b: b.clone(), stored: v.to_string(), expected: s.to_string() });
        }
    }
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().take(10).map(|b| format!("{b:?}")).collect();
        return Err(Error::InsufficientData(format!("{} quotients not covered: {}", missing.len(), list.join("; "))));
    }
    Ok(MaassReport { pass: violations.is_empty(), bound, checked, violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpezialWitness {
    pub t: Form,
    pub b1: PairB,
    pub v1: String,
    pub b2: PairB,
    pub v2: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpezialscharReport {
    pub pass: bool,
    pub bound: i64,
    pub groups: usize,
    pub largest_group: usize,
    pub witnesses: Vec<SpezialWitness>,
}

/// Group the stored slice-primitive pairs by `T(B)` and compare values.
pub fn spezialschar_test(table: &QuatCoeffTable, bound: i64) -> SpezialscharReport {
    let mut groups: BTreeMap<Form, Vec<(&PairB, &BigRational)>> = BTreeMap::new();
    for (b, v) in table.entries() {
        if q_of_b(b) <= bound && is_slice_primitive(b) {
            groups.entry(t_triple(b)).or_default().push((b, v));
        }
    }
    let mut witnesses = Vec::new();
    for (t, g) in &groups {
        let (b1, v1) = g[0];
        if let Some((b2, v2)) = g.iter().find(|(_, v)| *v != v1) {
            witnesses.push(SpezialWitness { t: *t, b1: b1.clone(), v1: v1.to_string(), b2: (*b2).clone(), v2: v2.to_string() });
        }
    }
    SpezialscharReport {
        pass: witnesses.is_empty(),
        bound,
        groups: groups.len(),
        largest_group: groups.values().map(Vec::len).max().unwrap_or(0),
        witnesses,
    }
}

/// Coefficient `A[S]` of the Fourier-Jacobi coefficient along `n y_alpha`,
/// `S = (n', m', r')`: the sum over `s` in `0..n alpha` of
/// `Lambda[n y_alpha, -n' b4 - m' b-4 + ((s - r')/alpha) b3 + ((s + r')/2) b-3]`
/// over integral summands.
pub fn fj_assemble(table: &QuatCoeffTable, n: i64, alpha: i64, s_data: (i64, i64, i64)) -> Result<BigRational> {
    if n < 1 || alpha < 2 || alpha % 2 != 0 {
        return domain("fj_assemble needs n >= 1 and even alpha >= 2");
    }
    let (np, mp, rp) = s_data;
    let t1 = Mat2::new(n, 0, 0, n * alpha / 2);
    let mut total = BigRational::zero();
    for s in 0..n * alpha {
        if (s - rp) % alpha != 0 || (s + rp) % 2 != 0 {
            continue;
        }
        let t2 = from_coords([(s - rp) / alpha, -np, -mp, (s + rp) / 2]);
        total += table.value(&Pair::new(t1.clone(), t2))?;
    }
    Ok(total)
}

/// `sum_{j < |k|} Lambda[a b3 + c b-3 + j b-4, -b b-4]` (one term when
/// `k = 0`), the constant-term coefficient at `C = (a, b, c)` up to a global
/// nonzero unit.
pub fn constant_term_coeff(table: &QuatCoeffTable, c: (i64, i64, i64), pairing: i64) -> Result<BigRational> {
    let (a, b, cc) = c;
    let terms = pairing.abs().max(1);
    let mut total = BigRational::zero();
    for j in 0..terms {
        let pair = Pair::new(from_coords([a, 0, j, cc]), from_coords([0, 0, -b, 0]));
        total += table.value(&pair)?;
    }
    Ok(total)
}

/// Constant-term coefficients on `0 <= n_i <= nmax`.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantTermTable {
    pub entries: BTreeMap<String, String>,
    pub all_zero: bool,
}

pub fn constant_term_table(table: &QuatCoeffTable, nmax: i64, pairing: i64) -> Result<ConstantTermTable> {
    let mut entries = BTreeMap::new();
    let mut all_zero = true;
    for a in 0..=nmax {
        for b in 0..=nmax {
            for c in 0..=nmax {
                let v = constant_term_coeff(table, (a, b, c), pairing)?;
                all_zero &= v.is_zero();
                entries.insert(format!("{a},{b},{c}"), v.to_string());
            }
        }
    }
    Ok(ConstantTermTable { entries, all_zero })
}

/// Nonzero coefficients at primitive pairs (slice-primitive for cuspidal tables).
pub fn primitive_vanishing_detector(table: &QuatCoeffTable, bound: i64) -> VanishingReport<PairB> {
    let mut checked = 0;
    let mut nonzero = Vec::new();
    for (b, v) in table.entries() {
        let qb = q_of_b(b);
        if qb > bound {
            continue;
        }
        checked += 1;
        if v.is_zero() {
            continue;
        }
        let prim = if table.cuspidal { is_slice_primitive(b) } else { content(b) == 1 };
        nonzero.push((Witness { index: b.clone(), value: v.to_string(), norm: qb }, prim));
    }
    nonzero.sort_by_key(|(w, _)| w.norm);
    VanishingReport::from_nonzero(
        bound,
        checked,
        nonzero,
        "all nonzero coefficients sit at imprimitive pairs; a genuine modular form with this property vanishes identically",
    )
}

/// Growth of `|Lambda[B]| / Q(B)^{(l+1)/2}` over primitive `B > 0`.
pub fn cuspidality_classifier(table: &QuatCoeffTable, ell: i64) -> Result<ClassifierReport> {
    if ell < 5 {
        return domain("cuspidality classifier needs weight >= 5");
    }
    if (table.bound as f64) < MIN_RANGE {
        return Err(Error::InsufficientData(format!("table bound {} below {MIN_RANGE}", table.bound)));
    }
    let pts: Vec<(f64, f64)> = table
        .entries()
        .filter(|(b, _)| is_pos_def(b) && content(b) == 1)
        .map(|(b, v)| (q_of_b(b) as f64, v.abs().to_f64().unwrap_or(f64::INFINITY)))
        .collect();
    classify(&pts, ell, table.bound as f64)
}
