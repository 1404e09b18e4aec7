//! Growth classifier shared by the Jacobi, Siegel and quaternionic layers.

use serde::Serialize;

use crate::error::{Error, Result};

pub const BURN_IN: usize = 20;
pub const SLOPE_MARGIN: f64 = 0.3;
pub const MIN_RANGE: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithCusp,
    GrowthDetected,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::ConsistentWithCusp => "consistent-with-cusp",
            Verdict::GrowthDetected => "growth-detected",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Ratios `|c| / x^{(l+1)/2}` and a log-log slope of `|c|` against `x`.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifierReport {
    pub verdict: Verdict,
    pub exponent: f64,
    pub max_ratio: f64,
    pub max_ratio_at: f64,
    pub burn_in_max_ratio: f64,
    pub tail_max_ratio: f64,
    pub growth_slope: Option<f64>,
    pub nonzero_points: usize,
    pub x_max: f64,
    pub burn_in: usize,
    pub slope_margin: f64,
}

/// Classify `(x, |value|)` samples with `x > 0`. Values at the same `x`
/// are merged by their maximum. Needs `x_max >= 100`.
pub fn classify(points: &[(f64, f64)], ell: i64, x_max: f64) -> Result<ClassifierReport> {
    if x_max < MIN_RANGE {
        return Err(Error::InsufficientData(format!("range {x_max} below {MIN_RANGE}")));
    }
    classify_samples(points, ell, x_max)
}

/// [`classify`] without the range requirement; callers enforce their own
/// coverage rule.
pub fn classify_samples(points: &[(f64, f64)], ell: i64, x_max: f64) -> Result<ClassifierReport> {
    let exponent = (ell as f64 + 1.0) / 2.0;
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|(x, v)| *x > 0.0 && *v > 0.0 && v.is_finite()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (x, v) in pts {
        match merged.last_mut() {
            Some(last) if last.0 == x => last.1 = last.1.max(v),
            _ => merged.push((x, v)),
        }
    }
    let ratio = |(x, v): (f64, f64)| v / x.powf(exponent);
    let split = BURN_IN.min(merged.len());
    let burn = merged[..split].iter().map(|&p| ratio(p)).fold(0.0, f64::max);
    let tail = merged[split..].iter().map(|&p| ratio(p)).fold(0.0, f64::max);
    let (mut max_ratio, mut at) = (0.0, 0.0);
    for &p in &merged {
        if ratio(p) > max_ratio {
            max_ratio = ratio(p);
            at = p.0;
        }
    }
    let fit_pts = if merged.len() - split >= 2 { &merged[split..] } else { &merged[..] };
    let growth_slope = (fit_pts.len() >= 2).then(|| {
        let xs: Vec<f64> = fit_pts.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = fit_pts.iter().map(|p| p.1.ln()).collect();
        crate::whittaker::linear_fit(&xs, &ys).0
    });
    let verdict = if merged.is_empty() {
        Verdict::ConsistentWithCusp
    } else if growth_slope.is_some_and(|s| s > exponent + SLOPE_MARGIN) {
        Verdict::GrowthDetected
    } else if tail <= burn * (1.0 + 1e-12) {
        Verdict::ConsistentWithCusp
    } else {
        Verdict::Inconclusive
    };
    Ok(ClassifierReport {
        verdict,
        exponent,
        max_ratio,
        max_ratio_at: at,
        burn_in_max_ratio: burn,
        tail_max_ratio: tail,
        growth_slope,
        nonzero_points: merged.len(),
        x_max,
        burn_in: BURN_IN,
        slope_margin: SLOPE_MARGIN,
    })
}


/// Outcome of a primitive-vanishing scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VanishingVerdict {
    ConsistentWithZero,
    NonzeroPrimitive,
}

/// A nonzero coefficient found by a vanishing scan.
#[derive(Clone, Debug, Serialize)]
pub struct Witness<K> {
    pub index: K,
    pub value: String,
    pub norm: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport<K> {
    pub verdict: VanishingVerdict,
    pub bound: i64,
    pub checked: usize,
    pub witnesses: Vec<Witness<K>>,
    pub warning: Option<String>,
}

impl<K> VanishingReport<K> {
    /// Build from all nonzero entries, `primitive` deciding which count.
    pub fn from_nonzero(bound: i64, checked: usize, nonzero: Vec<(Witness<K>, bool)>, note: &str) -> Self {
        let any = !nonzero.is_empty();
        let witnesses: Vec<Witness<K>> = nonzero.into_iter().filter(|(_, p)| *p).map(|(w, _)| w).collect();
        let verdict = if witnesses.is_empty() { VanishingVerdict::ConsistentWithZero } else { VanishingVerdict::NonzeroPrimitive };
        let warning = (any && witnesses.is_empty()).then(|| note.to_string());
        VanishingReport { verdict, bound, checked, witnesses, warning }
    }
}
