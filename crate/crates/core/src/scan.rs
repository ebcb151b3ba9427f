//! Log-spaced scans of ∫ |v(a)|^q a^m da and their divergence verdicts.
//!
//! The verdict compares the growth exponent `e·q + m + 1` of the partial
//! integrals with zero, where `e` is the fitted power-law exponent of `|v|`.
//! Oscillating profiles are fitted twice: through their one-period averages,
//! which removes boundary terms of the form `a^k cos(a + φ)`, and through the
//! peaks of `|v|` over each period. The verdict uses the slower of the two
//! decays, so an oscillating term that dominates the mean is not missed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Grid density used when the caller does not fix the number of points.
pub const POINTS_PER_DECADE: f64 = 200.0;
/// Growth exponents within this distance of zero give no verdict.
pub const GROWTH_MARGIN: f64 = 0.05;
/// Fits whose log-residual RMS exceeds this are inconclusive.
pub const FIT_RESIDUAL_LIMIT: f64 = 0.1;
/// Number of averaged samples in an envelope fit.
pub const FIT_SAMPLES: usize = 40;
const WINDOWS: usize = 5;
const SUBPANEL_WIDTH: f64 = PI / 2.0;

/// A real spectral profile `a ↦ v(a)` evaluated in batches.
pub trait SpectralProfile: Sync {
    /// Values at `points`, which are sorted ascending.
    fn values(&self, points: &[f64]) -> Result<Vec<f64>>;
}

/// Profile defined pointwise; batches are evaluated in parallel.
pub struct Pointwise<F>(pub F);

impl<F: Fn(f64) -> Result<f64> + Sync> SpectralProfile for Pointwise<F> {
    fn values(&self, points: &[f64]) -> Result<Vec<f64>> {
        points.par_iter().map(|&a| (self.0)(a)).collect()
    }
}

/// Evaluates a profile at points in arbitrary order.
pub fn evaluate_unsorted<P: SpectralProfile + ?Sized>(profile: &P, points: &[f64]) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].total_cmp(&points[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| points[i]).collect();
    let vals = profile.values(&sorted)?;
    let mut out = vec![0.0; points.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = vals[k];
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Divergent,
    Convergent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Divergent => "divergent",
            Verdict::Convergent => "convergent",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Scan of `∫_{lo}^{a} |v|^q s^m ds` on a log-spaced grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub q: f64,
    /// Exponent `m` of the Plancherel density `a^m`.
    pub weight_exponent: f64,
    /// Multiplier applied to the density (2 when both half-lines contribute).
    pub weight_factor: f64,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl ScanConfig {
    pub fn new(q: f64, weight_exponent: f64, lo: f64, hi: f64, points: Option<usize>) -> Result<Self> {
        if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(Error::domain(format!("scan range needs 0 < lo < hi, got [{lo}, {hi}]")));
        }
        let points = points.unwrap_or_else(|| default_points(lo, hi));
        if points < 2 {
            return Err(Error::domain("a scan needs at least two grid points"));
        }
        Ok(Self {
            q,
            weight_exponent,
            weight_factor: 1.0,
            lo,
            hi,
            points,
        })
    }
}

pub fn default_points(lo: f64, hi: f64) -> usize {
    (POINTS_PER_DECADE * (hi / lo).log10()).ceil() as usize + 1
}

/// `points` values, equally spaced in `ln a`, from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (l0, l1) = (lo.ln(), hi.ln());
    let step = (l1 - l0) / (points - 1) as f64;
    let mut g: Vec<f64> = (0..points).map(|k| (l0 + step * k as f64).exp()).collect();
    g[0] = lo;
    g[points - 1] = hi;
    g
}

/// Power-law fit `ln|⟨v⟩(a)| ≈ c + e·ln a` of the period-averaged profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub exponent: f64,
    pub intercept: f64,
    /// RMS of the residuals in `ln|⟨v⟩|`.
    pub residual: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Means of `v` over `[a − π, a + π]` (one period of `cos a`) for every centre.
pub fn period_averages<P: SpectralProfile + ?Sized>(profile: &P, centres: &[f64]) -> Result<Vec<f64>> {
    let rule = GaussLegendre::new(16);
    let mut nodes = Vec::with_capacity(centres.len() * rule.order());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for &c in centres {
        for (x, w) in rule.mapped(c - PI, c + PI) {
            nodes.push(x);
            weights.push(w);
        }
    }
    let vals = evaluate_unsorted(profile, &nodes)?;
    Ok(vals
        .chunks(rule.order())
        .zip(weights.chunks(rule.order()))
        .map(|(v, w)| v.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (2.0 * PI))
        .collect())
}

/// Fits the decay exponent of the period-averaged profile on `[lo, hi]`.
pub fn fit_envelope_exponent<P: SpectralProfile + ?Sized>(profile: &P, lo: f64, hi: f64) -> Result<EnvelopeFit> {
    let lo = lo.max(2.0 * PI);
    if !(hi > lo) {
        return Err(Error::domain(format!("fit window [{lo}, {hi}] is empty")));
    }
    let centres = log_grid(lo, hi, FIT_SAMPLES);
    let avg = period_averages(profile, &centres)?;
    let xs: Vec<f64> = centres.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = avg.iter().map(|v| v.abs().ln()).collect();
    let (exponent, intercept, residual) = least_squares(&xs, &ys);
    Ok(EnvelopeFit {
        exponent,
        intercept,
        residual,
        lo,
        hi,
    })
}

/// Fits the decay exponent of `max |v|` over `[a − π, a + π]` on `[lo, hi]`.
pub fn fit_peak_exponent<P: SpectralProfile + ?Sized>(profile: &P, lo: f64, hi: f64) -> Result<EnvelopeFit> {
    const PEAK_SAMPLES: usize = 33;
    let lo = lo.max(2.0 * PI);
    if !(hi > lo) {
        return Err(Error::domain(format!("fit window [{lo}, {hi}] is empty")));
    }
    let centres = log_grid(lo, hi, FIT_SAMPLES);
    let nodes: Vec<f64> = centres
        .iter()
        .flat_map(|&c| (0..PEAK_SAMPLES).map(move |k| c - PI + 2.0 * PI * k as f64 / (PEAK_SAMPLES - 1) as f64))
        .collect();
    let vals = evaluate_unsorted(profile, &nodes)?;
    let xs: Vec<f64> = centres.iter().map(|a| a.ln()).collect();
    let ys: Vec<f64> = vals
        .chunks(PEAK_SAMPLES)
        .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())).ln())
        .collect();
    let (exponent, intercept, residual) = least_squares(&xs, &ys);
    Ok(EnvelopeFit {
        exponent,
        intercept,
        residual,
        lo,
        hi,
    })
}

/// Slope, intercept and residual RMS of the line through `(x, y)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, intercept, if rms.is_finite() { rms } else { f64::INFINITY })
}

/// Grid values, partial integrals and the divergence verdict of one scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `∫_{grid[0]}^{grid[i]} |v|^q (weight) da`, nondecreasing.
    pub partial_integrals: Vec<f64>,
    /// Fitted exponent of the period-averaged `|v|` over the tail.
    pub fitted_exponent: f64,
    pub fit: EnvelopeFit,
    /// Fit of the per-period peaks of `|v|` over the same tail.
    pub peak_fit: EnvelopeFit,
    /// `max(fitted, peak)·q + m + 1`.
    pub growth_exponent: f64,
    /// Slope of the log increments of the partials over five log windows.
    pub window_growth: f64,
    pub window_increments: Vec<f64>,
    pub verdict: Verdict,
    pub q: f64,
    pub weight_exponent: f64,
    pub parameters: BTreeMap<String, f64>,
}

/// Serializable summary written next to the CSV.
#[derive(Debug, Clone, Serialize)]
pub struct ScanSidecar<'a> {
    pub label: &'a str,
    pub tool_version: &'a str,
    pub verdict: Verdict,
    pub fitted_exponent: f64,
    pub growth_exponent: f64,
    pub window_growth: f64,
    pub window_increments: &'a [f64],
    pub fit: EnvelopeFit,
    pub peak_fit: EnvelopeFit,
    pub q: f64,
    pub weight_exponent: f64,
    pub points: usize,
    pub range: [f64; 2],
    pub final_partial_integral: f64,
    pub parameters: &'a BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl ScanResult {
    pub fn final_partial(&self) -> f64 {
        self.partial_integrals.last().copied().unwrap_or(0.0)
    }

    /// CSV with columns `a,value,partial_integral`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "value", "partial_integral"]).expect("in-memory write");
        for ((a, v), p) in self.grid.iter().zip(&self.values).zip(&self.partial_integrals) {
            w.write_record([format!("{a:.16e}"), format!("{v:.16e}"), format!("{p:.16e}")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn sidecar<'a>(&'a self, tool_version: &'a str) -> ScanSidecar<'a> {
        ScanSidecar {
            label: &self.label,
            tool_version,
            verdict: self.verdict,
            fitted_exponent: self.fitted_exponent,
            growth_exponent: self.growth_exponent,
            window_growth: self.window_growth,
            window_increments: &self.window_increments,
            fit: self.fit,
            peak_fit: self.peak_fit,
            q: self.q,
            weight_exponent: self.weight_exponent,
            points: self.grid.len(),
            range: [self.grid[0], *self.grid.last().expect("nonempty grid")],
            final_partial_integral: self.final_partial(),
            parameters: &self.parameters,
            extra: BTreeMap::new(),
        }
    }
}

/// Verdict from the growth exponent, the fit quality and the window increments.
pub fn decide(growth: f64, fit_residual: f64, increments: &[f64]) -> Verdict {
    if !growth.is_finite() || !(fit_residual <= FIT_RESIDUAL_LIMIT) {
        return Verdict::Inconclusive;
    }
    if growth > GROWTH_MARGIN {
        return Verdict::Divergent;
    }
    let shrinking = match (increments.first(), increments.last()) {
        (Some(first), Some(last)) => last < first,
        _ => false,
    };
    if growth < -GROWTH_MARGIN && shrinking {
        Verdict::Convergent
    } else {
        Verdict::Inconclusive
    }
}

/// Runs a scan: grid values, partial integrals, tail fit, and verdict.
pub fn run_scan<P: SpectralProfile + ?Sized>(profile: &P, cfg: &ScanConfig, label: &str) -> Result<ScanResult> {
    if !(cfg.q > 0.0) {
        return Err(Error::domain(format!("q must be positive, got {}", cfg.q)));
    }
    let grid = log_grid(cfg.lo, cfg.hi, cfg.points);
    let rule = GaussLegendre::new(8);

    // all abscissae in ascending order: grid points, then quadrature nodes per interval
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut owners = Vec::new();
    for (i, w) in grid.windows(2).enumerate() {
        let count = ((w[1] - w[0]) / SUBPANEL_WIDTH).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / count as f64;
        for k in 0..count {
            let a = w[0] + h * k as f64;
            for (x, wt) in rule.mapped(a, if k + 1 == count { w[1] } else { a + h }) {
                nodes.push(x);
                weights.push(wt);
                owners.push(i);
            }
        }
    }
    let mut all: Vec<f64> = Vec::with_capacity(grid.len() + nodes.len());
    all.extend_from_slice(&grid);
    all.extend_from_slice(&nodes);
    let vals = evaluate_unsorted(profile, &all)?;
    let (values, node_vals) = vals.split_at(grid.len());

    let mut increments = vec![0.0; grid.len() - 1];
    for ((&x, &wt), (&i, &v)) in nodes.iter().zip(&weights).zip(owners.iter().zip(node_vals)) {
        increments[i] += wt * cfg.weight_factor * v.abs().powf(cfg.q) * x.powf(cfg.weight_exponent);
    }
    let mut partial_integrals = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    partial_integrals.push(0.0);
    for inc in &increments {
        acc += inc;
        partial_integrals.push(acc);
    }

    let fit = fit_envelope_exponent(profile, cfg.hi / 10.0, cfg.hi)?;
    let peak_fit = fit_peak_exponent(profile, cfg.hi / 10.0, cfg.hi)?;
    let governing = if peak_fit.exponent > fit.exponent { &peak_fit } else { &fit };
    let growth_exponent = governing.exponent * cfg.q + cfg.weight_exponent + 1.0;

    let (window_increments, window_growth) = window_growth(&grid, &partial_integrals);
    let verdict = decide(growth_exponent, governing.residual, &window_increments);

    Ok(ScanResult {
        label: label.to_string(),
        grid,
        values: values.to_vec(),
        partial_integrals,
        fitted_exponent: fit.exponent,
        fit,
        peak_fit,
        growth_exponent,
        window_growth,
        window_increments,
        verdict,
        q: cfg.q,
        weight_exponent: cfg.weight_exponent,
        parameters: BTreeMap::new(),
    })
}

/// Increments of the partials over five equal log windows and their log slope.
pub fn window_growth(grid: &[f64], partials: &[f64]) -> (Vec<f64>, f64) {
    let last = grid.len() - 1;
    let edges: Vec<usize> = (0..=WINDOWS).map(|k| k * last / WINDOWS).collect();
    let mut incs = Vec::with_capacity(WINDOWS);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for w in edges.windows(2) {
        let d = partials[w[1]] - partials[w[0]];
        incs.push(d);
        if w[1] > w[0] && d > 0.0 {
            xs.push((grid[w[0]] * grid[w[1]]).sqrt().ln());
            ys.push(d.ln());
        }
    }
    let slope = if xs.len() >= 2 { least_squares(&xs, &ys).0 } else { f64::NAN };
    (incs, slope)
}
