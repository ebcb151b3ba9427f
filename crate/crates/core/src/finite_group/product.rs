//! Schatten integrals on a product `ℝ × G` with a finite factor `G`.
//!
//! For `f = f₁ ⊗ f₂` the integral `∫ |f̂₁(y)|^q dy · Σ_π (d_π/|G|) ‖f̂₂(π)‖^q_{S_q}`
//! factorizes: it diverges exactly when the Euclidean factor does and the group
//! factor is nonzero. The Euclidean factor is Simon's example
//! `f₁ = χ_{[−1,1]}|x|^{−β}`.

use serde::Serialize;

use super::*;
use crate::interval::Interval;
use crate::motion2d::RadialProfile;
use crate::motion_nd::{sphere_constant, RadialKernel};
use crate::quadrature::QuadratureSpec;
use crate::scan::{run_scan, ScanConfig, ScanResult, Verdict};

/// Range `[1, 2000]` of the one-dimensional scan.
pub const PRODUCT_SCAN_RANGE: (f64, f64) = (1.0, 2000.0);

#[derive(Debug, Clone, Serialize)]
pub struct ProductSpaceReport {
    /// `Σ_π (d_π/|G|) ‖f̂₂(π)‖^q_{S_q}`, computed exactly.
    pub group_factor: f64,
    /// Scan of `∫ |f̂₁(y)|^q dy` over both half-lines.
    pub euclid: ScanResult,
    /// Partial Euclidean integral when the scan reports convergence.
    pub euclid_factor: Option<f64>,
    /// `(max{1/3, 1 − 1/q}, 1/2)`, where both the divergence and the lower
    /// bound on `|f̂₁|` hold.
    pub window: Interval<f64>,
    pub beta_in_window: bool,
    pub verdict: Verdict,
}

/// Exact group factor and scanned Euclidean factor for `β ∈ (0, 1/2)`.
///
/// The verdict is the Euclidean verdict when the group factor is nonzero, and
/// inconclusive otherwise.
pub fn product_space_factorization(
    g: &FiniteGroup,
    f2: &GroupFunction,
    beta: f64,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<ProductSpaceReport> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::domain(format!("beta must lie in (0, 1/2), got {beta}")));
    }
    let p = RadialProfile::new(beta, 1)?;

    let ft = fourier(g, f2);
    let mut group_factor = 0.0;
    for (r, f) in g.irreps().iter().zip(&ft) {
        group_factor += r.plancherel_weight() * f.schatten_norm(q)?.powf(q);
    }

    let kernel = RadialKernel {
        n: 1,
        beta: p.beta,
        scale: sphere_constant(1),
        spec: *spec,
    };
    let (lo, hi) = PRODUCT_SCAN_RANGE;
    let mut cfg = ScanConfig::new(q, 0.0, lo, hi, None)?;
    cfg.weight_factor = 2.0;
    let mut euclid = run_scan(&kernel, &cfg, "euclid1")?;
    euclid.parameters.insert("n".into(), 1.0);
    euclid.parameters.insert("beta".into(), beta);
    euclid.parameters.insert("q".into(), q);
    euclid.parameters.insert("expected_exponent".into(), beta - 1.0);
    euclid.parameters.insert("analytic_growth".into(), (beta - 1.0) * q + 1.0);

    let window = Interval::open((1.0f64 / 3.0).max(1.0 - 1.0 / q), 0.5);
    let verdict = if group_factor > 0.0 { euclid.verdict } else { Verdict::Inconclusive };
    let euclid_factor = (euclid.verdict == Verdict::Convergent).then(|| euclid.final_partial());
    Ok(ProductSpaceReport {
        group_factor,
        euclid_factor,
        beta_in_window: window.contains(&beta),
        window,
        euclid,
        verdict,
    })
}
