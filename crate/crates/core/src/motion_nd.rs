//! Trivial-type matrix elements for M(n) and the radial Euclidean Fourier
//! transform of `χ_{B₁}(x)|x|^{−β}`.
//!
//! Both reduce to `c_n a^{β−n} ∫₀^a t^{n/2−β} J_{n/2−1}(t) dt` with
//! `c_n = (2π)^{n/2}`, the constant of `∫_{S^{n−1}} e^{i a x·ω} dω =
//! c_n (a|x|)^{1−n/2} J_{n/2−1}(a|x|)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{Interval, Rational};
use crate::motion2d::RadialProfile;
use crate::quadrature::QuadratureSpec;
use crate::scan::{run_scan, ScanConfig, ScanResult, SpectralProfile};
use crate::specfun::{bessel_moment, bessel_moment_profile, BesselMomentQuery};

/// `(2π)^{n/2}`.
pub fn sphere_constant(n: u32) -> f64 {
    (2.0 * PI).powf(n as f64 / 2.0)
}

/// `scale · a^{β−n} · ∫₀^a t^{n/2−β} J_{n/2−1}(t) dt`.
pub(crate) fn radial_value(n: u32, beta: f64, scale: f64, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("spectral parameter must be positive, got {a}")));
    }
    let m = bessel_moment(&BesselMomentQuery::new(n, beta, a)?, spec)?;
    Ok(scale * a.powf(beta - n as f64) * m)
}

/// The radial kernel as a batch profile.
///
/// Moments are accumulated along sorted abscissae in a fixed number of
/// independent chunks, so the result does not depend on the thread count.
pub struct RadialKernel {
    pub n: u32,
    pub beta: f64,
    pub scale: f64,
    pub spec: QuadratureSpec,
}

const CHUNKS: usize = 16;

impl SpectralProfile for RadialKernel {
    fn values(&self, points: &[f64]) -> Result<Vec<f64>> {
        if points.is_empty() {
            return Ok(Vec::new());
        }
        let size = points.len().div_ceil(CHUNKS);
        let parts: Vec<Vec<f64>> = points
            .par_chunks(size)
            .map(|c| bessel_moment_profile(self.n, self.beta, c, &self.spec))
            .collect::<Result<_>>()?;
        let nf = self.n as f64;
        Ok(parts
            .into_iter()
            .flatten()
            .zip(points)
            .map(|(m, &a)| self.scale * a.powf(self.beta - nf) * m)
            .collect())
    }
}

/// `⟨f̂_β(a, σ_o) φ₀, φ₀⟩` at the trivial M-type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrivialTypeElement {
    pub n: u32,
    pub a: f64,
    pub value: f64,
}

fn check_mn(p: &RadialProfile) -> Result<()> {
    if p.n < 3 {
        return Err(Error::domain(format!("M(n) diagnostics need n >= 3, got {}", p.n)));
    }
    Ok(())
}

pub fn trivial_type_element(p: &RadialProfile, a: f64, spec: &QuadratureSpec) -> Result<TrivialTypeElement> {
    check_mn(p)?;
    Ok(TrivialTypeElement {
        n: p.n,
        a,
        value: radial_value(p.n, p.beta, sphere_constant(p.n), a, spec)?,
    })
}

/// `c_n a^{β−n} ∫₀^a r^{n/2−β} J_{n/2−1}(r) dr` for n ≥ 3.
pub fn mn_matrix_element(p: &RadialProfile, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    trivial_type_element(p, a, spec).map(|e| e.value)
}

/// Fourier transform of `χ_{B₁}(x)|x|^{−β}` on ℝⁿ at radius `|y|`, for any n ≥ 1.
///
/// For n = 1 this is `2 ∫₀¹ x^{−β} cos(|y| x) dx`.
pub fn euclid_radial_ft(p: &RadialProfile, y_abs: f64, spec: &QuadratureSpec) -> Result<f64> {
    radial_value(p.n, p.beta, sphere_constant(p.n), y_abs, spec)
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    Ok(())
}

pub(crate) fn check_scan_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo >= 1.0) || !(hi >= 10.0 * lo) || !hi.is_finite() {
        return Err(Error::domain(format!(
            "scan range needs a0 >= 1 and a_max >= 10 a0, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Scan of `∫ |⟨f̂_β(a,σ_o)φ₀,φ₀⟩|^q a^{n−1} da`; the analytic criterion is
/// divergence iff `(β−n)q + n − 1 ≥ −1`.
pub fn mn_divergence_scan(
    p: &RadialProfile,
    q: f64,
    a0: f64,
    a_max: f64,
    points: Option<usize>,
    spec: &QuadratureSpec,
) -> Result<ScanResult> {
    check_mn(p)?;
    check_q(q)?;
    check_scan_range(a0, a_max)?;
    let nf = p.n as f64;
    let kernel = RadialKernel {
        n: p.n,
        beta: p.beta,
        scale: sphere_constant(p.n),
        spec: *spec,
    };
    let cfg = ScanConfig::new(q, nf - 1.0, a0, a_max, points)?;
    let mut r = run_scan(&kernel, &cfg, "mn")?;
    r.parameters.insert("n".into(), nf);
    r.parameters.insert("beta".into(), p.beta);
    r.parameters.insert("q".into(), q);
    r.parameters.insert("expected_exponent".into(), p.beta - nf);
    r.parameters.insert("analytic_growth".into(), (p.beta - nf) * q + nf);
    Ok(r)
}

/// `(max{n/3, n − n/q}, n/2)` in exact arithmetic.
pub fn mn_beta_window_exact(n: u32, q: Rational) -> Result<Interval<Rational>> {
    if n < 3 {
        return Err(Error::domain(format!("the M(n) window needs n >= 3, got {n}")));
    }
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    if !(q > one && q < two) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    let nr = Rational::from_integer(n as i64);
    let lo = (nr / 3).max(nr - nr / q);
    Ok(Interval::open(lo, nr / 2))
}

pub fn mn_beta_window(n: u32, q: f64) -> Result<Interval<f64>> {
    if n < 3 {
        return Err(Error::domain(format!("the M(n) window needs n >= 3, got {n}")));
    }
    check_q(q)?;
    let nf = n as f64;
    Ok(Interval::open((nf / 3.0).max(nf - nf / q), nf / 2.0))
}
