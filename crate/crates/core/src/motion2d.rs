//! Fourier-side diagnostics for the motion group M(2) = ℝ² ⋊ SO(2).
//!
//! The representation `π_a` acts on `L²(S¹)` by
//! `(π_a(z, e^{iφ}) g)(θ) = e^{i Re(a e^{iθ} z)} g(θ − φ)`. For the radial
//! profile `f_β(z, e^{iφ}) = χ_{B₁}(z)|z|^{−β}` the transform `f̂_β(a)` is rank
//! one on the basis `e_m(θ) = e^{imθ}`, with sole entry at `(0, 0)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, Rational};
use crate::linalg::{OperatorMatrix, C64};
use crate::motion_nd::{check_scan_range, radial_value, RadialKernel};
use crate::quadrature::{integrate_with_panels, periodic_breakpoints, QuadratureSpec};
use crate::scan::{run_scan, ScanConfig, ScanResult};
use crate::specfun::bessel_j;

/// `χ_{B₁(0)}(x)|x|^{−β}` on ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub beta: f64,
    pub n: u32,
}

impl RadialProfile {
    /// Requires `β < n/2`, the square-integrability condition.
    pub fn new(beta: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension n must be at least 1"));
        }
        if !beta.is_finite() || !(beta < n as f64 / 2.0) {
            return Err(Error::domain(format!("beta = {beta} must be below n/2 = {}", n as f64 / 2.0)));
        }
        Ok(Self { beta, n })
    }
}

/// `(2π)²`: one factor from the rotation variable, one from `c₂ = 2π`.
pub const M2_SCALE: f64 = 4.0 * PI * PI;

fn check_m2(p: &RadialProfile) -> Result<()> {
    if p.n != 2 {
        return Err(Error::domain(format!("M(2) diagnostics need n = 2, got {}", p.n)));
    }
    if !(p.beta > 0.0 && p.beta < 1.0) {
        return Err(Error::domain(format!("M(2) diagnostics need 0 < beta < 1, got {}", p.beta)));
    }
    Ok(())
}

/// `⟨f̂_β(a)e₀, e₀⟩ = (2π)² a^{β−2} ∫₀^a r^{1−β} J₀(r) dr`.
pub fn m2_matrix_element(p: &RadialProfile, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_m2(p)?;
    radial_value(2, p.beta, M2_SCALE, a, spec)
}

/// Matrix of `f̂_β(a)` on `e_{−M}, …, e_M`, computed by quadrature over
/// `(z, φ, θ)` without using the rank-one structure.
///
/// The angular variables use trapezoid rules, which are exact for the
/// trigonometric polynomials involved; the radial variable uses the panel
/// rule adapted to `r^{1−β} J₀(a r)` on `[0, 1]`.
pub fn m2_operator_truncation(p: &RadialProfile, a: f64, m: usize, spec: &QuadratureSpec) -> Result<OperatorMatrix> {
    check_m2(p)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("spectral parameter must be positive, got {a}")));
    }
    let beta = p.beta;
    let bp = periodic_breakpoints(0.0, 1.0, PI / a);
    let (_, panels) = integrate_with_panels(|r| r.powf(1.0 - beta) * bessel_j(0.0, a * r), &bp, spec)?;
    let radial: Vec<(f64, f64)> = panels
        .nodes()
        .into_iter()
        .map(|(r, w)| (r, w * r.powf(1.0 - beta)))
        .collect();

    let n_ang = 4 * m + 8;
    let n_psi = (64 + 2 * a.ceil() as usize).max(64);
    let angles = |count: usize| -> Vec<f64> { (0..count).map(|k| 2.0 * PI * k as f64 / count as f64).collect() };
    let thetas = angles(n_ang);
    let phis = angles(n_ang);
    let psis = angles(n_psi);
    let w_ang = 2.0 * PI / n_ang as f64;
    let w_psi = 2.0 * PI / n_psi as f64;

    // G(θ) = ∫_{B₁} |z|^{−β} e^{i Re(a e^{iθ} z)} dz with z = r e^{iψ}
    let g_theta: Vec<C64> = thetas
        .iter()
        .map(|&th| {
            let mut acc = C64::new(0.0, 0.0);
            for &ps in &psis {
                let c = (th + ps).cos();
                for &(r, w) in &radial {
                    acc += C64::from_polar(w, a * r * c);
                }
            }
            acc * w_psi
        })
        .collect();

    let size = 2 * m + 1;
    let idx = |k: usize| k as f64 - m as f64;
    // Φ(m) = Σ_φ e^{−imφ}, the rotation average
    let phi_sum: Vec<C64> = (0..size)
        .map(|k| phis.iter().map(|&ph| C64::from_polar(w_ang, -idx(k) * ph)).sum())
        .collect();
    let mat = DMatrix::from_fn(size, size, |l, k| {
        let mut acc = C64::new(0.0, 0.0);
        for (&th, g) in thetas.iter().zip(&g_theta) {
            acc += C64::from_polar(w_ang, (idx(k) - idx(l)) * th) * g;
        }
        phi_sum[k] * acc / (2.0 * PI)
    });
    Ok(OperatorMatrix::new(mat))
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    Ok(())
}

/// Scan of `∫ |c(a)|^q a da`; `f̂_β(a)` is rank one, so `‖f̂_β(a)‖_{S_q} = |c(a)|`.
/// The analytic criterion is divergence iff `(β−2)q + 1 ≥ −1`.
pub fn m2_divergence_scan(
    p: &RadialProfile,
    q: f64,
    a0: f64,
    a_max: f64,
    points: Option<usize>,
    spec: &QuadratureSpec,
) -> Result<ScanResult> {
    check_m2(p)?;
    check_q(q)?;
    check_scan_range(a0, a_max)?;
    let kernel = RadialKernel {
        n: 2,
        beta: p.beta,
        scale: M2_SCALE,
        spec: *spec,
    };
    let cfg = ScanConfig::new(q, 1.0, a0, a_max, points)?;
    let mut r = run_scan(&kernel, &cfg, "m2")?;
    r.parameters.insert("n".into(), 2.0);
    r.parameters.insert("beta".into(), p.beta);
    r.parameters.insert("q".into(), q);
    r.parameters.insert("expected_exponent".into(), p.beta - 2.0);
    r.parameters.insert("analytic_growth".into(), (p.beta - 2.0) * q + 2.0);
    Ok(r)
}

/// `(max{2/3, 2 − 2/q}, 1)` in exact arithmetic.
pub fn m2_beta_window_exact(q: Rational) -> Result<Interval<Rational>> {
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    if !(q > one && q < two) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    let lo = Rational::new(2, 3).max(two - two / q);
    Ok(Interval::open(lo, one))
}

pub fn m2_beta_window(q: f64) -> Result<Interval<f64>> {
    check_q(q)?;
    Ok(Interval::open((2.0f64 / 3.0).max(2.0 - 2.0 / q), 1.0))
}
