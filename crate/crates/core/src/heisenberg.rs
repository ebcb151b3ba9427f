//! Ground-state diagnostics for the Heisenberg motion group ℍⁿ ⋊ U(n).
//!
//! With `φ₀^λ(x) = (|λ|/π)^{n/4} e^{−|λ||x|²/2}` the Schrödinger representation
//! gives `⟨π_λ(z,t)φ₀^λ, φ₀^λ⟩ = e^{iλt} e^{−|λ||z|²/4}`. For the box profile
//! `g_ξ(z,t) = |t|^ξ ∏ |x_j|^ξ |y_j|^ξ` the pairing with that coefficient
//! factorizes into one oscillatory integral in `t` and `2n` Gaussian ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, Rational};
use crate::linalg::C64;
use crate::quadrature::{integrate, periodic_breakpoints, uniform_breakpoints, QuadratureSpec};
use crate::scan::{fit_envelope_exponent, run_scan, EnvelopeFit, Pointwise, ScanConfig, ScanResult};

/// `g_ξ` on the box `|x_l|, |y_l|, |t| ≤ 1` of ℍⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxProfile {
    pub xi: f64,
    pub n: u32,
}

impl BoxProfile {
    /// Requires `ξ > −1/2`, the square-integrability condition on the box.
    pub fn new(xi: f64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        if !(xi > -0.5) || !xi.is_finite() {
            return Err(Error::domain(format!("xi must exceed -1/2, got {xi}")));
        }
        Ok(Self { xi, n })
    }

    /// Decay exponent `−(n+1)(1+ξ)` of the ground-state element.
    pub fn decay_exponent(&self) -> f64 {
        -(self.n as f64 + 1.0) * (1.0 + self.xi)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::domain(format!("lambda must be finite and nonzero, got {lambda}")));
    }
    Ok(())
}

/// `Φ₀₀^λ(z, t) = e^{iλt} e^{−|λ||z|²/4}`; `z` is given by its complex coordinates.
pub fn phi00_element(lambda: f64, z: &[C64], t: f64) -> Result<C64> {
    check_lambda(lambda)?;
    let z2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
    Ok(C64::from_polar((-lambda.abs() * z2 / 4.0).exp(), lambda * t))
}

/// `T(λ, ξ) = ∫_{−1}^{1} |t|^ξ e^{iλt} dt = 2 ∫₀¹ t^ξ cos(λt) dt` (the sine part is odd).
pub fn box_oscillatory_factor(lambda: f64, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    let width = if lambda.abs() > 1.0 { PI / lambda.abs() } else { 1.0 };
    let bp = periodic_breakpoints(0.0, 1.0, width);
    Ok(2.0 * integrate(|t| t.powf(xi) * (lambda * t).cos(), &bp, spec)?.value)
}

/// `I(μ, ξ) = ∫_{−1}^{1} |x|^ξ e^{−μx²/4} dx`, with breakpoints on the Gaussian scale.
pub fn box_gaussian_factor(mu: f64, xi: f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut bp = vec![0.0];
    let s = if mu > 1.0 { 1.0 / mu.sqrt() } else { 1.0 };
    let mut x = s;
    while x < 1.0 {
        bp.push(x);
        x *= 2.0;
    }
    bp.push(1.0);
    Ok(2.0 * integrate(|x| x.powf(xi) * (-mu * x * x / 4.0).exp(), &bp, spec)?.value)
}

/// `⟨ĝ_ξ(λ)φ₀^λ, φ₀^λ⟩ = T(λ,ξ) · I(|λ|,ξ)^{2n}`.
///
/// The value is real and even in λ, so `value(−λ) = conj(value(λ))` holds exactly.
pub fn g_xi_element(p: &BoxProfile, lambda: f64, spec: &QuadratureSpec) -> Result<C64> {
    BoxProfile::new(p.xi, p.n)?;
    check_lambda(lambda)?;
    let t = box_oscillatory_factor(lambda, p.xi, spec)?;
    let i = box_gaussian_factor(lambda.abs(), p.xi, spec)?;
    Ok(C64::new(t * i.powi(2 * p.n as i32), 0.0))
}

/// `|⟨ĝ_ξ(λ)φ₀^λ, φ₀^λ⟩|^q`, the scalar lower bound for the full Schatten sum at λ.
pub fn schur_lower_bound(p: &BoxProfile, lambda: f64, q: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(q > 1.0 && q <= 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2], got {q}")));
    }
    Ok(g_xi_element(p, lambda, spec)?.norm().powf(q))
}

/// Scan over `λ ∈ ℝ∖{0}` with Plancherel density `|λ|^n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaScan {
    /// Positive half-axis scan; densities are doubled for `λ < 0`.
    pub scan: ScanResult,
    /// `∫_{−λ₀}^{λ₀} |value|^q |λ|^n dλ`, finite for every ξ.
    pub near_zero_integral: f64,
    /// `max | |value(λ)| − |value(−λ)| |` over sampled grid points.
    pub symmetry_defect: f64,
    pub lambda0: f64,
}

impl LambdaScan {
    pub fn total_partial(&self) -> f64 {
        self.near_zero_integral + self.scan.final_partial()
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    Ok(())
}

fn element_profile(p: BoxProfile, spec: QuadratureSpec) -> Pointwise<impl Fn(f64) -> Result<f64> + Sync> {
    Pointwise(move |l: f64| g_xi_element(&p, l, &spec).map(|v| v.re))
}

/// Envelope fit of `|⟨ĝ_ξ(λ)φ₀^λ, φ₀^λ⟩|` on `[lo, hi]`.
pub fn hmg_envelope_fit(p: &BoxProfile, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<EnvelopeFit> {
    BoxProfile::new(p.xi, p.n)?;
    fit_envelope_exponent(&element_profile(*p, *spec), lo, hi)
}

/// Divergence scan of `∫_{ℝ∖{0}} |⟨ĝ_ξ(λ)φ₀^λ, φ₀^λ⟩|^q |λ|^n dλ`; the analytic
/// criterion is divergence iff `ξ ≤ 1/q − 1`.
pub fn hmg_divergence_scan(
    p: &BoxProfile,
    q: f64,
    lambda0: f64,
    lambda_max: f64,
    points: Option<usize>,
    spec: &QuadratureSpec,
) -> Result<LambdaScan> {
    BoxProfile::new(p.xi, p.n)?;
    check_q(q)?;
    if !(lambda0 > 0.0) || !(lambda_max >= 10.0 * lambda0) || !lambda_max.is_finite() {
        return Err(Error::domain(format!(
            "scan range needs lambda0 > 0 and lambda_max >= 10 lambda0, got [{lambda0}, {lambda_max}]"
        )));
    }
    let nf = p.n as f64;
    let profile = element_profile(*p, *spec);
    let mut cfg = ScanConfig::new(q, nf, lambda0, lambda_max, points)?;
    cfg.weight_factor = 2.0;
    let mut scan = run_scan(&profile, &cfg, "hmg")?;
    scan.parameters.insert("n".into(), nf);
    scan.parameters.insert("xi".into(), p.xi);
    scan.parameters.insert("q".into(), q);
    scan.parameters.insert("expected_exponent".into(), p.decay_exponent());
    scan.parameters.insert("analytic_growth".into(), p.decay_exponent() * q + nf + 1.0);

    // the hole (−λ₀, λ₀): the element is bounded there, plain quadrature suffices
    let bp = uniform_breakpoints(0.0, lambda0, PI / 2.0);
    let near = integrate(
        |l| {
            if l == 0.0 {
                return 0.0;
            }
            g_xi_element(p, l, spec).map(|v| v.norm().powf(q) * l.powf(nf)).unwrap_or(f64::NAN)
        },
        &bp,
        &QuadratureSpec::with_tolerances(1e-8, 1e-12),
    )?;
    if !near.value.is_finite() {
        return Err(Error::Convergence {
            value: near.value,
            error: near.error,
        });
    }

    let stride = (scan.grid.len() / 16).max(1);
    let mut defect: f64 = 0.0;
    for (k, &l) in scan.grid.iter().enumerate().step_by(stride) {
        let neg = g_xi_element(p, -l, spec)?;
        defect = defect.max((neg.norm() - scan.values[k].abs()).abs());
    }

    Ok(LambdaScan {
        scan,
        near_zero_integral: 2.0 * near.value,
        symmetry_defect: defect,
        lambda0,
    })
}

/// `(−1/2, 1/q − 1]` in exact arithmetic.
pub fn xi_window_exact(q: Rational) -> Result<Interval<Rational>> {
    let one = Rational::from_integer(1);
    if !(q > one && q < Rational::from_integer(2)) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    Ok(Interval::open_closed(Rational::new(-1, 2), one / q - one))
}

pub fn xi_window(q: f64) -> Result<Interval<f64>> {
    check_q(q)?;
    Ok(Interval::open_closed(-0.5, 1.0 / q - 1.0))
}
