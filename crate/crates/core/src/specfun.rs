//! Gamma, Bessel J and Gauss hypergeometric functions, plus the Bessel moment
//! ∫₀^a t^{n/2−β} J_{n/2−1}(t) dt that every radial matrix element reduces to.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, periodic_breakpoints, QuadratureSpec};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    let half = t.powf(0.5 * (x + 0.5)) * (-0.5 * t).exp();
    (2.0 * PI).sqrt() * half * half * acc
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    Ok(gamma_real(x))
}

/// Γ on the whole real line; NaN at the poles.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * lanczos_gamma(1.0 - x))
    } else if x > 171.7 {
        f64::INFINITY
    } else {
        lanczos_gamma(x)
    }
}

/// 1/Γ(x), zero at the non-positive integers.
pub(crate) fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 0.5 {
        (PI * x).sin() * lanczos_gamma(1.0 - x) / PI
    } else {
        1.0 / gamma_real(x)
    }
}

/// Argument beyond which [`bessel_j`] switches from the power series to the
/// large-argument expansion.
pub fn bessel_crossover(nu: f64) -> f64 {
    12f64.max(2.0 * nu * nu)
}

/// Bessel function of the first kind J_ν(t) for ν ≥ −1/2 and t ≥ 0.
///
/// Returns NaN outside that domain.
pub fn bessel_j(nu: f64, t: f64) -> f64 {
    if !(t >= 0.0) || !(nu >= -0.5) || !t.is_finite() || !nu.is_finite() {
        return f64::NAN;
    }
    if t == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if t >= bessel_crossover(nu) {
        bessel_j_asymptotic(nu, t)
    } else {
        bessel_j_series(nu, t)
    }
}

/// Power-series regime of [`bessel_j`].
pub fn bessel_j_series(nu: f64, t: f64) -> f64 {
    let half = 0.5 * t;
    let q = half * half;
    let mut term = half.powf(nu) * recip_gamma(nu + 1.0);
    let mut sum = term;
    for l in 1..1000 {
        let l = l as f64;
        term *= -q / (l * (l + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && l > q.sqrt() {
            break;
        }
    }
    sum
}

/// Large-argument (Hankel) regime of [`bessel_j`].
pub fn bessel_j_asymptotic(nu: f64, t: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * t);
        // stop at the smallest term of the asymptotic series
        if k > 1 && next.abs() >= term.abs() {
            break;
        }
        term = next;
        // signs follow (-1)^{k/2} for P and (-1)^{(k-1)/2} for Q
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term == 0.0 || term.abs() < 1e-17 {
            break;
        }
    }
    let chi = t - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * t)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Pochhammer-series ₂F₁(ξ, ζ; η; z) for 0 ≤ z < 1 (or z = 1 when the series converges).
///
/// Terms are generated by the ratio (ξ+l)(ζ+l)/((η+l)(l+1))·z, which is
/// symmetric in ξ and ζ bit for bit.
pub fn hyp2f1_series(xi: f64, zeta: f64, eta: f64, z: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("hyp2f1 requires z in [0, 1], got {z}")));
    }
    const MAX_TERMS: usize = 50_000_000;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_streak = 0;
    for l in 0..MAX_TERMS {
        let lf = l as f64;
        term *= (xi + lf) * (zeta + lf) / ((eta + lf) * (lf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= 1e-17 * sum.abs() {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::SlowConvergence {
        partial: sum,
        terms: MAX_TERMS,
    })
}

/// Gauss's closed form ₂F₁(ξ, ζ; η; 1) = Γ(η)Γ(η−ξ−ζ)/(Γ(η−ξ)Γ(η−ζ)), valid when η−ξ−ζ > 0.
pub fn hyp2f1_at_one(xi: f64, zeta: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    let excess = eta - xi - zeta;
    if !(excess > 0.0) {
        return Err(Error::Divergent { excess });
    }
    Ok(gamma_real(eta) * gamma_real(excess) * recip_gamma(eta - xi) * recip_gamma(eta - zeta))
}

/// ₂F₁(ξ, ζ; η; z) on z ∈ [0, 1].
///
/// Within 1e−6 of z = 1 the closed form at z = 1 is used once η−ξ−ζ > 0.05;
/// closer to the divergence line the series is attempted and slow convergence reported.
pub fn hyp2f1(xi: f64, zeta: f64, eta: f64, z: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::domain(format!("hyp2f1 requires z in [0, 1], got {z}")));
    }
    let excess = eta - xi - zeta;
    if z == 1.0 {
        return hyp2f1_at_one(xi, zeta, eta);
    }
    if 1.0 - z < 1e-6 && excess > 0.05 {
        return hyp2f1_at_one(xi, zeta, eta);
    }
    hyp2f1_series(xi, zeta, eta, z)
}

fn check_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || (eta <= 0.0 && eta == eta.floor()) {
        return Err(Error::domain(format!(
            "hyp2f1 requires eta outside the non-positive integers, got {eta}"
        )));
    }
    Ok(())
}

/// Parameters of ∫₀^a t^{n/2−β} J_{n/2−1}(t) dt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselMomentQuery {
    pub n: u32,
    pub beta: f64,
    pub a: f64,
}

impl BesselMomentQuery {
    pub fn new(n: u32, beta: f64, a: f64) -> Result<Self> {
        let q = Self { n, beta, a };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        validate_moment_params(self.n, self.beta)?;
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return Err(Error::domain(format!("upper limit must be finite and >= 0, got {}", self.a)));
        }
        Ok(())
    }
}

fn validate_moment_params(n: u32, beta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("dimension n must be at least 1"));
    }
    let half = n as f64 / 2.0;
    let bound = if n <= 2 { half } else { half + 1.0 };
    if !(beta < bound) || !beta.is_finite() {
        return Err(Error::domain(format!(
            "beta = {beta} outside the integrable range beta < {bound} for n = {n}"
        )));
    }
    Ok(())
}

fn moment_integrand(n: u32, beta: f64) -> impl Fn(f64) -> f64 {
    let power = n as f64 / 2.0 - beta;
    let order = n as f64 / 2.0 - 1.0;
    move |t: f64| t.powf(power) * bessel_j(order, t)
}

/// ∫_{lo}^{hi} of the moment integrand. Near the origin the integral is of
/// order hi^{n−β}, so the absolute tolerance is scaled down with it.
fn moment_segment(n: u32, beta: f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = moment_integrand(n, beta);
    let mut total = 0.0;
    let mut start = lo;
    if lo == 0.0 {
        let head = hi.min(PI);
        let local = QuadratureSpec {
            abs_tol: spec.abs_tol * head.powf(n as f64 - beta).min(1.0),
            ..*spec
        };
        total += integrate(&f, &[0.0, head], &local)?.value;
        start = head;
    }
    if hi > start {
        total += integrate(&f, &periodic_breakpoints(start, hi, PI), spec)?.value;
    }
    Ok(total)
}

/// ∫₀^a t^{n/2−β} J_{n/2−1}(t) dt with panels of width at most π.
pub fn bessel_moment(q: &BesselMomentQuery, spec: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    if q.a == 0.0 {
        return Ok(0.0);
    }
    moment_segment(q.n, q.beta, 0.0, q.a, spec)
}

/// Bessel moments at every point of an ascending list, accumulated panel by panel.
pub fn bessel_moment_profile(
    n: u32,
    beta: f64,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    validate_moment_params(n, beta)?;
    if points.iter().any(|&a| !(a >= 0.0) || !a.is_finite()) {
        return Err(Error::domain("moment abscissae must be finite and nonnegative"));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("moment abscissae must be ascending"));
    }
    let mut out = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for &a in points {
        if a > prev {
            acc += moment_segment(n, beta, prev, a, spec)?;
            prev = a;
        }
        out.push(acc);
    }
    Ok(out)
}

/// lim_{a→∞} of the Bessel moment, taken in the Abel sense (u → 0⁺ of the
/// damped integral): (1/2)^{n/2−1} Γ(n−β) Γ(1/2) / (Γ(β/2) Γ((n−β+1)/2)).
///
/// The ordinary limit exists only when β > (n−1)/2.
pub fn bessel_moment_limit(n: u32, beta: f64) -> Result<f64> {
    validate_moment_params(n, beta)?;
    let nf = n as f64;
    let upsilon = nf / 2.0 - 1.0;
    let alpha = nf / 2.0 - beta + 1.0;
    let prefactor = 0.5f64.powf(upsilon) * gamma_real(alpha + upsilon) * recip_gamma(upsilon + 1.0);
    let f = hyp2f1_at_one(
        (alpha + upsilon) / 2.0,
        (1.0 - alpha + upsilon) / 2.0,
        1.0 + upsilon,
    )?;
    Ok(prefactor * f)
}

/// The β-dependent lower bound the positivity argument derives for the damped
/// moment: for n = 2, Γ(1/2)/(2 Γ(1−α/2) Γ((α+1)/2)) with α = 2−β; for n ≥ 3,
/// (1/2)^{n/2−1} Γ(n−β) / (2^{(n−β)/2} Γ(n/2)).
pub fn lemma32_floor(n: u32, beta: f64) -> Result<f64> {
    validate_moment_params(n, beta)?;
    let nf = n as f64;
    match n {
        2 => {
            let alpha = 2.0 - beta;
            Ok(0.5 * gamma_real(0.5) * recip_gamma(1.0 - alpha / 2.0) * recip_gamma((alpha + 1.0) / 2.0))
        }
        n if n >= 3 => Ok(0.5f64.powf(nf / 2.0 - 1.0) * gamma_real(nf - beta)
            / (2f64.powf((nf - beta) / 2.0) * gamma_real(nf / 2.0))),
        _ => Err(Error::domain("the floor is defined for n >= 2")),
    }
}

/// Both sides of ∫₀^∞ e^{−ut} t^{α−1} J_υ(t) dt = (1/2)^υ Γ(α+υ) / ((1+u²)^{(α+υ)/2} Γ(υ+1))
/// · ₂F₁((α+υ)/2, (1−α+υ)/2; 1+υ; 1/(1+u²)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WatsonCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Truncation point of the left-hand integral.
    pub cutoff: f64,
}

/// Truncation point for the damped integral: ln(1/abs_tol)/u rounded up to a multiple of π.
pub fn watson_cutoff(u: f64, abs_tol: f64) -> f64 {
    let t = (1.0 / abs_tol).ln() / u;
    (t / PI).ceil().max(1.0) * PI
}

pub fn watson_identity_check(
    u: f64,
    alpha: f64,
    upsilon: f64,
    spec: &QuadratureSpec,
) -> Result<WatsonCheck> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u must lie in (0, 1), got {u}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(upsilon >= 0.0) || !upsilon.is_finite() {
        return Err(Error::domain(format!("upsilon must be nonnegative, got {upsilon}")));
    }
    let cutoff = watson_cutoff(u, spec.abs_tol);
    let bp = periodic_breakpoints(0.0, cutoff, PI);
    let lhs = integrate(
        |t| (-u * t).exp() * t.powf(alpha - 1.0) * bessel_j(upsilon, t),
        &bp,
        spec,
    )?
    .value;
    let s = 1.0 + u * u;
    let rhs = 0.5f64.powf(upsilon) * gamma_real(alpha + upsilon)
        / (s.powf((alpha + upsilon) / 2.0) * gamma_real(upsilon + 1.0))
        * hyp2f1(
            (alpha + upsilon) / 2.0,
            (1.0 - alpha + upsilon) / 2.0,
            1.0 + upsilon,
            1.0 / s,
        )?;
    Ok(WatsonCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        cutoff,
    })
}

/// Minimum of the Bessel moment over a β-grid and a sampled range of upper limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma32Report {
    pub n: u32,
    pub a0: f64,
    pub a_max: f64,
    pub c_empirical: f64,
    pub witness_beta: f64,
    pub witness_a: f64,
    /// (β, minimum over sampled a, analytic floor where defined)
    pub per_beta: Vec<Lemma32Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma32Row {
    pub beta: f64,
    pub minimum: f64,
    pub argmin: f64,
    pub floor: f64,
    pub limit: f64,
}

impl Lemma32Report {
    /// Analytic floor at the grid's worst β (the β attaining the empirical minimum).
    pub fn floor_at_witness(&self) -> f64 {
        self.per_beta
            .iter()
            .find(|r| r.beta == self.witness_beta)
            .map(|r| r.floor)
            .unwrap_or(f64::NAN)
    }
}

/// Sampling step used on [a0, a_max]; sixteen samples per half-period of J.
pub const LEMMA32_SAMPLE_STEP: f64 = PI / 16.0;

pub fn verify_lemma32(
    n: u32,
    beta_grid: &[f64],
    a0: f64,
    a_max: f64,
    spec: &QuadratureSpec,
) -> Result<Lemma32Report> {
    if n < 2 {
        return Err(Error::domain("the positivity check needs n >= 2"));
    }
    if beta_grid.is_empty() {
        return Err(Error::domain("empty beta grid"));
    }
    let nf = n as f64;
    if let Some(b) = beta_grid
        .iter()
        .find(|&&b| !(b > nf / 3.0 && b < nf / 2.0))
    {
        return Err(Error::domain(format!(
            "beta = {b} outside ({}, {})",
            nf / 3.0,
            nf / 2.0
        )));
    }
    if !(a0 >= 0.0 && a0 < a_max) || !a_max.is_finite() {
        return Err(Error::domain(format!("need 0 <= a0 < a_max, got {a0}, {a_max}")));
    }
    let count = ((a_max - a0) / LEMMA32_SAMPLE_STEP).ceil() as usize;
    let samples: Vec<f64> = (0..=count)
        .map(|k| (a0 + LEMMA32_SAMPLE_STEP * k as f64).min(a_max))
        .collect();

    let mut rows = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let values = bessel_moment_profile(n, beta, &samples, spec)?;
        let (idx, &minimum) = values
            .iter()
            .enumerate()
            .min_by(|x, y| x.1.total_cmp(y.1))
            .expect("samples are nonempty");
        rows.push(Lemma32Row {
            beta,
            minimum,
            argmin: samples[idx],
            floor: lemma32_floor(n, beta)?,
            limit: bessel_moment_limit(n, beta)?,
        });
    }
    let worst = rows
        .iter()
        .min_by(|x, y| x.minimum.total_cmp(&y.minimum))
        .copied()
        .expect("beta grid is nonempty");
    Ok(Lemma32Report {
        n,
        a0,
        a_max,
        c_empirical: worst.minimum,
        witness_beta: worst.beta,
        witness_a: worst.argmin,
        per_beta: rows,
    })
}
