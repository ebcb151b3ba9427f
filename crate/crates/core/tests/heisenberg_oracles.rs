//! Heisenberg motion group: ground-state coefficient, separability and decay.

use std::f64::consts::PI;

use proptest::prelude::*;
use weyl_core::heisenberg::*;
use weyl_core::interval::{parse_rational, Exact};
use weyl_core::linalg::C64;
use weyl_core::quadrature::{GaussLegendre, QuadratureSpec};
use weyl_core::scan::Verdict;
use weyl_core::specfun::gamma;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// `⟨π_λ(z,t)φ₀, φ₀⟩` at n = 1 from the Schrödinger action, by quadrature in ξ.
fn schrodinger_coefficient(lambda: f64, x: f64, y: f64, t: f64) -> C64 {
    let gl = GaussLegendre::new(30);
    let l = lambda.abs();
    let phi = |s: f64| (l / PI).powf(0.25) * (-l * s * s / 2.0).exp();
    let mut acc = C64::new(0.0, 0.0);
    let width = 12.0 / l.sqrt();
    let panels = 48;
    for k in 0..panels {
        let lo = -width + 2.0 * width * k as f64 / panels as f64;
        let hi = lo + 2.0 * width / panels as f64;
        for (s, w) in gl.mapped(lo, hi) {
            let phase = lambda * t + lambda * (x * s + 0.5 * x * y);
            acc += C64::from_polar(w * phi(s + y) * phi(s), phase);
        }
    }
    acc
}

#[test]
fn phi00_examples() {
    for &s in &[0.0, 0.7, -2.5] {
        let v = phi00_element(1.0, &[C64::new(0.0, 0.0)], s).unwrap();
        assert!((v - C64::from_polar(1.0, s)).norm() < 1e-15);
    }
    let z = C64::new(1.2, -1.6);
    let v = phi00_element(1.0, &[z], 0.0).unwrap();
    assert!((v.re - (-1.0f64).exp()).abs() < 1e-15 && v.im.abs() < 1e-15);
    let oracle = schrodinger_coefficient(1.0, 1.2, -1.6, 0.0);
    assert!((v - oracle).norm() < 1e-12, "{v} vs {oracle}");

    for &(lambda, x, y, t) in &[(2.0, 0.3, 0.4, 0.9), (-2.0, 0.3, 0.4, 0.9), (5.5, -0.8, 0.1, -1.3)] {
        let v = phi00_element(lambda, &[C64::new(x, y)], t).unwrap();
        let oracle = schrodinger_coefficient(lambda, x, y, t);
        assert!((v - oracle).norm() < 1e-12, "lambda = {lambda}: {v} vs {oracle}");
    }

    let z = [C64::new(0.3, 0.2), C64::new(-0.5, 0.1)];
    let a = phi00_element(-2.0, &z, 0.4).unwrap();
    let b = phi00_element(2.0, &z, 0.4).unwrap();
    assert!((a - b.conj()).norm() < 1e-15);
    assert!(phi00_element(0.0, &z, 0.4).is_err());
}

#[test]
fn small_lambda_limit() {
    for &(n, xi) in &[(1u32, -0.4), (1, 0.5), (2, -0.25), (3, 0.0)] {
        let p = BoxProfile::new(xi, n).unwrap();
        let v = g_xi_element(&p, 1e-9, &spec()).unwrap();
        let lim = (2.0 / (1.0 + xi)).powi(2 * n as i32 + 1);
        assert!(((v.re - lim) / lim).abs() < 1e-8, "({n}, {xi}): {} vs {lim}", v.re);
        assert_eq!(v.im, 0.0);
    }
}

#[test]
fn sinc_zero() {
    let p = BoxProfile::new(0.0, 1).unwrap();
    assert!(g_xi_element(&p, PI, &spec()).unwrap().norm() < 1e-12);
    assert!(box_oscillatory_factor(PI, 0.0, &spec()).unwrap().abs() < 1e-13);
}

/// `∫₀¹ x^ξ h(x) dx` with `x = s^m`, where `m(1 + ξ) = 3` makes the weight `m s²`.
fn graded_nodes(m: u32, panels: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(12);
    let mut out = Vec::new();
    for k in 0..panels {
        let (lo, hi) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
        for (s, w) in gl.mapped(lo, hi) {
            out.push((s.powi(m as i32), w * m as f64 * s * s));
        }
    }
    out
}

/// Full three-dimensional quadrature of `∫_A g_ξ(x,y,t) Φ₀₀^λ(x+iy, t)` at n = 1.
fn tensor_quadrature(xi: f64, lambda: f64) -> C64 {
    let m = (3.0 / (1.0 + xi)).round() as u32;
    assert!((m as f64 * (1.0 + xi) - 3.0).abs() < 1e-12);
    let ts = graded_nodes(m, 48);
    let xs = graded_nodes(m, 16);
    let mut acc = C64::new(0.0, 0.0);
    for &(t, wt) in &ts {
        for &(x, wx) in &xs {
            for &(y, wy) in &xs {
                let w = wt * wx * wy;
                // the eight sign patterns of (x, y, t) in the box
                for &(sx, sy, st) in &[
                    (1.0, 1.0, 1.0),
                    (1.0, 1.0, -1.0),
                    (1.0, -1.0, 1.0),
                    (1.0, -1.0, -1.0),
                    (-1.0, 1.0, 1.0),
                    (-1.0, 1.0, -1.0),
                    (-1.0, -1.0, 1.0),
                    (-1.0, -1.0, -1.0),
                ] {
                    let z = C64::new(sx * x, sy * y);
                    acc += phi00_element(lambda, &[z], st * t).unwrap() * w;
                }
            }
        }
    }
    acc
}

#[test]
fn separable_form_matches_tensor_quadrature() {
    for &xi in &[-0.4, -0.25, 0.5] {
        let p = BoxProfile::new(xi, 1).unwrap();
        for &lambda in &[5.0, 40.0] {
            let v = g_xi_element(&p, lambda, &spec()).unwrap();
            let full = tensor_quadrature(xi, lambda);
            assert!(full.im.abs() < 1e-10 * full.norm());
            assert!((v - full).norm() < 1e-6 * full.norm(), "({xi}, {lambda}): {v} vs {full}");
        }
    }
}

/// Endpoint expansion of `2∫₀¹ t^ξ cos(λt) dt` for large λ.
fn oscillatory_asymptotic(lambda: f64, xi: f64) -> f64 {
    let lead = 2.0 * gamma(1.0 + xi).unwrap() * (PI * (1.0 + xi) / 2.0).cos() * lambda.powf(-(1.0 + xi));
    let mut sum = C64::new(0.0, 0.0);
    let mut falling = 1.0;
    let il = C64::new(0.0, lambda);
    for k in 0..8 {
        sum += (if k % 2 == 0 { 1.0 } else { -1.0 }) * falling / il.powi(k + 1);
        falling *= xi - k as f64;
    }
    lead + 2.0 * (C64::from_polar(1.0, lambda) * sum).re
}

#[test]
fn oscillatory_factor_asymptotics() {
    for &xi in &[-0.4, -0.25, 0.2, 1.5] {
        for &lambda in &[150.0, 613.7, 2000.0] {
            let v = box_oscillatory_factor(lambda, xi, &spec()).unwrap();
            let a = oscillatory_asymptotic(lambda, xi);
            assert!((v - a).abs() < 1e-11, "({xi}, {lambda}): {v} vs {a}");
        }
    }
}

#[test]
fn gaussian_factor_closed_form() {
    // ∫_{−1}^{1} e^{−μx²/4} dx = 2√(π/μ) erf(√μ/2); check erf-free: large μ limit and μ → 0
    let big = box_gaussian_factor(1e6, 0.0, &spec()).unwrap();
    assert!((big - 2.0 * (PI / 1e6).sqrt()).abs() < 1e-12);
    let xi = -0.3;
    let small = box_gaussian_factor(1e-9, xi, &spec()).unwrap();
    assert!((small - 2.0 / (1.0 + xi)).abs() < 1e-8);
    // ∫_{−∞}^{∞} |x|^ξ e^{−μx²/4} dx = Γ((1+ξ)/2)(4/μ)^{(1+ξ)/2}
    let mu = 400.0;
    let v = box_gaussian_factor(mu, xi, &spec()).unwrap();
    let full = gamma((1.0 + xi) / 2.0).unwrap() * (4.0 / mu).powf((1.0 + xi) / 2.0);
    assert!((v - full).abs() < 1e-10 * full, "{v} vs {full}");
}

#[test]
fn conjugate_symmetry() {
    for &(n, xi) in &[(1u32, -0.4), (2, 0.3)] {
        let p = BoxProfile::new(xi, n).unwrap();
        for &l in &[0.3, 7.0, 123.4] {
            let a = g_xi_element(&p, l, &spec()).unwrap();
            let b = g_xi_element(&p, -l, &spec()).unwrap();
            assert!((b - a.conj()).norm() < 1e-12);
        }
    }
}

#[test]
fn decay_exponent_fits() {
    for &n in &[1u32, 2] {
        for &xi in &[-0.4, -0.25] {
            let p = BoxProfile::new(xi, n).unwrap();
            let fit = hmg_envelope_fit(&p, 50.0, 2000.0, &spec()).unwrap();
            let expected = p.decay_exponent();
            assert!((fit.exponent - expected).abs() < 0.05, "({n}, {xi}): {} vs {expected}", fit.exponent);
        }
    }
}

#[test]
fn scan_verdicts() {
    let cases = [
        (1u32, -0.4, 1.25, Verdict::Divergent),
        (1, -0.1, 1.25, Verdict::Convergent),
        (2, -0.4, 1.5, Verdict::Divergent),
        (1, 0.2, 1.5, Verdict::Convergent),
    ];
    for &(n, xi, q, expected) in &cases {
        let p = BoxProfile::new(xi, n).unwrap();
        let r = hmg_divergence_scan(&p, q, 1.0, 1000.0, None, &spec()).unwrap();
        assert_eq!(r.scan.verdict, expected, "({n}, {xi}, {q})");
        assert!(r.symmetry_defect < 1e-10);
        assert!(r.near_zero_integral > 0.0 && r.near_zero_integral.is_finite());
        assert!(r.scan.partial_integrals.windows(2).all(|w| w[1] >= w[0]));
        assert!(r.total_partial() > r.scan.final_partial());
    }
}

#[test]
fn xi_windows() {
    let w = xi_window_exact(parse_rational("1.25").unwrap()).unwrap();
    assert_eq!(format!("{}", w.to_f64()), "(-0.5, -0.2]");
    assert_eq!(format!("({}, {}]", Exact(w.lo), Exact(w.hi)), "(-0.5, -0.2]");
    let near_two = xi_window(1.9999).unwrap();
    assert!(near_two.hi > -0.5 && near_two.hi < -0.4999);
    let near_one = xi_window(1.0001).unwrap();
    assert!(near_one.hi < 0.0 && near_one.hi > -1e-4);
    assert!(xi_window(2.0).is_err() && xi_window(1.0).is_err());
    assert!(BoxProfile::new(-0.5, 1).is_err());
}

#[test]
fn schur_bound_is_a_power_of_the_element() {
    let p = BoxProfile::new(-0.25, 1).unwrap();
    let v = g_xi_element(&p, 30.0, &spec()).unwrap().norm();
    assert!(v < 1.0);
    let mut last = f64::INFINITY;
    for &q in &[1.1, 1.4, 1.7, 2.0] {
        let s = schur_lower_bound(&p, 30.0, q, &spec()).unwrap();
        assert!((s - v.powf(q)).abs() < 1e-15);
        assert!(s < last);
        last = s;
    }
    assert!(schur_lower_bound(&p, 30.0, 2.5, &spec()).is_err());
}

#[test]
fn averaged_oscillatory_factor_is_positive() {
    // the period average of T·λ^{1+ξ} tends to the leading coefficient
    for &xi in &[-0.45, -0.25, -0.05] {
        let lambda: f64 = 800.0;
        let gl = GaussLegendre::new(16);
        let avg = gl.integrate(
            |l| box_oscillatory_factor(l, xi, &spec()).unwrap() * l.powf(1.0 + xi),
            lambda - PI,
            lambda + PI,
        ) / (2.0 * PI);
        let coeff = 2.0 * gamma(1.0 + xi).unwrap() * (PI * (1.0 + xi) / 2.0).cos();
        assert!(avg > 0.0 && ((avg - coeff) / coeff).abs() < 1e-3, "{xi}: {avg} vs {coeff}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leading_coefficient_positive(xi in -0.4999f64..-1e-6) {
        let c = 2.0 * gamma(1.0 + xi).unwrap() * (PI * (1.0 + xi) / 2.0).cos();
        prop_assert!(c > 0.0);
    }

    #[test]
    fn element_is_real_and_even(xi in -0.45f64..1.0, lambda in 0.01f64..200.0, n in 1u32..4) {
        let p = BoxProfile::new(xi, n).unwrap();
        let a = g_xi_element(&p, lambda, &spec()).unwrap();
        let b = g_xi_element(&p, -lambda, &spec()).unwrap();
        prop_assert_eq!(a.im, 0.0);
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }
}
