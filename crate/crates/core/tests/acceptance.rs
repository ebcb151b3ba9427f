//! Acceptance suite: one pass/fail line per criterion, with its runtime.
//!
//! Every criterion is evaluated even when an earlier one fails; the process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use weyl_core::finite_group::*;
use weyl_core::heisenberg::*;
use weyl_core::interval::{parse_rational, Exact, Rational};
use weyl_core::linalg::C64;
use weyl_core::motion2d::*;
use weyl_core::motion_nd::*;
use weyl_core::quadrature::{GaussLegendre, QuadratureSpec};
use weyl_core::scan::{fit_envelope_exponent, Verdict};
use weyl_core::specfun::*;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn watson_grid() -> Outcome {
    let mut worst: f64 = 0.0;
    for &u in &[0.3, 0.6, 0.9] {
        for &alpha in &[1.1, 1.5, 1.9] {
            for &upsilon in &[0.0, 0.5, 1.0] {
                match watson_identity_check(u, alpha, upsilon, &spec()) {
                    Ok(w) => worst = worst.max(w.residual),
                    Err(e) => return Outcome::new(false, format!("({u}, {alpha}, {upsilon}): {e}")),
                }
            }
        }
    }
    Outcome::new(worst < 1e-8, format!("27 points, max residual {worst:.2e} (limit 1e-8)"))
}

fn gauss_value() -> Outcome {
    // with s = η − ξ − ζ > 1, F(1) − F(1 − ε) ≈ ε·F(1)·ξζ/(s − 1); every triple keeps that ratio ≤ 1/2
    let triples = [
        (0.5, 0.5, 3.0),
        (0.3, 0.7, 2.8),
        (1.0, 1.0, 5.0),
        (-0.5, 0.5, 2.0),
        (0.25, -0.25, 1.75),
        (2.0, 0.5, 6.0),
        (0.6, -0.1, 2.5),
        (1.5, -0.5, 4.0),
        (0.1, 0.2, 1.8),
        (-1.5, 0.5, 2.5),
    ];
    let mut worst: f64 = 0.0;
    for &(a, b, c) in &triples {
        let series = match hyp2f1_series(a, b, c, 1.0 - 1e-6) {
            Ok(v) => v,
            Err(e) => return Outcome::new(false, format!("({a}, {b}, {c}): {e}")),
        };
        let closed = hyp2f1_at_one(a, b, c).expect("excess is positive");
        worst = worst.max(((series - closed) / closed).abs());
    }
    Outcome::new(worst < 1e-6, format!("10 triples, max relative gap {worst:.2e} (limit 1e-6)"))
}

fn positivity_floor() -> Outcome {
    let grids: [(u32, &[f64]); 3] = [
        (2, &[0.70, 0.80, 0.90, 0.99]),
        (3, &[1.1, 1.2, 1.3, 1.45]),
        (4, &[1.4, 1.6, 1.8, 1.95]),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, grid) in grids {
        let r = match verify_lemma32(n, grid, 5.0, 200.0, &spec()) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("n = {n}: {e}")),
        };
        let mut ok = r.c_empirical > 0.0;
        let mut text = format!("n={n}: C={:.4} at beta={} a={:.2}", r.c_empirical, r.witness_beta, r.witness_a);
        if n >= 3 {
            let floor = r.floor_at_witness();
            ok &= r.c_empirical >= 0.9 * floor;
            text.push_str(&format!(" floor={floor:.4}"));
        }
        passed &= ok;
        parts.push(format!("{text} [{}]", if ok { "ok" } else { "fails" }));
    }
    Outcome::new(passed, parts.join("; "))
}

fn finite_exactness() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (label, g) in [("cyclic(6)", make_cyclic(6)), ("dihedral(4)", make_dihedral(4))] {
        let g = g.expect("built-in group");
        let r = verify_section2(&g, 100, 7).expect("shapes are consistent");
        passed &= r.all_passed();
        let failing: Vec<String> = r
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} {}/{} worst {:.3}", c.name, c.failures, c.trials, c.worst_margin))
            .collect();
        let worst_identity = r
            .checks
            .iter()
            .filter(|c| matches!(c.kind, CheckKind::Identity { .. }))
            .map(|c| c.worst_margin)
            .fold(0.0f64, f64::max);
        parts.push(format!(
            "{label}: identities worst {worst_identity:.1e}, failing: {}",
            if failing.is_empty() { "none".to_string() } else { failing.join(", ") }
        ));
    }
    Outcome::new(passed, parts.join("; "))
}

fn rank_one() -> Outcome {
    let mut worst: f64 = 0.0;
    for &beta in &[0.7, 0.9] {
        for &a in &[5.0, 50.0] {
            let p = RadialProfile::new(beta, 2).unwrap();
            let t = match m2_operator_truncation(&p, a, 8, &spec()) {
                Ok(t) => t,
                Err(e) => return Outcome::new(false, format!("({beta}, {a}): {e}")),
            };
            let m = t.matrix();
            let centre = m[(8, 8)].norm();
            for l in 0..17 {
                for k in 0..17 {
                    if (l, k) != (8, 8) {
                        worst = worst.max(m[(l, k)].norm() / centre);
                    }
                }
            }
        }
    }
    Outcome::new(worst < 1e-9, format!("max off-centre entry {worst:.2e} relative (limit 1e-9)"))
}

fn m2_scaling() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut fits = Vec::new();
    for &beta in &[0.7, 0.8, 0.9] {
        let k = RadialKernel {
            n: 2,
            beta,
            scale: M2_SCALE,
            spec: spec(),
        };
        let fit = fit_envelope_exponent(&k, 50.0, 400.0).expect("fit window is valid");
        worst = worst.max((fit.exponent - (beta - 2.0)).abs());
        fits.push(format!("{:.4}", fit.exponent));
    }
    Outcome::new(worst < 0.05, format!("exponents [{}], max deviation {worst:.4} (limit 0.05)", fits.join(", ")))
}

fn verdict_grids() -> Outcome {
    // β grids sit inside the divergence ranges, with boundaries between grid points
    let m2_beta: [f64; 5] = [0.52, 0.64, 0.76, 0.88, 0.99];
    let m2_q = [1.25, 2.0 / 1.42, 2.0 / 1.30, 2.0 / 1.18, 2.0 / 1.065];
    let mn_beta: [f64; 5] = [1.02, 1.14, 1.26, 1.38, 1.49];
    let mn_q = [1.4, 3.0 / 1.92, 3.0 / 1.80, 3.0 / 1.68, 3.0 / 1.565];
    let mut agree = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for &beta in &m2_beta {
        for &q in &m2_q {
            let growth = (beta - 2.0) * q + 2.0;
            assert!((beta - (2.0 - 2.0 / q)).abs() >= 0.05);
            let expected = if growth >= 0.0 { Verdict::Divergent } else { Verdict::Convergent };
            let p = RadialProfile::new(beta, 2).unwrap();
            let got = m2_divergence_scan(&p, q, 1.0, 400.0, None, &spec()).map(|r| r.verdict);
            total += 1;
            if got.as_ref().ok() == Some(&expected) {
                agree += 1;
            } else {
                misses.push(format!("m2({beta}, {q:.4}) {got:?}"));
            }
        }
    }
    for &beta in &mn_beta {
        for &q in &mn_q {
            let growth = (beta - 3.0) * q + 3.0;
            assert!((beta - (3.0 - 3.0 / q)).abs() >= 0.05);
            let expected = if growth >= 0.0 { Verdict::Divergent } else { Verdict::Convergent };
            let p = RadialProfile::new(beta, 3).unwrap();
            let got = mn_divergence_scan(&p, q, 1.0, 400.0, None, &spec()).map(|r| r.verdict);
            total += 1;
            if got.as_ref().ok() == Some(&expected) {
                agree += 1;
            } else {
                misses.push(format!("m3({beta}, {q:.4}) {got:?}"));
            }
        }
    }
    let mut detail = format!("{agree}/{total} verdicts agree");
    if !misses.is_empty() {
        detail.push_str(&format!(": {}", misses.join(", ")));
    }
    Outcome::new(agree == total, detail)
}

fn window_arithmetic() -> Outcome {
    let mut ok = true;
    let two = Rational::from_integer(2);
    for s in ["1.01", "1.2", "1.25", "1.5", "1.75", "1.9", "1.99", "7/4", "4/3"] {
        let q = parse_rational(s).unwrap();
        let w = m2_beta_window_exact(q).unwrap();
        ok &= w.lo == Rational::new(2, 3).max(two - two / q) && w.hi == Rational::from_integer(1);
        for n in 3..=6i64 {
            let nr = Rational::from_integer(n);
            let w = mn_beta_window_exact(n as u32, q).unwrap();
            ok &= w.lo == (nr / 3).max(nr - nr / q) && w.hi == nr / 2;
        }
    }
    let show = |w: weyl_core::interval::Interval<Rational>| format!("({}, {})", Exact(w.lo), Exact(w.hi));
    let a = show(m2_beta_window_exact(parse_rational("1.5").unwrap()).unwrap());
    let b = show(mn_beta_window_exact(3, parse_rational("1.5").unwrap()).unwrap());
    let c = show(m2_beta_window_exact(parse_rational("1.9").unwrap()).unwrap());
    ok &= a == "(2/3, 1)" && b == "(1, 1.5)" && c == "(18/19, 1)";
    Outcome::new(ok, format!("m2(1.5) = {a}, m3(1.5) = {b}, m2(1.9) = {c}"))
}

/// `∫₀¹ x^ξ h(x) dx` with `x = s^m`, `m(1+ξ) = 3`.
fn graded_nodes(m: u32, panels: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(12);
    let mut out = Vec::new();
    for k in 0..panels {
        for (s, w) in gl.mapped(k as f64 / panels as f64, (k + 1) as f64 / panels as f64) {
            out.push((s.powi(m as i32), w * m as f64 * s * s));
        }
    }
    out
}

fn tensor_quadrature(xi: f64, lambda: f64) -> f64 {
    let m = (3.0 / (1.0 + xi)).round() as u32;
    let ts = graded_nodes(m, 48);
    let xs = graded_nodes(m, 16);
    let mut acc = C64::new(0.0, 0.0);
    for &(t, wt) in &ts {
        for &(x, wx) in &xs {
            for &(y, wy) in &xs {
                let w = wt * wx * wy;
                for sx in [1.0, -1.0] {
                    for sy in [1.0, -1.0] {
                        for st in [1.0, -1.0] {
                            let z = C64::new(sx * x, sy * y);
                            acc += phi00_element(lambda, &[z], st * t).unwrap() * w;
                        }
                    }
                }
            }
        }
    }
    acc.re
}

fn hmg() -> Outcome {
    let mut passed = true;
    let mut sep: f64 = 0.0;
    for &xi in &[-0.4, -0.25, 0.5] {
        let p = BoxProfile::new(xi, 1).unwrap();
        for &lambda in &[5.0, 40.0] {
            let v = g_xi_element(&p, lambda, &spec()).unwrap().re;
            let full = tensor_quadrature(xi, lambda);
            sep = sep.max(((v - full) / full).abs());
        }
    }
    passed &= sep < 1e-6;

    let mut decay: f64 = 0.0;
    for &n in &[1u32, 2] {
        for &xi in &[-0.4, -0.25] {
            let p = BoxProfile::new(xi, n).unwrap();
            let fit = hmg_envelope_fit(&p, 50.0, 2000.0, &spec()).unwrap();
            decay = decay.max((fit.exponent - p.decay_exponent()).abs());
        }
    }
    passed &= decay < 0.05;

    let mut agree = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for &q in &[1.25, 1.5, 1.75] {
        for &xi in &[-0.48f64, -0.27, -0.1, 0.25] {
            let bound = 1.0 / q - 1.0;
            assert!((xi - bound).abs() >= 0.05);
            let expected = if xi <= bound { Verdict::Divergent } else { Verdict::Convergent };
            let p = BoxProfile::new(xi, 1).unwrap();
            let got = hmg_divergence_scan(&p, q, 1.0, 1000.0, None, &spec()).map(|r| r.scan.verdict);
            total += 1;
            if got.as_ref().ok() == Some(&expected) {
                agree += 1;
            } else {
                misses.push(format!("({xi}, {q}) {got:?}"));
            }
        }
    }
    passed &= agree == total;
    let mut detail = format!(
        "separability {sep:.1e} (limit 1e-6), decay deviation {decay:.4} (limit 0.05), verdicts {agree}/{total}"
    );
    if !misses.is_empty() {
        detail.push_str(&format!(": {}", misses.join(", ")));
    }
    Outcome::new(passed, detail)
}

fn product_space() -> Outcome {
    let g = make_dihedral(4).unwrap();
    let f = GroupFunction::delta(g.order(), g.identity());
    let mut passed = true;
    let mut factor_err: f64 = 0.0;
    let mut verdicts = Vec::new();
    for &(beta, q) in &[(0.45, 1.5), (0.40, 1.25), (0.40, 1.9), (0.30, 1.75)] {
        let r = match product_space_factorization(&g, &f, beta, q, &spec()) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("({beta}, {q}): {e}")),
        };
        factor_err = factor_err.max((r.group_factor - 1.0).abs());
        let expected = if beta >= 1.0 - 1.0 / q { Verdict::Divergent } else { Verdict::Convergent };
        passed &= r.verdict == expected;
        verdicts.push(format!("({beta}, {q}) {}", r.verdict));
    }
    passed &= factor_err < 1e-12;
    Outcome::new(passed, format!("group factor error {factor_err:.1e}; {}", verdicts.join(", ")))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Watson identity", 10, watson_grid),
        ("Gauss value", 1, gauss_value),
        ("positivity floor", 60, positivity_floor),
        ("finite-group exactness", 30, finite_exactness),
        ("M(2) rank one", 60, rank_one),
        ("M(2) scaling law", 30, m2_scaling),
        ("divergence verdicts", 120, verdict_grids),
        ("window arithmetic", 1, window_arithmetic),
        ("Heisenberg separability and decay", 120, hmg),
        ("product-space factorization", 30, product_space),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let passed = outcome.passed && in_time;
        println!(
            "criterion {:>2} {:<34} {}  {:>7.2}s (limit {}s)  {}",
            k + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit,
            outcome.detail
        );
        if !passed {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
