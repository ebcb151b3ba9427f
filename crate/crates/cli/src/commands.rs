use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use weyl_core::finite_group::{
    load_group, make_cyclic, make_dihedral, product_space_factorization, trial_inputs, verify_section2, FiniteGroup,
    GroupFunction,
};
use weyl_core::heisenberg::{hmg_divergence_scan, xi_window_exact, BoxProfile};
use weyl_core::interval::{parse_rational, Exact, Interval, Rational};
use weyl_core::linalg::C64;
use weyl_core::motion2d::{m2_beta_window_exact, m2_divergence_scan, RadialProfile};
use weyl_core::motion_nd::{mn_beta_window_exact, mn_divergence_scan};
use weyl_core::scan::ScanResult;
use weyl_core::specfun::{hyp2f1_at_one, hyp2f1_series, verify_lemma32, watson_identity_check};
use weyl_core::{Error, QuadratureSpec};

use crate::args::{
    Cli, Command, Family, FiniteVerifyArgs, GroupFunctionKind, Lemma32Args, ProductArgs, ScanArgs, WindowArgs,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const WATSON_TOL: f64 = 1e-8;
const GAUSS_TOL: f64 = 1e-6;
const GAUSS_EPS: f64 = 1e-6;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    PropertyFailure,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<Status, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn status(passed: bool) -> Status {
    if passed {
        Status::Pass
    } else {
        Status::PropertyFailure
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let spec = quadrature_spec(cli)?;
    let out = Artifacts { dir: &cli.out };
    match &cli.command {
        Command::SpecfunVerify => specfun_verify(&spec, &out),
        Command::FiniteVerify(a) => finite_verify(a, &out),
        Command::Lemma32(a) => lemma32(a, &spec, &out),
        Command::Scan(a) => scan(a, &spec, &out),
        Command::Window(a) => window(a),
        Command::ProductSpace(a) => product_space(a, &spec, &out),
    }
}

fn quadrature_spec(cli: &Cli) -> Result<QuadratureSpec, Failure> {
    let mut spec = QuadratureSpec::default();
    if let Some(r) = cli.rel_tol {
        spec.rel_tol = r;
    }
    if let Some(a) = cli.abs_tol {
        spec.abs_tol = a;
    }
    spec.validate()?;
    Ok(spec)
}

struct Artifacts<'a> {
    dir: &'a Path,
}

impl Artifacts<'_> {
    fn write(&self, name: &str, contents: &str) -> Result<(), Failure> {
        fs::create_dir_all(self.dir)
            .and_then(|_| fs::write(self.dir.join(name), contents))
            .map_err(|e| usage(format!("cannot write {}: {e}", self.dir.join(name).display())))?;
        eprintln!("wrote {}", self.dir.join(name).display());
        Ok(())
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| usage(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }
}

fn tolerances(spec: &QuadratureSpec) -> Value {
    json!({ "rel_tol": spec.rel_tol, "abs_tol": spec.abs_tol })
}

fn parse_group(s: &str) -> Result<FiniteGroup, Failure> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("group must be cyclic:N, dihedral:M or file:PATH, got {s:?}")))?;
    let size = || {
        arg.parse::<usize>()
            .map_err(|_| usage(format!("group size must be a positive integer, got {arg:?}")))
    };
    Ok(match kind {
        "cyclic" => make_cyclic(size()?)?,
        "dihedral" => make_dihedral(size()?)?,
        "file" => load_group(arg)?,
        _ => return Err(usage(format!("unknown group kind {kind:?}"))),
    })
}

fn specfun_verify(spec: &QuadratureSpec, out: &Artifacts) -> Outcome {
    let mut csv = String::from("check,p1,p2,p3,lhs,rhs,residual,passed\n");
    let mut watson_worst: f64 = 0.0;
    for &u in &[0.3, 0.6, 0.9] {
        for &alpha in &[1.1, 1.5, 1.9] {
            for &upsilon in &[0.0, 0.5, 1.0] {
                let w = watson_identity_check(u, alpha, upsilon, spec)?;
                watson_worst = watson_worst.max(w.residual);
                writeln!(
                    csv,
                    "watson,{u},{alpha},{upsilon},{:.16e},{:.16e},{:.16e},{}",
                    w.lhs,
                    w.rhs,
                    w.residual,
                    w.residual < WATSON_TOL
                )
                .expect("string write");
            }
        }
    }
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
    let mut gauss_worst: f64 = 0.0;
    for &(a, b, c) in &triples {
        let series = hyp2f1_series(a, b, c, 1.0 - GAUSS_EPS)?;
        let closed = hyp2f1_at_one(a, b, c)?;
        let gap = ((series - closed) / closed).abs();
        gauss_worst = gauss_worst.max(gap);
        writeln!(
            csv,
            "gauss,{a},{b},{c},{series:.16e},{closed:.16e},{gap:.16e},{}",
            gap < GAUSS_TOL
        )
        .expect("string write");
    }
    let passed = watson_worst < WATSON_TOL && gauss_worst < GAUSS_TOL;
    println!("watson identity: 27 points, max residual {watson_worst:.3e} (limit {WATSON_TOL:e})");
    println!("gauss value: {} triples, max relative gap {gauss_worst:.3e} (limit {GAUSS_TOL:e})", triples.len());
    out.write("specfun-verify.csv", &csv)?;
    out.write_json(
        "specfun-verify.json",
        &json!({
            "tool_version": VERSION,
            "watson_max_residual": watson_worst,
            "watson_limit": WATSON_TOL,
            "gauss_max_relative_gap": gauss_worst,
            "gauss_limit": GAUSS_TOL,
            "gauss_epsilon": GAUSS_EPS,
            "quadrature": tolerances(spec),
            "passed": passed,
        }),
    )?;
    Ok(status(passed))
}

fn finite_verify(a: &FiniteVerifyArgs, out: &Artifacts) -> Outcome {
    let g = parse_group(&a.group)?;
    let report = verify_section2(&g, a.trials, a.seed)?;
    let mut csv = String::from("check,kind,trials,failures,worst_margin,worst_trial,best_margin,passed\n");
    for c in &report.checks {
        writeln!(
            csv,
            "{},{:?},{},{},{:.16e},{},{:.16e},{}",
            c.name, c.kind, c.trials, c.failures, c.worst_margin, c.worst_trial, c.best_margin, c.passed
        )
        .expect("string write");
        println!(
            "{:<32} {}  {}/{} failed, worst margin {:.3e}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.failures,
            c.trials,
            c.worst_margin
        );
    }
    out.write("finite-verify.csv", &csv)?;
    out.write_json(
        "finite-verify.json",
        &json!({ "tool_version": VERSION, "group": a.group, "report": report }),
    )?;
    Ok(status(report.all_passed()))
}

fn lemma32(a: &Lemma32Args, spec: &QuadratureSpec, out: &Artifacts) -> Outcome {
    let nf = a.n as f64;
    let grid: Vec<f64> = if a.beta.is_empty() {
        (1..=5).map(|k| nf / 3.0 + k as f64 * (nf / 6.0) / 6.0).collect()
    } else {
        a.beta.clone()
    };
    let report = verify_lemma32(a.n, &grid, a.a0, a.a_max, spec)?;
    let mut csv = String::from("beta,minimum,argmin,floor,limit\n");
    for r in &report.per_beta {
        writeln!(
            csv,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.beta, r.minimum, r.argmin, r.floor, r.limit
        )
        .expect("string write");
    }
    let passed = report.c_empirical > 0.0;
    println!(
        "n = {}: minimum {:.6e} at beta = {}, a = {:.4} (floor at that beta {:.6e})",
        a.n,
        report.c_empirical,
        report.witness_beta,
        report.witness_a,
        report.floor_at_witness()
    );
    out.write("lemma32.csv", &csv)?;
    out.write_json(
        "lemma32.json",
        &json!({
            "tool_version": VERSION,
            "quadrature": tolerances(spec),
            "positive": passed,
            "report": report,
        }),
    )?;
    Ok(status(passed))
}

fn require<T>(v: Option<T>, flag: &str, family: Family) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("--{flag} is required for --group {}", family.name())))
}

fn scan(a: &ScanArgs, spec: &QuadratureSpec, out: &Artifacts) -> Outcome {
    let mut extra = BTreeMap::new();
    extra.insert("quadrature".to_string(), tolerances(spec));
    let result: ScanResult = match a.group {
        Family::M2 => {
            let p = RadialProfile::new(require(a.beta, "beta", a.group)?, 2)?;
            m2_divergence_scan(&p, a.q, a.a0, a.a_max, a.points, spec)?
        }
        Family::Mn => {
            let p = RadialProfile::new(require(a.beta, "beta", a.group)?, require(a.n, "n", a.group)?)?;
            mn_divergence_scan(&p, a.q, a.a0, a.a_max, a.points, spec)?
        }
        Family::Hmg => {
            let p = BoxProfile::new(require(a.xi, "xi", a.group)?, a.n.unwrap_or(1))?;
            let s = hmg_divergence_scan(&p, a.q, a.lambda0, a.lambda_max, a.points, spec)?;
            extra.insert("near_zero_integral".into(), json!(s.near_zero_integral));
            extra.insert("symmetry_defect".into(), json!(s.symmetry_defect));
            extra.insert("lambda0".into(), json!(s.lambda0));
            extra.insert("total_partial_integral".into(), json!(s.total_partial()));
            s.scan
        }
    };
    println!(
        "verdict: {} (growth exponent {:.4}, fitted decay {:.4}, final partial integral {:.6e})",
        result.verdict,
        result.growth_exponent,
        result.fitted_exponent,
        result.final_partial()
    );
    let stem = format!("scan-{}", a.group.name());
    out.write(&format!("{stem}.csv"), &result.to_csv())?;
    let mut sidecar = result.sidecar(VERSION);
    sidecar.extra = extra;
    out.write_json(&format!("{stem}.json"), &sidecar)?;
    Ok(Status::Pass)
}

fn show(w: Interval<Rational>) -> String {
    Interval {
        lo: Exact(w.lo),
        hi: Exact(w.hi),
        lo_closed: w.lo_closed,
        hi_closed: w.hi_closed,
    }
    .to_string()
}

fn window(a: &WindowArgs) -> Outcome {
    let q = parse_rational(&a.q)?;
    let w = match a.group {
        Family::M2 => m2_beta_window_exact(q)?,
        Family::Mn => mn_beta_window_exact(require(a.n, "n", a.group)?, q)?,
        Family::Hmg => xi_window_exact(q)?,
    };
    println!("{}", show(w));
    Ok(Status::Pass)
}

fn product_space(a: &ProductArgs, spec: &QuadratureSpec, out: &Artifacts) -> Outcome {
    let g = parse_group(&a.group)?;
    let f = match a.function {
        GroupFunctionKind::Delta => GroupFunction::delta(g.order(), g.identity()),
        GroupFunctionKind::Constant => GroupFunction::constant(g.order(), C64::new(1.0, 0.0)),
        GroupFunctionKind::Random => trial_inputs(&g, a.seed, 0).0,
    };
    let r = product_space_factorization(&g, &f, a.beta, a.q, spec)?;
    println!(
        "group factor {:.12e}; euclidean factor {}; verdict: {}",
        r.group_factor,
        r.euclid_factor.map_or("divergent or undecided".to_string(), |v| format!("{v:.6e}")),
        r.verdict
    );
    out.write("product-space.csv", &r.euclid.to_csv())?;
    out.write_json(
        "product-space.json",
        &json!({
            "tool_version": VERSION,
            "group": a.group,
            "function": format!("{:?}", a.function).to_lowercase(),
            "seed": a.seed,
            "beta": a.beta,
            "q": a.q,
            "group_factor": r.group_factor,
            "euclid_factor": r.euclid_factor,
            "window": r.window,
            "beta_in_window": r.beta_in_window,
            "verdict": r.verdict,
            "quadrature": tolerances(spec),
            "euclid_scan": r.euclid.sidecar(VERSION),
        }),
    )?;
    Ok(Status::Pass)
}
