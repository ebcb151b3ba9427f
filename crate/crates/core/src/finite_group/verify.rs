//! Randomized verification of the transform identities and norm inequalities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::*;

/// Absolute slack allowed on every inequality.
pub const BOUND_SLACK: f64 = 1e-10;
pub const INVERSION_TOL: f64 = 1e-12;
pub const PLANCHEREL_TOL: f64 = 1e-12;
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum CheckKind {
    /// `margin` is an error that must not exceed `tol`.
    Identity { tol: f64 },
    /// `margin = rhs − lhs`, which must be at least `−slack`.
    Bound { slack: f64 },
}

impl CheckKind {
    fn passes(&self, margin: f64) -> bool {
        match *self {
            CheckKind::Identity { tol } => margin <= tol,
            CheckKind::Bound { slack } => margin >= -slack,
        }
    }

    /// True when `a` is a worse margin than `b`.
    fn worse(&self, a: f64, b: f64) -> bool {
        match self {
            CheckKind::Identity { .. } => a > b,
            CheckKind::Bound { .. } => a < b,
        }
    }
}

/// One check evaluated on one random trial.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trial: usize,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
}

/// Aggregate of one check over all trials.
#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub kind: CheckKind,
    pub trials: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub worst_trial: usize,
    pub best_margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section2Report {
    pub order: usize,
    pub irrep_dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<CheckOutcome>,
}

impl Section2Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Inputs of trial `trial`: the generator is seeded with `seed` on stream `trial`.
pub fn trial_inputs(g: &FiniteGroup, seed: u64, trial: usize) -> (GroupFunction, GroupFunction, SymbolField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let f = GroupFunction::random(g.order(), &mut rng);
    let h = GroupFunction::random(g.order(), &mut rng);
    let s = SymbolField::random(g, &mut rng);
    (f, h, s)
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn run_trial(g: &FiniteGroup, seed: u64, trial: usize) -> Result<Vec<CheckOutcome>> {
    let (f, h, s) = trial_inputs(g, seed, trial);
    let mut out = Vec::new();
    let mut push = |name: String, kind: CheckKind, lhs: f64, rhs: f64, margin: f64| {
        out.push(CheckOutcome {
            passed: kind.passes(margin),
            name,
            trial,
            kind,
            lhs,
            rhs,
            margin,
        });
    };
    let bound = CheckKind::Bound { slack: BOUND_SLACK };

    let f2 = f.norm(2.0)?;
    let h2 = h.norm(2.0)?;
    let ft = fourier(g, &f);

    let back = inverse_fourier(g, &ft);
    let inv_err = back
        .values
        .iter()
        .zip(&f.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    push("inversion".into(), CheckKind::Identity { tol: INVERSION_TOL }, inv_err, 0.0, inv_err);

    let pl = plancherel_norm(g, &ft);
    push(
        "plancherel".into(),
        CheckKind::Identity { tol: PLANCHEREL_TOL },
        pl,
        f2 * f2,
        rel(pl, f2 * f2),
    );

    let v = wigner(g, &f, &h);
    let v2 = symbol_norm(g, &v, 2.0)?;
    push(
        "wigner_p2_equality".into(),
        CheckKind::Identity { tol: IDENTITY_TOL },
        v2,
        f2 * h2,
        rel(v2, f2 * h2),
    );
    for (label, pp) in [("2", 2.0), ("4", 4.0), ("inf", f64::INFINITY)] {
        let lhs = symbol_norm(g, &v, pp)?;
        push(format!("wigner_bound_p{label}"), bound, lhs, f2 * h2, f2 * h2 - lhs);
    }

    let kernel = weyl_kernel(g, &s);
    let op = kernel.operator_norm();
    for (label, pp) in [("1", 1.0), ("1.5", 1.5), ("2", 2.0)] {
        let rhs = symbol_norm(g, &s, pp)?;
        push(format!("weyl_bound_p{label}"), bound, op, rhs, rhs - op);
    }
    let s2 = symbol_norm(g, &s, 2.0)?;
    let hs = kernel.schatten_norm(2.0)?;
    push("hs_identity".into(), CheckKind::Identity { tol: IDENTITY_TOL }, hs, s2, rel(hs, s2));

    let s1 = symbol_norm(g, &s, 1.0)?;
    let tr = kernel.schatten_norm(1.0)?;
    push("trace_class_bound".into(), bound, tr, s1, s1 - tr);

    let lhs = bilinear(&weyl_apply(g, &s, &f), &h);
    let rhs = symbol_pairing(g, &v, &s);
    let scale = s2 * f2 * h2;
    let err = if scale == 0.0 { (lhs - rhs).norm() } else { (lhs - rhs).norm() / scale };
    push("pairing".into(), CheckKind::Identity { tol: IDENTITY_TOL }, lhs.norm(), rhs.norm(), err);

    for (label, pp) in [("1", 1.0), ("4/3", 4.0 / 3.0), ("2", 2.0)] {
        let dual = if pp == 1.0 { f64::INFINITY } else { pp / (pp - 1.0) };
        let lhs = fourier_norm(g, &ft, dual)?;
        let rhs = f.norm(pp)?;
        push(format!("hausdorff_young_p{label}"), bound, lhs, rhs, rhs - lhs);
    }
    Ok(out)
}

/// Runs every identity and inequality on `trials` seeded random triples `(f, g, ς)`.
///
/// Trials run in parallel; the aggregation order is fixed, so reports are
/// reproducible for a given seed.
pub fn verify_section2(g: &FiniteGroup, trials: usize, seed: u64) -> Result<Section2Report> {
    if trials == 0 {
        return Err(Error::domain("at least one trial is required"));
    }
    let per_trial: Vec<Vec<CheckOutcome>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(g, seed, t))
        .collect::<Result<_>>()?;

    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut failures = Vec::new();
    for outcomes in per_trial {
        for o in outcomes {
            match checks.iter_mut().find(|c| c.name == o.name) {
                Some(c) => {
                    c.trials += 1;
                    if c.kind.worse(o.margin, c.worst_margin) {
                        c.worst_margin = o.margin;
                        c.worst_trial = o.trial;
                    }
                    if c.kind.worse(c.best_margin, o.margin) {
                        c.best_margin = o.margin;
                    }
                    if !o.passed {
                        c.failures += 1;
                        c.passed = false;
                    }
                }
                None => checks.push(CheckSummary {
                    name: o.name.clone(),
                    kind: o.kind,
                    trials: 1,
                    failures: usize::from(!o.passed),
                    worst_margin: o.margin,
                    worst_trial: o.trial,
                    best_margin: o.margin,
                    passed: o.passed,
                }),
            }
            if !o.passed {
                failures.push(o);
            }
        }
    }
    Ok(Section2Report {
        order: g.order(),
        irrep_dims: g.dims(),
        trials,
        seed,
        checks,
        failures,
    })
}
