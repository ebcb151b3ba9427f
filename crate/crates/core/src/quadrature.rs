//! Gauss–Legendre panel quadrature with global adaptive refinement.
//!
//! Every one-dimensional integral in the crate goes through [`integrate`]. The
//! caller supplies breakpoints (typically aligned to the oscillation scale of
//! the integrand); each panel is scored by comparing the order-20 rule on the
//! panel with the sum over its two halves, and the panel with the largest
//! error estimate is bisected until the total estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of the per-panel Gauss–Legendre rule.
pub const PANEL_ORDER: usize = 20;

/// Multiple of machine epsilon times `Σ |panel|` treated as round-off.
const ROUNDOFF_FACTOR: f64 = 64.0;

/// Bisections allowed per call before the rule gives up.
pub const MAX_SUBDIVISIONS: usize = 200_000;

static PANEL_RULE: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(PANEL_ORDER));

/// Tolerances and refinement limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Each breakpoint interval is split into this many equal panels before refinement.
    pub panel_count_hint: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any single initial panel.
    pub max_refinement_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            panel_count_hint: 1,
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            max_refinement_depth: 100,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.panel_count_hint == 0 {
            return Err(Error::domain("panel_count_hint must be positive"));
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::domain(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_refinement_depth == 0 {
            return Err(Error::domain("max_refinement_depth must be at least 1"));
        }
        Ok(())
    }

    /// Same tolerances with the panel density doubled; used by independent cross-checks.
    pub fn refined(&self) -> Self {
        Self {
            panel_count_hint: self.panel_count_hint * 2,
            ..*self
        }
    }
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `order`-point rule by Newton iteration on the Legendre polynomial.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The order-20 panel rule shared by the adaptive integrator.
pub fn panel_rule() -> &'static GaussLegendre {
    &PANEL_RULE
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    left: f64,
    right: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn score_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> Panel {
    let rule = panel_rule();
    let m = 0.5 * (a + b);
    let left = rule.integrate(f, a, m);
    let right = rule.integrate(f, m, b);
    let value = left + right;
    Panel {
        a,
        b,
        value,
        left,
        right,
        error: (whole - value).abs(),
        depth,
    }
}

/// Accepted panels of an adaptive run; the composite rule can be reused on
/// other integrands that share the singular/oscillatory structure.
#[derive(Debug, Clone)]
pub struct PanelSet {
    pub panels: Vec<(f64, f64)>,
}

impl PanelSet {
    /// Composite nodes and weights: each accepted panel contributes its two
    /// order-20 halves, matching how the adaptive integrator reports values.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let rule = panel_rule();
        let mut out = Vec::with_capacity(self.panels.len() * 2 * rule.order());
        for &(a, b) in &self.panels {
            let m = 0.5 * (a + b);
            out.extend(rule.mapped(a, m));
            out.extend(rule.mapped(m, b));
        }
        out
    }
}

/// Integrates `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// `breakpoints` must be nondecreasing; zero-width intervals are skipped.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    integrate_with_panels(f, breakpoints, spec).map(|(est, _)| est)
}

/// Like [`integrate`], also returning the accepted panels sorted by position.
pub fn integrate_with_panels<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<(Estimate, PanelSet)> {
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::domain("integration needs at least two breakpoints"));
    }
    if breakpoints.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite integration breakpoint"));
    }
    if breakpoints.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("integration breakpoints must be nondecreasing"));
    }

    let rule = panel_rule();
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let pieces = spec.panel_count_hint;
        let step = (hi - lo) / pieces as f64;
        for k in 0..pieces {
            let a = lo + step * k as f64;
            let b = if k + 1 == pieces { hi } else { lo + step * (k + 1) as f64 };
            let whole = rule.integrate(&f, a, b);
            heap.push(score_panel(&f, a, b, whole, 0));
            evaluations += 3 * PANEL_ORDER;
        }
    }
    if heap.is_empty() {
        return Ok((
            Estimate {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
            },
            PanelSet { panels: Vec::new() },
        ));
    }

    let mut total: f64 = heap.iter().map(|p| p.value).sum();
    let mut total_err: f64 = heap.iter().map(|p| p.error).sum();
    let mut total_abs: f64 = heap.iter().map(|p| p.value.abs()).sum();
    let mut since_resum = 0usize;
    let mut subdivisions = 0usize;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::Convergence {
                value: total,
                error: total_err,
            });
        }
        // Below the round-off floor of the panel sums, refining cannot help.
        let floor = ROUNDOFF_FACTOR * f64::EPSILON * total_abs;
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()).max(floor) {
            break;
        }
        let worst = *heap.peek().expect("heap is nonempty");
        if worst.depth >= spec.max_refinement_depth || subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Convergence {
                value: total,
                error: total_err,
            });
        }
        heap.pop();
        subdivisions += 1;
        let m = 0.5 * (worst.a + worst.b);
        let l = score_panel(&f, worst.a, m, worst.left, worst.depth + 1);
        let r = score_panel(&f, m, worst.b, worst.right, worst.depth + 1);
        evaluations += 4 * PANEL_ORDER;
        total += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        total_abs += l.value.abs() + r.value.abs() - worst.value.abs();
        heap.push(l);
        heap.push(r);
        since_resum += 1;
        if since_resum >= 64 {
            // Running sums drift; refresh them from the panels.
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
            total_abs = heap.iter().map(|p| p.value.abs()).sum();
            since_resum = 0;
        }
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok((
        Estimate {
            value,
            error,
            evaluations,
        },
        PanelSet {
            panels: panels.iter().map(|p| (p.a, p.b)).collect(),
        },
    ))
}

/// Breakpoints `lo, lo + width, lo + 2·width, …, hi`.
pub fn uniform_breakpoints(lo: f64, hi: f64, width: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    if hi <= lo {
        pts.push(lo);
    } else {
        let count = ((hi - lo) / width).ceil().max(1.0) as usize;
        let step = (hi - lo) / count as f64;
        for k in 1..count {
            pts.push(lo + step * k as f64);
        }
        pts.push(hi);
    }
    pts
}

/// Breakpoints on [lo, hi] that include every multiple of `period` in between.
pub fn periodic_breakpoints(lo: f64, hi: f64, period: f64) -> Vec<f64> {
    let mut pts = vec![lo];
    if hi <= lo {
        pts.push(lo);
    } else {
        let mut k = (lo / period).floor() + 1.0;
        while k * period < hi {
            let x = k * period;
            if x > lo {
                pts.push(x);
            }
            k += 1.0;
        }
        pts.push(hi);
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(PANEL_ORDER);
        let sum_w: f64 = rule.weights.iter().sum();
        assert!((sum_w - 2.0).abs() < 1e-14);
        // degree 39 is the highest exact degree for 20 points
        let v = rule.integrate(|x| x.powi(38), -1.0, 1.0);
        assert!((v - 2.0 / 39.0).abs() < 1e-14, "{v}");
        let v = rule.integrate(|x| x.powi(3) + 1.0, 0.0, 2.0);
        assert!((v - 6.0).abs() < 1e-13);
    }

    #[test]
    fn odd_order_rule_has_center_node() {
        let rule = GaussLegendre::new(5);
        assert_eq!(rule.nodes[2], 0.0);
        assert!((rule.weights[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let spec = QuadratureSpec::default();
        let est = integrate(|x| x.powf(-0.5), &[0.0, 1.0], &spec).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9, "{:?}", est);
        assert!(est.error <= spec.abs_tol.max(spec.rel_tol * est.value.abs()));
    }

    #[test]
    fn oscillatory_integral_with_aligned_panels() {
        let spec = QuadratureSpec::default();
        let bp = periodic_breakpoints(0.0, 100.0, PI);
        let est = integrate(|x| x.sin(), &bp, &spec).unwrap();
        assert!((est.value - (1.0 - 100f64.cos())).abs() < 1e-10);
    }

    #[test]
    fn empty_range_is_zero() {
        let est = integrate(|x| x, &[3.0, 3.0], &QuadratureSpec::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn depth_limit_reports_best_estimate() {
        let spec = QuadratureSpec {
            max_refinement_depth: 1,
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            ..QuadratureSpec::default()
        };
        let err = integrate(|x| x.powf(-0.9), &[0.0, 1.0], &spec).unwrap_err();
        match err {
            Error::Convergence { value, .. } => assert!(value > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let spec = QuadratureSpec {
            rel_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(spec.validate().is_err());
        let spec = QuadratureSpec {
            max_refinement_depth: 0,
            ..QuadratureSpec::default()
        };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn periodic_breakpoints_cover_range() {
        let bp = periodic_breakpoints(1.0, 10.0, PI);
        assert_eq!(bp.first(), Some(&1.0));
        assert_eq!(bp.last(), Some(&10.0));
        assert!(bp.windows(2).all(|w| w[1] - w[0] <= PI + 1e-12));
    }

    #[test]
    fn subdivision_budget_stops_unresolvable_integrands() {
        // about 10⁷ oscillations on one interval cannot be resolved within the budget
        let err = integrate(|x| (1e8 * x).sin(), &[0.0, 1.0], &QuadratureSpec::default()).unwrap_err();
        assert!(err.is_numerical(), "{err}");
    }
}
