//! Fourier, Wigner and Weyl transforms on finite groups.
//!
//! Haar measure is counting measure and irrep `π` carries Plancherel weight
//! `d_π/|G|`. Finite groups are unimodular, so no Duflo–Moore operators appear.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_exponent, lp_of_nonnegative, OperatorMatrix, C64};

mod product;
mod verify;

pub use product::*;
pub use verify::*;

const UNITARY_TOL: f64 = 1e-12;
const CHARACTER_TOL: f64 = 1e-10;

/// Irreducible unitary representation given by its matrices on every element.
#[derive(Debug, Clone)]
pub struct Irrep {
    dim: usize,
    matrices: Vec<DMatrix<C64>>,
    plancherel_weight: f64,
}

impl Irrep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, x: usize) -> &DMatrix<C64> {
        &self.matrices[x]
    }

    pub fn matrices(&self) -> &[DMatrix<C64>] {
        &self.matrices
    }

    /// `d_π / |G|`.
    pub fn plancherel_weight(&self) -> f64 {
        self.plancherel_weight
    }

    pub fn character(&self, x: usize) -> C64 {
        self.matrices[x].trace()
    }
}

/// Finite group with a complete table of irreducible unitary representations.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    irreps: Vec<Irrep>,
}

impl FiniteGroup {
    /// Builds a group and verifies every structural invariant.
    ///
    /// Checks run in the order: table shape, associativity, identity, inverses,
    /// completeness `Σ d² = |G|`, unitarity, multiplicativity, and character
    /// orthogonality. The first failure is reported by name.
    pub fn new(
        mul: Vec<Vec<usize>>,
        inv: Vec<usize>,
        identity: usize,
        irreps: Vec<Vec<DMatrix<C64>>>,
    ) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::invalid_group("shape", "empty multiplication table"));
        }
        if mul.iter().any(|row| row.len() != order) || inv.len() != order || identity >= order {
            return Err(Error::invalid_group("shape", "table dimensions disagree with the order"));
        }
        if mul.iter().flatten().chain(inv.iter()).any(|&k| k >= order) {
            return Err(Error::invalid_group("shape", "element index out of range"));
        }
        let flat: Vec<usize> = mul.into_iter().flatten().collect();
        let at = |x: usize, y: usize| flat[x * order + y];

        for x in 0..order {
            for y in 0..order {
                let xy = at(x, y);
                for z in 0..order {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(Error::invalid_group(
                            "associativity",
                            format!("({x}*{y})*{z} != {x}*({y}*{z})"),
                        ));
                    }
                }
            }
        }
        for x in 0..order {
            if at(identity, x) != x || at(x, identity) != x {
                return Err(Error::invalid_group("identity", format!("fails at element {x}")));
            }
            if at(x, inv[x]) != identity || at(inv[x], x) != identity {
                return Err(Error::invalid_group("inverse", format!("fails at element {x}")));
            }
        }

        let mut reps = Vec::with_capacity(irreps.len());
        for (j, mats) in irreps.into_iter().enumerate() {
            if mats.len() != order {
                return Err(Error::invalid_group(
                    "shape",
                    format!("irrep {j} has {} matrices for {order} elements", mats.len()),
                ));
            }
            let dim = mats[0].nrows();
            if dim == 0 || mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
                return Err(Error::invalid_group("shape", format!("irrep {j} has inconsistent matrix sizes")));
            }
            reps.push(Irrep {
                dim,
                matrices: mats,
                plancherel_weight: dim as f64 / order as f64,
            });
        }

        let total: usize = reps.iter().map(|r| r.dim * r.dim).sum();
        if total != order {
            return Err(Error::invalid_group(
                "completeness",
                format!("sum of squared dimensions is {total}, group order is {order}"),
            ));
        }

        for (j, r) in reps.iter().enumerate() {
            let id = DMatrix::<C64>::identity(r.dim, r.dim);
            for (x, m) in r.matrices.iter().enumerate() {
                let dev = max_abs(&(m.adjoint() * m - &id));
                if dev > UNITARY_TOL {
                    return Err(Error::invalid_group(
                        "unitarity",
                        format!("irrep {j} at element {x}: deviation {dev:e}"),
                    ));
                }
            }
            for x in 0..order {
                for y in 0..order {
                    let dev = max_abs(&(&r.matrices[x] * &r.matrices[y] - &r.matrices[at(x, y)]));
                    if dev > UNITARY_TOL {
                        return Err(Error::invalid_group(
                            "multiplicativity",
                            format!("irrep {j} at ({x}, {y}): deviation {dev:e}"),
                        ));
                    }
                }
            }
        }

        for (j, a) in reps.iter().enumerate() {
            for (k, b) in reps.iter().enumerate().skip(j) {
                let ip: C64 = (0..order)
                    .map(|x| a.character(x) * b.character(x).conj())
                    .sum::<C64>()
                    / order as f64;
                let want = if j == k { 1.0 } else { 0.0 };
                let dev = (ip - want).norm();
                if dev > CHARACTER_TOL {
                    return Err(Error::invalid_group(
                        "orthogonality",
                        format!("irreps {j} and {k}: character inner product {ip}"),
                    ));
                }
            }
        }

        Ok(Self {
            order,
            mul: flat,
            inv,
            identity,
            irreps: reps,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    fn to_file(&self) -> GroupFile {
        GroupFile {
            order: self.order,
            mul: self.mul.chunks(self.order).map(|c| c.to_vec()).collect(),
            inv: self.inv.clone(),
            identity: self.identity,
            irreps: self
                .irreps
                .iter()
                .map(|r| IrrepFile {
                    dim: r.dim,
                    matrices: r
                        .matrices
                        .iter()
                        .map(|m| {
                            (0..r.dim)
                                .map(|i| (0..r.dim).map(|k| [m[(i, k)].re, m[(i, k)].im]).collect())
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Cyclic group `Z/N` with characters `χ_j(k) = exp(2πi jk/N)`.
pub fn make_cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::domain("cyclic group order must be at least 1"));
    }
    let mul = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    let inv = (0..n).map(|x| (n - x) % n).collect();
    let irreps = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let theta = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
                    DMatrix::from_element(1, 1, C64::from_polar(1.0, theta))
                })
                .collect()
        })
        .collect();
    FiniteGroup::new(mul, inv, 0, irreps)
}

/// Dihedral group of order `2m`; element `k + m·e` stands for `r^k s^e`.
///
/// Two-dimensional irreps send `r` to rotation by `2πh/m` and `s` to
/// `diag(1, −1)`, for `h = 1, …, ⌊(m−1)/2⌋`.
pub fn make_dihedral(m: usize) -> Result<FiniteGroup> {
    if m < 3 {
        return Err(Error::domain("dihedral groups need m >= 3"));
    }
    let order = 2 * m;
    let split = |x: usize| (x % m, x / m);
    let mul = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    let (a, e) = split(x);
                    let (b, f) = split(y);
                    let k = (if e == 0 { a + b } else { a + m - b }) % m;
                    k + m * ((e + f) % 2)
                })
                .collect()
        })
        .collect();
    let inv = (0..order)
        .map(|x| {
            let (k, e) = split(x);
            if e == 0 {
                (m - k) % m
            } else {
                x
            }
        })
        .collect();

    let mut irreps: Vec<Vec<DMatrix<C64>>> = Vec::new();
    let rot_signs: &[f64] = if m.is_multiple_of(2) { &[1.0, -1.0] } else { &[1.0] };
    for &a in rot_signs {
        for &b in &[1.0f64, -1.0] {
            irreps.push(
                (0..order)
                    .map(|x| {
                        let (k, e) = split(x);
                        let v = a.powi(k as i32) * b.powi(e as i32);
                        DMatrix::from_element(1, 1, C64::new(v, 0.0))
                    })
                    .collect(),
            );
        }
    }
    for h in 1..=(m - 1) / 2 {
        irreps.push(
            (0..order)
                .map(|x| {
                    let (k, e) = split(x);
                    let th = 2.0 * PI * ((h * k) % m) as f64 / m as f64;
                    let (s, c) = th.sin_cos();
                    let sg = if e == 0 { 1.0 } else { -1.0 };
                    // R(θ)·diag(1, sg)
                    DMatrix::from_row_slice(
                        2,
                        2,
                        &[
                            C64::new(c, 0.0),
                            C64::new(-s * sg, 0.0),
                            C64::new(s, 0.0),
                            C64::new(c * sg, 0.0),
                        ],
                    )
                })
                .collect(),
        );
    }
    FiniteGroup::new(mul, inv, 0, irreps)
}

#[derive(Debug, Serialize, Deserialize)]
struct IrrepFile {
    dim: usize,
    matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupFile {
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    irreps: Vec<IrrepFile>,
}

/// Parses a group from its JSON irrep table and verifies all invariants.
pub fn parse_group(json: &str) -> Result<FiniteGroup> {
    let file: GroupFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if file.mul.len() != file.order {
        return Err(Error::invalid_group(
            "shape",
            format!("order is {} but mul has {} rows", file.order, file.mul.len()),
        ));
    }
    let mut irreps = Vec::with_capacity(file.irreps.len());
    for (j, ir) in file.irreps.into_iter().enumerate() {
        let mut mats = Vec::with_capacity(ir.matrices.len());
        for rows in ir.matrices {
            if rows.len() != ir.dim || rows.iter().any(|r| r.len() != ir.dim) {
                return Err(Error::invalid_group(
                    "shape",
                    format!("irrep {j}: matrix is not {0}x{0}", ir.dim),
                ));
            }
            mats.push(DMatrix::from_fn(ir.dim, ir.dim, |i, k| {
                C64::new(rows[i][k][0], rows[i][k][1])
            }));
        }
        if mats.is_empty() {
            return Err(Error::invalid_group("shape", format!("irrep {j} has no matrices")));
        }
        irreps.push(mats);
    }
    FiniteGroup::new(file.mul, file.inv, file.identity, irreps)
}

pub fn load_group(path: impl AsRef<Path>) -> Result<FiniteGroup> {
    parse_group(&fs::read_to_string(path)?)
}

pub fn group_to_json(g: &FiniteGroup) -> String {
    serde_json::to_string_pretty(&g.to_file()).expect("group tables always serialize")
}

pub fn save_group(g: &FiniteGroup, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, group_to_json(g))?;
    Ok(())
}

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex function on the group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pub values: Vec<C64>,
}

impl GroupFunction {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn zeros(order: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); order])
    }

    /// Indicator of a single element.
    pub fn delta(order: usize, at: usize) -> Self {
        let mut f = Self::zeros(order);
        f.values[at] = C64::new(1.0, 0.0);
        f
    }

    pub fn constant(order: usize, c: C64) -> Self {
        Self::new(vec![c; order])
    }

    /// Entries with independent standard normal real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(order: usize, rng: &mut R) -> Self {
        Self::new((0..order).map(|_| standard_complex(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(Σ |f(x)|^p)^{1/p}`, the max for `p = ∞`.
    pub fn norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let abs: Vec<f64> = self.values.iter().map(|z| z.norm()).collect();
        Ok(lp_of_nonnegative(&abs, p))
    }

    pub fn sum(&self) -> C64 {
        self.values.iter().sum()
    }
}

/// Operator-valued function on `G × Ĝ`; `blocks[x][j]` is a `d_j × d_j` matrix.
#[derive(Debug, Clone)]
pub struct SymbolField {
    pub blocks: Vec<Vec<DMatrix<C64>>>,
}

impl SymbolField {
    pub fn zeros(g: &FiniteGroup) -> Self {
        Self::from_fn(g, |_, _, d| DMatrix::zeros(d, d))
    }

    pub fn random<R: Rng + ?Sized>(g: &FiniteGroup, rng: &mut R) -> Self {
        Self::from_fn(g, |_, _, d| DMatrix::from_fn(d, d, |_, _| standard_complex(rng)))
    }

    /// Builds a field from `(x, irrep index, dim) -> block`.
    pub fn from_fn(g: &FiniteGroup, mut f: impl FnMut(usize, usize, usize) -> DMatrix<C64>) -> Self {
        let blocks = (0..g.order())
            .map(|x| {
                g.irreps()
                    .iter()
                    .enumerate()
                    .map(|(j, r)| {
                        let b = f(x, j, r.dim());
                        assert_eq!(b.shape(), (r.dim(), r.dim()), "symbol block shape");
                        b
                    })
                    .collect()
            })
            .collect();
        Self { blocks }
    }

    pub fn get(&self, x: usize, j: usize) -> &DMatrix<C64> {
        &self.blocks[x][j]
    }

    fn assert_fits(&self, g: &FiniteGroup) {
        assert_eq!(self.blocks.len(), g.order(), "symbol field has wrong number of elements");
        for row in &self.blocks {
            assert_eq!(row.len(), g.irreps().len(), "symbol field has wrong number of irreps");
        }
    }
}

fn assert_len(g: &FiniteGroup, f: &GroupFunction) {
    assert_eq!(f.len(), g.order(), "group function length differs from the group order");
}

/// `π(f) = Σ_x f(x) π(x)` for every irrep.
pub fn fourier(g: &FiniteGroup, f: &GroupFunction) -> Vec<OperatorMatrix> {
    assert_len(g, f);
    g.irreps()
        .iter()
        .map(|r| {
            let mut acc = DMatrix::zeros(r.dim(), r.dim());
            for (x, &fx) in f.values.iter().enumerate() {
                if fx != C64::new(0.0, 0.0) {
                    acc += r.matrix(x) * fx;
                }
            }
            OperatorMatrix::new(acc)
        })
        .collect()
}

/// `f(x) = Σ_π (d_π/|G|) tr(π(x)⁻¹ F(π))`.
pub fn inverse_fourier(g: &FiniteGroup, transform: &[OperatorMatrix]) -> GroupFunction {
    assert_eq!(transform.len(), g.irreps().len(), "one block per irrep expected");
    let values = (0..g.order())
        .map(|x| {
            let xi = g.inv(x);
            g.irreps()
                .iter()
                .zip(transform)
                .map(|(r, f)| trace_of_product(r.matrix(xi), f.matrix()) * r.plancherel_weight())
                .sum()
        })
        .collect();
    GroupFunction::new(values)
}

fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let mut t = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t
}

/// `tr(A^H B)`.
fn trace_adjoint_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Squared Plancherel norm `Σ_π (d_π/|G|) ‖F(π)‖²_{S₂}`.
pub fn plancherel_norm(g: &FiniteGroup, transform: &[OperatorMatrix]) -> f64 {
    assert_eq!(transform.len(), g.irreps().len(), "one block per irrep expected");
    g.irreps()
        .iter()
        .zip(transform)
        .map(|(r, f)| r.plancherel_weight() * f.matrix().norm_squared())
        .sum()
}

/// `(Σ_π (d_π/|G|) ‖F(π)‖^p_{S_p})^{1/p}`, the largest operator norm for `p = ∞`.
pub fn fourier_norm(g: &FiniteGroup, transform: &[OperatorMatrix], p: f64) -> Result<f64> {
    check_exponent(p)?;
    assert_eq!(transform.len(), g.irreps().len(), "one block per irrep expected");
    if p.is_infinite() {
        return Ok(transform.iter().map(|f| f.operator_norm()).fold(0.0, f64::max));
    }
    let mut terms = Vec::with_capacity(transform.len());
    for (r, f) in g.irreps().iter().zip(transform) {
        terms.push((r.plancherel_weight(), f.schatten_norm(p)?));
    }
    Ok(weighted_lp(&terms, p))
}

/// `(Σ w·s^p)^{1/p}` for pairs `(w, s)`.
fn weighted_lp(terms: &[(f64, f64)], p: f64) -> f64 {
    let top = terms.iter().map(|t| t.1).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let s: f64 = terms.iter().map(|&(w, x)| w * (x / top).powf(p)).sum();
    top * s.powf(1.0 / p)
}

/// `V(f,g)(x,π) = Σ_{x'} f(x') g(x'⁻¹x) π(x')`.
pub fn wigner(grp: &FiniteGroup, f: &GroupFunction, g: &GroupFunction) -> SymbolField {
    assert_len(grp, f);
    assert_len(grp, g);
    let n = grp.order();
    SymbolField::from_fn(grp, |x, j, d| {
        let r = &grp.irreps()[j];
        let mut acc = DMatrix::zeros(d, d);
        for xp in 0..n {
            let c = f.values[xp] * g.values[grp.mul(grp.inv(xp), x)];
            if c != C64::new(0.0, 0.0) {
                acc += r.matrix(xp) * c;
            }
        }
        acc
    })
}

/// Mixed norm `(Σ_x Σ_π (d_π/|G|) ‖S(x,π)‖^p_{S_p})^{1/p}`; the supremum of
/// operator norms for `p = ∞`.
pub fn symbol_norm(g: &FiniteGroup, s: &SymbolField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    s.assert_fits(g);
    let mut terms = Vec::with_capacity(g.order() * g.irreps().len());
    for row in &s.blocks {
        for (r, b) in g.irreps().iter().zip(row) {
            let op = OperatorMatrix::new(b.clone());
            let v = if p.is_infinite() { op.operator_norm() } else { op.schatten_norm(p)? };
            terms.push((r.plancherel_weight(), v));
        }
    }
    if p.is_infinite() {
        return Ok(terms.iter().map(|t| t.1).fold(0.0, f64::max));
    }
    Ok(weighted_lp(&terms, p))
}

/// Recovers `π(f)` as `C⁻¹ Σ_x V(f,g)(x,π)` with `C = Σ g`.
pub fn fourier_from_wigner(grp: &FiniteGroup, f: &GroupFunction, g: &GroupFunction) -> Result<Vec<OperatorMatrix>> {
    let c = g.sum();
    let scale: f64 = g.values.iter().map(|z| z.norm()).sum::<f64>().max(1.0);
    if c.norm() <= 1e-13 * scale {
        return Err(Error::DegenerateNormalizer(c.norm()));
    }
    let v = wigner(grp, f, g);
    Ok(grp
        .irreps()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let mut acc = DMatrix::zeros(r.dim(), r.dim());
            for row in &v.blocks {
                acc += &row[j];
            }
            OperatorMatrix::new(acc / c)
        })
        .collect())
}

/// Kernel `K(x,x') = Σ_π (d_π/|G|) tr(S(x'x,π)^H π(x'))`; rows are indexed by `x`.
pub fn weyl_kernel(g: &FiniteGroup, s: &SymbolField) -> OperatorMatrix {
    s.assert_fits(g);
    let n = g.order();
    let k = DMatrix::from_fn(n, n, |x, xp| {
        let y = g.mul(xp, x);
        g.irreps()
            .iter()
            .enumerate()
            .map(|(j, r)| trace_adjoint_product(s.get(y, j), r.matrix(xp)) * r.plancherel_weight())
            .sum()
    });
    OperatorMatrix::new(k)
}

/// `W_ς f = K f`.
pub fn weyl_apply(g: &FiniteGroup, s: &SymbolField, f: &GroupFunction) -> GroupFunction {
    assert_len(g, f);
    let k = weyl_kernel(g, s);
    let v = k.matrix() * nalgebra::DVector::from_column_slice(&f.values);
    GroupFunction::new(v.iter().copied().collect())
}

/// `⟨V, S⟩ = Σ_x Σ_π (d_π/|G|) tr(S(x,π)^H V(x,π))`.
pub fn symbol_pairing(g: &FiniteGroup, v: &SymbolField, s: &SymbolField) -> C64 {
    v.assert_fits(g);
    s.assert_fits(g);
    let mut acc = C64::new(0.0, 0.0);
    for (vr, sr) in v.blocks.iter().zip(&s.blocks) {
        for ((r, vb), sb) in g.irreps().iter().zip(vr).zip(sr) {
            acc += trace_adjoint_product(sb, vb) * r.plancherel_weight();
        }
    }
    acc
}

/// Bilinear pairing `Σ_x u(x) w(x)` (no conjugation).
pub fn bilinear(u: &GroupFunction, w: &GroupFunction) -> C64 {
    u.values.iter().zip(&w.values).map(|(a, b)| a * b).sum()
}
