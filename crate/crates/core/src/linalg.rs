//! Dense complex matrices with lazily computed singular values.

use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Square complex matrix; singular values are computed on first use and cached.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: DMatrix<C64>,
    singular: OnceLock<Vec<f64>>,
}

impl OperatorMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Self {
        assert!(matrix.is_square(), "operator matrices must be square");
        Self {
            matrix,
            singular: OnceLock::new(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> &[f64] {
        self.singular.get_or_init(|| jacobi_singular_values(&self.matrix))
    }

    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        schatten_norm(self, p)
    }
}

impl From<DMatrix<C64>> for OperatorMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        Self::new(m)
    }
}

/// `(Σ σᵢ^p)^{1/p}`, or the largest singular value for `p = ∞`.
pub fn schatten_norm(t: &OperatorMatrix, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_of_nonnegative(t.singular_values(), p))
}

/// Schatten exponents must lie in `[1, ∞]`.
pub fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("exponent p must lie in [1, inf], got {p}")))
    }
}

/// ℓ^p norm of nonnegative numbers, scaled by the maximum to avoid overflow.
pub(crate) fn lp_of_nonnegative(xs: &[f64], p: f64) -> f64 {
    let top = xs.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 || p.is_infinite() {
        return top;
    }
    let s: f64 = xs.iter().map(|&x| (x / top).powf(p)).sum();
    top * s.powf(1.0 / p)
}

/// Singular values by one-sided (Hestenes) Jacobi rotations on the columns.
///
/// Each column pair is made orthogonal by first removing the phase of their
/// inner product and then applying a real plane rotation. On convergence the
/// column norms are the singular values.
pub fn jacobi_singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut a = m.clone();
    let n = a.ncols();
    let rows = a.nrows();
    const MAX_SWEEPS: usize = 80;
    let eps = 1e-15;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = C64::new(0.0, 0.0);
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let x = a[(i, p)];
                    let y = a[(i, q)] * phase.conj();
                    a[(i, p)] = x * c - y * s;
                    a[(i, q)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}
