//! Numerical companion to Weyl transforms on locally compact groups.
//!
//! * [`finite_group`]: exact Fourier, Wigner and Weyl transforms on finite
//!   groups, where the Plancherel, inversion and Schatten-norm statements are
//!   finite-dimensional identities and inequalities that can be checked.
//! * [`motion2d`], [`motion_nd`], [`heisenberg`]: Fourier-side divergence
//!   diagnostics for the Euclidean motion groups and the Heisenberg motion group.
//! * [`specfun`] and [`quadrature`]: the special functions and panel quadrature
//!   the matrix-element formulas are built on.
//! * [`scan`]: log-spaced partial-integral scans and their verdicts.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` rejects NaN on purpose

pub mod error;
pub mod finite_group;
pub mod heisenberg;
pub mod interval;
pub mod linalg;
pub mod motion2d;
pub mod motion_nd;
pub mod quadrature;
pub mod scan;
pub mod specfun;

pub use error::{Error, Result};
pub use quadrature::{Estimate, QuadratureSpec};
