//! Markov-type inequalities for bivariate polynomials on Koornwinder's
//! domain `Omega`, the weighted simplex `S` and the curvilinear squares
//! `Delta_l`.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly2d`]: dense bivariate polynomials, derivatives and the symmetric
//!   pullback `Q(u, v) = P(u + v, uv)`;
//! - [`classical`]: Chebyshev and Jacobi polynomials and the extremal
//!   sequences `P_k`, `Q_k`, `W_n`;
//! - [`domains`]: the three domains, exact quadrature and sup-norm grids;
//! - [`norms`]: `L^p` and sup norms and Markov ratios;
//! - [`spectral`]: `L^2` best constants as generalized eigenproblems;
//! - [`analysis`]: sweeps, exponent fits and the verification suite.

// Negated comparisons such as `!(x > 0.0)` are used on purpose: they also
// reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod classical;
pub mod config;
pub mod domains;
pub mod error;
pub mod norms;
pub mod output;
pub mod poly2d;
pub mod spectral;

pub use analysis::{fit_exponent, sweep_extremal, sweep_factor, verify_all, FitResult, VerifyReport};
pub use classical::{ExtremalFamily, FamilyKind};
pub use config::LabConfig;
pub use domains::{quad_rule, Domain, QuadratureRule};
pub use error::{LabError, Result};
pub use norms::{lp_norm, markov_ratio, NormSpec, PNorm};
pub use poly2d::{Axis, BivariatePoly};
pub use spectral::{l2_markov_factor, l2_schur_factor, FactorPoint};
