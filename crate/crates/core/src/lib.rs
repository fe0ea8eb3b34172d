//! Finite-difference solvers for the two-dimensional fractional Laplacian
//! wave equation
//!
//! ```text
//! u_tt = -kappa (-Δ)^{α/2} u + g(u)   on (a,b)²,   u = 0 outside,
//! ```
//!
//! built around a splitting alternating-direction-implicit (S-ADI) time
//! stepper. The tensorial Riesz part of the discrete fractional Laplacian is
//! treated implicitly and factored per direction; the non-tensorial remainder
//! and the nonlinearity are explicit. Each per-direction solve is a symmetric
//! positive definite Toeplitz system, handled by the Gohberg–Semencul
//! representation of its inverse at four FFTs per right-hand side.
//!
//! Layout:
//! - [`fraccoef`]: 1D Riesz and 2D fractional-Laplacian difference weights.
//! - [`structured`]: circulant / skew-circulant / Toeplitz / BTTB kernels,
//!   the Gohberg–Semencul solver, DST-I tau preconditioners and PCG.
//! - [`stepper`]: problem setup, the S-ADI and baseline non-ADI schemes.
//! - [`harness`]: discrete norms, the conserved energy, refinement studies.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are the instantiations the CLI and the studies use.

pub mod error;
pub mod fraccoef;
pub mod grid;
pub mod harness;
pub mod scalar;
pub mod selftest;
pub mod stepper;
pub mod structured;

pub use error::{Error, Result};
pub use fraccoef::{Coeffs1D, Coeffs2D, FracOrder};
pub use grid::{Field, Grid2D};
pub use scalar::Real;

pub type Field64 = grid::Field<f64>;
pub type Field32 = grid::Field<f32>;
pub type Grid64 = grid::Grid2D<f64>;
pub type Coeffs1D64 = fraccoef::Coeffs1D<f64>;
pub type Coeffs2D64 = fraccoef::Coeffs2D<f64>;
pub type GsData64 = structured::GsData<f64>;
pub type GsData32 = structured::GsData<f32>;
pub type BttbOperator64 = structured::BttbOperator<f64>;
pub type TauSpec64 = structured::TauSpec<f64>;
pub type Problem64 = stepper::Problem<f64>;
pub type StepOperators64 = stepper::StepOperators<f64>;
pub type NonAdiOperators64 = stepper::NonAdiOperators<f64>;
pub type SchemeState64 = stepper::SchemeState<f64>;
pub type NormOperators64 = harness::NormOperators<f64>;
