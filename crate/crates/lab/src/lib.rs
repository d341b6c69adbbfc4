//! Approximation processes and smoothness measures on the one-dimensional
//! torus (plus uniform-knot splines on `[0, 1]`), together with a harness
//! that checks the two-sided inequalities tying moduli of smoothness and
//! K-functional realizations to weighted `l^q` sums of derivative norms of
//! approximants.
//!
//! The building blocks:
//!
//! - [`grid`], [`signal`], [`spectral`], [`norm`]: uniform grids, discrete
//!   Fourier analysis/synthesis, `L_p` quadrature norms, spectral
//!   translation and fractional derivatives.
//! - [`window`], [`multiplier`]: the catalogue of summability windows
//!   (indicator, Fejer, Riesz, Rogosinski, Jackson, de la Vallee Poussin),
//!   dyadic Littlewood-Paley blocks, the square function, and the
//!   interpolation operator `V_n`.
//! - [`smoothness`]: integer and fractional moduli, K-functional
//!   realizations, Besov seminorms, and the Hardy-Littlewood oracle.
//! - [`solver`], [`trig_approx`], [`spline`]: best `L_p` approximation by
//!   trigonometric polynomials and uniform-knot splines, p-variation and
//!   truncated-power analysis.
//! - [`family`], [`process`]: test-function and approximation-process
//!   registries, selected by name at runtime.
//! - [`harness`], [`sharpness`]: two-sided inequality reports and the
//!   optimality experiments.

// `!(x > 0.0)` is the NaN-rejecting form of the parameter guards here;
// `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod family;
pub mod grid;
pub mod harness;
pub mod multiplier;
pub mod norm;
pub mod process;
pub mod sharpness;
pub mod signal;
pub mod smoothness;
pub mod solver;
pub mod spectral;
pub mod spline;
pub mod trig_approx;
pub mod window;

pub use error::{LabError, Result};
pub use grid::{Grid, EPS_FFT, EPS_REAL};
pub use norm::{lp_norm, lp_norm_spectral, NormExponent};
pub use signal::PeriodicSignal;
pub use spectral::{analyze, DerivativeMode, SpectralRep};
