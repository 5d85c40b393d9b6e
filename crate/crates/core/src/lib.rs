//! Multi-index algebra, finite multiple harmonic sums, their Newton-series
//! interpolation, and nested multiple series, with a verification layer for
//! the identities connecting them.
//!
//! The crate is organized in layers:
//!
//! * [`multiindex`] — exact combinatorics: compositions, the subset
//!   encoding and dual, refinement/coarsening maps, stuffle and
//!   circled-star products on rational linear combinations.
//! * [`sequences`] — exact multiple harmonic sums `S_alpha(n)` and the
//!   forward-difference / alternating-binomial transforms.
//! * [`newton`] — the interpolating Newton series `F_alpha(z)` with its
//!   abscissa of convergence.
//! * [`nested`] — nested multiple series (chained sums with mixed strict
//!   and weak inequalities): the interpolation-side series `G_alpha(z)`,
//!   generalized values `zeta_alpha`, pattern-matrix sums, and a streaming
//!   evaluation engine with explicit error accounting.
//! * [`mzv`] — numerical multiple zeta values.
//! * [`relations`] — verification campaigns for the identities between the
//!   layers, producing machine-readable reports.
//!
//! All combinatorial computations are exact (big-rational); all series
//! evaluations return a [`SumEstimate`] carrying an explicit error bound.

#![forbid(unsafe_code)]

pub mod error;
pub mod estimate;
pub mod multiindex;
pub mod mzv;
pub mod nested;
pub mod newton;
pub mod numeric;
pub mod relations;
pub mod sequences;

pub use error::{Error, Result};
pub use estimate::SumEstimate;
pub use multiindex::{IndexCombo, MultiIndex};

pub use num::complex::Complex64;
pub use num::rational::BigRational;
