//! Nested multiple-series engine.
//!
//! Everything here evaluates truncations of sums over ordered tuples of
//! positive integers with per-variable kernel factors:
//!
//! * [`ChainPattern`] — the shape of one such sum; [`chain_eval`] /
//!   [`chain_eval_corrected`] — the `O(M·w)` streaming evaluator, without
//!   and with extrapolation of the outer-variable tail;
//! * [`g_eval`] — the interpolating series `G_α(z)`;
//! * [`zeta_alpha_eval`] — the exponent-weighted series `ζ_α(μ)`;
//! * [`PatternMatrix`] / [`phi_eval`] — the `Φ_n` sums over comparator
//!   matrices, with JSON (de)serialization;
//! * [`g_derivative`] — derivatives of `G_α` at `z = 0` by extrapolated
//!   central differences;
//! * [`chain_sum_naive`] — a direct simplex enumerator used as an oracle in
//!   tests and benchmarks.

mod derivative;
mod engine;
mod matrix;
mod pattern;

pub use derivative::g_derivative;
pub use engine::{
    chain_eval, chain_eval_corrected, chain_sum_naive, g_eval, zeta_alpha_eval, MIN_TRUNCATION,
};
pub use matrix::{phi_eval, phi_eval_combo, BoxSymbol, MatrixRow, PatternMatrix};
pub use pattern::{beta_decomposition, ChainPattern, Comparator, Kernel};
