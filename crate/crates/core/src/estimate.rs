//! Numeric results with explicit error accounting.

use num::complex::Complex64;

/// A numerically evaluated (possibly complex) sum together with a bound
/// `err` on the absolute error of `value`.  Every evaluator in this crate
/// that truncates an infinite series returns one of these; downstream
/// comparisons add the two sides' `err` fields to form the acceptance
/// window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumEstimate {
    pub value: Complex64,
    pub err: f64,
}

impl SumEstimate {
    pub fn new(value: Complex64, err: f64) -> Self {
        SumEstimate { value, err }
    }

    /// An exactly known real value.
    pub fn exact(value: f64) -> Self {
        SumEstimate {
            value: Complex64::new(value, 0.0),
            err: 0.0,
        }
    }

    /// Real part (these series are real for real parameters).
    pub fn re(&self) -> f64 {
        self.value.re
    }
}
