//! Numerical multiple zeta values.
//!
//! `ζ(μ)` for an admissible multi-index `μ` (leading entry ≥ 2) is the
//! all-strict nested sum `Σ_{m₁>⋯>m_p≥1} m₁^{−μ₁} ⋯ m_p^{−μ_p}`, i.e. the
//! single-block case `ζ_{(p)}(μ)` of the block-nested series. This module
//! wraps that evaluator behind an admissibility-checked type, extends `ζ`
//! Q-linearly to index combinations, and provides the shifted functional
//! `ζ⁺(μ) = ζ(⁺μ)` defined on all nonempty multi-indices.

use std::fmt;

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::estimate::SumEstimate;
use crate::multiindex::{IndexCombo, MultiIndex};
use crate::nested::zeta_alpha_eval;

/// A multi-index whose attached zeta series converges: nonempty with
/// leading entry ≥ 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissibleIndex(MultiIndex);

impl AdmissibleIndex {
    /// Checks admissibility; rejects the empty index and a leading 1.
    pub fn new(index: MultiIndex) -> Result<Self> {
        if !index.is_admissible() {
            return Err(Error::NotAdmissible(index.to_string()));
        }
        Ok(AdmissibleIndex(index))
    }

    pub fn index(&self) -> &MultiIndex {
        &self.0
    }
}

impl TryFrom<MultiIndex> for AdmissibleIndex {
    type Error = Error;

    fn try_from(index: MultiIndex) -> Result<Self> {
        AdmissibleIndex::new(index)
    }
}

impl fmt::Display for AdmissibleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `ζ(μ)`, truncated at `M` with tail extrapolation. Delegates to the
/// block-nested evaluator with the single all-strict block `α = (l(μ))`.
pub fn zeta_eval(mu: &AdmissibleIndex, m: u64) -> Result<SumEstimate> {
    let alpha = MultiIndex::new(vec![mu.index().length() as u32])?;
    zeta_alpha_eval(&alpha, mu.index(), m)
}

/// Q-linear extension of `ζ` to index combinations: the coefficient-weighted
/// sum of `zeta_eval` over the basis terms, with `err = Σ |c|·err_term`.
/// Every term must be admissible; the zero combo evaluates to exact 0.
pub fn zeta_combo(v: &IndexCombo, m: u64) -> Result<SumEstimate> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (index, coeff) in v.terms() {
        let mu = AdmissibleIndex::new(index.clone())?;
        let est = zeta_eval(&mu, m)?;
        let c = coeff.to_f64().ok_or(Error::NonFinite)?;
        value += c * est.value;
        err += c.abs() * est.err;
    }
    Ok(SumEstimate::new(value, err))
}

/// `ζ⁺`: raises the first entry of every term by one, then evaluates the
/// resulting (automatically admissible) combo. Terms must be nonempty.
pub fn zeta_plus(v: &IndexCombo, m: u64) -> Result<SumEstimate> {
    let raised = v.map_indices(|index| index.raise_first())?;
    zeta_combo(&raised, m)
}
