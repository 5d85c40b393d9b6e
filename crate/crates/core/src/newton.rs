//! Newton-series interpolation of finite multiple harmonic sums.
//!
//! For a nonempty multi-index `alpha` the series
//!
//! ```text
//! F_alpha(z) = sum_{n>=0} (-1)^n (nabla S_alpha)(n) C(z, n)
//! ```
//!
//! interpolates `S_alpha` (it equals `S_alpha(n)` at every nonnegative
//! integer, where the series terminates) and converges for
//! `Re z > -dual(alpha)_1`, the abscissa of convergence.
//!
//! The transform coefficients admit a closed form in terms of a
//! lower-weight harmonic sum at the dual index,
//!
//! ```text
//! (nabla S_alpha)(n) = - S_tail(dual(alpha))(n) / n^(dual(alpha)_1),   n >= 1,
//! ```
//!
//! which the test suite verifies exactly against the alternating-binomial
//! definition.  Long coefficient tables are therefore built in `O(N * l)`
//! floating-point operations instead of `O(N^2)` big-rational ones.

use num::complex::Complex64;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::estimate::SumEstimate;
use crate::multiindex::MultiIndex;
use crate::numeric::{Kahan, KahanComplex};
use crate::sequences::{
    binom_exact, multi_harmonic_prefix, multi_harmonic_prefix_f64, nabla_prefix,
};

/// Abscissa of convergence of the Newton series: `-(dual(alpha)_1)`.
pub fn abscissa(alpha: &MultiIndex) -> Result<i64> {
    let dual = alpha.dual()?;
    Ok(-(dual.parts()[0] as i64))
}

/// A truncated Newton series for one multi-index: the coefficient table
/// `(nabla S_alpha)(0..=terms)` plus convergence metadata.
#[derive(Debug, Clone)]
pub struct NewtonSeries {
    alpha: MultiIndex,
    dual: MultiIndex,
    abscissa: i64,
    table: Vec<f64>,
}

impl NewtonSeries {
    /// Builds the coefficient table with `terms + 1` entries
    /// (`terms >= 16`).
    pub fn new(alpha: &MultiIndex, terms: u32) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if terms < 16 {
            return Err(Error::TermCountTooSmall {
                got: terms as u64,
                min: 16,
            });
        }
        let dual = alpha.dual()?;
        let a1 = dual.parts()[0];
        let tail_prefix = multi_harmonic_prefix_f64(&dual.tail(), terms);
        let mut table = Vec::with_capacity(terms as usize + 1);
        table.push(0.0); // S_alpha(0) = 0
        for n in 1..=terms {
            table.push(-tail_prefix[n as usize] * (n as f64).powi(-(a1 as i32)));
        }
        Ok(NewtonSeries {
            alpha: alpha.clone(),
            dual,
            abscissa: -(a1 as i64),
            table,
        })
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn dual(&self) -> &MultiIndex {
        &self.dual
    }

    pub fn abscissa(&self) -> i64 {
        self.abscissa
    }

    /// Number of series terms in the table.
    pub fn terms(&self) -> usize {
        self.table.len()
    }

    pub fn nabla_table(&self) -> &[f64] {
        &self.table
    }

    /// Evaluates the truncated series at `z` with `Re z` strictly above the
    /// abscissa of convergence.
    ///
    /// The reported `err` is a truncation heuristic built from the summed
    /// magnitude of the last `max(8, terms/10)` terms: the decay ratio of
    /// that window against the preceding one extrapolates the remaining
    /// tail geometrically (terms decay like a power of `n` here, so window
    /// sums shrink by a stable ratio).  A rounding allowance proportional
    /// to the total absolute term mass is added.  For integer `z` the
    /// series terminates and the truncation part is exactly zero.
    pub fn eval(&self, z: Complex64) -> Result<SumEstimate> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite);
        }
        if z.re <= self.abscissa as f64 {
            return Err(Error::BelowAbscissa {
                re: z.re,
                abscissa: self.abscissa,
            });
        }
        let n_terms = self.table.len();
        let mut acc = KahanComplex::new();
        let mut mass = Kahan::new();
        let mut magnitudes = Vec::with_capacity(n_terms);
        // binom = C(z, n), sign = (-1)^n, updated per term.
        let mut binom = Complex64::new(1.0, 0.0);
        let mut sign = 1.0;
        for (n, &coeff) in self.table.iter().enumerate() {
            let term = binom * (sign * coeff);
            acc.add(term);
            let mag = term.re.abs() + term.im.abs();
            mass.add(mag);
            magnitudes.push(mag);
            binom *= (z - n as f64) / (n as f64 + 1.0);
            sign = -sign;
        }
        let value = acc.total();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite);
        }
        let window = (n_terms / 10).max(8).min(n_terms / 2);
        let sum_over = |range: std::ops::Range<usize>| {
            let mut s = Kahan::new();
            for &m in &magnitudes[range] {
                s.add(m);
            }
            s.total()
        };
        let recent = sum_over(n_terms - window..n_terms);
        let previous = sum_over(n_terms - 2 * window..n_terms - window);
        let truncation = if recent == 0.0 {
            0.0
        } else if previous > recent {
            let ratio = recent / previous;
            recent * (1.0 + (2.0 * ratio / (1.0 - ratio)).min(50.0))
        } else {
            // No decay evidence in the last windows: maximal conservatism.
            recent * 51.0
        };
        let err = truncation + 32.0 * f64::EPSILON * mass.total();
        Ok(SumEstimate::new(value, err))
    }
}

/// One-shot interpolation: builds the table and evaluates at `z`.
pub fn newton_eval(alpha: &MultiIndex, z: Complex64, terms: u32) -> Result<SumEstimate> {
    NewtonSeries::new(alpha, terms)?.eval(z)
}

/// Exact evaluation at a nonnegative integer argument, where the Newton
/// series terminates: `sum_{k<=n} (-1)^k (nabla S_alpha)(k) C(n,k)` in
/// big-rational arithmetic.  Always equals `S_alpha(n)`.
pub fn newton_eval_int(alpha: &MultiIndex, n: u32) -> Result<BigRational> {
    if alpha.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let prefix = multi_harmonic_prefix(alpha, n);
    let coeffs = nabla_prefix(&prefix);
    let mut acc = BigRational::zero();
    for (k, c) in coeffs.values().iter().enumerate() {
        let term = c * binom_exact(n as u64, k as i64);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mi;
    use crate::multiindex::indices_up_to_weight;
    use crate::sequences::multi_harmonic;
    use num::bigint::BigInt;
    use num::ToPrimitive;

    /// The closed form for the transform coefficients, in exact arithmetic.
    fn nabla_closed_form_exact(alpha: &MultiIndex, n_max: u32) -> Vec<BigRational> {
        let dual = alpha.dual().unwrap();
        let a1 = dual.parts()[0];
        let tail = multi_harmonic_prefix(&dual.tail(), n_max);
        let mut out = vec![BigRational::zero()];
        for n in 1..=n_max {
            let p = BigInt::from(n).pow(a1);
            out.push(-(&tail.values()[n as usize] / BigRational::from_integer(p)));
        }
        out
    }

    /// Exhaustive exact check of the closed form against the
    /// alternating-binomial definition.
    #[test]
    fn closed_form_matches_binomial_transform() {
        for alpha in indices_up_to_weight(7) {
            let prefix = multi_harmonic_prefix(&alpha, 32);
            let direct = nabla_prefix(&prefix);
            let closed = nabla_closed_form_exact(&alpha, 32);
            assert_eq!(direct.values(), &closed[..], "closed form for {alpha}");
        }
    }

    #[test]
    fn float_table_tracks_exact() {
        for alpha in indices_up_to_weight(6) {
            let series = NewtonSeries::new(&alpha, 40).unwrap();
            let exact = nabla_closed_form_exact(&alpha, 40);
            assert_eq!(series.nabla_table()[0], 0.0);
            for (n, (f, q)) in series.nabla_table().iter().zip(&exact).enumerate() {
                let e = q.to_f64().unwrap();
                assert!(
                    (f - e).abs() <= 1e-13 * (1.0 + e.abs()),
                    "table entry {n} for {alpha}: {f} vs {e}"
                );
            }
        }
    }

    #[test]
    fn abscissa_fixtures() {
        assert_eq!(abscissa(&mi![2]).unwrap(), -1);
        assert_eq!(abscissa(&mi![1]).unwrap(), -1);
        assert_eq!(abscissa(&mi![1, 1]).unwrap(), -2);
        assert_eq!(abscissa(&mi![1, 1, 2]).unwrap(), -3);
        assert!(abscissa(&mi![]).is_err());
    }

    #[test]
    fn exact_integer_evaluation_interpolates() {
        for alpha in indices_up_to_weight(4) {
            for n in 0..=10 {
                assert_eq!(
                    newton_eval_int(&alpha, n).unwrap(),
                    multi_harmonic(&alpha, n),
                    "exact interpolation of S_{alpha} at {n}"
                );
            }
        }
    }

    #[test]
    fn float_evaluation_interpolates_within_err() {
        for alpha in [mi![2], mi![1, 1], mi![2, 1], mi![1, 2, 1]] {
            let series = NewtonSeries::new(&alpha, 120).unwrap();
            for n in 0..=20u32 {
                let est = series.eval(Complex64::new(n as f64, 0.0)).unwrap();
                let exact = multi_harmonic(&alpha, n).to_f64().unwrap();
                assert!(
                    (est.value.re - exact).abs() <= est.err + 1e-12
                        && est.value.im.abs() <= est.err,
                    "F_{alpha}({n}) = {} vs {exact} (err {})",
                    est.value.re,
                    est.err
                );
            }
        }
    }

    #[test]
    fn value_at_zero_is_exactly_zero() {
        for alpha in [mi![1], mi![2, 1]] {
            let est = newton_eval(&alpha, Complex64::new(0.0, 0.0), 50).unwrap();
            assert_eq!(est.value, Complex64::new(0.0, 0.0));
            assert!(est.err < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            newton_eval(&mi![], Complex64::new(1.0, 0.0), 50),
            Err(Error::EmptyIndex)
        ));
        assert!(matches!(
            newton_eval(&mi![2], Complex64::new(1.0, 0.0), 10),
            Err(Error::TermCountTooSmall { .. })
        ));
        // abscissa of (2) is -1: z = -1 is rejected, z = -0.9 is fine.
        assert!(matches!(
            newton_eval(&mi![2], Complex64::new(-1.0, 0.0), 50),
            Err(Error::BelowAbscissa { .. })
        ));
        assert!(newton_eval(&mi![2], Complex64::new(-0.9, 0.0), 2000).is_ok());
        assert!(newton_eval(&mi![2], Complex64::new(f64::NAN, 0.0), 50).is_err());
    }

    /// Independent oracle for F_(2)(1/2): the classical series
    /// sum_k [1/k^2 - 1/(k+z)^2] summed far and closed with a midpoint
    /// integral tail.
    fn f2_oracle(z: f64) -> f64 {
        let cut = 10_000_000u64;
        let mut acc = Kahan::new();
        for k in 1..=cut {
            let k = k as f64;
            acc.add(1.0 / (k * k) - 1.0 / ((k + z) * (k + z)));
        }
        let m = cut as f64 + 0.5;
        acc.add(1.0 / m - 1.0 / (m + z));
        acc.total()
    }

    #[test]
    fn half_argument_matches_classical_series() {
        let oracle = f2_oracle(0.5);
        // Frozen reference: the series telescopes against trigamma values,
        // sum_k [1/k^2 - 1/(k+1/2)^2] = 4 - pi^2/3.
        let closed = 4.0 - std::f64::consts::PI.powi(2) / 3.0;
        assert!(
            (oracle - 0.710_131_866_303_547_4).abs() < 1e-9,
            "oracle = {oracle}"
        );
        assert!((oracle - closed).abs() < 1e-9);
        let est = newton_eval(&mi![2], Complex64::new(0.5, 0.0), 100_000).unwrap();
        assert!(
            (est.value.re - oracle).abs() < 1e-6 && est.value.im.abs() < 1e-12,
            "F_(2)(1/2) = {} vs {oracle}",
            est.value.re
        );
        assert!((est.value.re - oracle).abs() <= est.err + 1e-9);
    }

    #[test]
    fn error_estimate_decays_with_more_terms() {
        for alpha in [mi![2], mi![1, 2]] {
            for z in [Complex64::new(1.5, 0.0), Complex64::new(2.5, 0.5)] {
                let e1 = newton_eval(&alpha, z, 1_000).unwrap().err;
                let e2 = newton_eval(&alpha, z, 2_000).unwrap().err;
                assert!(e2 <= e1 * 1.05, "err grew for {alpha} at {z}: {e1} -> {e2}");
            }
        }
    }

    /// Holomorphy proxy: the numerical z-derivative satisfies the
    /// Cauchy-Riemann relation D_y = i * D_x at an interior point.
    #[test]
    fn cauchy_riemann_residual_is_small() {
        let series = NewtonSeries::new(&mi![2, 1], 20_000).unwrap();
        let z0 = Complex64::new(1.2, 0.3);
        let h = 1e-3;
        let fxp = series.eval(z0 + Complex64::new(h, 0.0)).unwrap().value;
        let fxm = series.eval(z0 - Complex64::new(h, 0.0)).unwrap().value;
        let fyp = series.eval(z0 + Complex64::new(0.0, h)).unwrap().value;
        let fym = series.eval(z0 - Complex64::new(0.0, h)).unwrap().value;
        let dx = (fxp - fxm) / (2.0 * h);
        let dy = (fyp - fym) / (2.0 * h);
        let residual = (dy - Complex64::new(0.0, 1.0) * dx).norm();
        assert!(
            residual < 1e-4 * (1.0 + dx.norm()),
            "Cauchy-Riemann residual {residual}"
        );
    }
}
