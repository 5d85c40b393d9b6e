//! Finite multiple harmonic sums and exact sequence transforms.
//!
//! The central object is
//!
//! ```text
//! S_alpha(n) = sum over n > n_1 >= n_2 >= ... >= n_s >= 0 of
//!              prod_i (n_i + 1)^(-alpha_i)
//! ```
//!
//! with `S_alpha(0) = 0` and, by the empty-product convention,
//! `S_()( n ) = 1` for every `n`.  Values are exact rationals; prefixes are
//! computed by the one-step recurrence
//! `S_alpha(n+1) - S_alpha(n) = (n+1)^(-alpha_1) * S_tail(alpha)(n+1)`,
//! which costs `O(n * length)` rational operations for a full prefix.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::numeric::Kahan;

/// A finite prefix `a(0), a(1), ..., a(N)` of a rational sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeqPrefix {
    values: Vec<BigRational>,
}

impl RationalSeqPrefix {
    /// Wraps a nonempty list of values.
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::PrefixTooShort { need: 1, got: 0 });
        }
        Ok(RationalSeqPrefix { values })
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor guarantees at least one value
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.values.get(n)
    }

    pub fn last(&self) -> &BigRational {
        self.values.last().expect("nonempty by construction")
    }
}

/// Forward difference `(delta a)(n) = a(n) - a(n+1)`; the result prefix is
/// one entry shorter.
pub fn delta(a: &RationalSeqPrefix) -> Result<RationalSeqPrefix> {
    if a.len() < 2 {
        return Err(Error::PrefixTooShort {
            need: 2,
            got: a.len(),
        });
    }
    let values = a
        .values
        .windows(2)
        .map(|w| &w[0] - &w[1])
        .collect::<Vec<_>>();
    RationalSeqPrefix::new(values)
}

/// Alternating binomial transform
/// `(nabla a)(n) = sum_k (-1)^k C(n,k) a(k)`, returned for every `n` the
/// prefix supports (same length as the input).  Equals the iterated forward
/// difference evaluated at 0, and is an involution.
pub fn nabla_prefix(a: &RationalSeqPrefix) -> RationalSeqPrefix {
    let n_max = a.len() - 1;
    let mut out = Vec::with_capacity(a.len());
    // Pascal row, updated in place from n to n+1.
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for n in 0..=n_max {
        if n > 0 {
            row.push(BigInt::one());
            for k in (1..n).rev() {
                let prev = row[k - 1].clone();
                row[k] += prev;
            }
        }
        let mut acc = BigRational::zero();
        for (k, b) in row.iter().enumerate() {
            let term = BigRational::from_integer(b.clone()) * &a.values[k];
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        out.push(acc);
    }
    RationalSeqPrefix { values: out }
}

/// Exact prefix `S_alpha(0..=n_max)` of the multiple harmonic sum.
pub fn multi_harmonic_prefix(alpha: &MultiIndex, n_max: u32) -> RationalSeqPrefix {
    let l = alpha.length();
    if l == 0 {
        return RationalSeqPrefix {
            values: vec![BigRational::one(); n_max as usize + 1],
        };
    }
    // tails[j] holds S over the suffix alpha_j..alpha_s at the current m;
    // tails[l] is the constant empty sum 1.
    let mut tails = vec![BigRational::zero(); l + 1];
    tails[l] = BigRational::one();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigRational::zero());
    for m in 1..=n_max {
        for j in (0..l).rev() {
            let p = BigInt::from(m).pow(alpha.parts()[j]);
            let step = &tails[j + 1] / BigRational::from_integer(p);
            tails[j] += step;
        }
        out.push(tails[0].clone());
    }
    RationalSeqPrefix { values: out }
}

/// Exact value `S_alpha(n)`.
pub fn multi_harmonic(alpha: &MultiIndex, n: u32) -> BigRational {
    multi_harmonic_prefix(alpha, n).last().clone()
}

/// Floating-point prefix `S_alpha(0..=n_max)` via the same recurrence with
/// compensated per-level accumulators.  Accurate to a few ulps relative;
/// used to build long transform tables where exact arithmetic is
/// impractical.
pub fn multi_harmonic_prefix_f64(alpha: &MultiIndex, n_max: u32) -> Vec<f64> {
    let l = alpha.length();
    if l == 0 {
        return vec![1.0; n_max as usize + 1];
    }
    let mut tails = vec![Kahan::new(); l];
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(0.0);
    for m in 1..=n_max {
        for j in (0..l).rev() {
            let inner = if j + 1 < l { tails[j + 1].total() } else { 1.0 };
            let step = inner / (m as f64).powi(alpha.parts()[j] as i32);
            tails[j].add(step);
        }
        out.push(tails[0].total());
    }
    out
}

/// Exact binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binom_exact(n: u64, k: i64) -> BigRational {
    if k < 0 || k as u64 > n {
        return BigRational::zero();
    }
    let k = k as u64;
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(r)
}

/// Generalized binomial coefficient `C(z, n) = z(z-1)...(z-n+1)/n!` for
/// complex `z`.
pub fn binom_complex(z: Complex64, n: u32) -> Complex64 {
    let mut r = Complex64::new(1.0, 0.0);
    for i in 0..n {
        r *= (z - i as f64) / (i as f64 + 1.0);
    }
    r
}
