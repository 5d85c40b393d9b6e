//! Shapes of nested multiple series: ordered chains of integer variables
//! with a kernel factor attached to each position.
//!
//! A [`ChainPattern`] describes a sum
//!
//! ```text
//!   Σ  f_1(x_1) f_2(x_2) ⋯ f_w(x_w)      over  x_1 ▷ x_2 ▷ ⋯ ▷ x_w ≥ 1,
//! ```
//!
//! where each `▷` is `>` or `≥` and each factor is built from the kernels
//! in [`Kernel`]. The two families used throughout the crate are the
//! interpolating series `G_α(z)` (tilde head, shifted block heads, plain
//! followers) and the exponent-weighted series `ζ_α(μ)` (pure power
//! kernels). Pattern-matrix sums reuse the same machinery via
//! [`super::matrix::PatternMatrix::to_chain`].

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use num::complex::Complex64;

/// Ordering constraint between two adjacent chain variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    /// `x_j > x_{j+1}`
    Strict,
    /// `x_j ≥ x_{j+1}`
    Weak,
}

/// A single multiplicative factor attached to one chain variable.
///
/// `z` is the series parameter; power kernels ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `1/x − 1/(x+z)`, evaluated in the cancellation-free form
    /// `z/(x(x+z))`.
    Tilde,
    /// `1/(x+z)`
    Shifted,
    /// `1/x`
    Plain,
    /// `1/x^e`
    Power(u32),
}

impl Kernel {
    /// Evaluates the kernel at integer value `x ≥ 1` (passed as a float)
    /// and parameter `z`.
    pub fn factor(self, x: f64, z: Complex64) -> Complex64 {
        match self {
            Kernel::Tilde => z / (x * (x + z)),
            Kernel::Shifted => (x + z).inv(),
            Kernel::Plain => Complex64::new(1.0 / x, 0.0),
            Kernel::Power(e) => Complex64::new(x.powi(-(e as i32)), 0.0),
        }
    }

    /// Whether the kernel involves the shifted denominator `x + z` and is
    /// therefore sensitive to the pole set `z ∈ {−1, −2, …}`.
    pub(crate) fn uses_shift(self) -> bool {
        matches!(self, Kernel::Tilde | Kernel::Shifted)
    }

    /// Local power-law decay exponent `−d log|f| / d log x` at `x`, used by
    /// the tail model for the outermost variable.
    pub(crate) fn decay_exponent(self, x: f64, z: Complex64) -> f64 {
        match self {
            Kernel::Plain => 1.0,
            Kernel::Power(e) => e as f64,
            Kernel::Shifted => (x / (x + z)).re,
            Kernel::Tilde => 1.0 + (x / (x + z)).re,
        }
    }
}

/// The shape of one nested series: per-variable kernel factors plus the
/// comparators linking consecutive variables. The final variable is always
/// constrained by `x_w ≥ 1`.
///
/// A position usually carries a single kernel; positions created by merging
/// two variables through an `=` pattern-matrix comparator carry the product
/// of both kernels.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainPattern {
    positions: Vec<Vec<Kernel>>,
    comparators: Vec<Comparator>,
}

impl ChainPattern {
    /// Builds a pattern with one kernel per position. `comparators` must
    /// have exactly one entry fewer than `kernels`.
    pub fn new(kernels: Vec<Kernel>, comparators: Vec<Comparator>) -> Result<Self> {
        Self::from_groups(kernels.into_iter().map(|k| vec![k]).collect(), comparators)
    }

    /// Builds a pattern whose positions may carry several kernel factors.
    pub(crate) fn from_groups(
        positions: Vec<Vec<Kernel>>,
        comparators: Vec<Comparator>,
    ) -> Result<Self> {
        if positions.is_empty() || positions.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidPattern(
                "chain needs at least one position and a kernel at every position".into(),
            ));
        }
        if comparators.len() + 1 != positions.len() {
            return Err(Error::InvalidPattern(format!(
                "{} positions need {} comparators, got {}",
                positions.len(),
                positions.len() - 1,
                comparators.len()
            )));
        }
        Ok(ChainPattern {
            positions,
            comparators,
        })
    }

    /// The pattern of `G_α(z)`: one block of variables per part of `α`,
    /// strict comparators inside blocks and weak ones between blocks. The
    /// first variable carries the tilde kernel, the first variable of every
    /// later block the shifted kernel, and all other variables `1/x`.
    pub fn g_series(alpha: &MultiIndex) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut kernels = Vec::with_capacity(alpha.weight() as usize);
        for (block, &part) in alpha.parts().iter().enumerate() {
            for slot in 0..part {
                kernels.push(match (block, slot) {
                    (0, 0) => Kernel::Tilde,
                    (_, 0) => Kernel::Shifted,
                    _ => Kernel::Plain,
                });
            }
        }
        ChainPattern::new(kernels, alpha_comparators(alpha))
    }

    /// The pattern of `ζ_α(μ)`: the comparator layout of `α` with the pure
    /// power kernel `1/x^{μ_j}` at position `j`. Requires `l(μ) = |α|` and
    /// an admissible leading exponent `μ_1 ≥ 2`.
    pub fn power_series(alpha: &MultiIndex, mu: &MultiIndex) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if mu.length() != alpha.weight() as usize {
            return Err(Error::ExponentLengthMismatch {
                got: mu.length(),
                want: alpha.weight(),
            });
        }
        let first = mu.first().expect("mu nonempty because |α| ≥ 1");
        if first < 2 {
            return Err(Error::NotAdmissible(format!(
                "leading exponent must be at least 2 for convergence, got {first}"
            )));
        }
        let kernels = mu.parts().iter().map(|&e| Kernel::Power(e)).collect();
        ChainPattern::new(kernels, alpha_comparators(alpha))
    }

    /// Number of chain variables.
    pub fn width(&self) -> usize {
        self.positions.len()
    }

    /// Kernel factors per position, outermost first.
    pub fn positions(&self) -> &[Vec<Kernel>] {
        &self.positions
    }

    /// Comparators between consecutive positions.
    pub fn comparators(&self) -> &[Comparator] {
        &self.comparators
    }

    /// Whether any kernel involves `x + z`.
    pub(crate) fn uses_shift(&self) -> bool {
        self.positions.iter().flatten().any(|k| k.uses_shift())
    }

    /// Product of the outermost position's kernels at `x`.
    pub(crate) fn head_factor(&self, x: f64, z: Complex64) -> Complex64 {
        self.positions[0]
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, k| acc * k.factor(x, z))
    }

    /// Summed decay exponent of the outermost position at `x`.
    pub(crate) fn head_decay(&self, x: f64, z: Complex64) -> f64 {
        self.positions[0]
            .iter()
            .map(|k| k.decay_exponent(x, z))
            .sum()
    }
}

/// Comparator layout shared by `G_α` and `ζ_α`: strict inside each block of
/// size `α_i`, weak at block boundaries.
fn alpha_comparators(alpha: &MultiIndex) -> Vec<Comparator> {
    let mut cmps = Vec::with_capacity(alpha.weight() as usize - 1);
    for (block, &part) in alpha.parts().iter().enumerate() {
        if block > 0 {
            cmps.push(Comparator::Weak);
        }
        for _ in 1..part {
            cmps.push(Comparator::Strict);
        }
    }
    cmps
}

/// Decomposes `α` into groups `(β_i, β'_i)` such that
/// `α = (1,…,1,β'_1+1 | 1,…,1,β'_2+1 | … )` with `β_i − 1` leading ones per
/// group. All `β_i ≥ 1`; `β'_i ≥ 1` except possibly the last, which is `0`
/// exactly when `α` ends in `1`.
pub fn beta_decomposition(alpha: &MultiIndex) -> Result<Vec<(u32, u32)>> {
    if alpha.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let mut groups = Vec::new();
    let mut ones = 0u32;
    for &part in alpha.parts() {
        if part == 1 {
            ones += 1;
        } else {
            groups.push((ones + 1, part - 1));
            ones = 0;
        }
    }
    if ones > 0 {
        groups.push((ones, 0));
    }
    Ok(groups)
}
