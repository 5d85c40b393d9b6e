//! Pattern matrices: tabular descriptions of mixed `>`/`≥`/`=` nested sums.
//!
//! A [`PatternMatrix`] holds rows `(□_i, γ_i, □'_i, γ'_i)`. Row `i`
//! contributes a block of `γ_i` shifted-kernel variables (the first row's
//! block head carries the tilde kernel) followed by `γ'_i` plain-kernel
//! variables. Within shifted blocks consecutive variables are weakly
//! ordered, within plain blocks strictly; the box symbols order the block
//! boundaries, with `□'_i` sitting after the `i`-th shifted block and
//! `□_{i+1}` after the `i`-th plain block. The `=` symbol pins the adjacent
//! variables together; [`PatternMatrix::to_chain`] resolves it by merging
//! the two positions into one carrying both kernel factors.
//!
//! `Φ_n` evaluates the resulting chain at parameter `z = n` and extends
//! linearly to rational combinations of matrices.

use super::engine::chain_eval_corrected;
use super::pattern::{beta_decomposition, ChainPattern, Comparator, Kernel};
use crate::error::{Error, Result};
use crate::estimate::SumEstimate;
use crate::multiindex::MultiIndex;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Comparator symbol appearing in the first or third column of a pattern
/// matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoxSymbol {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

type RowTuple = (Option<BoxSymbol>, u32, BoxSymbol, u32);

/// One row `(□, γ, □', γ')` of a pattern matrix. The first row has no `□`
/// entry. Serializes as the JSON array `[box, gamma, boxp, gammap]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RowTuple", into = "RowTuple")]
pub struct MatrixRow {
    pub box_sym: Option<BoxSymbol>,
    pub gamma: u32,
    pub boxp: BoxSymbol,
    pub gammap: u32,
}

impl MatrixRow {
    /// First row: the `(1,1)` entry is empty.
    pub fn first(gamma: u32, boxp: BoxSymbol, gammap: u32) -> Self {
        MatrixRow {
            box_sym: None,
            gamma,
            boxp,
            gammap,
        }
    }

    /// Any later row.
    pub fn next(box_sym: BoxSymbol, gamma: u32, boxp: BoxSymbol, gammap: u32) -> Self {
        MatrixRow {
            box_sym: Some(box_sym),
            gamma,
            boxp,
            gammap,
        }
    }
}

impl From<RowTuple> for MatrixRow {
    fn from((box_sym, gamma, boxp, gammap): RowTuple) -> Self {
        MatrixRow {
            box_sym,
            gamma,
            boxp,
            gammap,
        }
    }
}

impl From<MatrixRow> for RowTuple {
    fn from(row: MatrixRow) -> Self {
        (row.box_sym, row.gamma, row.boxp, row.gammap)
    }
}

/// A validated pattern matrix. Serializes as a JSON array of row arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PatternMatrix {
    rows: Vec<MatrixRow>,
}

impl PatternMatrix {
    /// Builds a matrix, enforcing the class invariants:
    /// at least one row; no `□` in row 1 and one in every later row;
    /// `γ_1 ≥ 1`; `□_i = □'_i` whenever `γ_i = 0` (`i ≥ 2`);
    /// `□'_i = □_{i+1}` whenever `γ'_i = 0` (`i < p`); and no two adjacent
    /// empty blocks.
    pub fn new(rows: Vec<MatrixRow>) -> Result<Self> {
        let matrix = PatternMatrix { rows };
        matrix.validate()?;
        Ok(matrix)
    }

    pub fn rows(&self) -> &[MatrixRow] {
        &self.rows
    }

    /// Checks the class invariants; `Deserialize` does not run this, so
    /// every consumer of untrusted matrices goes through here.
    pub fn validate(&self) -> Result<()> {
        let rows = &self.rows;
        if rows.is_empty() {
            return Err(Error::InvalidPattern(
                "a pattern matrix needs at least one row".into(),
            ));
        }
        if rows[0].box_sym.is_some() {
            return Err(Error::InvalidPattern(
                "row 1 must have an empty box entry".into(),
            ));
        }
        if rows[0].gamma == 0 {
            return Err(Error::InvalidPattern("γ₁ must be at least 1".into()));
        }
        for (i, row) in rows.iter().enumerate().skip(1) {
            let box_sym = row.box_sym.ok_or_else(|| {
                Error::InvalidPattern(format!("row {} is missing its box entry", i + 1))
            })?;
            if row.gamma == 0 && box_sym != row.boxp {
                return Err(Error::InvalidPattern(format!(
                    "row {}: γ = 0 requires matching box symbols",
                    i + 1
                )));
            }
        }
        for (i, pair) in rows.windows(2).enumerate() {
            if pair[0].gammap == 0 && pair[0].boxp != pair[1].box_sym.expect("checked above") {
                return Err(Error::InvalidPattern(format!(
                    "row {}: γ' = 0 requires the box symbols around the empty block to match",
                    i + 1
                )));
            }
        }
        let flat: Vec<u32> = rows.iter().flat_map(|r| [r.gamma, r.gammap]).collect();
        if flat.windows(2).any(|w| w[0] == 0 && w[1] == 0) {
            return Err(Error::InvalidPattern(
                "two adjacent empty blocks are not supported".into(),
            ));
        }
        Ok(())
    }

    /// The matrix whose `Φ_n` value is `G_α(n)`: per group `(β_i, β'_i)` of
    /// the decomposition of `α`, a row `(≥, β_i, >, β'_i)`.
    pub fn g_matrix(alpha: &MultiIndex) -> Result<Self> {
        let groups = beta_decomposition(alpha)?;
        let rows = groups
            .iter()
            .enumerate()
            .map(|(i, &(beta, betap))| {
                if i == 0 {
                    MatrixRow::first(beta, BoxSymbol::Gt, betap)
                } else {
                    MatrixRow::next(BoxSymbol::Ge, beta, BoxSymbol::Gt, betap)
                }
            })
            .collect();
        PatternMatrix::new(rows)
    }

    /// Flattens the matrix into a chain: shifted blocks weak inside, plain
    /// blocks strict inside, box symbols at the boundaries, `=` boundaries
    /// merged into multi-kernel positions and empty blocks skipped.
    pub fn to_chain(&self) -> Result<ChainPattern> {
        self.validate()?;
        let mut positions: Vec<Vec<Kernel>> = Vec::new();
        let mut cmps: Vec<Comparator> = Vec::new();
        let mut pending: Option<BoxSymbol> = None;

        let mut emit = |len: u32,
                        head: Kernel,
                        rest: Kernel,
                        intra: Comparator,
                        pending: &mut Option<BoxSymbol>| {
            for j in 0..len {
                let kernel = if j == 0 { head } else { rest };
                if j == 0 {
                    match pending.take() {
                        None => positions.push(vec![kernel]),
                        Some(BoxSymbol::Eq) => positions
                            .last_mut()
                            .expect("the first block is nonempty, so `=` has a left neighbor")
                            .push(kernel),
                        Some(BoxSymbol::Gt) => {
                            cmps.push(Comparator::Strict);
                            positions.push(vec![kernel]);
                        }
                        Some(BoxSymbol::Ge) => {
                            cmps.push(Comparator::Weak);
                            positions.push(vec![kernel]);
                        }
                    }
                } else {
                    cmps.push(intra);
                    positions.push(vec![kernel]);
                }
            }
        };

        for (i, row) in self.rows.iter().enumerate() {
            // Overwriting a symbol left unconsumed by an empty block is
            // safe: the invariants force the two symbols around an empty
            // block to agree.
            if i > 0 {
                pending = Some(row.box_sym.expect("validated above"));
            }
            let head = if i == 0 {
                Kernel::Tilde
            } else {
                Kernel::Shifted
            };
            emit(
                row.gamma,
                head,
                Kernel::Shifted,
                Comparator::Weak,
                &mut pending,
            );
            pending = Some(row.boxp);
            emit(
                row.gammap,
                Kernel::Plain,
                Kernel::Plain,
                Comparator::Strict,
                &mut pending,
            );
        }
        ChainPattern::from_groups(positions, cmps)
    }

    /// Parses and validates a matrix from its JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let matrix: PatternMatrix =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        matrix.validate()?;
        Ok(matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("pattern matrices always serialize")
    }
}

/// `Φ_n(C)` truncated at `M`, with tail extrapolation on the outer variable.
pub fn phi_eval(matrix: &PatternMatrix, n: u32, m: u64) -> Result<SumEstimate> {
    let chain = matrix.to_chain()?;
    chain_eval_corrected(&chain, Complex64::new(f64::from(n), 0.0), m)
}

/// Linear extension of `Φ_n` to rational combinations of matrices: the
/// value is the coefficient-weighted sum and the error adds up as
/// `Σ |c|·err`.
pub fn phi_eval_combo(
    terms: &[(BigRational, PatternMatrix)],
    n: u32,
    m: u64,
) -> Result<SumEstimate> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for (coeff, matrix) in terms {
        let est = phi_eval(matrix, n, m)?;
        let c = coeff.to_f64().ok_or(Error::NonFinite)?;
        value += c * est.value;
        err += coeff.abs().to_f64().ok_or(Error::NonFinite)? * est.err;
    }
    Ok(SumEstimate::new(value, err))
}
