//! Identity-verification campaigns.
//!
//! Each `check_*` function sweeps a family of identities relating the
//! Newton-series, block-nested-series and zeta evaluators, computes both
//! sides with explicit error accounting, and returns a [`Report`] with one
//! [`CaseReport`] per instance. Numeric cases pass when
//! `|lhs − rhs| ≤ err_lhs + err_rhs + PASS_SLACK`; exact (rational) cases
//! admit zero tolerance. Cases are enumerated in graded-lexicographic
//! order of the multi-index and assembled deterministically even when the
//! evaluation itself is spread over worker threads.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::estimate::SumEstimate;
use crate::multiindex::{
    circledast_combo, coarsen_sum, indices_up_to_weight, refine_sum, IndexCombo, MultiIndex,
};
use crate::mzv::{zeta_combo, zeta_plus};
use crate::nested::{g_eval, zeta_alpha_eval};
use crate::newton::{abscissa, newton_eval_int, NewtonSeries};
use crate::sequences::multi_harmonic;

/// Absolute slack added to every numeric acceptance window, absorbing
/// rounding pile-up in the comparison itself.
pub const PASS_SLACK: f64 = 1e-9;

/// Execution options shared by all campaigns.
#[derive(Debug, Clone, Copy)]
pub struct CampaignOpts {
    /// Worker threads for case evaluation (`<= 1` runs sequentially).
    /// Results are assembled in enumeration order either way.
    pub threads: usize,
    /// Record wall-clock time per case. Off by default so that identical
    /// invocations produce bitwise-identical reports (`ms` stays 0.0).
    pub timing: bool,
}

impl Default for CampaignOpts {
    fn default() -> Self {
        CampaignOpts {
            threads: 1,
            timing: false,
        }
    }
}

/// One side of an identity: a complex value and its absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl From<SumEstimate> for Side {
    fn from(est: SumEstimate) -> Side {
        Side {
            re: est.value.re,
            im: est.value.im,
            err: est.err,
        }
    }
}

impl Side {
    fn from_rational(q: &BigRational) -> Side {
        Side {
            re: q.to_f64().unwrap_or(f64::NAN),
            im: 0.0,
            err: 0.0,
        }
    }
}

/// Outcome of a single identity instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseReport {
    /// The multi-index driving the case, rendered as `(a1,...,as)`.
    pub alpha: String,
    /// Case-specific inputs (kind tag, n, z, truncation, combos, ...).
    pub aux: serde_json::Value,
    pub lhs: Side,
    pub rhs: Side,
    pub abs_diff: f64,
    pub pass: bool,
    /// Wall-clock milliseconds; 0.0 unless timing was requested.
    pub ms: f64,
}

/// A campaign outcome: ordered cases plus the conjunction of their passes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub cases: Vec<CaseReport>,
    pub all_pass: bool,
}

impl Report {
    fn from_cases(cases: Vec<CaseReport>) -> Report {
        let all_pass = cases.iter().all(|c| c.pass);
        Report { cases, all_pass }
    }

    /// The failing cases, in enumeration order.
    pub fn failures(&self) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

fn numeric_case(
    alpha: &MultiIndex,
    aux: serde_json::Value,
    lhs: SumEstimate,
    rhs: SumEstimate,
    ms: f64,
) -> CaseReport {
    let abs_diff = (lhs.value - rhs.value).norm();
    let pass = abs_diff <= lhs.err + rhs.err + PASS_SLACK;
    CaseReport {
        alpha: alpha.to_string(),
        aux,
        lhs: lhs.into(),
        rhs: rhs.into(),
        abs_diff,
        pass,
        ms,
    }
}

/// Milliseconds elapsed while running `f`, or 0.0 with timing disabled.
fn timed<R>(timing: bool, f: impl FnOnce() -> R) -> (R, f64) {
    if !timing {
        return (f(), 0.0);
    }
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Maps `f` over `items`, fanning contiguous chunks out to scoped worker
/// threads, and flattens the per-item case lists in input order. Errors
/// propagate deterministically (first item in order wins).
fn run_cases<T, F>(items: &[T], threads: usize, f: F) -> Result<Vec<CaseReport>>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<CaseReport>> + Sync,
{
    if items.is_empty() {
        return Ok(Vec::new());
    }
    if threads <= 1 || items.len() == 1 {
        let mut out = Vec::new();
        for item in items {
            out.extend(f(item)?);
        }
        return Ok(out);
    }
    let chunk = items.len().div_ceil(threads);
    let mut slots: Vec<Option<Result<Vec<CaseReport>>>> = Vec::new();
    slots.resize_with(items.len(), || None);
    std::thread::scope(|scope| {
        for (item_chunk, slot_chunk) in items.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            let f = &f;
            scope.spawn(move || {
                for (slot, item) in slot_chunk.iter_mut().zip(item_chunk) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    let mut out = Vec::new();
    for slot in slots {
        out.extend(slot.expect("every slot is written by its worker")?);
    }
    Ok(out)
}

fn check_range(name: &'static str, got: u64, min: u64, max: u64) -> Result<()> {
    if got < min || got > max {
        return Err(Error::OutOfRange {
            name,
            got,
            min,
            max,
        });
    }
    Ok(())
}

/// Newton interpolation of the harmonic sums.
///
/// Exact part: the Newton series terminates at integer arguments, so
/// `newton_eval_int(α, n)` must equal `S_α(n)` as a rational for every α
/// of weight ≤ `max_weight` and every `n ≤ max_n` — zero tolerance.
/// Numeric part (when `trunc` is given): the block-nested series
/// interpolates the same values through the backprime index,
/// `G_α(n) = S_{α‵}(n)`, checked within the reported errors.
pub fn check_interpolation(
    max_weight: u32,
    max_n: u32,
    trunc: Option<u64>,
    opts: &CampaignOpts,
) -> Result<Report> {
    check_range("max_weight", max_weight as u64, 1, 8)?;
    let grid: Vec<(MultiIndex, u32)> = indices_up_to_weight(max_weight)
        .into_iter()
        .flat_map(|alpha| (0..=max_n).map(move |n| (alpha.clone(), n)))
        .collect();
    let timing = opts.timing;
    let cases = run_cases(&grid, opts.threads, |(alpha, n)| {
        let mut out = Vec::new();
        let (exact, ms) = timed(timing, || -> Result<_> {
            Ok((newton_eval_int(alpha, *n)?, multi_harmonic(alpha, *n)))
        });
        let (newton, harmonic) = exact?;
        let pass = newton == harmonic;
        let lhs = Side::from_rational(&newton);
        let rhs = Side::from_rational(&harmonic);
        out.push(CaseReport {
            alpha: alpha.to_string(),
            aux: json!({
                "kind": "newton-int",
                "n": n,
                "lhs_exact": newton.to_string(),
                "rhs_exact": harmonic.to_string(),
            }),
            lhs,
            rhs,
            abs_diff: if pass { 0.0 } else { (lhs.re - rhs.re).abs() },
            pass,
            ms,
        });
        if let Some(m) = trunc {
            let truth = multi_harmonic(&alpha.backprime()?, *n);
            let (est, ms) = timed(timing, || g_eval(alpha, Complex64::new(*n as f64, 0.0), m));
            out.push(numeric_case(
                alpha,
                json!({"kind": "g-series", "n": n, "trunc": m}),
                est?,
                SumEstimate::exact(truth.to_f64().unwrap_or(f64::NAN)),
                ms,
            ));
        }
        Ok(out)
    })?;
    Ok(Report::from_cases(cases))
}

/// The main interpolation theorem: `F_α(z) = G_{α‵}(z)` on the half-plane
/// `Re z > abscissa(α)`. Every requested `z` must lie in that half-plane;
/// the Newton coefficient table is built once and shared across cases.
pub fn check_main_theorem(
    alpha: &MultiIndex,
    zs: &[Complex64],
    terms: u32,
    trunc: u64,
    opts: &CampaignOpts,
) -> Result<Report> {
    let bound = abscissa(alpha)?;
    for z in zs {
        if z.re.is_nan() || z.re <= bound as f64 {
            return Err(Error::BelowAbscissa {
                re: z.re,
                abscissa: bound,
            });
        }
    }
    let series = NewtonSeries::new(alpha, terms)?;
    let backprime = alpha.backprime()?;
    let timing = opts.timing;
    let cases = run_cases(zs, opts.threads, |z| {
        let (pair, ms) = timed(timing, || -> Result<_> {
            Ok((series.eval(*z)?, g_eval(&backprime, *z, trunc)?))
        });
        let (lhs, rhs) = pair?;
        Ok(vec![numeric_case(
            alpha,
            json!({
                "kind": "newton-vs-g",
                "z": {"re": z.re, "im": z.im},
                "terms": terms,
                "trunc": trunc,
                "backprime": backprime.to_string(),
            }),
            lhs,
            rhs,
            ms,
        )])
    })?;
    Ok(Report::from_cases(cases))
}

/// MZV duality: `dual(α) − reverse(α) ∈ ker ζ⁺` for every α of weight
/// ≤ `max_weight`, plus the equivalent family obtained by first applying
/// the coarsening map, `(∗ − τ) d(α) ∈ ker ζ⁺`.
pub fn check_duality(max_weight: u32, trunc: u64, opts: &CampaignOpts) -> Result<Report> {
    check_range("max_weight", max_weight as u64, 1, 6)?;
    let alphas = indices_up_to_weight(max_weight);
    let timing = opts.timing;
    let cases = run_cases(&alphas, opts.threads, |alpha| {
        let mut out = Vec::new();

        let direct =
            IndexCombo::from_index(alpha.dual()?) - IndexCombo::from_index(alpha.reverse());
        let (est, ms) = timed(timing, || zeta_plus(&direct, trunc));
        out.push(numeric_case(
            alpha,
            json!({"kind": "star-minus-tau", "combo": direct.to_string(), "trunc": trunc}),
            est?,
            SumEstimate::exact(0.0),
            ms,
        ));

        let d_alpha = coarsen_sum(alpha)?;
        let spread =
            d_alpha.map_indices(|i| i.dual())? - d_alpha.map_indices(|i| Ok(i.reverse()))?;
        let (est, ms) = timed(timing, || zeta_plus(&spread, trunc));
        out.push(numeric_case(
            alpha,
            json!({"kind": "star-minus-tau-after-d", "combo": spread.to_string(), "trunc": trunc}),
            est?,
            SumEstimate::exact(0.0),
            ms,
        ));

        Ok(out)
    })?;
    Ok(Report::from_cases(cases))
}

/// Exponent lists for the derivative formula's left side: over all
/// `(k_1,…,k_s)` with `k_1 ≥ 1`, `k_i ≥ 0` and `Σ k_i = k`, block `i`
/// contributes the exponents `(k_i + 1, 1, …, 1)` on its `α_i` slots.
fn formula_exponents(alpha: &MultiIndex, k: u32) -> Vec<MultiIndex> {
    fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 1 {
            return vec![vec![total]];
        }
        let mut out = Vec::new();
        for head in 0..=total {
            for mut rest in weak_compositions(total - head, parts - 1) {
                rest.insert(0, head);
                out.push(rest);
            }
        }
        out
    }
    weak_compositions(k - 1, alpha.length())
        .into_iter()
        .map(|c| {
            let mut exps = Vec::with_capacity(alpha.weight() as usize);
            for (i, &a) in alpha.parts().iter().enumerate() {
                let k_i = if i == 0 { c[i] + 1 } else { c[i] };
                exps.push(k_i + 1);
                exps.extend(std::iter::repeat_n(1, a as usize - 1));
            }
            MultiIndex::new(exps).expect("exponents are positive")
        })
        .collect()
}

/// The `k`-th derivative formula for `G_α` at 0 (both sides divided by the
/// common sign and factorial): the composition sum of `ζ_α` values with
/// exponent pattern `(k_i+1, 1, …, 1)` per block equals
/// `ζ(d(reverse(α)) ⊛ (1,…,1)_k)`.
pub fn check_formula(
    alpha: &MultiIndex,
    k: u32,
    trunc: u64,
    opts: &CampaignOpts,
) -> Result<Report> {
    check_range("k", k as u64, 1, 3)?;
    check_range("weight", alpha.weight() as u64, 1, 4)?;
    let timing = opts.timing;

    let exponents = formula_exponents(alpha, k);
    let (lhs, lhs_ms) = timed(timing, || -> Result<SumEstimate> {
        let mut value = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for mu in &exponents {
            let est = zeta_alpha_eval(alpha, mu, trunc)?;
            value += est.value;
            err += est.err;
        }
        Ok(SumEstimate::new(value, err))
    });

    let combo = circledast_combo(
        &coarsen_sum(&alpha.reverse())?,
        &IndexCombo::from_index(MultiIndex::ones(k as usize)),
    )?;
    let (rhs, rhs_ms) = timed(timing, || zeta_combo(&combo, trunc));

    let case = numeric_case(
        alpha,
        json!({
            "kind": "derivative-formula",
            "k": k,
            "trunc": trunc,
            "lhs_patterns": exponents.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "rhs_combo": combo.to_string(),
        }),
        lhs?,
        rhs?,
        lhs_ms + rhs_ms,
    );
    Ok(Report::from_cases(vec![case]))
}

/// The weight-shift identity `ζ_α(2,1,…,1) = ζ⁺(d(reverse(α)))` for every
/// α of weight ≤ `max_weight`, together with its diagram form
/// `ζ_α(2,1,…,1) = ζ⁺(u(dual(α)))`.
///
/// Both right-hand sides are first tied together by exact algebra: the
/// rewriting rests on the combo identities `d ∘ τ = τ ∘ d` and
/// `∗ ∘ d = u ∘ ∗`, which are verified per case before any numerics (the
/// two combos differ in general — only their `ζ⁺` values coincide).
pub fn check_eq435(max_weight: u32, trunc: u64, opts: &CampaignOpts) -> Result<Report> {
    check_range("max_weight", max_weight as u64, 1, 6)?;
    let alphas = indices_up_to_weight(max_weight);
    let timing = opts.timing;
    let cases = run_cases(&alphas, opts.threads, |alpha| {
        let d_alpha = coarsen_sum(alpha)?;
        let d_tau = coarsen_sum(&alpha.reverse())?;
        let u_star = refine_sum(&alpha.dual()?)?;
        let algebra_ok = d_tau == d_alpha.map_indices(|i| Ok(i.reverse()))?
            && u_star == d_alpha.map_indices(|i| i.dual())?;

        let mut exps = vec![2u32];
        exps.extend(std::iter::repeat_n(1, alpha.weight() as usize - 1));
        let mu = MultiIndex::new(exps)?;
        let (lhs, lhs_ms) = timed(timing, || zeta_alpha_eval(alpha, &mu, trunc));
        let lhs = lhs?;

        let mut out = Vec::new();
        for (kind, combo) in [("dual-form", &d_tau), ("diagram-form", &u_star)] {
            let (rhs, ms) = timed(timing, || zeta_plus(combo, trunc));
            let mut case = numeric_case(
                alpha,
                json!({
                    "kind": kind,
                    "trunc": trunc,
                    "pattern": mu.to_string(),
                    "combo": combo.to_string(),
                    "algebra_ok": algebra_ok,
                }),
                lhs,
                rhs?,
                lhs_ms + ms,
            );
            case.pass &= algebra_ok;
            out.push(case);
        }
        Ok(out)
    })?;
    Ok(Report::from_cases(cases))
}
