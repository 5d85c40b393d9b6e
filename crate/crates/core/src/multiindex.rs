//! Multi-indices (compositions of a natural number) and the exact algebra
//! on them: the subset encoding, dual, reversal, refinement/coarsening maps,
//! and the stuffle and circled-star products on formal linear combinations.
//!
//! A multi-index `(a_1, ..., a_s)` has every entry `>= 1`; `weight` is the
//! sum of the entries and `length` is the number of entries.  The empty
//! multi-index `()` is allowed as a value (it is the identity of both
//! concatenation and the stuffle product) but most structural operations
//! reject it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// A composition of a natural number: a finite sequence of entries `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    parts: Vec<u32>,
}

impl MultiIndex {
    /// Builds a multi-index, rejecting any zero entry.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        Ok(MultiIndex { parts })
    }

    /// The empty multi-index `()`.
    pub fn empty() -> Self {
        MultiIndex { parts: Vec::new() }
    }

    /// `(1, 1, ..., 1)` with `k` entries.
    pub fn ones(k: usize) -> Self {
        MultiIndex { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of entries.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Sum of the entries (0 for the empty multi-index).
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn first(&self) -> Option<u32> {
        self.parts.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.parts.last().copied()
    }

    /// All entries after the first, as a new multi-index.
    pub fn tail(&self) -> MultiIndex {
        MultiIndex {
            parts: self.parts.get(1..).unwrap_or(&[]).to_vec(),
        }
    }

    /// Entry order reversed: `(a_1, ..., a_s) -> (a_s, ..., a_1)`.
    pub fn reverse(&self) -> MultiIndex {
        let mut parts = self.parts.clone();
        parts.reverse();
        MultiIndex { parts }
    }

    /// Concatenation `self # other`.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        MultiIndex { parts }
    }

    /// The subset of `{1, ..., weight-1}` of partial sums
    /// `{a_1, a_1+a_2, ..., a_1+...+a_{s-1}}`.  Together with the weight this
    /// determines the multi-index; see [`decode_subset`].
    pub fn encode_subset(&self) -> Result<BTreeSet<u32>> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut acc = 0u32;
        Ok(self.parts[..self.parts.len() - 1]
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect())
    }

    /// The dual multi-index: complement the subset encoding within
    /// `{1, ..., weight-1}` and decode at the same weight.  An involution
    /// that preserves weight; the dual's length is `weight - length + 1`.
    pub fn dual(&self) -> Result<MultiIndex> {
        let m = self.weight();
        let enc = self.encode_subset()?;
        let complement: BTreeSet<u32> = (1..m).filter(|k| !enc.contains(k)).collect();
        decode_subset(m, &complement)
    }

    /// Reversal of the dual (equivalently, dual of the reversal).
    pub fn backprime(&self) -> Result<MultiIndex> {
        Ok(self.dual()?.reverse())
    }

    /// Decrement the first entry, removing it if it was 1.
    /// Undefined for `()` and `(1)`.
    pub fn drop_left(&self) -> Result<MultiIndex> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if self.parts == [1] {
            return Err(Error::UnitIndex);
        }
        let mut parts = self.parts.clone();
        if parts[0] == 1 {
            parts.remove(0);
        } else {
            parts[0] -= 1;
        }
        Ok(MultiIndex { parts })
    }

    /// Decrement the last entry, removing it if it was 1.
    /// Undefined for `()` and `(1)`.
    pub fn drop_right(&self) -> Result<MultiIndex> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        if self.parts == [1] {
            return Err(Error::UnitIndex);
        }
        let mut parts = self.parts.clone();
        let last = parts.len() - 1;
        if parts[last] == 1 {
            parts.pop();
        } else {
            parts[last] -= 1;
        }
        Ok(MultiIndex { parts })
    }

    /// Increment the first entry by 1 (producing an admissible index).
    pub fn raise_first(&self) -> Result<MultiIndex> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let mut parts = self.parts.clone();
        parts[0] += 1;
        Ok(MultiIndex { parts })
    }

    /// True when the leading entry is `>= 2` (so the attached series
    /// converges).
    pub fn is_admissible(&self) -> bool {
        self.first().is_some_and(|a| a >= 2)
    }
}

/// Rebuilds a multi-index of weight `m` from a subset of `{1, ..., m-1}`
/// interpreted as the set of partial sums.  Inverse of
/// [`MultiIndex::encode_subset`].
pub fn decode_subset(m: u32, subset: &BTreeSet<u32>) -> Result<MultiIndex> {
    if m == 0 {
        return Err(Error::ZeroWeight);
    }
    if let Some(&bad) = subset.iter().find(|&&k| k == 0 || k >= m) {
        return Err(Error::SubsetOutOfRange {
            element: bad,
            max: m - 1,
        });
    }
    let mut parts = Vec::with_capacity(subset.len() + 1);
    let mut prev = 0u32;
    for &b in subset {
        parts.push(b - prev);
        prev = b;
    }
    parts.push(m - prev);
    Ok(MultiIndex { parts })
}

/// Graded lexicographic order: first by weight, then lexicographically on
/// the entries.  This is the canonical term order used for printing and
/// serialization.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses `"(1,2,1)"` (parentheses optional, spaces allowed); `"()"` is
    /// the empty multi-index.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = match (t.starts_with('('), t.ends_with(')')) {
            (true, true) => &t[1..t.len() - 1],
            (false, false) => t,
            _ => return Err(Error::Parse(format!("unbalanced parentheses in {s:?}"))),
        };
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(MultiIndex::empty());
        }
        let parts = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multi-index entry {:?}", tok.trim())))
            })
            .collect::<Result<Vec<u32>>>()?;
        MultiIndex::new(parts)
    }
}

/// Convenience constructor for multi-index literals: `mi![1, 2, 1]`.
#[macro_export]
macro_rules! mi {
    () => { $crate::multiindex::MultiIndex::empty() };
    ($($x:expr),+ $(,)?) => {
        $crate::multiindex::MultiIndex::new(vec![$($x),+]).expect("multi-index literal")
    };
}

/// All compositions of `w` in lexicographic order (`w >= 1`).
pub fn compositions_of_weight(w: u32) -> Vec<MultiIndex> {
    fn rec(w: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if w == 0 {
            out.push(MultiIndex {
                parts: prefix.clone(),
            });
            return;
        }
        for first in 1..=w {
            prefix.push(first);
            rec(w - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, &mut Vec::new(), &mut out);
    out
}

/// All nonempty multi-indices of weight `1..=max_weight` in graded
/// lexicographic order.
pub fn indices_up_to_weight(max_weight: u32) -> Vec<MultiIndex> {
    (1..=max_weight).flat_map(compositions_of_weight).collect()
}

/// A finite formal linear combination of multi-indices with exact rational
/// coefficients.  Zero coefficients are never stored; terms iterate in
/// graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexCombo {
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl IndexCombo {
    pub fn zero() -> Self {
        IndexCombo::default()
    }

    /// The combination `1 * index`.
    pub fn from_index(index: MultiIndex) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(index, BigRational::one());
        IndexCombo { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of `index` (zero when absent).
    pub fn coeff(&self, index: &MultiIndex) -> BigRational {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds `c * index` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, index: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: &BigRational) -> IndexCombo {
        if c.is_zero() {
            return IndexCombo::zero();
        }
        IndexCombo {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Applies an index-level map term by term, combining coefficients of
    /// coinciding images.
    pub fn map_indices<F>(&self, mut f: F) -> Result<IndexCombo>
    where
        F: FnMut(&MultiIndex) -> Result<MultiIndex>,
    {
        let mut out = IndexCombo::zero();
        for (k, v) in &self.terms {
            out.add_term(f(k)?, v.clone());
        }
        Ok(out)
    }
}

impl From<MultiIndex> for IndexCombo {
    fn from(index: MultiIndex) -> Self {
        IndexCombo::from_index(index)
    }
}

impl std::ops::Add for IndexCombo {
    type Output = IndexCombo;
    fn add(mut self, rhs: IndexCombo) -> IndexCombo {
        for (k, v) in rhs.terms {
            self.add_term(k, v);
        }
        self
    }
}

impl std::ops::Sub for IndexCombo {
    type Output = IndexCombo;
    fn sub(mut self, rhs: IndexCombo) -> IndexCombo {
        for (k, v) in rhs.terms {
            self.add_term(k, -v);
        }
        self
    }
}

impl std::ops::Neg for IndexCombo {
    type Output = IndexCombo;
    fn neg(self) -> IndexCombo {
        IndexCombo {
            terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect(),
        }
    }
}

/// Formats as `"c1*(...) + c2*(...)"` with exact rational coefficients; the
/// zero combination prints as `"0"`.
impl fmt::Display for IndexCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{v}*{k}")?;
        }
        Ok(())
    }
}

/// Sum of all refinements of `alpha` (multi-indices whose consecutive
/// groups sum to the entries of `alpha`), each with coefficient 1.
/// The number of terms is `prod_i 2^(a_i - 1)`.
pub fn refine_sum(alpha: &MultiIndex) -> Result<IndexCombo> {
    if alpha.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let per_part: Vec<Vec<MultiIndex>> = alpha
        .parts()
        .iter()
        .map(|&a| compositions_of_weight(a))
        .collect();
    let mut acc: Vec<MultiIndex> = vec![MultiIndex::empty()];
    for options in &per_part {
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for prefix in &acc {
            for opt in options {
                next.push(prefix.concat(opt));
            }
        }
        acc = next;
    }
    let mut out = IndexCombo::zero();
    for beta in acc {
        out.add_term(beta, BigRational::one());
    }
    Ok(out)
}

/// Sum of all coarsenings of `alpha` (merge any subset of adjacent-entry
/// boundaries), each with coefficient 1; `2^(length-1)` terms.
pub fn coarsen_sum(alpha: &MultiIndex) -> Result<IndexCombo> {
    coarsenings_signed(alpha, false)
}

/// Inverse of [`coarsen_sum`] under linear extension: the same coarsenings
/// with alternating signs `(-1)^(length(alpha) - length(beta))`.
pub fn coarsen_inverse_sum(alpha: &MultiIndex) -> Result<IndexCombo> {
    coarsenings_signed(alpha, true)
}

fn coarsenings_signed(alpha: &MultiIndex, signed: bool) -> Result<IndexCombo> {
    if alpha.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let parts = alpha.parts();
    let gaps = parts.len() - 1;
    let mut out = IndexCombo::zero();
    for mask in 0u64..(1u64 << gaps) {
        // Bit g set = keep the boundary after entry g; unset = merge across it.
        let mut merged: Vec<u32> = Vec::with_capacity(parts.len());
        let mut current = parts[0];
        for (g, &p) in parts.iter().enumerate().skip(1) {
            if mask & (1 << (g - 1)) != 0 {
                merged.push(current);
                current = p;
            } else {
                current += p;
            }
        }
        merged.push(current);
        let dropped = gaps - mask.count_ones() as usize;
        let coeff = if signed && dropped % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        out.add_term(MultiIndex { parts: merged }, coeff);
    }
    Ok(out)
}

fn prepend(head: u32, combo: IndexCombo) -> IndexCombo {
    let mut out = IndexCombo::zero();
    for (k, v) in combo.terms {
        let mut parts = Vec::with_capacity(k.parts.len() + 1);
        parts.push(head);
        parts.extend_from_slice(&k.parts);
        out.add_term(MultiIndex { parts }, v);
    }
    out
}

fn stuffle_parts(a: &[u32], b: &[u32]) -> IndexCombo {
    if a.is_empty() {
        return IndexCombo::from_index(MultiIndex { parts: b.to_vec() });
    }
    if b.is_empty() {
        return IndexCombo::from_index(MultiIndex { parts: a.to_vec() });
    }
    let (x, u) = (a[0], &a[1..]);
    let (y, v) = (b[0], &b[1..]);
    prepend(x, stuffle_parts(u, b))
        + prepend(y, stuffle_parts(a, v))
        + prepend(x + y, stuffle_parts(u, v))
}

/// Stuffle (quasi-shuffle) product of two multi-indices.  Commutative and
/// associative; the empty multi-index is the identity.
pub fn stuffle(a: &MultiIndex, b: &MultiIndex) -> IndexCombo {
    stuffle_parts(a.parts(), b.parts())
}

/// Bilinear extension of [`stuffle`] to combinations.
pub fn stuffle_combo(a: &IndexCombo, b: &IndexCombo) -> IndexCombo {
    let mut out = IndexCombo::zero();
    for (ka, va) in a.terms() {
        for (kb, vb) in b.terms() {
            let prod = stuffle(ka, kb);
            let c = va * vb;
            for (k, v) in prod.terms {
                out.add_term(k, v * &c);
            }
        }
    }
    out
}

/// Circled-star product: add the leading entries and stuffle the tails,
/// `a (*) b = (a_1 + b_1) # (tail(a) * tail(b))`.  Both factors must be
/// nonempty; every resulting term is admissible.
pub fn circledast(a: &MultiIndex, b: &MultiIndex) -> Result<IndexCombo> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyIndex);
    }
    let head = a.parts[0] + b.parts[0];
    Ok(prepend(head, stuffle_parts(&a.parts[1..], &b.parts[1..])))
}

/// Bilinear extension of [`circledast`].
pub fn circledast_combo(a: &IndexCombo, b: &IndexCombo) -> Result<IndexCombo> {
    let mut out = IndexCombo::zero();
    for (ka, va) in a.terms() {
        for (kb, vb) in b.terms() {
            let prod = circledast(ka, kb)?;
            let c = va * vb;
            for (k, v) in prod.terms {
                out.add_term(k, v * &c);
            }
        }
    }
    Ok(out)
}
