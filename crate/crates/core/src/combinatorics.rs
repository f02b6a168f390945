//! Exact binomial coefficients and lexicographic subset ranking.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("integer overflow evaluating {0}")]
    Overflow(&'static str),
    #[error("{num} is not divisible by {den} in {what}")]
    Inexact {
        what: &'static str,
        num: u64,
        den: u64,
    },
}

/// `C(n, r)`, or 0 when `r > n`. Overflow is reported, never wrapped.
pub fn binomial(n: u64, r: u64) -> Result<u64, ArithError> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(ArithError::Overflow("binomial"))?
            / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| ArithError::Overflow("binomial"))
}

pub(crate) fn mul(a: u64, b: u64, what: &'static str) -> Result<u64, ArithError> {
    a.checked_mul(b).ok_or(ArithError::Overflow(what))
}

pub(crate) fn exact_div(num: u64, den: u64, what: &'static str) -> Result<u64, ArithError> {
    if den == 0 || !num.is_multiple_of(den) {
        return Err(ArithError::Inexact { what, num, den });
    }
    Ok(num / den)
}

/// Ceiling of `num / den` for `den > 0`.
pub(crate) fn div_ceil(num: u128, den: u128) -> u128 {
    num.div_ceil(den)
}

/// 1-based position of a sorted subset among all `subset.len()`-subsets of
/// `0..universe` in lexicographic order.
///
/// `subset` must be strictly increasing with every element `< universe`.
pub fn subset_rank(subset: &[usize], universe: usize) -> Result<u64, ArithError> {
    let m = subset.len();
    let mut rank: u64 = 0;
    let mut prev: usize = 0;
    for (pos, &elem) in subset.iter().enumerate() {
        let start = if pos == 0 { 0 } else { prev + 1 };
        // skip every subset whose element at `pos` is smaller than `elem`
        for smaller in start..elem {
            let remaining_slots = (m - pos - 1) as u64;
            let remaining_points = (universe - smaller - 1) as u64;
            rank = rank
                .checked_add(binomial(remaining_points, remaining_slots)?)
                .ok_or(ArithError::Overflow("subset_rank"))?;
        }
        prev = elem;
    }
    Ok(rank + 1)
}

/// Iterator over all `m`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Subsets {
    Subsets {
        n,
        current: if m <= n { Some((0..m).collect()) } else { None },
    }
}

/// Lexicographic enumeration of fixed-size subsets, see [`subsets`].
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let m = out.len();
        let mut next = out.clone();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - m + i {
                next[i] += 1;
                for j in i + 1..m {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// Lexicographic `m`-subsets of an arbitrary ordered slice.
pub fn subsets_of<T: Clone>(items: &[T], m: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    subsets(items.len(), m).map(move |idx| idx.into_iter().map(|i| items[i].clone()).collect())
}
