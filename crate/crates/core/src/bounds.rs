//! Lower bounds on the number of integers S of a (K,F,Z,S) PDA and the
//! classification of a PDA against them. All arithmetic is exact.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::div_ceil;
use crate::pda::{verify_pda, Pda, PdaViolation};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("bounds need 0 < Z < F and K >= 1 (got K={k}, F={f}, Z={z})")]
    OutOfRange { k: u64, f: u64, z: u64 },
    #[error("array is not a PDA ({} violation(s))", .0.len())]
    NotAPda(Vec<PdaViolation>),
}

fn check(k: u64, f: u64, z: u64) -> Result<(), BoundsError> {
    if k == 0 || z == 0 || z >= f {
        return Err(BoundsError::OutOfRange { k, f, z });
    }
    Ok(())
}

/// Nested-ceiling bound: the first term is ⌈(F−Z)K/F⌉ and each following
/// term is ⌈(F−Z−j)/(F−j) · previous⌉, for F−Z terms in total.
pub fn cheng_bound(k: u64, f: u64, z: u64) -> Result<u64, BoundsError> {
    check(k, f, z)?;
    let (k, f, z) = (u128::from(k), u128::from(f), u128::from(z));
    let mut term = div_ceil((f - z) * k, f);
    let mut total = term;
    for j in 1..(f - z) {
        term = div_ceil((f - z - j) * term, f - j);
        total += term;
    }
    Ok(u64::try_from(total).expect("bound is at most K(F-Z)"))
}

/// ⌈K(F−Z)/(Z+1)⌉.
pub fn wei_bound(k: u64, f: u64, z: u64) -> Result<u64, BoundsError> {
    check(k, f, z)?;
    let (k, f, z) = (u128::from(k), u128::from(f), u128::from(z));
    Ok(u64::try_from(div_ceil(k * (f - z), z + 1)).expect("bound is at most K(F-Z)"))
}

/// Necessary condition for [`wei_bound`] to be met with equality:
/// K > (Z+1)(F−Z−1)/(F−Z).
pub fn wei_equality_possible(k: u64, f: u64, z: u64) -> Result<bool, BoundsError> {
    check(k, f, z)?;
    let (k, f, z) = (u128::from(k), u128::from(f), u128::from(z));
    Ok(k * (f - z) > (z + 1) * (f - z - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// S meets the ⌈K(F−Z)/(Z+1)⌉ bound.
    Rpda,
    /// S meets the nested-ceiling bound.
    MinimalLoad,
    /// g-regular and S is the least divisor of K(F−Z) not below the
    /// nested-ceiling bound. Non-regular arrays might still do better.
    OptimalRegular,
    BoundGap,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Rpda => "rpda",
            Classification::MinimalLoad => "minimal_load",
            Classification::OptimalRegular => "optimal_regular",
            Classification::BoundGap => "bound_gap",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub s: u64,
    pub cheng: u64,
    pub wei: u64,
    pub wei_equality_possible: bool,
    pub classification: Classification,
    /// Set for `optimal_regular`, which says nothing about irregular PDAs.
    pub caveat: bool,
}

/// Classifies a PDA by comparing its S with both lower bounds.
pub fn classify(p: &Pda) -> Result<BoundReport, BoundsError> {
    let params = verify_pda(p).map_err(BoundsError::NotAPda)?;
    let (k, f, z, s) = (params.k, params.f, params.z, params.s);
    let cheng = cheng_bound(k, f, z)?;
    let wei = wei_bound(k, f, z)?;
    let classification = if s == wei {
        Classification::Rpda
    } else if s == cheng {
        Classification::MinimalLoad
    } else if params.g.is_some() && Some(s) == least_divisor_at_least(k * (f - z), cheng) {
        Classification::OptimalRegular
    } else {
        Classification::BoundGap
    };
    Ok(BoundReport {
        s,
        cheng,
        wei,
        wei_equality_possible: wei_equality_possible(k, f, z)?,
        classification,
        caveat: classification == Classification::OptimalRegular,
    })
}

/// Smallest divisor of `n` that is `>= floor`.
pub fn least_divisor_at_least(n: u64, floor: u64) -> Option<u64> {
    (floor.max(1)..=n).find(|d| n.is_multiple_of(*d))
}
