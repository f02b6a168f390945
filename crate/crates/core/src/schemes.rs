//! PDA constructions from t-designs.
//!
//! Scheme I: rows are points `x`, columns are pairs `(A, B)` with `A` a block
//! and `B` a `(k−i)`-subset of `A`. The cell is a star unless `x ∈ A \ B`, in
//! which case it carries the `(i−1)`-subset `A \ (B ∪ {x})` tagged with its
//! occurrence index α within the row.
//!
//! Scheme II: rows are `i`-subsets `X`, columns are pairs `(A, Y)` with `Y` an
//! `(i+1)`-subset of `A`. The cell is a star unless `X ⊂ Y`, in which case it
//! carries the point `Y \ X` tagged with α.
//!
//! Columns are ordered by block (document order) and then lexicographically
//! by subset. α counts earlier occurrences of the same symbol scanning the
//! row left to right. A symbol `(T, α)` becomes the integer
//! `(α−1)·C(v, |T|) + rank(T)` with the 1-based lexicographic rank, and the
//! result is shifted to `0..S` unless normalization is disabled.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::{binomial, mul, subset_rank, subsets, ArithError};
use crate::design::{lambda_s, verify_design, Design, DesignError};
use crate::pda::{normalize, Entry, Pda};
use crate::rational::{self, Rational};

pub const DEFAULT_CELL_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("i = {i} is outside {min}..={max} for scheme {scheme}")]
    IndexOutOfRange {
        scheme: Scheme,
        i: u64,
        min: u64,
        max: u64,
    },
    #[error("design {0:?} fails its axioms")]
    InvalidDesign(String),
    #[error("array would have {cells} cells, over the budget of {budget}")]
    CellBudget { cells: u64, budget: u64 },
    #[error("{0} integers do not fit the entry type")]
    TooManyIntegers(u64),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    I,
    II,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::I => "I",
            Scheme::II => "II",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub i: u64,
}

impl SchemeSpec {
    pub fn new(scheme: Scheme, i: u64) -> Self {
        SchemeSpec { scheme, i }
    }

    /// Legal range of `i` for a design of strength `t`.
    pub fn index_range(scheme: Scheme, t: u64) -> (u64, u64) {
        match scheme {
            Scheme::I => (1, t),
            Scheme::II => (1, t.saturating_sub(1)),
        }
    }

    fn check(&self, d: &Design) -> Result<(), SchemeError> {
        let (min, max) = Self::index_range(self.scheme, d.t());
        if self.i < min || self.i > max {
            return Err(SchemeError::IndexOutOfRange {
                scheme: self.scheme,
                i: self.i,
                min,
                max,
            });
        }
        Ok(())
    }
}

/// Closed-form parameters of a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedParams {
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "F")]
    pub f: u64,
    #[serde(rename = "Z")]
    pub z: u64,
    #[serde(rename = "S")]
    pub s: u64,
    pub g: u64,
    #[serde(serialize_with = "rational::serialize")]
    pub m_over_n: Rational,
    #[serde(rename = "R", serialize_with = "rational::serialize")]
    pub r: Rational,
}

impl PredictedParams {
    fn new(k: u64, f: u64, z: u64, s: u64, g: u64) -> Self {
        PredictedParams {
            k,
            f,
            z,
            s,
            g,
            m_over_n: Rational::new(z, f),
            r: Rational::new(s, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Shift integers to `0..S`.
    pub normalize: bool,
    /// Largest F·K the construction will allocate.
    pub cell_budget: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            normalize: true,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

/// A constructed array with the bookkeeping the hierarchical lift needs.
#[derive(Debug, Clone)]
pub struct Construction {
    pub pda: Pda,
    /// Block index of every column.
    pub column_blocks: Vec<usize>,
    /// Largest occurrence index α seen in any row.
    pub max_alpha: u64,
}

pub fn predicted_params(d: &Design, spec: SchemeSpec) -> Result<PredictedParams, SchemeError> {
    spec.check(d)?;
    let (v, k, i) = (d.v(), d.k(), spec.i);
    let b = lambda_s(d, 0)?;
    Ok(match spec.scheme {
        Scheme::I => PredictedParams::new(
            mul(b, binomial(k, i)?, "K")?,
            v,
            v - i,
            mul(binomial(v, i - 1)?, lambda_s(d, i)?, "S")?,
            v - i + 1,
        ),
        Scheme::II => {
            let f = binomial(v, i)?;
            PredictedParams::new(
                mul(b, binomial(k, i + 1)?, "K")?,
                f,
                f - (i + 1),
                mul(v, lambda_s(d, i + 1)?, "S")?,
                binomial(v - 1, i)?,
            )
        }
    })
}

pub fn scheme1_params(d: &Design, i: u64) -> Result<PredictedParams, SchemeError> {
    predicted_params(d, SchemeSpec::new(Scheme::I, i))
}

pub fn scheme2_params(d: &Design, i: u64) -> Result<PredictedParams, SchemeError> {
    predicted_params(d, SchemeSpec::new(Scheme::II, i))
}

pub fn construct(
    d: &Design,
    spec: SchemeSpec,
    opts: ConstructOptions,
) -> Result<Construction, SchemeError> {
    let predicted = predicted_params(d, spec)?;
    if !verify_design(d).valid {
        return Err(SchemeError::InvalidDesign(d.name().to_string()));
    }
    let cells = mul(predicted.f, predicted.k, "cell count")?;
    if cells > opts.cell_budget {
        return Err(SchemeError::CellBudget {
            cells,
            budget: opts.cell_budget,
        });
    }
    // 1-based labels reach at most S
    if predicted.s > u64::from(u32::MAX) {
        return Err(SchemeError::TooManyIntegers(predicted.s));
    }
    let mut built = match spec.scheme {
        Scheme::I => build_scheme1(d, spec.i)?,
        Scheme::II => build_scheme2(d, spec.i)?,
    };
    if opts.normalize {
        built.pda = normalize(&built.pda);
    }
    Ok(built)
}

pub fn scheme1_construct(d: &Design, i: u64) -> Result<Construction, SchemeError> {
    construct(
        d,
        SchemeSpec::new(Scheme::I, i),
        ConstructOptions::default(),
    )
}

pub fn scheme2_construct(d: &Design, i: u64) -> Result<Construction, SchemeError> {
    construct(
        d,
        SchemeSpec::new(Scheme::II, i),
        ConstructOptions::default(),
    )
}

fn build_scheme1(d: &Design, i: u64) -> Result<Construction, SchemeError> {
    let v = d.v() as usize;
    let i = i as usize;
    let symbols = binomial(d.v(), (i - 1) as u64)?;

    let mut columns = Vec::new();
    for (bi, block) in d.blocks().iter().enumerate() {
        for idx in subsets(block.len(), block.len() - i) {
            let removed: Vec<usize> = idx.iter().map(|&j| block[j]).collect();
            columns.push((bi, removed));
        }
    }

    let cols = columns.len();
    let mut grid = vec![Entry::Star; v * cols];
    // occurrences so far of symbol `rank` in row `x`: alpha[x * symbols + rank - 1]
    let mut alpha = vec![0u64; v * symbols as usize];
    let mut max_alpha = 0;
    for (c, (bi, removed)) in columns.iter().enumerate() {
        let block = &d.blocks()[*bi];
        let kept: Vec<usize> = block
            .iter()
            .copied()
            .filter(|p| !removed.contains(p))
            .collect();
        for &x in &kept {
            let rest: Vec<usize> = kept.iter().copied().filter(|&p| p != x).collect();
            let rank = subset_rank(&rest, v)?;
            let slot = &mut alpha[x * symbols as usize + (rank - 1) as usize];
            *slot += 1;
            max_alpha = max_alpha.max(*slot);
            let value = (*slot - 1) * symbols + rank;
            grid[x * cols + c] = Entry::Int(value as u32);
        }
    }

    let row_labels = (0..v).map(|x| format!("x={}", d.points()[x])).collect();
    let col_labels = columns
        .iter()
        .map(|(bi, removed)| {
            format!(
                "(A={},B={})",
                d.subset_string(&d.blocks()[*bi]),
                d.subset_string(removed)
            )
        })
        .collect();
    Ok(Construction {
        pda: Pda::new(v, cols, grid)
            .map_err(|e| SchemeError::InvalidDesign(e.to_string()))?
            .with_labels(row_labels, col_labels),
        column_blocks: columns.iter().map(|(bi, _)| *bi).collect(),
        max_alpha,
    })
}

fn build_scheme2(d: &Design, i: u64) -> Result<Construction, SchemeError> {
    let v = d.v() as usize;
    let i = i as usize;
    let rows = binomial(d.v(), i as u64)? as usize;

    let mut columns = Vec::new();
    for (bi, block) in d.blocks().iter().enumerate() {
        for idx in subsets(block.len(), i + 1) {
            columns.push((bi, idx.iter().map(|&j| block[j]).collect::<Vec<_>>()));
        }
    }

    let cols = columns.len();
    let mut grid = vec![Entry::Star; rows * cols];
    let mut alpha = vec![0u64; rows * v];
    let mut max_alpha = 0;
    for (c, (_, y)) in columns.iter().enumerate() {
        // the i-subsets of Y are Y minus one point
        for &point in y {
            let x: Vec<usize> = y.iter().copied().filter(|&p| p != point).collect();
            let row = (subset_rank(&x, v)? - 1) as usize;
            let slot = &mut alpha[row * v + point];
            *slot += 1;
            max_alpha = max_alpha.max(*slot);
            let value = (*slot - 1) * v as u64 + point as u64 + 1;
            grid[row * cols + c] = Entry::Int(value as u32);
        }
    }

    let row_labels = subsets(v, i)
        .map(|x| format!("X={}", d.subset_string(&x)))
        .collect();
    let col_labels = columns
        .iter()
        .map(|(bi, y)| {
            format!(
                "(A={},Y={})",
                d.subset_string(&d.blocks()[*bi]),
                d.subset_string(y)
            )
        })
        .collect();
    Ok(Construction {
        pda: Pda::new(rows, cols, grid)
            .map_err(|e| SchemeError::InvalidDesign(e.to_string()))?
            .with_labels(row_labels, col_labels),
        column_blocks: columns.iter().map(|(bi, _)| *bi).collect(),
        max_alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{catalog, catalog_design};
    use crate::pda::{regularity, transpose, verify_pda, Labeling};

    fn fano() -> Design {
        catalog_design("fano_2_7_3_1").unwrap()
    }
    fn d3() -> Design {
        catalog_design("des_3_8_4_1").unwrap()
    }

    fn kfzs(p: &PredictedParams) -> (u64, u64, u64, u64) {
        (p.k, p.f, p.z, p.s)
    }

    #[test]
    fn scheme1_closed_forms() {
        let p = scheme1_params(&fano(), 1).unwrap();
        assert_eq!((kfzs(&p), p.g), ((21, 7, 6, 3), 7));
        let p = scheme1_params(&d3(), 2).unwrap();
        assert_eq!((kfzs(&p), p.g), ((84, 8, 6, 24), 7));
        let p = scheme1_params(&catalog_design("des_2_6_3_2").unwrap(), 1).unwrap();
        assert_eq!((kfzs(&p), p.g), ((30, 6, 5, 5), 6));
    }

    #[test]
    fn scheme2_closed_forms() {
        let p = scheme2_params(&d3(), 2).unwrap();
        assert_eq!(kfzs(&p), (56, 28, 25, 8));
        let p = scheme2_params(&fano(), 1).unwrap();
        assert_eq!((kfzs(&p), p.g), ((21, 7, 5, 7), 6));
        // λ = 1, i = t−1: (C(v,t), C(v,t−1), C(v,t−1)−t, v)
        for d in [fano(), d3()] {
            let t = d.t();
            let p = scheme2_params(&d, t - 1).unwrap();
            let ct1 = binomial(d.v(), t - 1).unwrap();
            assert_eq!(kfzs(&p), (binomial(d.v(), t).unwrap(), ct1, ct1 - t, d.v()));
        }
    }

    #[test]
    fn index_range_is_enforced() {
        assert!(matches!(
            scheme1_params(&fano(), 0),
            Err(SchemeError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            scheme1_construct(&fano(), 3),
            Err(SchemeError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            scheme2_construct(&fano(), 2),
            Err(SchemeError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cell_budget_is_enforced() {
        let opts = ConstructOptions {
            normalize: true,
            cell_budget: 100,
        };
        assert!(matches!(
            construct(&d3(), SchemeSpec::new(Scheme::I, 2), opts),
            Err(SchemeError::CellBudget { cells: 672, .. })
        ));
    }

    #[test]
    fn invalid_design_is_refused() {
        let mut doc = fano().to_document();
        doc.blocks[6][2] = crate::design::Label::Int(5);
        let broken = Design::from_document(&doc).unwrap();
        assert!(matches!(
            scheme1_construct(&broken, 1),
            Err(SchemeError::InvalidDesign(_))
        ));
    }

    #[test]
    fn every_catalog_construction_matches_prediction() {
        for d in catalog() {
            for scheme in [Scheme::I, Scheme::II] {
                let (lo, hi) = SchemeSpec::index_range(scheme, d.t());
                for i in lo..=hi {
                    let spec = SchemeSpec::new(scheme, i);
                    let pred = predicted_params(&d, spec).unwrap();
                    let built = construct(&d, spec, ConstructOptions::default()).unwrap();
                    let got = verify_pda(&built.pda)
                        .unwrap_or_else(|v| panic!("{} {spec:?}: {:?}", d.name(), v));
                    assert_eq!(
                        (got.k, got.f, got.z, got.s),
                        kfzs(&pred),
                        "{} {spec:?}",
                        d.name()
                    );
                    assert_eq!(got.g, Some(pred.g));
                    assert_eq!(got.labeling, Labeling::ZeroBased);
                    assert!(got.row_star_count.is_some());
                    let alpha_cap = match scheme {
                        Scheme::I => lambda_s(&d, i).unwrap(),
                        Scheme::II => lambda_s(&d, i + 1).unwrap(),
                    };
                    assert_eq!(built.max_alpha, alpha_cap);
                    let t = transpose(&built.pda).unwrap();
                    let tp = verify_pda(&t).unwrap();
                    assert_eq!(tp.s, got.s);
                    assert_eq!(tp.z * got.f, got.k * got.z);
                }
            }
        }
    }

    #[test]
    fn unnormalized_labels_are_one_based() {
        let opts = ConstructOptions {
            normalize: false,
            ..Default::default()
        };
        let built = construct(&d3(), SchemeSpec::new(Scheme::I, 2), opts).unwrap();
        let params = verify_pda(&built.pda).unwrap();
        assert_eq!(params.labeling, Labeling::OneBased);
        // first column is (A=1256, B=12): rows 5 and 6 carry 6_1 and 5_1
        assert_eq!(built.pda.col_labels().unwrap()[0], "(A=1256,B=12)");
        assert_eq!(built.pda.get(4, 0), Entry::Int(6));
        assert_eq!(built.pda.get(5, 0), Entry::Int(5));
        assert_eq!(built.pda.get(0, 0), Entry::Star);
    }

    #[test]
    fn fano_scheme1_is_seven_regular() {
        let built = scheme1_construct(&fano(), 1).unwrap();
        assert_eq!(regularity(&built.pda), Some(7));
        let occ = built.pda.occurrences();
        assert_eq!(occ.len(), 3);
        assert!(occ.values().all(|v| v.len() == 7));
    }

    #[test]
    fn scheme2_first_index_equals_scheme1_second_index() {
        for d in catalog() {
            if d.t() < 2 {
                continue;
            }
            assert_eq!(
                scheme2_params(&d, 1).unwrap(),
                scheme1_params(&d, 2).unwrap()
            );
        }
    }
}
