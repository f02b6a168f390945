//! Combinatorial t-(v,k,λ) designs: loading, axiom verification and the
//! built-in catalog.
//!
//! Point labels are canonicalized to ranks `0..v` by sorted label order.
//! Blocks keep the order in which they were listed; every construction in
//! this crate indexes columns by that order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, exact_div, mul, subset_rank, subsets, ArithError};

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("malformed design document: {0}")]
    Malformed(String),
    #[error("block {block} lists point {label} more than once")]
    DuplicatePoint { block: usize, label: Label },
    #[error("block {block} uses point {label} which is not in the point set")]
    UnknownPoint { block: usize, label: Label },
    #[error("s = {s} is outside 0..={t}")]
    StrengthOutOfRange { s: u64, t: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("unknown catalog design {0:?}")]
    UnknownCatalog(String),
}

/// External point label; documents may use integers or strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => f.write_str(s),
        }
    }
}

/// JSON shape of a design file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignDocument {
    pub name: String,
    pub v: u64,
    pub k: u64,
    pub t: u64,
    pub lambda: u64,
    pub points: Vec<Label>,
    pub blocks: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    name: String,
    v: u64,
    k: u64,
    t: u64,
    lambda: u64,
    points: Vec<Label>,
    blocks: Vec<Vec<usize>>,
}

/// One failed design axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DesignViolation {
    /// A t-subset covered by the wrong number of blocks.
    Coverage {
        subset: Vec<Label>,
        count: u64,
    },
    BlockSize {
        block: usize,
        size: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    pub valid: bool,
    pub violations: Vec<DesignViolation>,
    pub is_simple: bool,
    pub b: u64,
}

impl Design {
    /// Builds a design from a parsed document. Axioms are not checked here;
    /// call [`verify_design`] for that.
    pub fn from_document(doc: &DesignDocument) -> Result<Self, DesignError> {
        let DesignDocument {
            v, k, t, lambda, ..
        } = *doc;
        if doc.points.len() as u64 != v {
            return Err(DesignError::Malformed(format!(
                "v = {v} but {} points listed",
                doc.points.len()
            )));
        }
        if !(v > k && k >= t && t >= 1) {
            return Err(DesignError::Malformed(format!(
                "parameters must satisfy v > k >= t >= 1 (got v={v}, k={k}, t={t})"
            )));
        }
        if lambda < 1 {
            return Err(DesignError::Malformed("lambda must be at least 1".into()));
        }
        let mut points = doc.points.clone();
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(DesignError::Malformed(
                "point labels are not distinct".into(),
            ));
        }
        let index: HashMap<&Label, usize> =
            points.iter().enumerate().map(|(i, l)| (l, i)).collect();

        let mut blocks = Vec::with_capacity(doc.blocks.len());
        for (bi, block) in doc.blocks.iter().enumerate() {
            let mut ranks = Vec::with_capacity(block.len());
            for label in block {
                let r = *index.get(label).ok_or_else(|| DesignError::UnknownPoint {
                    block: bi,
                    label: label.clone(),
                })?;
                if ranks.contains(&r) {
                    return Err(DesignError::DuplicatePoint {
                        block: bi,
                        label: label.clone(),
                    });
                }
                ranks.push(r);
            }
            ranks.sort_unstable();
            blocks.push(ranks);
        }
        Ok(Design {
            name: doc.name.clone(),
            v,
            k,
            t,
            lambda,
            points,
            blocks,
        })
    }

    pub fn to_document(&self) -> DesignDocument {
        DesignDocument {
            name: self.name.clone(),
            v: self.v,
            k: self.k,
            t: self.t,
            lambda: self.lambda,
            points: self.points.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&r| self.points[r].clone()).collect())
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn v(&self) -> u64 {
        self.v
    }
    pub fn k(&self) -> u64 {
        self.k
    }
    pub fn t(&self) -> u64 {
        self.t
    }
    pub fn lambda(&self) -> u64 {
        self.lambda
    }
    /// Point labels in canonical (sorted) order; index = point rank.
    pub fn points(&self) -> &[Label] {
        &self.points
    }
    /// Blocks as sorted point ranks, in document order.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
    pub fn b(&self) -> u64 {
        self.blocks.len() as u64
    }

    pub fn is_simple(&self) -> bool {
        let distinct: BTreeSet<&Vec<usize>> = self.blocks.iter().collect();
        distinct.len() == self.blocks.len()
    }

    /// Renders a set of point ranks the way block listings are usually
    /// written: `1256` when every label is a single character, `{a,b}`
    /// otherwise.
    pub fn subset_string(&self, ranks: &[usize]) -> String {
        let labels: Vec<String> = ranks.iter().map(|&r| self.points[r].to_string()).collect();
        if self
            .points
            .iter()
            .all(|l| l.to_string().chars().count() == 1)
        {
            labels.concat()
        } else {
            format!("{{{}}}", labels.join(","))
        }
    }
}

/// Parses a JSON design document.
pub fn load_design(json: &str) -> Result<Design, DesignError> {
    let doc: DesignDocument =
        serde_json::from_str(json).map_err(|e| DesignError::Malformed(e.to_string()))?;
    Design::from_document(&doc)
}

/// Exhaustively counts block coverage of every t-subset of points.
pub fn verify_design(d: &Design) -> DesignReport {
    let v = d.v as usize;
    let t = d.t as usize;
    let mut violations = Vec::new();
    for (bi, block) in d.blocks.iter().enumerate() {
        if block.len() as u64 != d.k {
            violations.push(DesignViolation::BlockSize {
                block: bi,
                size: block.len(),
            });
        }
    }

    // C(v,t) fits comfortably for any design we can also construct from.
    let slots = binomial(d.v, d.t).unwrap_or(u64::MAX) as usize;
    let mut counts = vec![0u64; slots];
    for block in &d.blocks {
        for sub in subsets(block.len(), t) {
            let pts: Vec<usize> = sub.iter().map(|&i| block[i]).collect();
            let r = subset_rank(&pts, v).expect("rank of a t-subset fits in u64");
            counts[(r - 1) as usize] += 1;
        }
    }
    for (sub, &count) in subsets(v, t).zip(counts.iter()) {
        if count != d.lambda {
            violations.push(DesignViolation::Coverage {
                subset: sub.iter().map(|&r| d.points[r].clone()).collect(),
                count,
            });
        }
    }

    DesignReport {
        valid: violations.is_empty(),
        violations,
        is_simple: d.is_simple(),
        b: d.b(),
    }
}

/// Number of blocks containing any fixed s-subset of points,
/// `λ·C(v−s, t−s)/C(k−s, t−s)`.
pub fn lambda_s(d: &Design, s: u64) -> Result<u64, DesignError> {
    if s > d.t {
        return Err(DesignError::StrengthOutOfRange { s, t: d.t });
    }
    let num = mul(d.lambda, binomial(d.v - s, d.t - s)?, "lambda_s")?;
    let den = binomial(d.k - s, d.t - s)?;
    Ok(exact_div(num, den, "lambda_s")?)
}

fn int_design(name: &str, v: u64, k: u64, t: u64, lambda: u64, blocks: &[u32]) -> Design {
    let doc = DesignDocument {
        name: name.to_string(),
        v,
        k,
        t,
        lambda,
        points: (1..=v as i64).map(Label::Int).collect(),
        blocks: blocks
            .iter()
            .map(|b| {
                b.to_string()
                    .chars()
                    .map(|c| Label::Int(i64::from(c.to_digit(10).unwrap())))
                    .collect()
            })
            .collect(),
    };
    Design::from_document(&doc).expect("catalog designs are well formed")
}

/// Built-in designs, listed with their original block order.
pub fn catalog() -> Vec<Design> {
    vec![
        int_design(
            "fano_2_7_3_1",
            7,
            3,
            2,
            1,
            &[127, 145, 136, 467, 256, 357, 234],
        ),
        int_design(
            "des_2_6_3_2",
            6,
            3,
            2,
            2,
            &[124, 126, 134, 135, 156, 235, 236, 245, 346, 456],
        ),
        int_design(
            "des_3_8_4_1",
            8,
            4,
            3,
            1,
            &[
                1256, 1278, 1357, 1368, 1458, 1467, 1234, 3456, 3478, 2457, 2468, 2358, 2367, 5678,
            ],
        ),
    ]
}

pub fn catalog_design(name: &str) -> Result<Design, DesignError> {
    catalog()
        .into_iter()
        .find(|d| d.name == name)
        .ok_or_else(|| DesignError::UnknownCatalog(name.to_string()))
}
