//! Placement delivery arrays: representation, axiom checking (C1, C2, C3),
//! regularity, transposition and the JSON/CSV file forms.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Rational};

/// A PDA cell: the placement symbol `*` or a delivery integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Star,
    Int(u32),
}

impl Entry {
    pub fn is_star(self) -> bool {
        matches!(self, Entry::Star)
    }

    pub fn as_int(self) -> Option<u32> {
        match self {
            Entry::Star => None,
            Entry::Int(s) => Some(s),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Star => f.write_str("*"),
            Entry::Int(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_int().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Option::<u32>::deserialize(d)? {
            None => Entry::Star,
            Some(s) => Entry::Int(s),
        })
    }
}

#[derive(Debug, Error)]
pub enum PdaError {
    #[error("bad array shape: {0}")]
    Shape(String),
    #[error("malformed PDA document: {0}")]
    Malformed(String),
    #[error("array is not a PDA ({} violation(s))", .0.len())]
    NotAPda(Vec<PdaViolation>),
    #[error("rows carry different numbers of stars; transpose is not a PDA")]
    NonUniformRows,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// A failed PDA condition, with coordinates as `(row, column)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum PdaViolation {
    /// Column star count differs from column 0.
    C1 {
        column: usize,
        stars: usize,
        expected: usize,
    },
    /// Integer labels are not exactly `0..S` (strict checking only).
    C2 { labels: Vec<u32> },
    /// The same integer twice in one row or one column.
    C3a {
        value: u32,
        first: (usize, usize),
        second: (usize, usize),
    },
    /// Equal integers whose cross position is not a star.
    C3b {
        value: u32,
        first: (usize, usize),
        second: (usize, usize),
        cross: (usize, usize),
    },
}

impl fmt::Display for PdaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdaViolation::C1 {
                column,
                stars,
                expected,
            } => write!(
                f,
                "C1: column {column} has {stars} stars, expected {expected}"
            ),
            PdaViolation::C2 { labels } => {
                write!(f, "C2: {} integer labels are not 0..S-1", labels.len())
            }
            PdaViolation::C3a {
                value,
                first,
                second,
            } => write!(
                f,
                "C3(a): {value} at {first:?} and {second:?} shares a row or column"
            ),
            PdaViolation::C3b {
                value,
                first,
                second,
                cross,
            } => write!(
                f,
                "C3(b): {value} at {first:?} and {second:?} but {cross:?} is not a star"
            ),
        }
    }
}

/// How the integers of a verified array are labelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeling {
    /// Exactly `0..S`.
    ZeroBased,
    /// Exactly `1..=S`.
    OneBased,
    /// Distinct but neither of the above.
    Sparse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdaParams {
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "F")]
    pub f: u64,
    #[serde(rename = "Z")]
    pub z: u64,
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "R", serialize_with = "rational::serialize")]
    pub r: Rational,
    pub g: Option<u64>,
    /// Stars per row when every row has the same count.
    pub row_star_count: Option<u64>,
    pub labeling: Labeling,
}

impl fmt::Display for PdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.f, self.z, self.s)?;
        if let Some(g) = self.g {
            write!(f, " g={g}")?;
        }
        Ok(())
    }
}

/// Whether [`verify_pda_with`] insists on `0..S` labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    AnyDistinct,
    ZeroBased,
}

/// An F×K array of entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    rows: usize,
    cols: usize,
    grid: Vec<Entry>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PdaDocument {
    #[serde(rename = "F")]
    f: usize,
    #[serde(rename = "K")]
    k: usize,
    grid: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_labels: Option<Vec<String>>,
}

impl Pda {
    pub fn new(rows: usize, cols: usize, grid: Vec<Entry>) -> Result<Self, PdaError> {
        if rows == 0 || cols == 0 {
            return Err(PdaError::Shape(format!("{rows}x{cols} array is empty")));
        }
        if grid.len() != rows * cols {
            return Err(PdaError::Shape(format!(
                "{} cells for a {rows}x{cols} array",
                grid.len()
            )));
        }
        Ok(Pda {
            rows,
            cols,
            grid,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Entry>>) -> Result<Self, PdaError> {
        let f = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if let Some((j, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(PdaError::Shape(format!(
                "row {j} has {} entries, row 0 has {k}",
                r.len()
            )));
        }
        Pda::new(f, k, rows.into_iter().flatten().collect())
    }

    /// Parses a grid written with `*` for stars and integers otherwise,
    /// one row per line, entries separated by whitespace.
    pub fn parse_text(text: &str) -> Result<Self, PdaError> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|line| {
                line.split_whitespace()
                    .map(|tok| match tok {
                        "*" => Ok(Entry::Star),
                        n => n
                            .parse()
                            .map(Entry::Int)
                            .map_err(|_| PdaError::Malformed(format!("bad entry {tok:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Pda::from_rows(rows)
    }

    pub fn with_labels(mut self, rows: Vec<String>, cols: Vec<String>) -> Self {
        debug_assert_eq!(rows.len(), self.rows);
        debug_assert_eq!(cols.len(), self.cols);
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.row_labels = None;
        self.col_labels = None;
        self
    }

    /// Number of rows (subpacketization F).
    pub fn f(&self) -> usize {
        self.rows
    }
    /// Number of columns (users K).
    pub fn k(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.grid[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, e: Entry) {
        self.grid[row * self.cols + col] = e;
    }

    pub fn row(&self, row: usize) -> &[Entry] {
        &self.grid[row * self.cols..(row + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Entry]> {
        self.grid.chunks(self.cols)
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }
    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn column_stars(&self, col: usize) -> usize {
        (0..self.rows)
            .filter(|&j| self.get(j, col).is_star())
            .count()
    }

    pub fn row_stars(&self, row: usize) -> usize {
        self.row(row).iter().filter(|e| e.is_star()).count()
    }

    /// Positions of every integer, keyed by value.
    pub fn occurrences(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let mut map: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (idx, e) in self.grid.iter().enumerate() {
            if let Entry::Int(s) = e {
                map.entry(*s)
                    .or_default()
                    .push((idx / self.cols, idx % self.cols));
            }
        }
        map
    }

    /// Sub-array made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Pda {
        let grid = (0..self.rows)
            .flat_map(|j| cols.iter().map(move |&c| (j, c)))
            .map(|(j, c)| self.get(j, c))
            .collect();
        let mut out = Pda::new(self.rows, cols.len(), grid).expect("non-empty selection");
        out.row_labels = self.row_labels.clone();
        out.col_labels = self
            .col_labels
            .as_ref()
            .map(|l| cols.iter().map(|&c| l[c].clone()).collect());
        out
    }

    pub fn from_json(json: &str) -> Result<Self, PdaError> {
        let doc: PdaDocument =
            serde_json::from_str(json).map_err(|e| PdaError::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }

    fn from_document(doc: PdaDocument) -> Result<Self, PdaError> {
        if doc.grid.len() != doc.f {
            return Err(PdaError::Shape(format!(
                "F = {} but grid has {} rows",
                doc.f,
                doc.grid.len()
            )));
        }
        let mut p = Pda::from_rows(doc.grid)?;
        if p.cols != doc.k {
            return Err(PdaError::Shape(format!(
                "K = {} but rows have {}",
                doc.k, p.cols
            )));
        }
        if doc.row_labels.as_ref().is_some_and(|l| l.len() != p.rows)
            || doc.col_labels.as_ref().is_some_and(|l| l.len() != p.cols)
        {
            return Err(PdaError::Shape("label count does not match grid".into()));
        }
        p.row_labels = doc.row_labels;
        p.col_labels = doc.col_labels;
        Ok(p)
    }

    /// JSON document with one grid row per line. Parsing the output and
    /// serializing again gives identical bytes.
    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\n  \"F\": {},\n  \"K\": {},\n  \"grid\": [\n",
            self.rows, self.cols
        );
        out.push_str(&json_rows(
            self.rows().map(|r| serde_json::to_string(r).unwrap()),
        ));
        out.push_str("  ]");
        for (key, labels) in [
            ("row_labels", &self.row_labels),
            ("col_labels", &self.col_labels),
        ] {
            if let Some(l) = labels {
                out.push_str(&format!(
                    ",\n  \"{key}\": {}",
                    serde_json::to_string(l).unwrap()
                ));
            }
        }
        out.push_str("\n}\n");
        out
    }

    /// CSV export: one line per row, `*` for stars, no header.
    pub fn to_csv(&self) -> Result<String, PdaError> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for row in self.rows() {
            w.write_record(row.iter().map(Entry::to_string))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| PdaError::Malformed(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub(crate) fn json_rows(rows: impl Iterator<Item = String>) -> String {
    let rows: Vec<String> = rows.map(|r| format!("    {r}")).collect();
    let mut s = rows.join(",\n");
    if !s.is_empty() {
        s.push('\n');
    }
    s
}

impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .grid
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|e| format!("{:>width$}", e.to_string()))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Checks C1–C3 accepting any set of distinct non-negative labels.
pub fn verify_pda(p: &Pda) -> Result<PdaParams, Vec<PdaViolation>> {
    verify_pda_with(p, LabelPolicy::AnyDistinct)
}

pub fn verify_pda_with(p: &Pda, policy: LabelPolicy) -> Result<PdaParams, Vec<PdaViolation>> {
    let mut violations = Vec::new();

    let expected = p.column_stars(0);
    for col in 1..p.k() {
        let stars = p.column_stars(col);
        if stars != expected {
            violations.push(PdaViolation::C1 {
                column: col,
                stars,
                expected,
            });
        }
    }

    let occ = p.occurrences();
    for (&value, positions) in &occ {
        for (a, &first) in positions.iter().enumerate() {
            for &second in &positions[a + 1..] {
                let ((j1, k1), (j2, k2)) = (first, second);
                if j1 == j2 || k1 == k2 {
                    violations.push(PdaViolation::C3a {
                        value,
                        first,
                        second,
                    });
                    continue;
                }
                for cross in [(j1, k2), (j2, k1)] {
                    if !p.get(cross.0, cross.1).is_star() {
                        violations.push(PdaViolation::C3b {
                            value,
                            first,
                            second,
                            cross,
                        });
                    }
                }
            }
        }
    }

    let labels: Vec<u32> = occ.keys().copied().collect();
    let labeling = labeling_of(&labels);
    if policy == LabelPolicy::ZeroBased && labeling != Labeling::ZeroBased {
        violations.push(PdaViolation::C2 {
            labels: labels.clone(),
        });
    }

    if !violations.is_empty() {
        return Err(violations);
    }

    let f = p.f() as u64;
    let s = labels.len() as u64;
    let row_counts: Vec<usize> = (0..p.f()).map(|j| p.row_stars(j)).collect();
    let row_star_count = row_counts
        .iter()
        .all(|&c| c == row_counts[0])
        .then_some(row_counts[0] as u64);
    Ok(PdaParams {
        k: p.k() as u64,
        f,
        z: expected as u64,
        s,
        r: Rational::new(s, f),
        g: multiplicity(&occ),
        row_star_count,
        labeling,
    })
}

fn labeling_of(sorted: &[u32]) -> Labeling {
    let contiguous_from = |base: u32| {
        sorted
            .iter()
            .enumerate()
            .all(|(i, &s)| u64::from(s) == u64::from(base) + i as u64)
    };
    if contiguous_from(0) {
        Labeling::ZeroBased
    } else if contiguous_from(1) {
        Labeling::OneBased
    } else {
        Labeling::Sparse
    }
}

fn multiplicity(occ: &BTreeMap<u32, Vec<(usize, usize)>>) -> Option<u64> {
    let mut counts = occ.values().map(Vec::len);
    let first = counts.next()?;
    counts.all(|c| c == first).then_some(first as u64)
}

/// `g` when every integer occurs exactly `g` times.
pub fn regularity(p: &Pda) -> Option<u64> {
    multiplicity(&p.occurrences())
}

/// Transposes a PDA whose rows all carry the same number of stars. The
/// result is an `(F, K, K·Z/F, S)` PDA.
pub fn transpose(p: &Pda) -> Result<Pda, PdaError> {
    let params = verify_pda(p).map_err(PdaError::NotAPda)?;
    if params.row_star_count.is_none() {
        return Err(PdaError::NonUniformRows);
    }
    let grid = (0..p.k())
        .flat_map(|c| (0..p.f()).map(move |j| (j, c)))
        .map(|(j, c)| p.get(j, c))
        .collect();
    let mut out = Pda::new(p.k(), p.f(), grid)?;
    out.row_labels = p.col_labels.clone();
    out.col_labels = p.row_labels.clone();
    Ok(out)
}

/// Relabels integers to `0..S` preserving their ascending order.
pub fn normalize(p: &Pda) -> Pda {
    let remap: BTreeMap<u32, u32> = p
        .occurrences()
        .keys()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let mut out = p.clone();
    for e in &mut out.grid {
        if let Entry::Int(s) = e {
            *s = remap[s];
        }
    }
    out
}
