//! Hierarchical placement delivery arrays.
//!
//! An HPDA pairs a mirror placement array `Q0` (F×K1, stars and nulls) with
//! one F×K2 user array per mirror. The integer sets `S_k1` are always read
//! off the user arrays; only `Sm` is stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::combinatorics::{binomial, mul, ArithError};
use crate::design::{lambda_s, Design, DesignError};
use crate::pda::{json_rows, verify_pda, Entry, Pda, PdaError, PdaViolation};
use crate::rational::{self, Rational};
use crate::schemes::{construct, ConstructOptions, Construction, Scheme, SchemeError, SchemeSpec};

#[derive(Debug, Error)]
pub enum HpdaError {
    #[error("bad HPDA shape: {0}")]
    Shape(String),
    #[error("malformed HPDA document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Pda(#[from] PdaError),
}

/// A cell of the mirror placement array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MirrorEntry {
    Star,
    Null,
}

impl MirrorEntry {
    pub fn is_star(self) -> bool {
        self == MirrorEntry::Star
    }
}

impl Serialize for MirrorEntry {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MirrorEntry::Star => s.serialize_str("*"),
            MirrorEntry::Null => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for MirrorEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(MirrorEntry::Null),
            Some(s) if s == "*" => Ok(MirrorEntry::Star),
            Some(other) => Err(serde::de::Error::custom(format!(
                "mirror entry must be \"*\" or null, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hpda {
    k1: usize,
    k2: usize,
    f: usize,
    z1: usize,
    z2: usize,
    q0: Vec<MirrorEntry>,
    subs: Vec<Pda>,
    sm: BTreeSet<u32>,
}

#[derive(Serialize, Deserialize)]
struct HpdaDocument {
    #[serde(rename = "K1")]
    k1: usize,
    #[serde(rename = "K2")]
    k2: usize,
    #[serde(rename = "F")]
    f: usize,
    #[serde(rename = "Z1")]
    z1: usize,
    #[serde(rename = "Z2")]
    z2: usize,
    #[serde(rename = "Q0")]
    q0: Vec<Vec<MirrorEntry>>,
    subs: Vec<Vec<Vec<Entry>>>,
    #[serde(rename = "Sm")]
    sm: Vec<u32>,
}

impl Hpda {
    /// Assembles an HPDA after checking that every array has the declared
    /// shape. The B conditions are checked by [`verify_hpda`].
    pub fn new(
        z1: usize,
        z2: usize,
        q0: Vec<Vec<MirrorEntry>>,
        subs: Vec<Pda>,
        sm: BTreeSet<u32>,
    ) -> Result<Self, HpdaError> {
        let f = q0.len();
        let k1 = q0.first().map_or(0, Vec::len);
        if f == 0 || k1 == 0 {
            return Err(HpdaError::Shape("Q0 is empty".into()));
        }
        if q0.iter().any(|r| r.len() != k1) {
            return Err(HpdaError::Shape("Q0 rows differ in length".into()));
        }
        if subs.len() != k1 {
            return Err(HpdaError::Shape(format!(
                "{} user arrays for {k1} mirrors",
                subs.len()
            )));
        }
        let k2 = subs[0].k();
        if let Some((m, _)) = subs
            .iter()
            .enumerate()
            .find(|(_, s)| s.f() != f || s.k() != k2)
        {
            return Err(HpdaError::Shape(format!("user array {m} is not {f}x{k2}")));
        }
        Ok(Hpda {
            k1,
            k2,
            f,
            z1,
            z2,
            q0: q0.into_iter().flatten().collect(),
            subs,
            sm,
        })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }
    pub fn k2(&self) -> usize {
        self.k2
    }
    pub fn f(&self) -> usize {
        self.f
    }
    pub fn z1(&self) -> usize {
        self.z1
    }
    pub fn z2(&self) -> usize {
        self.z2
    }
    pub fn q0(&self, row: usize, mirror: usize) -> MirrorEntry {
        self.q0[row * self.k1 + mirror]
    }
    pub fn subs(&self) -> &[Pda] {
        &self.subs
    }
    pub fn sm(&self) -> &BTreeSet<u32> {
        &self.sm
    }

    /// `S_k1` for every mirror, read from the user arrays.
    pub fn integer_sets(&self) -> Vec<BTreeSet<u32>> {
        self.subs
            .iter()
            .map(|p| p.occurrences().into_keys().collect())
            .collect()
    }

    pub fn from_json(json: &str) -> Result<Self, HpdaError> {
        let doc: HpdaDocument =
            serde_json::from_str(json).map_err(|e| HpdaError::Malformed(e.to_string()))?;
        let subs = doc
            .subs
            .into_iter()
            .map(Pda::from_rows)
            .collect::<Result<Vec<_>, _>>()?;
        let sm: BTreeSet<u32> = doc.sm.iter().copied().collect();
        if sm.len() != doc.sm.len() {
            return Err(HpdaError::Malformed("Sm lists an integer twice".into()));
        }
        let q = Hpda::new(doc.z1, doc.z2, doc.q0, subs, sm)?;
        if (q.k1, q.k2, q.f) != (doc.k1, doc.k2, doc.f) {
            return Err(HpdaError::Shape(format!(
                "declared (K1,K2,F)=({},{},{}) but arrays give ({},{},{})",
                doc.k1, doc.k2, doc.f, q.k1, q.k2, q.f
            )));
        }
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        let mut out = format!(
            "{{\n  \"K1\": {},\n  \"K2\": {},\n  \"F\": {},\n  \"Z1\": {},\n  \"Z2\": {},\n  \"Q0\": [\n",
            self.k1, self.k2, self.f, self.z1, self.z2
        );
        out.push_str(&json_rows(
            self.q0
                .chunks(self.k1)
                .map(|r| serde_json::to_string(r).unwrap()),
        ));
        out.push_str("  ],\n  \"subs\": [\n");
        let subs: Vec<String> = self
            .subs
            .iter()
            .map(|p| {
                let rows: Vec<String> = p
                    .rows()
                    .map(|r| format!("      {}", serde_json::to_string(r).unwrap()))
                    .collect();
                format!("    [\n{}\n    ]", rows.join(",\n"))
            })
            .collect();
        out.push_str(&subs.join(",\n"));
        out.push_str(&format!(
            "\n  ],\n  \"Sm\": {}\n}}\n",
            serde_json::to_string(&self.sm).unwrap()
        ));
        out
    }
}

/// A failed HPDA condition. User-array cells are `(mirror, row, column)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum HpdaViolation {
    B1 {
        mirror: usize,
        stars: usize,
        expected: usize,
    },
    /// User array is not a PDA.
    B2 {
        mirror: usize,
        violation: PdaViolation,
    },
    /// User array columns do not carry Z2 stars.
    B2Stars {
        mirror: usize,
        stars: usize,
        expected: usize,
    },
    /// An Sm integer occurs in no user array, or in several.
    B3Placement { value: u32, mirrors: Vec<usize> },
    /// An Sm integer sits in a row the mirror does not cache.
    B3Uncached {
        value: u32,
        mirror: usize,
        row: usize,
    },
    B4 {
        value: u32,
        first: (usize, usize, usize),
        second: (usize, usize, usize),
        cell: (usize, usize, usize),
    },
}

impl fmt::Display for HpdaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HpdaViolation::B1 {
                mirror,
                stars,
                expected,
            } => write!(f, "B1: mirror column {mirror} has {stars} stars, expected {expected}"),
            HpdaViolation::B2 { mirror, violation } => write!(f, "B2: mirror {mirror}: {violation}"),
            HpdaViolation::B2Stars {
                mirror,
                stars,
                expected,
            } => write!(f, "B2: mirror {mirror} user columns have {stars} stars, expected {expected}"),
            HpdaViolation::B3Placement { value, mirrors } => {
                write!(f, "B3: Sm integer {value} occurs under mirrors {mirrors:?}")
            }
            HpdaViolation::B3Uncached { value, mirror, row } => write!(
                f,
                "B3: Sm integer {value} at mirror {mirror} row {row} but Q0 is null there"
            ),
            HpdaViolation::B4 {
                value,
                first,
                second,
                cell,
            } => write!(
                f,
                "B4: {value} at {first:?} and {second:?}; {cell:?} is an integer but its mirror does not cache the row"
            ),
        }
    }
}

/// Checks B1–B4 exhaustively.
pub fn verify_hpda(q: &Hpda) -> Result<(), Vec<HpdaViolation>> {
    let mut violations = Vec::new();

    for mirror in 0..q.k1 {
        let stars = (0..q.f).filter(|&j| q.q0(j, mirror).is_star()).count();
        if stars != q.z1 {
            violations.push(HpdaViolation::B1 {
                mirror,
                stars,
                expected: q.z1,
            });
        }
    }

    for (mirror, sub) in q.subs.iter().enumerate() {
        match verify_pda(sub) {
            Ok(params) if params.z as usize != q.z2 => violations.push(HpdaViolation::B2Stars {
                mirror,
                stars: params.z as usize,
                expected: q.z2,
            }),
            Ok(_) => {}
            Err(vs) => violations.extend(
                vs.into_iter()
                    .map(|violation| HpdaViolation::B2 { mirror, violation }),
            ),
        }
    }

    // value -> every (mirror, row, col) holding it
    let mut positions: BTreeMap<u32, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for (mirror, sub) in q.subs.iter().enumerate() {
        for (value, cells) in sub.occurrences() {
            positions
                .entry(value)
                .or_default()
                .extend(cells.into_iter().map(|(j, c)| (mirror, j, c)));
        }
    }

    for &value in &q.sm {
        let cells = positions.get(&value).map(Vec::as_slice).unwrap_or(&[]);
        let mirrors: BTreeSet<usize> = cells.iter().map(|c| c.0).collect();
        if mirrors.len() != 1 {
            violations.push(HpdaViolation::B3Placement {
                value,
                mirrors: mirrors.into_iter().collect(),
            });
        }
        for &(mirror, row, _) in cells {
            if !q.q0(row, mirror).is_star() {
                violations.push(HpdaViolation::B3Uncached { value, mirror, row });
            }
        }
    }

    for (&value, cells) in &positions {
        for (a, &first) in cells.iter().enumerate() {
            for &second in &cells[a + 1..] {
                let ((m1, j1, c1), (m2, j2, c2)) = (first, second);
                if m1 == m2 {
                    continue;
                }
                for (m, j, c) in [(m1, j2, c1), (m2, j1, c2)] {
                    if !q.subs[m].get(j, c).is_star() && !q.q0(j, m).is_star() {
                        violations.push(HpdaViolation::B4 {
                            value,
                            first,
                            second,
                            cell: (m, j, c),
                        });
                    }
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HpdaLoads {
    /// Server to mirrors: (|∪S_k1| − |Sm|)/F.
    #[serde(rename = "R1", serialize_with = "rational::serialize")]
    pub r1: Rational,
    /// Mirror to users: max |S_k1|/F.
    #[serde(rename = "R2", serialize_with = "rational::serialize")]
    pub r2: Rational,
    #[serde(rename = "M1_over_N", serialize_with = "rational::serialize")]
    pub m1_over_n: Rational,
    #[serde(rename = "M2_over_N", serialize_with = "rational::serialize")]
    pub m2_over_n: Rational,
}

impl HpdaLoads {
    /// Coding delay when the mirrors wait for the server.
    pub fn t_serial(&self) -> Rational {
        self.r1 + self.r2
    }
    /// Coding delay when both layers transmit in parallel.
    pub fn t_parallel(&self) -> Rational {
        self.r1.max(self.r2)
    }
}

/// Loads of a verified HPDA.
pub fn hpda_loads(q: &Hpda) -> HpdaLoads {
    let sets = q.integer_sets();
    let union: BTreeSet<u32> = sets.iter().flatten().copied().collect();
    let server = union.difference(&q.sm).count() as u64;
    let widest = sets.iter().map(BTreeSet::len).max().unwrap_or(0) as u64;
    let f = q.f as u64;
    HpdaLoads {
        r1: Rational::new(server, f),
        r2: Rational::new(widest, f),
        m1_over_n: Rational::new(q.z1 as u64, f),
        m2_over_n: Rational::new(q.z2 as u64, f),
    }
}

/// Splits a constructed PDA by block into user arrays. Rows that are all
/// stars in a block's array are cached by that block's mirror, and their
/// stars are replaced by fresh integers numbered row-major, continuing
/// after the largest integer of the source array.
pub fn lift(built: &Construction) -> Result<Hpda, HpdaError> {
    let pda = &built.pda;
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, &b) in built.column_blocks.iter().enumerate() {
        groups.entry(b).or_default().push(c);
    }
    let mirrors = groups.len();
    let mut next = pda.occurrences().keys().next_back().map_or(0, |&m| m + 1);
    let mut q0 = vec![vec![MirrorEntry::Null; mirrors]; pda.f()];
    let mut subs = Vec::with_capacity(mirrors);
    let mut sm = BTreeSet::new();
    let mut z1 = None;
    for (mirror, cols) in groups.values().enumerate() {
        let mut sub = pda.select_columns(cols).without_labels();
        let mut star_rows = 0;
        for (j, marks) in q0.iter_mut().enumerate() {
            if sub.row(j).iter().all(|e| e.is_star()) {
                star_rows += 1;
                marks[mirror] = MirrorEntry::Star;
                for c in 0..sub.k() {
                    sub.set(j, c, Entry::Int(next));
                    sm.insert(next);
                    next += 1;
                }
            }
        }
        z1.get_or_insert(star_rows);
        subs.push(sub);
    }
    let z2 = subs[0].column_stars(0);
    Hpda::new(z1.unwrap_or(0), z2, q0, subs, sm)
}

pub fn hpda_from_scheme(
    d: &Design,
    spec: SchemeSpec,
    opts: ConstructOptions,
) -> Result<Hpda, HpdaError> {
    lift(&construct(d, spec, opts)?)
}

pub fn hpda_from_scheme1(d: &Design, i: u64) -> Result<Hpda, HpdaError> {
    hpda_from_scheme(
        d,
        SchemeSpec::new(Scheme::I, i),
        ConstructOptions::default(),
    )
}

pub fn hpda_from_scheme2(d: &Design, i: u64) -> Result<Hpda, HpdaError> {
    hpda_from_scheme(
        d,
        SchemeSpec::new(Scheme::II, i),
        ConstructOptions::default(),
    )
}

/// Closed-form shape and loads of the lifted HPDA.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HpdaPrediction {
    #[serde(rename = "K1")]
    pub k1: u64,
    #[serde(rename = "K2")]
    pub k2: u64,
    #[serde(rename = "F")]
    pub f: u64,
    #[serde(rename = "Z1")]
    pub z1: u64,
    #[serde(rename = "Z2")]
    pub z2: u64,
    #[serde(rename = "R1", serialize_with = "rational::serialize")]
    pub r1: Rational,
    /// Upper bound on R2; the lift may do better.
    #[serde(rename = "R2_bound", serialize_with = "rational::serialize")]
    pub r2_bound: Rational,
}

pub fn predicted_hpda(d: &Design, spec: SchemeSpec) -> Result<HpdaPrediction, HpdaError> {
    let flat = crate::schemes::predicted_params(d, spec)?;
    let (v, k, i) = (d.v(), d.k(), spec.i);
    let b = lambda_s(d, 0)?;
    Ok(match spec.scheme {
        Scheme::I => {
            let k2 = binomial(k, k - i)?;
            let z1 = v - k;
            let own = mul(binomial(k, i - 1)?, lambda_s(d, i)?, "R2 bound")?;
            HpdaPrediction {
                k1: b,
                k2,
                f: v,
                z1,
                z2: k - i,
                r1: flat.r,
                r2_bound: Rational::new(own + mul(z1, k2, "R2 bound")?, v),
            }
        }
        Scheme::II => {
            let f = binomial(v, i)?;
            let in_block = binomial(k, i)?;
            let k2 = binomial(k, i + 1)?;
            let z1 = f - in_block;
            let own = mul(k, lambda_s(d, i + 1)?, "R2 bound")?;
            HpdaPrediction {
                k1: b,
                k2,
                f,
                z1,
                z2: in_block - (i + 1),
                r1: flat.r,
                r2_bound: Rational::new(own + mul(z1, k2, "R2 bound")?, f),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{catalog, catalog_design};

    fn fano() -> Design {
        catalog_design("fano_2_7_3_1").unwrap()
    }
    fn d3() -> Design {
        catalog_design("des_3_8_4_1").unwrap()
    }

    fn shape(q: &Hpda) -> (usize, usize, usize, usize, usize) {
        (q.k1(), q.k2(), q.f(), q.z1(), q.z2())
    }

    #[test]
    fn fano_scheme1_lift() {
        let q = hpda_from_scheme1(&fano(), 1).unwrap();
        verify_hpda(&q).unwrap();
        assert_eq!(shape(&q), (7, 3, 7, 4, 2));
        assert_eq!(q.sm().len(), 7 * 4 * 3);
        assert_eq!(hpda_loads(&q).r1, Rational::new(3, 7));
        // fresh integers are contiguous after the source's 0..3
        assert_eq!(q.sm().first(), Some(&3));
        assert_eq!(q.sm().last(), Some(&(3 + 84 - 1)));
    }

    #[test]
    fn fano_scheme2_lift() {
        let q = hpda_from_scheme2(&fano(), 1).unwrap();
        verify_hpda(&q).unwrap();
        assert_eq!(shape(&q), (7, 3, 7, 4, 1));
    }

    #[test]
    fn table_rows_for_3_8_4_1() {
        let q = hpda_from_scheme1(&d3(), 3).unwrap();
        verify_hpda(&q).unwrap();
        assert_eq!(shape(&q), (14, 4, 8, 4, 1));
        let l = hpda_loads(&q);
        assert_eq!((l.r1, l.r2), (Rational::new(7, 2), Rational::new(11, 4)));
        assert_eq!(l.t_serial(), Rational::new(25, 4));

        let q = hpda_from_scheme1(&d3(), 2).unwrap();
        verify_hpda(&q).unwrap();
        assert_eq!((q.k1(), q.k2()), (14, 6));
        let l = hpda_loads(&q);
        assert_eq!((l.r1, l.r2), (Rational::new(3, 1), Rational::new(4, 1)));
        let pred = predicted_hpda(&d3(), SchemeSpec::new(Scheme::I, 2)).unwrap();
        assert_eq!(pred.r2_bound, Rational::new(9, 2));

        let q = hpda_from_scheme2(&d3(), 2).unwrap();
        verify_hpda(&q).unwrap();
        let l = hpda_loads(&q);
        assert_eq!(q.f(), 28);
        assert_eq!((l.r1, l.r2), (Rational::new(8, 28), Rational::new(92, 28)));
        assert_eq!(
            (l.m1_over_n, l.m2_over_n),
            (Rational::new(11, 14), Rational::new(3, 28))
        );
    }

    #[test]
    fn lifts_match_predictions_on_catalog() {
        for d in catalog() {
            for scheme in [Scheme::I, Scheme::II] {
                let (lo, hi) = SchemeSpec::index_range(scheme, d.t());
                for i in lo..=hi {
                    let spec = SchemeSpec::new(scheme, i);
                    let built = construct(&d, spec, ConstructOptions::default()).unwrap();
                    let q = lift(&built).unwrap();
                    verify_hpda(&q).unwrap_or_else(|v| panic!("{} {spec:?}: {v:?}", d.name()));
                    let pred = predicted_hpda(&d, spec).unwrap();
                    let got = shape(&q);
                    assert_eq!(
                        (
                            got.0 as u64,
                            got.1 as u64,
                            got.2 as u64,
                            got.3 as u64,
                            got.4 as u64
                        ),
                        (pred.k1, pred.k2, pred.f, pred.z1, pred.z2)
                    );
                    let loads = hpda_loads(&q);
                    assert_eq!(loads.r1, pred.r1);
                    assert!(loads.r2 <= pred.r2_bound);
                    assert_eq!(q.sm().len(), q.k1() * q.z1() * q.k2());

                    // server integers are exactly the source integers
                    let union: BTreeSet<u32> = q.integer_sets().into_iter().flatten().collect();
                    let server: BTreeSet<u32> = union.difference(q.sm()).copied().collect();
                    let source: BTreeSet<u32> = built.pda.occurrences().into_keys().collect();
                    assert_eq!(server, source);

                    if scheme == Scheme::I && d.lambda() == 1 && i == d.t() {
                        assert_eq!(loads.r2, pred.r2_bound);
                    }
                }
            }
        }
    }

    #[test]
    fn duplicated_sm_integer_breaks_b3() {
        let q = hpda_from_scheme1(&fano(), 1).unwrap();
        let mut subs = q.subs().to_vec();
        let value = *q.sm().first().unwrap();
        // mirror 0 holds the first fresh integers; copy one into mirror 1's
        // first non-star cell in a row mirror 1 caches.
        let row = (0..q.f()).find(|&j| q.q0(j, 1).is_star()).unwrap();
        subs[1].set(row, 0, Entry::Int(value));
        let q0: Vec<Vec<MirrorEntry>> = (0..q.f())
            .map(|j| (0..q.k1()).map(|m| q.q0(j, m)).collect())
            .collect();
        let broken = Hpda::new(q.z1(), q.z2(), q0, subs, q.sm().clone()).unwrap();
        let v = verify_hpda(&broken).unwrap_err();
        assert!(v.iter().any(|x| matches!(
            x,
            HpdaViolation::B3Placement { value: s, mirrors } if *s == value && mirrors == &vec![0, 1]
        )));
    }

    #[test]
    fn null_mirror_cell_under_foreign_collision_breaks_b4() {
        let q = hpda_from_scheme1(&fano(), 1).unwrap();
        let mut q0: Vec<Vec<MirrorEntry>> = (0..q.f())
            .map(|j| (0..q.k1()).map(|m| q.q0(j, m)).collect())
            .collect();
        // un-cache every row of mirror 0
        for row in &mut q0 {
            row[0] = MirrorEntry::Null;
        }
        let broken = Hpda::new(0, q.z2(), q0, q.subs().to_vec(), q.sm().clone()).unwrap();
        let v = verify_hpda(&broken).unwrap_err();
        assert!(v
            .iter()
            .any(|x| matches!(x, HpdaViolation::B3Uncached { mirror: 0, .. })));
        assert!(v.iter().any(|x| matches!(x, HpdaViolation::B4 { .. })));
        assert!(v.iter().any(|x| matches!(x, HpdaViolation::B1 { .. })));
    }

    #[test]
    fn single_mirror_degenerate_loads() {
        let sub = Pda::parse_text("0 1\n* 0").unwrap();
        let q = Hpda::new(
            2,
            1,
            vec![vec![MirrorEntry::Star], vec![MirrorEntry::Star]],
            vec![sub],
            BTreeSet::new(),
        )
        .unwrap();
        // (0,0)=0 and (1,1)=0 need (0,1),(1,0) stars: (0,1)=1 -> not a PDA
        assert!(verify_hpda(&q).is_err());

        let sub = Pda::parse_text("0 *\n* 0").unwrap();
        let q = Hpda::new(
            0,
            1,
            vec![vec![MirrorEntry::Null], vec![MirrorEntry::Null]],
            vec![sub],
            BTreeSet::new(),
        )
        .unwrap();
        verify_hpda(&q).unwrap();
        let l = hpda_loads(&q);
        assert_eq!((l.r1, l.r2), (Rational::new(1, 2), Rational::new(1, 2)));
    }

    #[test]
    fn json_round_trip() {
        let q = hpda_from_scheme2(&fano(), 1).unwrap();
        let json = q.to_json();
        let back = Hpda::from_json(&json).unwrap();
        assert_eq!(back, q);
        assert_eq!(back.to_json(), json);
        assert!(json.contains("\"*\""));
        assert!(Hpda::from_json(
            r#"{"K1":1,"K2":1,"F":1,"Z1":0,"Z2":0,"Q0":[["x"]],"subs":[[[0]]],"Sm":[]}"#
        )
        .is_err());
    }
}
