//! Closed-form parameters of the baseline PDA constructions and the two
//! comparison tables: flat PDAs from a design, and hierarchical schemes.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::combinatorics::{binomial, exact_div, mul, ArithError};
use crate::design::{catalog_design, Design};
use crate::hpda::{hpda_from_scheme, hpda_loads, predicted_hpda, verify_hpda, HpdaError};
use crate::pda::{transpose, verify_pda, PdaError};
use crate::rational::{self, truncated_decimal, Rational};
use crate::schemes::{construct, ConstructOptions, Scheme, SchemeError, SchemeSpec};

/// Decimal places used for table cells.
pub const PLACES: usize = 4;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{scheme} needs {requirement}")]
    OutOfValidity {
        scheme: SchemeId,
        requirement: &'static str,
    },
    #[error("constructed {0} array fails verification")]
    Unverified(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Hpda(#[from] HpdaError),
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("CSV output: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeId {
    #[serde(rename = "ssp_I")]
    SspI,
    #[serde(rename = "ssp_II")]
    SspII,
    #[serde(rename = "li_thm5")]
    LiThm5,
    #[serde(rename = "li_thm6")]
    LiThm6,
    #[serde(rename = "macc_thm1")]
    MaccThm1,
    #[serde(rename = "mn")]
    Mn,
    #[serde(rename = "ours_I")]
    OursI,
    #[serde(rename = "ours_II")]
    OursII,
    #[serde(rename = "ours_II_T")]
    OursIIT,
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeId::SspI => "ssp_I",
            SchemeId::SspII => "ssp_II",
            SchemeId::LiThm5 => "li_thm5",
            SchemeId::LiThm6 => "li_thm6",
            SchemeId::MaccThm1 => "macc_thm1",
            SchemeId::Mn => "mn",
            SchemeId::OursI => "ours_I",
            SchemeId::OursII => "ours_II",
            SchemeId::OursIIT => "ours_II_T",
        })
    }
}

/// Design-derived baselines; the MN scheme is [`mn_params`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownScheme {
    SspI,
    SspII,
    LiThm5 { i: u64 },
    LiThm6,
    MaccThm1 { i: u64 },
}

/// The design parameters the closed forms depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub t: u64,
    pub lambda: u64,
    pub simple: bool,
}

impl DesignParams {
    pub fn of(d: &Design) -> Self {
        DesignParams {
            v: d.v(),
            k: d.k(),
            t: d.t(),
            lambda: d.lambda(),
            simple: d.is_simple(),
        }
    }
}

/// One row of the flat comparison table. `R = S/F` and `M/N = Z/F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeRow {
    pub scheme_id: SchemeId,
    pub i: Option<u64>,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "F")]
    pub f: u64,
    #[serde(rename = "Z")]
    pub z: u64,
    #[serde(rename = "S")]
    pub s: u64,
    #[serde(rename = "M_over_N", serialize_with = "rational::serialize")]
    pub m_over_n: Rational,
    #[serde(rename = "R", serialize_with = "rational::serialize")]
    pub r: Rational,
    pub notes: String,
}

impl SchemeRow {
    fn new(scheme_id: SchemeId, i: Option<u64>, k: u64, f: u64, z: u64, s: u64) -> Self {
        let m_over_n = Rational::new(z, f);
        let notes = if *m_over_n.denom() != f {
            format!("Z/F = {z}/{f}")
        } else {
            String::new()
        };
        SchemeRow {
            scheme_id,
            i,
            k,
            f,
            z,
            s,
            m_over_n,
            r: Rational::new(s, f),
            notes,
        }
    }

    pub fn label(&self) -> String {
        match (self.scheme_id, self.i) {
            (SchemeId::Mn, _) => format!("mn (K={}, t={})", self.k, self.k * self.z / self.f),
            (id, Some(i)) => format!("{id} (i={i})"),
            (id, None) => id.to_string(),
        }
    }

    fn add_note(&mut self, note: &str) {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note);
    }
}

fn require(ok: bool, scheme: SchemeId, requirement: &'static str) -> Result<(), TableError> {
    if ok {
        Ok(())
    } else {
        Err(TableError::OutOfValidity {
            scheme,
            requirement,
        })
    }
}

fn sub(a: u64, b: u64, what: &'static str) -> Result<u64, ArithError> {
    a.checked_sub(b).ok_or(ArithError::Overflow(what))
}

/// Evaluates a baseline's closed forms on a design.
pub fn known_scheme_params(scheme: KnownScheme, d: &DesignParams) -> Result<SchemeRow, TableError> {
    let DesignParams {
        v, k, t, lambda, ..
    } = *d;
    let c = binomial;
    Ok(match scheme {
        KnownScheme::SspI => {
            require(
                lambda == 1 && t >= 1,
                SchemeId::SspI,
                "a design with lambda = 1",
            )?;
            let f = exact_div(mul(c(v, t)?, k, "F")?, c(k, t)?, "F")?;
            let z = sub(f, v - t + 1, "Z")?;
            let s = mul(c(k - 1, t - 1)?, v, "S")?;
            SchemeRow::new(SchemeId::SspI, None, c(v, t - 1)?, f, z, s)
        }
        KnownScheme::SspII => {
            require(
                lambda == 1 && t >= 1,
                SchemeId::SspII,
                "a design with lambda = 1",
            )?;
            SchemeRow::new(
                SchemeId::SspII,
                None,
                v,
                c(v, t)?,
                c(v - 1, t)?,
                c(v, t - 1)?,
            )
        }
        KnownScheme::LiThm5 { i } => {
            require(lambda == 1, SchemeId::LiThm5, "a design with lambda = 1")?;
            require(i >= 1 && i < t, SchemeId::LiThm5, "1 <= i <= t-1")?;
            let users = exact_div(mul(c(v, t)?, c(k, i)?, "K")?, c(k, t)?, "K")?;
            let f = c(v, t - i)?;
            let uncached = c(k - i, t - i)?;
            let s = mul(uncached, c(v, i)?, "S")?;
            SchemeRow::new(
                SchemeId::LiThm5,
                Some(i),
                users,
                f,
                sub(f, uncached, "Z")?,
                s,
            )
        }
        KnownScheme::LiThm6 => {
            require(d.simple, SchemeId::LiThm6, "a simple design")?;
            require(k <= 2 * t, SchemeId::LiThm6, "k <= 2t")?;
            let f = exact_div(mul(lambda, c(v, t)?, "F")?, c(k, t)?, "F")?;
            SchemeRow::new(
                SchemeId::LiThm6,
                None,
                c(v, t)?,
                f,
                sub(f, lambda, "Z")?,
                c(v, k - t)?,
            )
        }
        KnownScheme::MaccThm1 { i } => {
            require(lambda == 1, SchemeId::MaccThm1, "a design with lambda = 1")?;
            require(i <= v - k, SchemeId::MaccThm1, "0 <= i <= v-k")?;
            let ckt = c(k, t)?;
            let users = exact_div(c(v, t)?, ckt, "K")?;
            let f = mul(c(v, i)?, ckt, "F")?;
            let z = sub(f, mul(c(v - k, i)?, ckt, "Z")?, "Z")?;
            let inside = exact_div(mul(c(v, t)?, c(k, t + i)?, "S")?, ckt, "S")?;
            let s = sub(c(v, t + i)?, inside, "S")?;
            SchemeRow::new(SchemeId::MaccThm1, Some(i), users, f, z, s)
        }
    })
}

/// The MN scheme with K users and `t = KM/N`.
pub fn mn_params(users: u64, t: u64) -> Result<SchemeRow, TableError> {
    require(t <= users && users >= 1, SchemeId::Mn, "0 <= t <= K")?;
    let z = if t == 0 {
        0
    } else {
        binomial(users - 1, t - 1)?
    };
    Ok(SchemeRow::new(
        SchemeId::Mn,
        None,
        users,
        binomial(users, t)?,
        z,
        binomial(users, t + 1)?,
    ))
}

/// Renders an exact value: integers as-is, everything else truncated to
/// [`PLACES`] decimals.
pub fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        truncated_decimal(r, PLACES)
    }
}

/// Rows comparing Scheme II on `d` with the baselines of equal K, F and
/// M/N. For each `i`: the constructed Scheme II row, then the `li_thm5`
/// row for `t-i`; for `i = t-1` also the transposed construction, the
/// matching `ssp_I` row and the MN scheme with the same K and M/N.
/// Baselines whose closed forms do not apply to `d` are left out.
pub fn emit_table2(
    d: &Design,
    is: &[u64],
    opts: ConstructOptions,
) -> Result<Vec<SchemeRow>, TableError> {
    let params = DesignParams::of(d);
    let t = d.t();
    let mut rows = Vec::new();
    for &i in is {
        let built = construct(d, SchemeSpec::new(Scheme::II, i), opts)?;
        let p = verify_pda(&built.pda)
            .map_err(|_| TableError::Unverified(format!("scheme II i={i}")))?;
        rows.push(SchemeRow::new(
            SchemeId::OursII,
            Some(i),
            p.k,
            p.f,
            p.z,
            p.s,
        ));
        if let Ok(row) = known_scheme_params(KnownScheme::LiThm5 { i: t - i }, &params) {
            rows.push(row);
        }
        if i + 1 == t {
            let tr = transpose(&built.pda)?;
            let q = verify_pda(&tr)
                .map_err(|_| TableError::Unverified(format!("transposed scheme II i={i}")))?;
            let mut ours = SchemeRow::new(SchemeId::OursIIT, Some(i), q.k, q.f, q.z, q.s);
            ours.add_note("transpose");
            rows.push(ours);
            if let Ok(row) = known_scheme_params(KnownScheme::SspI, &params) {
                rows.push(row);
            }
            let kz = mul(q.k, q.z, "KZ")?;
            if kz % q.f == 0 {
                rows.push(mn_params(q.k, kz / q.f)?);
            }
        }
    }
    Ok(rows)
}

fn csv_text(
    header: &[&str],
    records: impl Iterator<Item = Vec<String>>,
) -> Result<String, TableError> {
    let err = |e: &dyn fmt::Display| TableError::Csv(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| err(&e))?;
    for r in records {
        w.write_record(&r).map_err(|e| err(&e))?;
    }
    let bytes = w.into_inner().map_err(|e| err(&e))?;
    String::from_utf8(bytes).map_err(|e| err(&e))
}

pub const TABLE2_HEADER: [&str; 7] = [
    "Schemes and parameters",
    "Number of users K",
    "Caching ratio M/N=Z/F",
    "Subpacketization F",
    "Number of integers S",
    "Rate R=S/F",
    "notes",
];

pub fn table2_csv(rows: &[SchemeRow]) -> Result<String, TableError> {
    csv_text(
        &TABLE2_HEADER,
        rows.iter().map(|r| {
            vec![
                r.label(),
                r.k.to_string(),
                r.m_over_n.to_string(),
                r.f.to_string(),
                r.s.to_string(),
                render(&r.r),
                r.notes.clone(),
            ]
        }),
    )
}

/// A cell of the hierarchical table: computed here, copied from a cited
/// result, or unavailable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Exact(Rational),
    Cited(&'static str),
    Missing,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Exact(r) => render(r),
            Cell::Cited(s) => (*s).to_string(),
            Cell::Missing => String::new(),
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Cell::Exact(r) => Some(*r),
            _ => None,
        }
    }

    fn int(n: usize) -> Self {
        Cell::Exact(Rational::from_integer(n as u64))
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Exact(r) => rational::serialize(r, s),
            Cell::Cited(c) => c.serialize(s),
            Cell::Missing => s.serialize_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierRow {
    pub scheme_id: String,
    pub description: String,
    #[serde(rename = "K1")]
    pub k1: Cell,
    #[serde(rename = "K2")]
    pub k2: Cell,
    #[serde(rename = "M1_over_N")]
    pub m1_over_n: Cell,
    #[serde(rename = "M2_over_N")]
    pub m2_over_n: Cell,
    #[serde(rename = "F")]
    pub f: Cell,
    #[serde(rename = "R1")]
    pub r1: Cell,
    #[serde(rename = "R2")]
    pub r2: Cell,
    #[serde(rename = "T")]
    pub t: Cell,
    #[serde(rename = "R2_bound", serialize_with = "rational::serialize_opt")]
    pub r2_bound: Option<Rational>,
    pub notes: String,
}

/// A hierarchical baseline copied as published.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CitedRow {
    pub scheme_id: &'static str,
    pub description: &'static str,
    pub k1: u64,
    pub k2: u64,
    pub m1_over_n: (u64, u64),
    pub m2_over_n: (u64, u64),
    pub f: &'static str,
    pub r1: &'static str,
    pub r2: &'static str,
    pub t: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table3Entry {
    /// Lift of a construction on the named design.
    Proposed {
        design: String,
        scheme: Scheme,
        i: u64,
    },
    Cited(CitedRow),
}

fn cited(
    scheme_id: &'static str,
    description: &'static str,
    k: (u64, u64),
    m1: (u64, u64),
    m2: (u64, u64),
    values: [&'static str; 4],
) -> Table3Entry {
    Table3Entry::Cited(CitedRow {
        scheme_id,
        description,
        k1: k.0,
        k2: k.1,
        m1_over_n: m1,
        m2_over_n: m2,
        f: values[0],
        r1: values[1],
        r2: values[2],
        t: values[3],
    })
}

fn proposed(design: &str, scheme: Scheme, i: u64) -> Table3Entry {
    Table3Entry::Proposed {
        design: design.to_string(),
        scheme,
        i,
    }
}

/// Name under which a 3-(26,6,1) design file is looked up.
pub const DESIGN_3_26_6_1: &str = "des_3_26_6_1";

/// The standard hierarchical comparison: lifted constructions interleaved
/// with the memory-sharing and product-construction baselines.
pub fn default_table3() -> Vec<Table3Entry> {
    let ms = "knmd";
    let product = "kywm";
    vec![
        proposed("des_3_8_4_1", Scheme::I, 3),
        cited(
            ms,
            "memory sharing, centralized placement (alpha=1/2, beta=1/4)",
            (14, 4),
            (1, 2),
            (1, 8),
            ["1.489e11", "1.98295", "2.75", "4.73295"],
        ),
        proposed("des_3_8_4_1", Scheme::I, 2),
        cited(
            ms,
            "memory sharing, centralized placement (alpha=1/2, beta=1/4)",
            (14, 6),
            (1, 2),
            (1, 4),
            ["1.56e23", "0.808", "2.28125", "3.08925"],
        ),
        cited(
            product,
            "product of an MN (14,3432,1716,3003) PDA and an optimal (6,4,1,11) PDA",
            (14, 6),
            (1, 2),
            (1, 4),
            ["1.37e4", "2.406", "2.75", "5.156"],
        ),
        cited(
            product,
            "product of optimal (14,2,1,7) and (6,4,1,11) PDAs",
            (14, 6),
            (1, 2),
            (1, 4),
            ["8", "9.625", "2.75", "12.375"],
        ),
        proposed("des_3_8_4_1", Scheme::II, 2),
        cited(
            ms,
            "memory sharing, centralized placement (alpha=11/14, beta=1/4)",
            (14, 4),
            (11, 14),
            (3, 28),
            ["1.346e15", "0.3409", "3.107", "3.448"],
        ),
        proposed(DESIGN_3_26_6_1, Scheme::II, 2),
        cited(
            ms,
            "memory sharing, centralized placement (alpha=62/65, beta=1/4)",
            (130, 20),
            (62, 65),
            (12, 325),
            ["1.39e1824", "0.0307", "17.1668", "17.1975"],
        ),
    ]
}

fn proposed_row(
    d: &Design,
    scheme: Scheme,
    i: u64,
    opts: ConstructOptions,
) -> Result<HierRow, TableError> {
    let spec = SchemeSpec::new(scheme, i);
    let q = hpda_from_scheme(d, spec, opts)?;
    if let Err(v) = verify_hpda(&q) {
        return Err(TableError::Unverified(format!(
            "scheme {scheme} i={i} HPDA ({} violation(s))",
            v.len()
        )));
    }
    let loads = hpda_loads(&q);
    let bound = predicted_hpda(d, spec)?.r2_bound;
    let notes = if bound != loads.r2 {
        format!("R2 bound {bound}")
    } else {
        String::new()
    };
    Ok(HierRow {
        scheme_id: format!("ours_{scheme}"),
        description: format!("scheme {scheme} lift on {} (i={i})", d.name()),
        k1: Cell::int(q.k1()),
        k2: Cell::int(q.k2()),
        m1_over_n: Cell::Exact(loads.m1_over_n),
        m2_over_n: Cell::Exact(loads.m2_over_n),
        f: Cell::int(q.f()),
        r1: Cell::Exact(loads.r1),
        r2: Cell::Exact(loads.r2),
        t: Cell::Exact(loads.t_serial()),
        r2_bound: Some(bound),
        notes,
    })
}

/// Builds the hierarchical table. Designs are looked up first in `designs`
/// (by name), then in the built-in catalog; a proposed row whose design is
/// unavailable is kept with empty cells and a note.
pub fn emit_table3(
    entries: &[Table3Entry],
    designs: &[Design],
    opts: ConstructOptions,
) -> Result<Vec<HierRow>, TableError> {
    entries
        .iter()
        .map(|e| match e {
            Table3Entry::Cited(c) => Ok(HierRow {
                scheme_id: c.scheme_id.to_string(),
                description: c.description.to_string(),
                k1: Cell::Exact(Rational::from_integer(c.k1)),
                k2: Cell::Exact(Rational::from_integer(c.k2)),
                m1_over_n: Cell::Exact(Rational::new(c.m1_over_n.0, c.m1_over_n.1)),
                m2_over_n: Cell::Exact(Rational::new(c.m2_over_n.0, c.m2_over_n.1)),
                f: Cell::Cited(c.f),
                r1: Cell::Cited(c.r1),
                r2: Cell::Cited(c.r2),
                t: Cell::Cited(c.t),
                r2_bound: None,
                notes: "cited, not reproduced".to_string(),
            }),
            Table3Entry::Proposed { design, scheme, i } => {
                let found = designs
                    .iter()
                    .find(|d| d.name() == design)
                    .cloned()
                    .or_else(|| catalog_design(design).ok());
                match found {
                    Some(d) => proposed_row(&d, *scheme, *i, opts),
                    None => Ok(HierRow {
                        scheme_id: format!("ours_{scheme}"),
                        description: format!("scheme {scheme} lift on {design} (i={i})"),
                        k1: Cell::Missing,
                        k2: Cell::Missing,
                        m1_over_n: Cell::Missing,
                        m2_over_n: Cell::Missing,
                        f: Cell::Missing,
                        r1: Cell::Missing,
                        r2: Cell::Missing,
                        t: Cell::Missing,
                        r2_bound: None,
                        notes: format!("skipped: design {design} not available"),
                    }),
                }
            }
        })
        .collect()
}

pub const TABLE3_HEADER: [&str; 10] = [
    "Schemes and parameters",
    "K1",
    "K2",
    "M1/N",
    "M2/N",
    "F",
    "R1",
    "R2",
    "T=R1+R2",
    "notes",
];

pub fn table3_csv(rows: &[HierRow]) -> Result<String, TableError> {
    let ratio = |c: &Cell| match c {
        Cell::Exact(r) => r.to_string(),
        other => other.render(),
    };
    csv_text(
        &TABLE3_HEADER,
        rows.iter().map(|r| {
            vec![
                r.description.clone(),
                r.k1.render(),
                r.k2.render(),
                ratio(&r.m1_over_n),
                ratio(&r.m2_over_n),
                r.f.render(),
                r.r1.render(),
                r.r2.render(),
                r.t.render(),
                r.notes.clone(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::scheme1_construct;

    fn d3() -> Design {
        catalog_design("des_3_8_4_1").unwrap()
    }

    fn kfzs(r: &SchemeRow) -> (u64, u64, u64, u64) {
        (r.k, r.f, r.z, r.s)
    }

    #[test]
    fn baselines_on_3_8_4_1() {
        let p = DesignParams::of(&d3());
        let li = known_scheme_params(KnownScheme::LiThm5 { i: 2 }, &p).unwrap();
        assert_eq!(
            (li.k, li.f, li.s, li.r),
            (84, 8, 56, Rational::from_integer(7))
        );
        assert_eq!(li.m_over_n, Rational::new(3, 4));
        let ssp = known_scheme_params(KnownScheme::SspI, &p).unwrap();
        assert_eq!((ssp.k, ssp.f, ssp.s), (28, 56, 24));
        assert_eq!(render(&ssp.r), "0.4285");
        assert_eq!(ssp.m_over_n, Rational::new(25, 28));
    }

    #[test]
    fn mn_row() {
        let r = mn_params(28, 25).unwrap();
        assert_eq!((r.f, r.s), (3276, 378));
        assert_eq!(render(&r.r), "0.1153");
        assert_eq!(r.r, Rational::new(28 - 25, 26));
        assert!(mn_params(3, 4).is_err());
    }

    #[test]
    fn fano_baselines() {
        let p = DesignParams::of(&catalog_design("fano_2_7_3_1").unwrap());
        let macc = known_scheme_params(KnownScheme::MaccThm1 { i: 2 }, &p).unwrap();
        assert_eq!(kfzs(&macc), (7, 63, 45, 35));
        assert_eq!(macc.m_over_n, Rational::new(5, 7));
        let li6 = known_scheme_params(KnownScheme::LiThm6, &p).unwrap();
        assert_eq!(kfzs(&li6), (21, 7, 6, 7));
    }

    #[test]
    fn validity_ranges() {
        let p = DesignParams::of(&d3());
        assert!(known_scheme_params(KnownScheme::LiThm5 { i: 0 }, &p).is_err());
        assert!(known_scheme_params(KnownScheme::LiThm5 { i: 3 }, &p).is_err());
        assert!(known_scheme_params(KnownScheme::MaccThm1 { i: 5 }, &p).is_err());
        let lam2 = DesignParams::of(&catalog_design("des_2_6_3_2").unwrap());
        assert!(known_scheme_params(KnownScheme::SspI, &lam2).is_err());
        assert!(known_scheme_params(KnownScheme::LiThm6, &lam2).is_ok());
        let wide = DesignParams {
            v: 10,
            k: 5,
            t: 2,
            lambda: 2,
            simple: true,
        };
        assert!(known_scheme_params(KnownScheme::LiThm6, &wide).is_err());
        let repeated = DesignParams {
            simple: false,
            ..lam2
        };
        assert!(known_scheme_params(KnownScheme::LiThm6, &repeated).is_err());
    }

    #[test]
    fn scheme1_transpose_matches_ssp_ii() {
        for name in ["fano_2_7_3_1", "des_3_8_4_1"] {
            let d = catalog_design(name).unwrap();
            let built = scheme1_construct(&d, d.t()).unwrap();
            let p = verify_pda(&transpose(&built.pda).unwrap()).unwrap();
            let ssp = known_scheme_params(KnownScheme::SspII, &DesignParams::of(&d)).unwrap();
            assert_eq!((p.k, p.f, p.z, p.s), kfzs(&ssp), "{name}");
        }
    }

    #[test]
    fn table2_on_3_8_4_1() {
        let rows = emit_table2(&d3(), &[1, 2], ConstructOptions::default()).unwrap();
        let got: Vec<_> = rows
            .iter()
            .map(|r| (r.scheme_id, r.k, r.m_over_n, r.f, r.s, render(&r.r)))
            .collect();
        let q = Rational::new;
        let want = vec![
            (SchemeId::OursII, 84, q(3, 4), 8, 24, "3".to_string()),
            (SchemeId::LiThm5, 84, q(3, 4), 8, 56, "7".into()),
            (SchemeId::OursII, 56, q(25, 28), 28, 8, "0.2857".into()),
            (SchemeId::LiThm5, 56, q(25, 28), 28, 24, "0.8571".into()),
            (SchemeId::OursIIT, 28, q(25, 28), 56, 8, "0.1428".into()),
            (SchemeId::SspI, 28, q(25, 28), 56, 24, "0.4285".into()),
            (SchemeId::Mn, 28, q(25, 28), 3276, 378, "0.1153".into()),
        ];
        assert_eq!(got, want);
        assert_eq!(rows[0].notes, "Z/F = 6/8");
        // ours never needs more integers than the baseline it is paired with
        assert!(rows[0].s <= rows[1].s && rows[2].s <= rows[3].s && rows[4].s <= rows[5].s);
    }

    #[test]
    fn table2_on_fano_and_empty() {
        let fano = catalog_design("fano_2_7_3_1").unwrap();
        let rows = emit_table2(&fano, &[1], ConstructOptions::default()).unwrap();
        assert_eq!(kfzs(&rows[0]), (21, 7, 5, 7));
        assert_eq!(rows[0].m_over_n, Rational::new(5, 7));
        assert_eq!(rows[0].r, Rational::from_integer(1));
        let csv =
            table2_csv(&emit_table2(&fano, &[], ConstructOptions::default()).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn table3_proposed_rows() {
        let rows = emit_table3(&default_table3(), &[], ConstructOptions::default()).unwrap();
        assert_eq!(rows.len(), 10);
        let cells = |r: &HierRow| {
            [
                &r.k1,
                &r.k2,
                &r.m1_over_n,
                &r.m2_over_n,
                &r.f,
                &r.r1,
                &r.r2,
                &r.t,
            ]
            .iter()
            .map(|c| c.exact().unwrap())
            .collect::<Vec<_>>()
        };
        let q = Rational::new;
        let n = Rational::from_integer;
        assert_eq!(
            cells(&rows[0]),
            vec![
                n(14),
                n(4),
                q(1, 2),
                q(1, 8),
                n(8),
                q(7, 2),
                q(11, 4),
                q(25, 4)
            ]
        );
        assert_eq!(
            cells(&rows[2]),
            vec![n(14), n(6), q(1, 2), q(1, 4), n(8), n(3), n(4), n(7)]
        );
        assert_eq!(rows[2].r2_bound, Some(q(9, 2)));
        assert_eq!(
            cells(&rows[6]),
            vec![
                n(14),
                n(4),
                q(11, 14),
                q(3, 28),
                n(28),
                q(8, 28),
                q(92, 28),
                q(100, 28)
            ]
        );
        assert_eq!(rows[6].t.render(), "3.5714");
        assert_eq!(rows[8].notes, "skipped: design des_3_26_6_1 not available");
        assert_eq!(rows[1].notes, "cited, not reproduced");
        assert_eq!(rows[1].f.render(), "1.489e11");
        let csv = table3_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 11);
        assert!(csv.contains("3.2857"));
    }
}
