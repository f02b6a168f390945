//! Coded caching over a PDA (flat) or an HPDA (two layers), run on real
//! bytes.
//!
//! Placement copies packets into per-node caches. Delivery XORs packets
//! into signals. Every user then decodes using only its own cache and the
//! signals it receives, and the reconstructed file is compared byte for
//! byte with the library. Which packets a user cancels is re-derived from
//! the array here, not taken from the constructions.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hpda::{Hpda, MirrorEntry};
use crate::pda::{Entry, Pda};
use crate::rational::{self, Rational};

pub const DEFAULT_PACKET_BYTES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("demand {demand} is not a file index below {files}")]
    BadDemand { demand: usize, files: usize },
    #[error("mirror {mirror} must use packet {row} but does not cache it")]
    MirrorCacheMiss { mirror: usize, row: usize },
    #[error("malformed demand: {0}")]
    MalformedDemand(String),
}

/// N files of F packets each, filled from a seeded generator.
#[derive(Debug, Clone)]
pub struct FileLibrary {
    files: usize,
    packets: usize,
    packet_bytes: usize,
    content: Vec<u8>,
}

impl FileLibrary {
    pub fn random(files: usize, packets: usize, packet_bytes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let mut content = vec![0u8; files * packets * packet_bytes];
        rng.fill_bytes(&mut content);
        FileLibrary {
            files,
            packets,
            packet_bytes,
            content,
        }
    }

    pub fn files(&self) -> usize {
        self.files
    }
    pub fn packets(&self) -> usize {
        self.packets
    }
    pub fn packet_bytes(&self) -> usize {
        self.packet_bytes
    }

    pub fn packet(&self, file: usize, j: usize) -> &[u8] {
        let start = (file * self.packets + j) * self.packet_bytes;
        &self.content[start..start + self.packet_bytes]
    }
}

/// Demanded file index per user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Demand {
    Flat(Vec<usize>),
    /// Indexed `[mirror][user]`.
    Hierarchical(Vec<Vec<usize>>),
}

impl Demand {
    pub fn random_flat(users: usize, files: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Demand::Flat((0..users).map(|_| rng.random_range(0..files)).collect())
    }

    pub fn random_hierarchical(mirrors: usize, users: usize, files: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Demand::Hierarchical(
            (0..mirrors)
                .map(|_| (0..users).map(|_| rng.random_range(0..files)).collect())
                .collect(),
        )
    }

    /// Comma- or newline-separated file indices.
    pub fn parse_flat_csv(text: &str) -> Result<Self, SimError> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| SimError::MalformedDemand(format!("{t:?} is not an index")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Demand::Flat)
    }
}

/// One coded signal and the `(row, column)` or `(mirror, row, column)`
/// cells XORed into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    /// `None` for the server, otherwise the sending mirror.
    pub mirror: Option<usize>,
    pub s: u32,
    pub contributors: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimReport {
    /// Signals sent by the server.
    pub transmissions: u64,
    /// Signals sent by each mirror (hierarchical runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror_transmissions: Option<Vec<u64>>,
    /// Flattened in user order (`mirror * K2 + user` for two layers).
    pub decoded_ok: Vec<bool>,
    pub failures: Vec<String>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "rational::serialize_opt"
    )]
    pub measured_r: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "rational::serialize_opt"
    )]
    pub measured_r1: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "rational::serialize_opt"
    )]
    pub measured_r2: Option<Rational>,
    #[serde(serialize_with = "rational::serialize")]
    pub coding_delay_serial: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub coding_delay_parallel: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

impl SimReport {
    pub fn all_decoded(&self) -> bool {
        self.decoded_ok.iter().all(|&ok| ok)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimOptions {
    pub trace: bool,
}

/// Packets held by one cache: packet `j` of every file for each cached row.
struct Cache<'a> {
    lib: &'a FileLibrary,
    rows: Vec<bool>,
}

impl<'a> Cache<'a> {
    fn get(&self, file: usize, j: usize) -> Option<&'a [u8]> {
        self.rows[j].then(|| self.lib.packet(file, j))
    }
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

struct Signal {
    bytes: Vec<u8>,
    /// (file, row, user id) of every packet in the XOR.
    terms: Vec<(usize, usize, usize)>,
}

/// Recovers packet `row` of `file` for user `me` from a signal by XORing out
/// every other term with cached packets.
fn peel(signal: &Signal, me: usize, row: usize, cache: &Cache) -> Result<Vec<u8>, String> {
    let mut found = false;
    let mut acc = signal.bytes.clone();
    for &(file, j, user) in &signal.terms {
        if user == me && j == row {
            found = true;
            continue;
        }
        let known = cache
            .get(file, j)
            .ok_or_else(|| format!("packet {j} of file {file} (for user {user}) is not cached"))?;
        xor_into(&mut acc, known);
    }
    if !found {
        return Err(format!("signal does not carry packet {row}"));
    }
    Ok(acc)
}

/// Rebuilds one user's file; `signal_for(s)` is what the user hears for `s`.
fn decode_user<'s>(
    lib: &FileLibrary,
    column: impl Fn(usize) -> Entry,
    cache: &Cache,
    me: usize,
    want: usize,
    signal_for: impl Fn(u32) -> Option<&'s Signal>,
) -> Result<(), String> {
    for j in 0..lib.packets() {
        let packet = match column(j) {
            Entry::Star => cache
                .get(want, j)
                .ok_or_else(|| format!("row {j} starred but not cached"))?
                .to_vec(),
            Entry::Int(s) => {
                let signal = signal_for(s).ok_or_else(|| format!("no signal for {s}"))?;
                peel(signal, me, j, cache).map_err(|e| format!("integer {s}: {e}"))?
            }
        };
        if packet != lib.packet(want, j) {
            return Err(format!("packet {j} decoded to the wrong bytes"));
        }
    }
    Ok(())
}

fn check_demand(d: &[usize], files: usize) -> Result<(), SimError> {
    match d.iter().find(|&&x| x >= files) {
        Some(&demand) => Err(SimError::BadDemand { demand, files }),
        None => Ok(()),
    }
}

/// Delivery from a single PDA: one server signal per integer.
pub fn run_flat(
    p: &Pda,
    lib: &FileLibrary,
    demand: &Demand,
    opts: SimOptions,
) -> Result<SimReport, SimError> {
    let Demand::Flat(d) = demand else {
        return Err(SimError::Dimension("flat run needs a flat demand".into()));
    };
    if lib.packets() != p.f() {
        return Err(SimError::Dimension(format!(
            "library has {} packets per file, array has {} rows",
            lib.packets(),
            p.f()
        )));
    }
    if d.len() != p.k() {
        return Err(SimError::Dimension(format!(
            "{} demands for {} users",
            d.len(),
            p.k()
        )));
    }
    check_demand(d, lib.files())?;

    let mut signals = BTreeMap::new();
    let mut trace = Vec::new();
    for (s, cells) in p.occurrences() {
        let mut bytes = vec![0u8; lib.packet_bytes()];
        let mut terms = Vec::with_capacity(cells.len());
        for &(j, k) in &cells {
            xor_into(&mut bytes, lib.packet(d[k], j));
            terms.push((d[k], j, k));
        }
        if opts.trace {
            trace.push(TraceEntry {
                mirror: None,
                s,
                contributors: cells.iter().map(|&(j, k)| vec![j, k]).collect(),
            });
        }
        signals.insert(s, Signal { bytes, terms });
    }

    let mut decoded_ok = Vec::with_capacity(p.k());
    let mut failures = Vec::new();
    for (k, &want) in d.iter().enumerate() {
        let cache = Cache {
            lib,
            rows: (0..p.f()).map(|j| p.get(j, k).is_star()).collect(),
        };
        let result = decode_user(lib, |j| p.get(j, k), &cache, k, want, |s| signals.get(&s));
        if let Err(e) = &result {
            failures.push(format!("user {k}: {e}"));
        }
        decoded_ok.push(result.is_ok());
    }

    let r = Rational::new(signals.len() as u64, p.f() as u64);
    Ok(SimReport {
        transmissions: signals.len() as u64,
        mirror_transmissions: None,
        decoded_ok,
        failures,
        measured_r: Some(r),
        measured_r1: None,
        measured_r2: None,
        coding_delay_serial: r,
        coding_delay_parallel: r,
        trace: opts.trace.then_some(trace),
    })
}

/// Two-layer delivery: the server sends one signal per integer outside
/// `Sm`; each mirror forwards those signals after removing packets it
/// caches that belong to other mirrors' users, and serves its `Sm`
/// integers from its own cache.
pub fn run_hierarchical(
    q: &Hpda,
    lib: &FileLibrary,
    demand: &Demand,
    opts: SimOptions,
) -> Result<SimReport, SimError> {
    let Demand::Hierarchical(d) = demand else {
        return Err(SimError::Dimension(
            "hierarchical run needs a K1xK2 demand".into(),
        ));
    };
    if lib.packets() != q.f() {
        return Err(SimError::Dimension(format!(
            "library has {} packets per file, HPDA has F = {}",
            lib.packets(),
            q.f()
        )));
    }
    if d.len() != q.k1() || d.iter().any(|row| row.len() != q.k2()) {
        return Err(SimError::Dimension(format!(
            "demand is not {}x{}",
            q.k1(),
            q.k2()
        )));
    }
    for row in d {
        check_demand(row, lib.files())?;
    }
    let k2 = q.k2();
    let uid = |m: usize, c: usize| m * k2 + c;

    let sets = q.integer_sets();
    let mut cells: BTreeMap<u32, Vec<(usize, usize, usize)>> = BTreeMap::new();
    for (m, sub) in q.subs().iter().enumerate() {
        for (s, pos) in sub.occurrences() {
            cells
                .entry(s)
                .or_default()
                .extend(pos.into_iter().map(|(j, c)| (m, j, c)));
        }
    }
    let union: BTreeSet<u32> = sets.iter().flatten().copied().collect();

    let mut trace = Vec::new();
    let mut server = BTreeMap::new();
    for &s in union.difference(q.sm()) {
        let mut bytes = vec![0u8; lib.packet_bytes()];
        let mut terms = Vec::new();
        for &(m, j, c) in &cells[&s] {
            xor_into(&mut bytes, lib.packet(d[m][c], j));
            terms.push((d[m][c], j, uid(m, c)));
        }
        if opts.trace {
            trace.push(TraceEntry {
                mirror: None,
                s,
                contributors: cells[&s].iter().map(|&(m, j, c)| vec![m, j, c]).collect(),
            });
        }
        server.insert(s, Signal { bytes, terms });
    }

    let mut mirror_transmissions = Vec::with_capacity(q.k1());
    let mut decoded_ok = Vec::with_capacity(q.k1() * k2);
    let mut failures = Vec::new();
    for m in 0..q.k1() {
        let mirror_cache = Cache {
            lib,
            rows: (0..q.f())
                .map(|j| q.q0(j, m) == MirrorEntry::Star)
                .collect(),
        };
        let mut forwarded = BTreeMap::new();
        for &s in &sets[m] {
            let signal = if let Some(incoming) = server.get(&s) {
                let mut bytes = incoming.bytes.clone();
                let mut terms = Vec::new();
                for &(file, j, user) in &incoming.terms {
                    if user / k2 != m && mirror_cache.rows[j] {
                        let known = mirror_cache
                            .get(file, j)
                            .ok_or(SimError::MirrorCacheMiss { mirror: m, row: j })?;
                        xor_into(&mut bytes, known);
                    } else {
                        terms.push((file, j, user));
                    }
                }
                Signal { bytes, terms }
            } else {
                let mut bytes = vec![0u8; lib.packet_bytes()];
                let mut terms = Vec::new();
                for &(mm, j, c) in cells[&s].iter().filter(|cell| cell.0 == m) {
                    let known = mirror_cache
                        .get(d[mm][c], j)
                        .ok_or(SimError::MirrorCacheMiss { mirror: m, row: j })?;
                    xor_into(&mut bytes, known);
                    terms.push((d[mm][c], j, uid(mm, c)));
                }
                Signal { bytes, terms }
            };
            if opts.trace {
                trace.push(TraceEntry {
                    mirror: Some(m),
                    s,
                    contributors: signal
                        .terms
                        .iter()
                        .map(|&(_, j, user)| vec![user / k2, j, user % k2])
                        .collect(),
                });
            }
            forwarded.insert(s, signal);
        }
        mirror_transmissions.push(forwarded.len() as u64);

        let sub = &q.subs()[m];
        for (c, &want) in d[m].iter().enumerate() {
            let cache = Cache {
                lib,
                rows: (0..q.f()).map(|j| sub.get(j, c).is_star()).collect(),
            };
            let result = decode_user(
                lib,
                |j| sub.get(j, c),
                &cache,
                uid(m, c),
                want,
                |s| forwarded.get(&s),
            );
            if let Err(e) = &result {
                failures.push(format!("user ({m},{c}): {e}"));
            }
            decoded_ok.push(result.is_ok());
        }
    }

    let f = q.f() as u64;
    let r1 = Rational::new(server.len() as u64, f);
    let r2 = Rational::new(mirror_transmissions.iter().copied().max().unwrap_or(0), f);
    Ok(SimReport {
        transmissions: server.len() as u64,
        mirror_transmissions: Some(mirror_transmissions),
        decoded_ok,
        failures,
        measured_r: None,
        measured_r1: Some(r1),
        measured_r2: Some(r2),
        coding_delay_serial: r1 + r2,
        coding_delay_parallel: r1.max(r2),
        trace: opts.trace.then_some(trace),
    })
}
