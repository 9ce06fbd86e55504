//! Approximate diagrams, interleaving predicates, and verification of a
//! sparse diagram against an exact one.
//!
//! A sparse diagram entry `(b, d)` over-estimates the true lifetime, so the
//! true point lies in the box `[psi_inv(b), b] x [psi_inv(d), d]` whose upper
//! right corner is the computed entry. Entries with `d > psi(b)` are certain
//! to correspond to a true feature.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{DiagramEntry, PersistenceDiagram};
use crate::sparsify::PrecisionProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryClass {
    Definite,
    Possible,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxEntry {
    pub dim: usize,
    pub birth: f64,
    #[serde(with = "crate::io::float")]
    pub death: f64,
    /// `[b_lo, b_hi, d_lo, d_hi]`.
    #[serde(with = "crate::io::float_array")]
    pub rect: [f64; 4],
    pub class: EntryClass,
    /// Set for infinite deaths: the box is open upwards.
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxDiagram {
    pub base: PersistenceDiagram,
    pub profile: PrecisionProfile,
    pub entries: Vec<ApproxEntry>,
}

impl ApproxDiagram {
    pub fn definite(&self) -> impl Iterator<Item = &ApproxEntry> + '_ {
        self.entries.iter().filter(|e| e.class == EntryClass::Definite)
    }
}

pub fn approximate(diagram: &PersistenceDiagram, profile: &PrecisionProfile) -> ApproxDiagram {
    let entries = diagram
        .entries()
        .iter()
        .map(|e| {
            let class = if e.death > profile.psi(e.birth) {
                EntryClass::Definite
            } else {
                EntryClass::Possible
            };
            ApproxEntry {
                dim: e.dim,
                birth: e.birth,
                death: e.death,
                rect: [profile.psi_inv(e.birth), e.birth, profile.psi_inv(e.death), e.death],
                class,
                unbounded: e.is_essential(),
            }
        })
        .collect();
    ApproxDiagram {
        base: diagram.clone(),
        profile: *profile,
        entries,
    }
}

/// Whether `v = (b, d]` in `V` and `w = (b̂, d̂]` in `W` may be matched when
/// `psi1: V -> W` and `psi2: W -> V` interleave the two modules.
pub fn related(v: (f64, f64), w: (f64, f64), psi1: impl Fn(f64) -> f64, psi2: impl Fn(f64) -> f64) -> bool {
    let ((b, d), (bh, dh)) = (v, w);
    bh <= psi1(b) && b <= psi2(bh) && psi2(dh) >= d && dh <= psi1(d)
}

/// Whether `(b, d]` survives the round trip `psi1 ∘ psi2`; such entries must be
/// matched. For an entry of `W`, pass the maps in the opposite order.
pub fn alive(entry: (f64, f64), psi1: impl Fn(f64) -> f64, psi2: impl Fn(f64) -> f64) -> bool {
    psi1(psi2(entry.0)) <= entry.1
}

/// Number of entries with `b < s` and `d >= t`.
pub fn rank_at(entries: &[DiagramEntry], s: f64, t: f64) -> Result<usize> {
    if s > t {
        return Err(Error::input(format!("rank query needs s <= t, got s = {s}, t = {t}")));
    }
    Ok(entries.iter().filter(|e| e.birth < s && e.death >= t).count())
}

/// Partial matching between the entries of two diagrams, by index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_v: Vec<usize>,
    pub unmatched_w: Vec<usize>,
}

/// Alive entries that no related partner could be found for.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatchFailure {
    pub uncovered_v: Vec<usize>,
    pub uncovered_w: Vec<usize>,
}

// Augmenting-path search from `u`; `mate` maps right vertices to left ones.
fn augment(u: usize, adj: &[Vec<usize>], mate: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &w in &adj[u] {
        if seen[w] {
            continue;
        }
        seen[w] = true;
        let free = match mate[w] {
            None => true,
            Some(x) => augment(x, adj, mate, seen),
        };
        if free {
            mate[w] = Some(u);
            return true;
        }
    }
    false
}

// Matching that covers as many of `starts` as possible, as `left -> right`.
fn cover(starts: &[usize], adj: &[Vec<usize>], right: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut mate = vec![None; right];
    let mut missed = Vec::new();
    for &u in starts {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut mate, &mut seen) {
            missed.push(u);
        }
    }
    let mut left_mate = vec![None; adj.len()];
    for (w, m) in mate.iter().enumerate() {
        if let Some(u) = *m {
            left_mate[u] = Some(w);
        }
    }
    (left_mate, missed)
}

/// Searches for a matching of related entries (same dimension) covering every
/// alive entry of both diagrams.
///
/// One matching covering the alive entries of `V` and one covering those of
/// `W` are found separately; their union splits into alternating paths and
/// cycles, and on each component one of the two edge sets covers every alive
/// vertex.
pub fn match_diagrams(
    v: &[DiagramEntry],
    w: &[DiagramEntry],
    psi1: impl Fn(f64) -> f64,
    psi2: impl Fn(f64) -> f64,
) -> std::result::Result<Matching, MatchFailure> {
    let mut adj_v = vec![Vec::new(); v.len()];
    let mut adj_w = vec![Vec::new(); w.len()];
    for (i, a) in v.iter().enumerate() {
        for (j, b) in w.iter().enumerate() {
            if a.dim == b.dim && related((a.birth, a.death), (b.birth, b.death), &psi1, &psi2) {
                adj_v[i].push(j);
                adj_w[j].push(i);
            }
        }
    }
    let alive_v: Vec<usize> = (0..v.len())
        .filter(|&i| alive((v[i].birth, v[i].death), &psi1, &psi2))
        .collect();
    let alive_w: Vec<usize> = (0..w.len())
        .filter(|&j| alive((w[j].birth, w[j].death), &psi2, &psi1))
        .collect();

    let (m1, missed_v) = cover(&alive_v, &adj_v, w.len());
    let (m2, missed_w) = cover(&alive_w, &adj_w, v.len());
    if !missed_v.is_empty() || !missed_w.is_empty() {
        return Err(MatchFailure {
            uncovered_v: missed_v,
            uncovered_w: missed_w,
        });
    }

    // m1: v -> w covering alive v; m2: w -> v covering alive w.
    let mut m1_w = vec![None; w.len()];
    for (i, m) in m1.iter().enumerate() {
        if let Some(j) = *m {
            m1_w[j] = Some(i);
        }
    }
    let mut m2_v = vec![None; v.len()];
    for (j, m) in m2.iter().enumerate() {
        if let Some(i) = *m {
            m2_v[i] = Some(j);
        }
    }
    let is_alive_v: Vec<bool> = (0..v.len()).map(|i| m1[i].is_some()).collect();
    let is_alive_w: Vec<bool> = (0..w.len()).map(|j| m2[j].is_some()).collect();

    // Walk components of the union; nodes are (side, index) with side 0 = v.
    let mut seen_v = vec![false; v.len()];
    let mut seen_w = vec![false; w.len()];
    let mut pairs = Vec::new();
    for start in 0..v.len() + w.len() {
        let root = if start < v.len() { (0, start) } else { (1, start - v.len()) };
        let visited = if root.0 == 0 { seen_v[root.1] } else { seen_w[root.1] };
        if visited {
            continue;
        }
        let mut comp_v = Vec::new();
        let mut comp_w = Vec::new();
        let mut stack = vec![root];
        while let Some((side, x)) = stack.pop() {
            if side == 0 {
                if std::mem::replace(&mut seen_v[x], true) {
                    continue;
                }
                comp_v.push(x);
                stack.extend(m1[x].iter().chain(m2_v[x].iter()).map(|&j| (1, j)));
            } else {
                if std::mem::replace(&mut seen_w[x], true) {
                    continue;
                }
                comp_w.push(x);
                stack.extend(m2[x].iter().chain(m1_w[x].iter()).map(|&i| (0, i)));
            }
        }
        let first_ok = comp_w.iter().all(|&j| !is_alive_w[j] || m1_w[j].is_some());
        if first_ok {
            pairs.extend(comp_v.iter().filter_map(|&i| m1[i].map(|j| (i, j))));
        } else {
            debug_assert!(comp_v.iter().all(|&i| !is_alive_v[i] || m2_v[i].is_some()));
            pairs.extend(comp_w.iter().filter_map(|&j| m2[j].map(|i| (i, j))));
        }
    }
    pairs.sort_unstable();
    let mut used_v = vec![false; v.len()];
    let mut used_w = vec![false; w.len()];
    for &(i, j) in &pairs {
        used_v[i] = true;
        used_w[j] = true;
    }
    Ok(Matching {
        pairs,
        unmatched_v: (0..v.len()).filter(|&i| !used_v[i]).collect(),
        unmatched_w: (0..w.len()).filter(|&j| !used_w[j]).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankCheck {
    /// `rank_W(s, psi(t)) <= rank_V(s, t)`.
    SparseIntoFull,
    /// `rank_V(s, t) <= rank_W(psi(s), t)` for `psi(s) <= t`.
    FullIntoSparse,
}

/// A scale `x`, or the limit just above it (`above`). Rank functions jump
/// right after births and deaths, so both sides of every jump are probed
/// without relying on floating-point successors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    #[serde(with = "crate::io::float")]
    pub x: f64,
    pub above: bool,
}

impl Scale {
    pub fn at(x: f64) -> Self {
        Scale { x, above: false }
    }

    pub fn above(x: f64) -> Self {
        Scale { x, above: true }
    }

    fn cmp(&self, other: &Scale) -> Ordering {
        self.x.total_cmp(&other.x).then(self.above.cmp(&other.above))
    }

    // Maps through a nondecreasing `psi`, taking `psi(x+)` to be `psi(x)+`.
    fn map(self, psi: impl Fn(f64) -> f64) -> Scale {
        Scale {
            x: psi(self.x),
            above: self.above,
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.x, if self.above { "+" } else { "" })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankViolation {
    pub check: RankCheck,
    pub dim: usize,
    pub s: Scale,
    pub t: Scale,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterleavingReport {
    pub pairs_checked: u64,
    pub violation_count: u64,
    /// The first few violations found, in scan order.
    pub violations: Vec<RankViolation>,
    pub matching: std::result::Result<Matching, MatchFailure>,
}

impl InterleavingReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.matching.is_ok()
    }
}

const MAX_REPORTED: usize = 20;

// Deaths of the entries with birth below a moving scale, kept sorted.
struct PrefixDeaths<'a> {
    by_birth: Vec<&'a DiagramEntry>,
    taken: usize,
    deaths: Vec<Scale>,
}

impl<'a> PrefixDeaths<'a> {
    fn new(entries: &'a [DiagramEntry], dim: usize) -> Self {
        let mut by_birth: Vec<&DiagramEntry> = entries.iter().filter(|e| e.dim == dim).collect();
        by_birth.sort_by(|a, b| a.birth.total_cmp(&b.birth));
        PrefixDeaths {
            by_birth,
            taken: 0,
            deaths: Vec::new(),
        }
    }

    /// Includes every entry with `b < s`; `s` must not decrease between calls.
    fn advance(&mut self, s: Scale) {
        while self.taken < self.by_birth.len() && Scale::at(self.by_birth[self.taken].birth).cmp(&s).is_lt() {
            let d = Scale::at(self.by_birth[self.taken].death);
            let at = self.deaths.partition_point(|x| x.cmp(&d).is_lt());
            self.deaths.insert(at, d);
            self.taken += 1;
        }
    }

    /// Entries included so far with `d >= t`.
    fn count_at_least(&self, t: Scale) -> usize {
        self.deaths.len() - self.deaths.partition_point(|x| x.cmp(&t).is_lt())
    }
}

/// Checks that `W` (sparse) and `V` (full) satisfy the rank inequalities of a
/// `psi`-interleaving at every pair `s <= t` of critical scales, and that a
/// matching covering all alive entries exists with `V -> W` along `psi` and
/// `W -> V` the identity.
///
/// Critical scales are all births and deaths of either diagram, each taken
/// exactly and from just above.
pub fn verify_interleaving(v: &PersistenceDiagram, w: &PersistenceDiagram, psi: impl Fn(f64) -> f64) -> InterleavingReport {
    let mut values: Vec<Scale> = v
        .entries()
        .iter()
        .chain(w.entries())
        .flat_map(|e| [e.birth, e.death])
        .flat_map(|x| [Scale::at(x), Scale::above(x)])
        .collect();
    values.sort_by(Scale::cmp);
    values.dedup();

    let dims = v.max_dim().max(w.max_dim()).map_or(0, |d| d + 1);
    let mut violations = Vec::new();
    let mut violation_count = 0u64;
    let mut pairs_checked = 0u64;
    for dim in 0..dims {
        let mut v_at_s = PrefixDeaths::new(v.entries(), dim);
        let mut w_at_s = PrefixDeaths::new(w.entries(), dim);
        let mut w_at_psi_s = PrefixDeaths::new(w.entries(), dim);
        for (k, &s) in values.iter().enumerate() {
            let psi_s = s.map(&psi);
            v_at_s.advance(s);
            w_at_s.advance(s);
            w_at_psi_s.advance(psi_s);
            for &t in &values[k..] {
                pairs_checked += 1;
                let rank_v = v_at_s.count_at_least(t);
                let mut found = Vec::new();
                let lhs = w_at_s.count_at_least(t.map(&psi));
                if lhs > rank_v {
                    found.push((RankCheck::SparseIntoFull, lhs, rank_v));
                }
                if psi_s.cmp(&t).is_le() {
                    let rhs = w_at_psi_s.count_at_least(t);
                    if rank_v > rhs {
                        found.push((RankCheck::FullIntoSparse, rank_v, rhs));
                    }
                }
                for (check, lhs, rhs) in found {
                    violation_count += 1;
                    if violations.len() < MAX_REPORTED {
                        violations.push(RankViolation {
                            check,
                            dim,
                            s,
                            t,
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
    }

    let matching = match_diagrams(v.entries(), w.entries(), &psi, |r| r);
    InterleavingReport {
        pairs_checked,
        violation_count,
        violations,
        matching,
    }
}
