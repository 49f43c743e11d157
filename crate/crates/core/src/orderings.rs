//! The five orderings on `R(N)` induced by combining the replacement,
//! projection and swapping operations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::domain::{JudgedRun, RelevanceScale, RunMode, RunUniverse};
use crate::error::{Error, Result};
use crate::order::{FinitePoset, PosetViolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderingKind {
    /// Projection + replacement on multisets: compare degree counts from the
    /// top degree down; the first differing count decides. A chain.
    ProjReplSet,
    /// Replacement on multisets: cumulated-mass dominance at every degree.
    ReplSet,
    /// Projection + replacement on rankings: the first differing position
    /// decides. A chain.
    ProjReplRank,
    /// Replacement on rankings: positionwise dominance.
    ReplRank,
    /// Replacement + swapping on rankings: cumulated-mass dominance at every
    /// degree within every prefix.
    ReplSwapRank,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 5] = [
        OrderingKind::ProjReplSet,
        OrderingKind::ReplSet,
        OrderingKind::ProjReplRank,
        OrderingKind::ReplRank,
        OrderingKind::ReplSwapRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrderingKind::ProjReplSet => "proj-repl-set",
            OrderingKind::ReplSet => "repl-set",
            OrderingKind::ProjReplRank => "proj-repl-rank",
            OrderingKind::ReplRank => "repl-rank",
            OrderingKind::ReplSwapRank => "repl-swap-rank",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn mode(self) -> RunMode {
        match self {
            OrderingKind::ProjReplSet | OrderingKind::ReplSet => RunMode::SetBased,
            _ => RunMode::RankBased,
        }
    }

    /// Whether the ordering has a closed-form meet and join.
    pub fn has_closed_form(self) -> bool {
        self != OrderingKind::ReplSwapRank
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareResult {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl CompareResult {
    fn from_dominance(le: bool, ge: bool) -> Self {
        match (le, ge) {
            (true, true) => CompareResult::Equal,
            (true, false) => CompareResult::Less,
            (false, true) => CompareResult::Greater,
            (false, false) => CompareResult::Incomparable,
        }
    }

    fn from_ord(ord: core::cmp::Ordering) -> Self {
        match ord {
            core::cmp::Ordering::Less => CompareResult::Less,
            core::cmp::Ordering::Equal => CompareResult::Equal,
            core::cmp::Ordering::Greater => CompareResult::Greater,
        }
    }

    /// `r ⪯ s`.
    pub fn is_le(self) -> bool {
        matches!(self, CompareResult::Less | CompareResult::Equal)
    }

    pub fn reverse(self) -> Self {
        match self {
            CompareResult::Less => CompareResult::Greater,
            CompareResult::Greater => CompareResult::Less,
            other => other,
        }
    }
}

/// Compares two runs under `kind`.
pub fn compare(kind: OrderingKind, r: &JudgedRun, s: &JudgedRun, scale: &RelevanceScale) -> Result<CompareResult> {
    for run in [r, s] {
        if run.mode() != kind.mode() {
            return Err(Error::ModeMismatch { expected: kind.mode(), found: run.mode() });
        }
    }
    if r.len() != s.len() {
        return Err(Error::LengthMismatch { left: r.len(), right: s.len() });
    }
    let (a, b) = (r.degrees(), s.degrees());
    Ok(match kind {
        // Canonical set-based runs are sorted, and dominance of the
        // cumulated mass at every degree is equivalent to positionwise
        // dominance of the sorted vectors.
        OrderingKind::ReplSet | OrderingKind::ReplRank => positionwise(a, b),
        OrderingKind::ProjReplRank => CompareResult::from_ord(a.cmp(b)),
        OrderingKind::ProjReplSet => {
            let (ca, cb) = (degree_counts(a, scale), degree_counts(b, scale));
            // k is the largest degree whose counts differ.
            match ca.iter().zip(&cb).rev().find(|(x, y)| x != y) {
                None => CompareResult::Equal,
                Some((x, y)) => CompareResult::from_ord(x.cmp(y)),
            }
        }
        OrderingKind::ReplSwapRank => prefix_dominance(a, b, scale.max_degree()),
    })
}

fn positionwise(a: &[u8], b: &[u8]) -> CompareResult {
    let le = a.iter().zip(b).all(|(x, y)| x <= y);
    let ge = a.iter().zip(b).all(|(x, y)| x >= y);
    CompareResult::from_dominance(le, ge)
}

fn degree_counts(degrees: &[u8], scale: &RelevanceScale) -> Vec<usize> {
    let mut counts = vec![0; scale.max_degree() + 1];
    for &d in degrees {
        counts[d as usize] += 1;
    }
    counts
}

// Prefix masses are accumulated incrementally: after position k, mass[j]
// holds the number of positions <= k with degree >= a_j.
fn prefix_dominance(a: &[u8], b: &[u8], c: usize) -> CompareResult {
    let mut mass_a = vec![0usize; c + 1];
    let mut mass_b = vec![0usize; c + 1];
    let (mut le, mut ge) = (true, true);
    for (&x, &y) in a.iter().zip(b) {
        for m in &mut mass_a[..=x as usize] {
            *m += 1;
        }
        for m in &mut mass_b[..=y as usize] {
            *m += 1;
        }
        for (ma, mb) in mass_a.iter().zip(&mass_b) {
            le &= ma <= mb;
            ge &= ma >= mb;
        }
        if !le && !ge {
            break;
        }
    }
    CompareResult::from_dominance(le, ge)
}

/// Outcome of the exhaustive partial-order axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetReport {
    pub kind: OrderingKind,
    pub elements: usize,
    /// The first violated axiom, with element indices into the universe.
    pub violation: Option<PosetViolation>,
}

impl PosetReport {
    pub fn is_poset(&self) -> bool {
        self.violation.is_none()
    }
}

/// Builds the relation of `kind` over the whole universe.
pub(crate) fn relation_poset(kind: OrderingKind, universe: &RunUniverse) -> Result<Result<FinitePoset, PosetViolation>> {
    if universe.mode() != kind.mode() {
        return Err(Error::ModeMismatch { expected: kind.mode(), found: universe.mode() });
    }
    let runs = universe.elements();
    let scale = universe.scale();
    let mut failure = None;
    let poset = FinitePoset::from_relation(runs.len(), |i, j| {
        match compare(kind, &runs[i], &runs[j], scale) {
            Ok(result) => result.is_le(),
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(poset),
    }
}

/// Exhaustively checks reflexivity, antisymmetry and transitivity of `kind`
/// on every pair and triple of the universe.
pub fn verify_poset_axioms(kind: OrderingKind, universe: &RunUniverse) -> Result<PosetReport> {
    let violation = relation_poset(kind, universe)?.err();
    Ok(PosetReport { kind, elements: universe.len(), violation })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalityReport {
    pub total: bool,
    /// The first incomparable pair in universe order.
    pub witness: Option<(JudgedRun, JudgedRun)>,
}

/// Whether every pair of runs is comparable under `kind`.
pub fn is_total(kind: OrderingKind, universe: &RunUniverse) -> Result<TotalityReport> {
    if universe.mode() != kind.mode() {
        return Err(Error::ModeMismatch { expected: kind.mode(), found: universe.mode() });
    }
    let runs = universe.elements();
    for (i, r) in runs.iter().enumerate() {
        for s in &runs[i + 1..] {
            if compare(kind, r, s, universe.scale())? == CompareResult::Incomparable {
                return Ok(TotalityReport { total: false, witness: Some((r.clone(), s.clone())) });
            }
        }
    }
    Ok(TotalityReport { total: true, witness: None })
}
