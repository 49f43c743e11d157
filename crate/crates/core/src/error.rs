use alloc::string::String;
use alloc::vec::Vec;

use crate::domain::RunMode;
use crate::orderings::OrderingKind;

/// Errors raised by the core engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a relevance scale needs at least two degrees (c >= 1), got c = {c}")]
    InvalidDegreeCount { c: usize },

    #[error("expected {expected} gains for c = {c}, got {got}")]
    GainCountMismatch { c: usize, expected: usize, got: usize },

    #[error("the gain of a_0 must be 0, got {0}")]
    NonzeroGainAtBottom(f64),

    #[error("gains must be finite and strictly increasing: g(a_{index}) = {previous} is not below g(a_{next}) = {value}", next = index + 1)]
    NonIncreasingGains { index: usize, previous: f64, value: f64 },

    #[error("degree {degree} is outside [0, {max}]")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("a judged run must contain at least one document")]
    EmptyRun,

    #[error("malformed run literal {0:?}: expected comma-separated degree indices")]
    InvalidLiteral(String),

    #[error("a prefix cutoff only applies to rank-based runs")]
    PrefixOnSetBased,

    #[error("prefix cutoff {k} is outside [1, {len}]")]
    PrefixOutOfRange { k: usize, len: usize },

    #[error("expected a {expected} run, got a {found} run")]
    ModeMismatch { expected: RunMode, found: RunMode },

    #[error("runs of different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("universe of {size} runs exceeds the cap of {cap}")]
    UniverseTooLarge { size: u128, cap: usize },

    #[error("run {0} is not part of the universe")]
    RunNotInUniverse(String),

    #[error("not a lattice: {0}")]
    NotALattice(NotALattice),

    #[error("ordering {0} has no closed-form meet/join")]
    NoClosedForm(OrderingKind),

    #[error("the bottom element has no decomposition into join-irreducibles")]
    BottomHasNoDecomposition,

    #[error("lattice is not distributive: x = {}, y = {}, z = {}", .witness[0], .witness[1], .witness[2])]
    NotDistributive { witness: [String; 3] },

    #[error("{lo} and {hi} do not satisfy lo <= hi")]
    NotComparable { lo: String, hi: String },

    #[error("metric {metric}: {reason}")]
    InvalidParam { metric: &'static str, reason: &'static str },

    #[error("metric {metric} needs a {expected} run")]
    MetricModeMismatch { metric: &'static str, expected: RunMode },

    #[error("custom metrics can only be evaluated through a distributive lattice")]
    CustomNeedsLattice,

    #[error("not a valuation: v({x}) + v({y}) != v(join) + v(meet)")]
    NotAValuation { x: String, y: String },

    #[error("no value assigned to join-irreducible {0}")]
    IncompleteAssignment(String),

    #[error("value {assigned} assigned to {run} disagrees with the value {derived} derived from the join-irreducibles")]
    InconsistentAssignment { run: String, assigned: f64, derived: f64 },

    #[error("internal invariant violated: {0}")]
    Invariant(&'static str),
}

/// Two elements without a unique least upper (or greatest lower) bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotALattice {
    pub left: String,
    pub right: String,
    pub bound: BoundKind,
    /// The minimal upper bounds (or maximal lower bounds) found instead of a single one.
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

impl core::fmt::Display for NotALattice {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let what = match self.bound {
            BoundKind::Upper => "minimal upper bounds",
            BoundKind::Lower => "maximal lower bounds",
        };
        write!(f, "{} and {} have {} {} [", self.left, self.right, self.candidates.len(), what)?;
        for (i, c) in self.candidates.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str(c)?;
        }
        f.write_str("]")
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
