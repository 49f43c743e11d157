//! `(R(N), ∧, ∨, ⪯)` materialized for one ordering.
//!
//! [`RunPoset`] needs only the order relation (covers, Hasse diagram,
//! intervals). [`RunLattice`] adds meet/join tables and join-irreducibles,
//! and fails with [`Error::NotALattice`] when some pair has no unique bound.
//! [`DistributiveLattice`] is a lattice that passed the distributive-law
//! check; decomposition and valuation reconstruction live there.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::Deref;

use crate::domain::{JudgedRun, RunUniverse};
use crate::error::{Error, NotALattice, Result};
use crate::order::{DistributivityReport, FiniteLattice, FinitePoset, ForbiddenSublattice, LatticeFailure};
use crate::orderings::{self, OrderingKind};

/// Largest universe for which lattice tables are materialized.
pub const MAX_LATTICE_ELEMENTS: usize = 4096;

#[derive(Debug, Clone)]
pub struct RunPoset {
    universe: RunUniverse,
    kind: OrderingKind,
    poset: FinitePoset,
}

impl RunPoset {
    pub fn build(universe: RunUniverse, kind: OrderingKind) -> Result<Self> {
        if universe.len() > MAX_LATTICE_ELEMENTS {
            return Err(Error::UniverseTooLarge { size: universe.len() as u128, cap: MAX_LATTICE_ELEMENTS });
        }
        let poset = orderings::relation_poset(kind, &universe)?
            .map_err(|_| Error::Invariant("ordering relation is not a partial order"))?;
        let (bottom, top) = (universe.bottom_run(), universe.top_run());
        if poset.bottom() != universe.index_of(&bottom) || poset.top() != universe.index_of(&top) {
            return Err(Error::Invariant("all-a_0 and all-a_c runs must be the bottom and top"));
        }
        Ok(RunPoset { universe, kind, poset })
    }

    pub fn universe(&self) -> &RunUniverse {
        &self.universe
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn run(&self, index: usize) -> &JudgedRun {
        self.universe.get(index)
    }

    /// `[lo, hi]` as element indices.
    pub fn interval(&self, lo: usize, hi: usize) -> Result<Vec<usize>> {
        self.poset.interval(lo, hi).ok_or_else(|| Error::NotComparable {
            lo: self.run(lo).literal(),
            hi: self.run(hi).literal(),
        })
    }

    /// Elements with a single lower cover. On a lattice these are exactly
    /// the join-irreducibles.
    pub fn single_lower_cover_elements(&self) -> Vec<usize> {
        self.poset.single_lower_cover_elements()
    }

    pub fn export_hasse(&self, options: &HasseOptions) -> String {
        let marked = options.highlight_irreducibles.then(|| self.single_lower_cover_elements());
        hasse_dot(&self.universe, &self.poset, marked.as_deref())
    }

    /// The smallest interval `[lo, hi]` that is a lattice but not a
    /// distributive one, with an N5/M3 witness in universe indices. Ties
    /// are broken by `(lo, hi)`.
    pub fn non_distributive_interval(&self) -> Option<(usize, usize, ForbiddenSublattice)> {
        let n = self.poset.len();
        let mut candidates = Vec::new();
        for lo in 0..n {
            for hi in self.poset.upper_set(lo) {
                let size = self.poset.interval(lo, hi).map_or(0, |m| m.len());
                if size >= 5 {
                    candidates.push((size, lo, hi));
                }
            }
        }
        candidates.sort_unstable();
        candidates.into_iter().find_map(|(_, lo, hi)| {
            let members = self.poset.interval(lo, hi)?;
            let sub = FiniteLattice::from_poset(self.poset.subposet(&members)).ok()?;
            let w = sub.check_distributive().sublattice_witness?;
            Some((
                lo,
                hi,
                ForbiddenSublattice {
                    shape: w.shape,
                    bottom: members[w.bottom],
                    middle: w.middle.map(|i| members[i]),
                    top: members[w.top],
                },
            ))
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct HasseOptions {
    /// Draw join-irreducible nodes with a double border.
    pub highlight_irreducibles: bool,
}

fn hasse_dot(universe: &RunUniverse, poset: &FinitePoset, marked: Option<&[usize]>) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    let mut is_marked = vec![false; universe.len()];
    for &m in marked.unwrap_or(&[]) {
        is_marked[m] = true;
    }
    for (i, run) in universe.elements().iter().enumerate() {
        if is_marked[i] {
            let _ = writeln!(out, "  \"{run}\" [peripheries=2];");
        } else {
            let _ = writeln!(out, "  \"{run}\";");
        }
    }
    for (lo, hi) in poset.covers() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", universe.get(lo), universe.get(hi));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone)]
pub struct RunLattice {
    universe: RunUniverse,
    kind: OrderingKind,
    lattice: FiniteLattice,
    irreducibles: Vec<usize>,
}

impl RunLattice {
    pub fn build(universe: RunUniverse, kind: OrderingKind) -> Result<Self> {
        Self::from_poset(RunPoset::build(universe, kind)?)
    }

    /// Computes meet/join tables and verifies the structural invariants:
    /// covers generate the order, bounds agree with the closed forms where
    /// those exist, and both join-irreducible criteria agree.
    pub fn from_poset(poset: RunPoset) -> Result<Self> {
        let RunPoset { universe, kind, poset } = poset;
        let lattice = FiniteLattice::from_poset(poset).map_err(|f| not_a_lattice(&universe, f))?;
        verify_cover_closure(lattice.poset())?;
        if kind.has_closed_form() {
            for a in 0..universe.len() {
                for b in a..universe.len() {
                    let (m, j) = closed_meet_join(kind, universe.get(a), universe.get(b))?;
                    if universe.index_of(&m) != Some(lattice.meet(a, b))
                        || universe.index_of(&j) != Some(lattice.join(a, b))
                    {
                        return Err(Error::Invariant("closed-form meet/join disagrees with bound search"));
                    }
                }
            }
        }
        let irreducibles = lattice.join_irreducibles();
        if irreducibles != lattice.join_irreducibles_algebraic() {
            return Err(Error::Invariant("join-irreducible criteria disagree"));
        }
        Ok(RunLattice { universe, kind, lattice, irreducibles })
    }

    pub fn universe(&self) -> &RunUniverse {
        &self.universe
    }

    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn poset(&self) -> &FinitePoset {
        self.lattice.poset()
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn run(&self, index: usize) -> &JudgedRun {
        self.universe.get(index)
    }

    pub fn index_of(&self, run: &JudgedRun) -> Result<usize> {
        self.universe.require(run)
    }

    pub fn bottom(&self) -> usize {
        self.lattice.bottom()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.lattice.meet(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.lattice.join(a, b)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.lattice.poset().le(a, b)
    }

    /// Cover edges `(lower, upper)`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.lattice.poset().covers()
    }

    /// Join-irreducible element indices, ascending.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.irreducibles
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        self.irreducibles.binary_search(&x).is_ok()
    }

    pub fn interval(&self, lo: usize, hi: usize) -> Result<Vec<usize>> {
        self.lattice.poset().interval(lo, hi).ok_or_else(|| Error::NotComparable {
            lo: self.run(lo).literal(),
            hi: self.run(hi).literal(),
        })
    }

    pub fn check_distributive(&self) -> DistributivityReport {
        self.lattice.check_distributive()
    }

    pub fn export_hasse(&self, options: &HasseOptions) -> String {
        let marked = options.highlight_irreducibles.then_some(&self.irreducibles[..]);
        hasse_dot(&self.universe, self.lattice.poset(), marked)
    }
}

fn not_a_lattice(universe: &RunUniverse, f: LatticeFailure) -> Error {
    Error::NotALattice(NotALattice {
        left: universe.get(f.left).literal(),
        right: universe.get(f.right).literal(),
        bound: f.bound,
        candidates: f.candidates.iter().map(|&c| universe.get(c).literal()).collect(),
    })
}

// The reflexive-transitive closure of the cover edges must be the order.
fn verify_cover_closure(poset: &FinitePoset) -> Result<()> {
    let n = poset.len();
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for start in 0..n {
        let mut reached = 0;
        stack.push(start);
        seen[start] = start;
        while let Some(x) = stack.pop() {
            reached += 1;
            if !poset.le(start, x) {
                return Err(Error::Invariant("cover closure exceeds the order"));
            }
            for &y in poset.upper_covers(x) {
                if seen[y] != start {
                    seen[y] = start;
                    stack.push(y);
                }
            }
        }
        if reached != poset.upper_set(start).count() {
            return Err(Error::Invariant("cover closure misses part of the order"));
        }
    }
    Ok(())
}

/// Meet and join from the closed forms: componentwise min/max of the
/// (canonical) degree vectors for the replacement orderings, and the
/// order-minimum/maximum for the two chains.
pub fn closed_meet_join(kind: OrderingKind, r: &JudgedRun, s: &JudgedRun) -> Result<(JudgedRun, JudgedRun)> {
    for run in [r, s] {
        if run.mode() != kind.mode() {
            return Err(Error::ModeMismatch { expected: kind.mode(), found: run.mode() });
        }
    }
    if r.len() != s.len() {
        return Err(Error::LengthMismatch { left: r.len(), right: s.len() });
    }
    let (a, b) = (r.degrees(), s.degrees());
    match kind {
        OrderingKind::ReplSet | OrderingKind::ReplRank => {
            let lo = a.iter().zip(b).map(|(x, y)| *x.min(y)).collect();
            let hi = a.iter().zip(b).map(|(x, y)| *x.max(y)).collect();
            Ok((JudgedRun::from_raw(kind.mode(), lo), JudgedRun::from_raw(kind.mode(), hi)))
        }
        OrderingKind::ProjReplRank => Ok(if a <= b { (r.clone(), s.clone()) } else { (s.clone(), r.clone()) }),
        OrderingKind::ProjReplSet => {
            // Scanning degree counts from the top is lexicographic order on
            // the sorted vectors.
            Ok(if a <= b { (r.clone(), s.clone()) } else { (s.clone(), r.clone()) })
        }
        OrderingKind::ReplSwapRank => Err(Error::NoClosedForm(kind)),
    }
}

/// An element written as the irredundant join of join-irreducibles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub element: usize,
    /// Join-irreducible indices, ascending.
    pub parts: Vec<usize>,
}

/// A lattice that passed the exhaustive distributive-law check.
#[derive(Debug, Clone)]
pub struct DistributiveLattice {
    inner: RunLattice,
}

impl DistributiveLattice {
    pub fn new(lattice: RunLattice) -> Result<Self> {
        let report = lattice.check_distributive();
        match report.witness {
            None => Ok(DistributiveLattice { inner: lattice }),
            Some(w) => Err(Error::NotDistributive { witness: w.map(|i| lattice.run(i).literal()) }),
        }
    }

    pub fn into_inner(self) -> RunLattice {
        self.inner
    }

    /// The unique irredundant join decomposition of `x`: the maximal
    /// join-irreducibles below it. The join, irredundancy and antichain
    /// properties are verified before returning.
    pub fn decompose(&self, x: usize) -> Result<Decomposition> {
        let l = &self.inner;
        if x == l.bottom() {
            return Err(Error::BottomHasNoDecomposition);
        }
        let parts = l.lattice.maximal_irreducibles_below(x, &l.irreducibles);
        if l.lattice.join_all(parts.iter().copied()) != x {
            return Err(Error::Invariant("decomposition does not join to the element"));
        }
        for (i, &p) in parts.iter().enumerate() {
            let rest = parts.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &q)| q);
            if l.lattice.join_all(rest) == x {
                return Err(Error::Invariant("decomposition is redundant"));
            }
            if parts.iter().any(|&q| l.le(p, q) && p != q) {
                return Err(Error::Invariant("decomposition is not an antichain"));
            }
        }
        Ok(Decomposition { element: x, parts })
    }
}

impl Deref for DistributiveLattice {
    type Target = RunLattice;

    fn deref(&self) -> &RunLattice {
        &self.inner
    }
}

/// An N5/M3 witness translated to runs.
pub fn describe_forbidden(lattice: &RunLattice, w: &ForbiddenSublattice) -> [JudgedRun; 5] {
    w.elements().map(|i| lattice.run(i).clone())
}
