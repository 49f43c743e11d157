//! Generalized precision/recall, graded RBP and DCG, the valuation
//! identity, and reconstruction of valuations from their values on the
//! join-irreducible elements.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::{JudgedRun, RelevanceScale, RunMode, RunUniverse};
use crate::error::{Error, Result};
use crate::lattice::{DistributiveLattice, RunLattice};

/// Absolute tolerance for every floating-point identity check.
pub const VALUATION_TOLERANCE: f64 = 1e-9;

/// Values of a custom valuation on the join-irreducibles (plus the bottom).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CustomAssignment {
    pub values: BTreeMap<JudgedRun, f64>,
    pub bottom: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// gP
    GeneralizedPrecision,
    /// gR with recall base `RB`.
    GeneralizedRecall { recall_base: f64 },
    /// gRBP with persistence `p`.
    GradedRbp { persistence: f64 },
    /// DCG with logarithm base `b`.
    Dcg { base: f64 },
    Custom(CustomAssignment),
}

impl MetricSpec {
    pub fn generalized_recall(recall_base: f64) -> Result<Self> {
        let spec = MetricSpec::GeneralizedRecall { recall_base };
        spec.validate()?;
        Ok(spec)
    }

    pub fn graded_rbp(persistence: f64) -> Result<Self> {
        let spec = MetricSpec::GradedRbp { persistence };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dcg(base: f64) -> Result<Self> {
        let spec = MetricSpec::Dcg { base };
        spec.validate()?;
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricSpec::GeneralizedPrecision => "gp",
            MetricSpec::GeneralizedRecall { .. } => "gr",
            MetricSpec::GradedRbp { .. } => "grbp",
            MetricSpec::Dcg { .. } => "dcg",
            MetricSpec::Custom(_) => "custom",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason| Err(Error::InvalidParam { metric: self.name(), reason });
        match *self {
            MetricSpec::GeneralizedRecall { recall_base } if !(recall_base > 0.0 && recall_base.is_finite()) => {
                bad("recall base must be positive")
            }
            MetricSpec::GradedRbp { persistence } if !(persistence > 0.0 && persistence < 1.0) => {
                bad("persistence p must lie in (0, 1)")
            }
            MetricSpec::Dcg { base } if !(base > 1.0 && base.is_finite()) => bad("log base b must exceed 1"),
            _ => Ok(()),
        }
    }

    /// Only rank-based runs carry positions for gRBP and DCG.
    pub fn accepts(&self, mode: RunMode) -> bool {
        !matches!(self, MetricSpec::GradedRbp { .. } | MetricSpec::Dcg { .. }) || mode == RunMode::RankBased
    }
}

/// Evaluates a built-in metric on one run.
pub fn eval_metric(spec: &MetricSpec, run: &JudgedRun, scale: &RelevanceScale) -> Result<f64> {
    spec.validate()?;
    if !spec.accepts(run.mode()) {
        return Err(Error::MetricModeMismatch { metric: spec.name(), expected: RunMode::RankBased });
    }
    if let Some(&degree) = run.degrees().iter().find(|&&d| d as usize > scale.max_degree()) {
        return Err(Error::DegreeOutOfRange { degree: degree as usize, max: scale.max_degree() });
    }
    let gains = run.degrees().iter().map(|&d| scale.gain(d as usize));
    let top = scale.top_gain();
    Ok(match *spec {
        MetricSpec::GeneralizedPrecision => gains.map(|g| g / top).sum::<f64>() / run.len() as f64,
        MetricSpec::GeneralizedRecall { recall_base } => gains.map(|g| g / top).sum::<f64>() / recall_base,
        MetricSpec::GradedRbp { persistence } => {
            let mut weight = 1.0;
            let mut total = 0.0;
            for g in gains {
                total += weight * g;
                weight *= persistence;
            }
            (1.0 - persistence) / top * total
        }
        MetricSpec::Dcg { base } => {
            let log_base = libm::log(base);
            gains
                .enumerate()
                .map(|(i, g)| {
                    let discount = libm::log((i + 1) as f64) / log_base;
                    g / discount.max(1.0)
                })
                .sum()
        }
        MetricSpec::Custom(_) => return Err(Error::CustomNeedsLattice),
    })
}

/// Every run of the universe with its metric value, in universe order.
pub fn metric_table(spec: &MetricSpec, universe: &RunUniverse) -> Result<Vec<(JudgedRun, f64)>> {
    universe
        .elements()
        .iter()
        .map(|r| Ok((r.clone(), eval_metric(spec, r, universe.scale())?)))
        .collect()
}

/// Metric values on every element of the lattice. Custom metrics are
/// extended from their irreducible values, which requires distributivity.
pub fn metric_values(spec: &MetricSpec, lattice: &RunLattice) -> Result<Vec<f64>> {
    match spec {
        MetricSpec::Custom(assignment) => {
            let dl = DistributiveLattice::new(lattice.clone())?;
            Ok(extend_custom(&dl, assignment)?.values)
        }
        _ => metric_table(spec, lattice.universe()).map(|t| t.into_iter().map(|(_, v)| v).collect()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValuationCounterexample {
    pub x: usize,
    pub y: usize,
    /// `[v(x), v(y), v(x ∨ y), v(x ∧ y)]`
    pub values: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValuationReport {
    pub is_valuation: bool,
    pub counterexample: Option<ValuationCounterexample>,
    /// Largest `|v(x) + v(y) - v(x ∨ y) - v(x ∧ y)|` over all pairs checked.
    pub max_error: f64,
}

/// Checks `v(x) + v(y) = v(x ∨ y) + v(x ∧ y)` on every pair.
pub fn check_valuation_values(lattice: &RunLattice, values: &[f64]) -> ValuationReport {
    let n = lattice.len();
    let mut max_error: f64 = 0.0;
    for x in 0..n {
        for y in (x + 1)..n {
            let (j, m) = (lattice.join(x, y), lattice.meet(x, y));
            let error = (values[x] + values[y] - values[j] - values[m]).abs();
            max_error = max_error.max(error);
            if error.is_nan() || error > VALUATION_TOLERANCE {
                return ValuationReport {
                    is_valuation: false,
                    counterexample: Some(ValuationCounterexample {
                        x,
                        y,
                        values: [values[x], values[y], values[j], values[m]],
                    }),
                    max_error,
                };
            }
        }
    }
    ValuationReport { is_valuation: true, counterexample: None, max_error }
}

pub fn check_valuation(spec: &MetricSpec, lattice: &RunLattice) -> Result<ValuationReport> {
    Ok(check_valuation_values(lattice, &metric_values(spec, lattice)?))
}

/// One signed term of a flattened inclusion-exclusion expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    /// A join-irreducible or the bottom.
    pub element: usize,
    pub positive: bool,
    pub value: f64,
}

/// Computes valuation values from the values on join-irreducibles and the
/// bottom only, folding each decomposition with
/// `v(A ∨ j) = v(A) + v(j) - v(A ∧ j)` and memoizing per element.
#[derive(Debug)]
pub struct Reconstructor<'a> {
    lattice: &'a DistributiveLattice,
    seeds: Vec<Option<f64>>,
    memo: Vec<Option<f64>>,
}

impl<'a> Reconstructor<'a> {
    /// Seeds a built-in metric after checking that it is a valuation on the
    /// lattice; custom assignments are seeded directly.
    pub fn new(spec: &MetricSpec, lattice: &'a DistributiveLattice) -> Result<Self> {
        match spec {
            MetricSpec::Custom(assignment) => Self::from_assignment(lattice, assignment),
            _ => {
                let report = check_valuation(spec, lattice)?;
                if let Some(ce) = report.counterexample {
                    return Err(Error::NotAValuation { x: lattice.run(ce.x).literal(), y: lattice.run(ce.y).literal() });
                }
                let scale = lattice.universe().scale();
                let mut seeds = vec![None; lattice.len()];
                for &j in lattice.join_irreducibles().iter().chain(core::iter::once(&lattice.bottom())) {
                    seeds[j] = Some(eval_metric(spec, lattice.run(j), scale)?);
                }
                Ok(Self::with_seeds(lattice, seeds))
            }
        }
    }

    fn from_assignment(lattice: &'a DistributiveLattice, assignment: &CustomAssignment) -> Result<Self> {
        let mut seeds = vec![None; lattice.len()];
        seeds[lattice.bottom()] = Some(assignment.bottom);
        for &j in lattice.join_irreducibles() {
            let value = assignment
                .values
                .get(lattice.run(j))
                .ok_or_else(|| Error::IncompleteAssignment(lattice.run(j).literal()))?;
            seeds[j] = Some(*value);
        }
        Ok(Self::with_seeds(lattice, seeds))
    }

    fn with_seeds(lattice: &'a DistributiveLattice, seeds: Vec<Option<f64>>) -> Self {
        let memo = seeds.clone();
        Reconstructor { lattice, seeds, memo }
    }

    pub fn value(&mut self, x: usize) -> Result<f64> {
        if let Some(v) = self.memo[x] {
            return Ok(v);
        }
        let parts = self.fold_order(x)?;
        let mut acc_element = parts[0];
        let mut acc_value = self.value(acc_element)?;
        for &j in &parts[1..] {
            // A ∧ j lies strictly below j, so the recursion descends.
            let meet = self.lattice.meet(acc_element, j);
            acc_value = acc_value + self.value(j)? - self.value(meet)?;
            acc_element = self.lattice.join(acc_element, j);
        }
        self.memo[x] = Some(acc_value);
        Ok(acc_value)
    }

    /// Decomposition parts, highest universe index first.
    fn fold_order(&self, x: usize) -> Result<Vec<usize>> {
        let mut parts = self.lattice.decompose(x)?.parts;
        parts.reverse();
        Ok(parts)
    }

    /// The signed irreducible/bottom terms whose sum is `v(x)`.
    pub fn expansion(&self, x: usize) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        self.expand_into(x, true, &mut terms)?;
        Ok(terms)
    }

    fn expand_into(&self, x: usize, positive: bool, out: &mut Vec<Term>) -> Result<()> {
        if let Some(value) = self.seeds[x] {
            out.push(Term { element: x, positive, value });
            return Ok(());
        }
        let parts = self.fold_order(x)?;
        let mut acc = parts[0];
        self.expand_into(acc, positive, out)?;
        for &j in &parts[1..] {
            self.expand_into(j, positive, out)?;
            self.expand_into(self.lattice.meet(acc, j), !positive, out)?;
            acc = self.lattice.join(acc, j);
        }
        Ok(())
    }
}

/// The value at `x` computed from irreducible and bottom values only.
pub fn reconstruct(spec: &MetricSpec, lattice: &DistributiveLattice, x: usize) -> Result<f64> {
    Reconstructor::new(spec, lattice)?.value(x)
}

/// A custom valuation extended to the whole lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomExtension {
    pub values: Vec<f64>,
    pub valuation: ValuationReport,
    /// Whether `x ⪯ y` implies `v(x) <= v(y)`.
    pub monotone: bool,
    /// A cover pair `(lower, upper)` with `v(lower) > v(upper)`.
    pub monotonicity_witness: Option<(usize, usize)>,
}

/// Extends values given on the join-irreducibles (and bottom) to every
/// element. Values the assignment gives for other runs must agree with the
/// extension.
pub fn extend_custom(lattice: &DistributiveLattice, assignment: &CustomAssignment) -> Result<CustomExtension> {
    let mut indexed = Vec::with_capacity(assignment.values.len());
    for (run, &value) in &assignment.values {
        indexed.push((lattice.index_of(run)?, value));
    }
    let mut rec = Reconstructor::from_assignment(lattice, assignment)?;
    let values = (0..lattice.len()).map(|x| rec.value(x)).collect::<Result<Vec<f64>>>()?;
    for (x, assigned) in indexed {
        let gap = (assigned - values[x]).abs();
        if gap.is_nan() || gap > VALUATION_TOLERANCE {
            return Err(Error::InconsistentAssignment { run: lattice.run(x).literal(), assigned, derived: values[x] });
        }
    }
    let valuation = check_valuation_values(lattice, &values);
    let monotonicity_witness = lattice.covers().into_iter().find(|&(lo, hi)| values[lo] > values[hi] + VALUATION_TOLERANCE);
    Ok(CustomExtension { valuation, monotone: monotonicity_witness.is_none(), monotonicity_witness, values })
}
