//! Finite lattices of judged retrieval runs.
//!
//! A judged run is a list (rank-based) or multiset (set-based) of relevance
//! degrees. Combining the replacement, projection and swapping axioms yields
//! five orderings on the set `R(N)` of all runs of length `N`. This crate
//! materializes each ordering as a finite poset or lattice, checks its
//! structure (chains, distributivity, join-irreducibles, unique
//! decompositions), and evaluates gP, gR, gRBP and DCG, including
//! reconstruction of any valuation from its values on the join-irreducibles.
//!
//! ```
//! use runlattice_core::{DistributiveLattice, MetricSpec, OrderingKind, RelevanceScale, RunLattice, RunMode, RunUniverse};
//!
//! let scale = RelevanceScale::linear(2).unwrap();
//! let universe = RunUniverse::enumerate(&scale, 3, RunMode::RankBased, 1000).unwrap();
//! let lattice = DistributiveLattice::new(RunLattice::build(universe, OrderingKind::ReplRank).unwrap()).unwrap();
//! assert_eq!(lattice.join_irreducibles().len(), 6);
//!
//! let x = lattice.universe().locate(&[2, 1, 1]).unwrap();
//! let v = runlattice_core::reconstruct(&MetricSpec::GeneralizedPrecision, &lattice, x).unwrap();
//! assert!((v - 2.0 / 3.0).abs() < 1e-12);
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bitset;
pub mod domain;
pub mod error;
pub mod lattice;
pub mod metrics;
pub mod order;
pub mod orderings;

pub use domain::{parse_literal, universe_size, JudgedRun, RelevanceScale, RunMode, RunUniverse, DEFAULT_UNIVERSE_CAP};
pub use error::{Error, Result};
pub use lattice::{closed_meet_join, Decomposition, DistributiveLattice, HasseOptions, RunLattice, RunPoset, MAX_LATTICE_ELEMENTS};
pub use metrics::{
    check_valuation, eval_metric, extend_custom, metric_table, metric_values, reconstruct, CustomAssignment,
    CustomExtension, MetricSpec, Reconstructor, ValuationReport, VALUATION_TOLERANCE,
};
pub use order::{DistributivityReport, ForbiddenShape, ForbiddenSublattice};
pub use orderings::{compare, is_total, verify_poset_axioms, CompareResult, OrderingKind, PosetReport, TotalityReport};
