//! Relevance scales, judged runs, and the universe `R(N)` of all runs of a
//! given length.
//!
//! Degrees are stored as indices into the scale (`0` is `a_0`, the
//! non-relevant degree). Set-based runs are multisets and are kept in their
//! canonical form, sorted non-increasing, so that structural equality is
//! multiset equality.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default limit on the number of runs a universe may hold.
pub const DEFAULT_UNIVERSE_CAP: usize = 100_000;

/// Totally ordered degrees `a_0 < ... < a_c` together with a gain function.
#[derive(Debug, Clone, PartialEq)]
pub struct RelevanceScale {
    gains: Vec<f64>,
}

impl RelevanceScale {
    /// Builds a scale with `c + 1` degrees. Without explicit gains the
    /// linear gain `g(a_i) = i` is used.
    pub fn new(c: usize, gains: Option<Vec<f64>>) -> Result<Self> {
        if c < 1 {
            return Err(Error::InvalidDegreeCount { c });
        }
        if c > u8::MAX as usize {
            return Err(Error::DegreeOutOfRange { degree: c, max: u8::MAX as usize });
        }
        let gains = match gains {
            None => (0..=c).map(|i| i as f64).collect(),
            Some(g) => g,
        };
        if gains.len() != c + 1 {
            return Err(Error::GainCountMismatch { c, expected: c + 1, got: gains.len() });
        }
        if gains[0] != 0.0 {
            return Err(Error::NonzeroGainAtBottom(gains[0]));
        }
        for (index, pair) in gains.windows(2).enumerate() {
            if pair[0].partial_cmp(&pair[1]) != Some(core::cmp::Ordering::Less) || !pair[1].is_finite() {
                return Err(Error::NonIncreasingGains { index, previous: pair[0], value: pair[1] });
            }
        }
        Ok(RelevanceScale { gains })
    }

    pub fn linear(c: usize) -> Result<Self> {
        Self::new(c, None)
    }

    /// The largest degree index `c`.
    pub fn max_degree(&self) -> usize {
        self.gains.len() - 1
    }

    pub fn gain(&self, degree: usize) -> f64 {
        self.gains[degree]
    }

    /// `g(a_c)`, the normalizer used by gP, gR and gRBP.
    pub fn top_gain(&self) -> f64 {
        self.gains[self.gains.len() - 1]
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }
}

/// Whether runs are multisets of degrees or ranked lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RunMode {
    SetBased,
    RankBased,
}

impl RunMode {
    pub fn name(self) -> &'static str {
        match self {
            RunMode::SetBased => "set",
            RunMode::RankBased => "rank",
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunMode::SetBased => "set-based",
            RunMode::RankBased => "rank-based",
        })
    }
}

/// A judged run: the relevance degrees of `N` retrieved documents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JudgedRun {
    mode: RunMode,
    degrees: Box<[u8]>,
}

impl JudgedRun {
    /// Validates `degrees` against `scale`. Set-based input is sorted
    /// non-increasing; rank-based input is kept in order.
    pub fn new(mode: RunMode, degrees: &[usize], scale: &RelevanceScale) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptyRun);
        }
        let max = scale.max_degree();
        if let Some(&degree) = degrees.iter().find(|&&d| d > max) {
            return Err(Error::DegreeOutOfRange { degree, max });
        }
        let degrees: Vec<u8> = degrees.iter().map(|&d| d as u8).collect();
        Ok(Self::from_raw(mode, degrees))
    }

    /// Parses a literal such as `"2,1,0"`.
    pub fn parse(mode: RunMode, literal: &str, scale: &RelevanceScale) -> Result<Self> {
        let degrees = parse_literal(literal)?;
        Self::new(mode, &degrees, scale)
    }

    pub(crate) fn from_raw(mode: RunMode, mut degrees: Vec<u8>) -> Self {
        if mode == RunMode::SetBased {
            degrees.sort_unstable_by(|a, b| b.cmp(a));
        }
        JudgedRun { mode, degrees: degrees.into_boxed_slice() }
    }

    pub fn mode(&self) -> RunMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Degree indices; for set-based runs in non-increasing order.
    pub fn degrees(&self) -> &[u8] {
        &self.degrees
    }

    pub fn degree(&self, position: usize) -> usize {
        self.degrees[position] as usize
    }

    /// Number of documents with degree at least `a_j`, optionally
    /// restricted to the first `k` positions of a rank-based run.
    ///
    /// A `j` above the scale's top degree yields 0.
    pub fn cumulated_mass(&self, j: usize, k: Option<usize>) -> Result<usize> {
        let prefix = match k {
            None => &self.degrees[..],
            Some(_) if self.mode == RunMode::SetBased => return Err(Error::PrefixOnSetBased),
            Some(k) if k == 0 || k > self.len() => {
                return Err(Error::PrefixOutOfRange { k, len: self.len() })
            }
            Some(k) => &self.degrees[..k],
        };
        Ok(prefix.iter().filter(|&&d| d as usize >= j).count())
    }

    /// The comma-separated literal form, e.g. `2,1,0`.
    pub fn literal(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for JudgedRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Splits a run literal into degree indices without validating them against a scale.
pub fn parse_literal(literal: &str) -> Result<Vec<usize>> {
    let trimmed = literal.trim();
    if trimmed.is_empty() {
        return Err(Error::EmptyRun);
    }
    trimmed
        .split(',')
        .map(|part| part.trim().parse::<usize>().map_err(|_| Error::InvalidLiteral(literal.into())))
        .collect()
}

/// Number of runs of length `n` over `c + 1` degrees, saturating at `u128::MAX`.
pub fn universe_size(c: usize, n: usize, mode: RunMode) -> u128 {
    match mode {
        RunMode::RankBased => (c as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX),
        RunMode::SetBased => binomial(n as u128 + c as u128, c as u128),
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All distinct judged runs of one length and mode, in lexicographic order
/// of their (canonical) degree vectors.
#[derive(Debug, Clone)]
pub struct RunUniverse {
    scale: RelevanceScale,
    length: usize,
    mode: RunMode,
    elements: Vec<JudgedRun>,
}

impl RunUniverse {
    pub fn enumerate(scale: &RelevanceScale, n: usize, mode: RunMode, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRun);
        }
        let c = scale.max_degree();
        let size = universe_size(c, n, mode);
        if size > cap as u128 {
            return Err(Error::UniverseTooLarge { size, cap });
        }
        let mut elements = Vec::with_capacity(size as usize);
        let mut current = vec![0u8; n];
        match mode {
            RunMode::RankBased => loop {
                elements.push(JudgedRun { mode, degrees: current.clone().into_boxed_slice() });
                // Odometer increment, last position fastest.
                match current.iter().rposition(|&d| (d as usize) < c) {
                    Some(pos) => {
                        current[pos] += 1;
                        current[pos + 1..].fill(0);
                    }
                    None => break,
                }
            },
            RunMode::SetBased => push_multisets(&mut current, 0, c as u8, &mut elements),
        }
        debug_assert_eq!(elements.len() as u128, size);
        Ok(RunUniverse { scale: scale.clone(), length: n, mode, elements })
    }

    pub fn scale(&self) -> &RelevanceScale {
        &self.scale
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn mode(&self) -> RunMode {
        self.mode
    }

    pub fn elements(&self) -> &[JudgedRun] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, index: usize) -> &JudgedRun {
        &self.elements[index]
    }

    pub fn index_of(&self, run: &JudgedRun) -> Option<usize> {
        if run.mode != self.mode || run.len() != self.length {
            return None;
        }
        self.elements.binary_search(run).ok()
    }

    /// Index of a run or a `RunNotInUniverse` error.
    pub fn require(&self, run: &JudgedRun) -> Result<usize> {
        self.index_of(run).ok_or_else(|| Error::RunNotInUniverse(run.literal()))
    }

    /// Validates a degree vector against this universe and returns its index.
    pub fn locate(&self, degrees: &[usize]) -> Result<usize> {
        if degrees.len() != self.length {
            return Err(Error::LengthMismatch { left: degrees.len(), right: self.length });
        }
        let run = JudgedRun::new(self.mode, degrees, &self.scale)?;
        self.require(&run)
    }

    /// The all-`a_0` run.
    pub fn bottom_run(&self) -> JudgedRun {
        JudgedRun::from_raw(self.mode, vec![0; self.length])
    }

    /// The all-`a_c` run.
    pub fn top_run(&self) -> JudgedRun {
        JudgedRun::from_raw(self.mode, vec![self.scale.max_degree() as u8; self.length])
    }
}

// Non-increasing sequences in lexicographic order: each slot ascends from 0
// up to the value of the slot before it.
fn push_multisets(current: &mut [u8], pos: usize, bound: u8, out: &mut Vec<JudgedRun>) {
    if pos == current.len() {
        out.push(JudgedRun {
            mode: RunMode::SetBased,
            degrees: current.to_vec().into_boxed_slice(),
        });
        return;
    }
    for d in 0..=bound {
        current[pos] = d;
        push_multisets(current, pos + 1, d, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn scale(c: usize) -> RelevanceScale {
        RelevanceScale::linear(c).unwrap()
    }

    #[test]
    fn linear_default_gains() {
        assert_eq!(scale(2).gains(), &[0.0, 1.0, 2.0]);
        assert_eq!(scale(2).top_gain(), 2.0);
    }

    #[test]
    fn scale_validation() {
        assert_eq!(RelevanceScale::new(0, None), Err(Error::InvalidDegreeCount { c: 0 }));
        assert!(matches!(
            RelevanceScale::new(2, Some(vec![0.0, 2.0, 1.0])),
            Err(Error::NonIncreasingGains { index: 1, .. })
        ));
        assert!(matches!(
            RelevanceScale::new(2, Some(vec![0.0, 1.0, 1.0])),
            Err(Error::NonIncreasingGains { .. })
        ));
        assert_eq!(
            RelevanceScale::new(1, Some(vec![0.5, 1.0])),
            Err(Error::NonzeroGainAtBottom(0.5))
        );
        assert!(matches!(
            RelevanceScale::new(2, Some(vec![0.0, 1.0])),
            Err(Error::GainCountMismatch { .. })
        ));
        assert!(RelevanceScale::new(2, Some(vec![0.0, f64::NAN, 3.0])).is_err());
        assert!(RelevanceScale::new(3, Some(vec![0.0, 1.0, 3.0, 7.0])).is_ok());
    }

    #[test]
    fn set_based_runs_are_canonicalized() {
        let r = JudgedRun::new(RunMode::SetBased, &[0, 1, 1, 2], &scale(2)).unwrap();
        assert_eq!(r.degrees(), &[2, 1, 1, 0]);
        assert_eq!(r.literal(), "2,1,1,0");
    }

    #[test]
    fn rank_based_runs_keep_order() {
        let r = JudgedRun::new(RunMode::RankBased, &[1, 0, 2, 1], &scale(2)).unwrap();
        assert_eq!(r.degrees(), &[1, 0, 2, 1]);
    }

    #[test]
    fn run_validation() {
        assert_eq!(
            JudgedRun::new(RunMode::SetBased, &[3, 0], &scale(2)),
            Err(Error::DegreeOutOfRange { degree: 3, max: 2 })
        );
        assert_eq!(JudgedRun::new(RunMode::RankBased, &[], &scale(2)), Err(Error::EmptyRun));
        assert!(matches!(
            JudgedRun::parse(RunMode::RankBased, "1,x", &scale(2)),
            Err(Error::InvalidLiteral(_))
        ));
        assert_eq!(
            JudgedRun::parse(RunMode::RankBased, " 2, 0 ,1", &scale(2)).unwrap().degrees(),
            &[2, 0, 1]
        );
    }

    #[test]
    fn cumulated_mass_examples() {
        let s3 = scale(3);
        let r = JudgedRun::new(RunMode::SetBased, &[2, 2, 0], &s3).unwrap();
        let s = JudgedRun::new(RunMode::SetBased, &[3, 0, 0], &s3).unwrap();
        assert_eq!(r.cumulated_mass(3, None), Ok(0));
        assert_eq!(s.cumulated_mass(3, None), Ok(1));
        assert_eq!(r.cumulated_mass(0, None), Ok(3));

        let ranked = JudgedRun::new(RunMode::RankBased, &[2, 0, 1], &scale(2)).unwrap();
        assert_eq!(ranked.cumulated_mass(1, Some(2)), Ok(1));
        assert_eq!(ranked.cumulated_mass(1, Some(3)), Ok(2));
        assert_eq!(r.cumulated_mass(1, Some(1)), Err(Error::PrefixOnSetBased));
        assert_eq!(
            ranked.cumulated_mass(1, Some(4)),
            Err(Error::PrefixOutOfRange { k: 4, len: 3 })
        );
    }

    #[test]
    fn universe_counts() {
        let u = RunUniverse::enumerate(&scale(2), 3, RunMode::RankBased, DEFAULT_UNIVERSE_CAP).unwrap();
        assert_eq!(u.len(), 27);
        let u = RunUniverse::enumerate(&scale(2), 2, RunMode::SetBased, DEFAULT_UNIVERSE_CAP).unwrap();
        let lits: Vec<_> = u.elements().iter().map(|r| r.literal()).collect();
        assert_eq!(lits, ["0,0", "1,0", "1,1", "2,0", "2,1", "2,2"]);
        for mode in [RunMode::SetBased, RunMode::RankBased] {
            let u = RunUniverse::enumerate(&scale(1), 1, mode, DEFAULT_UNIVERSE_CAP).unwrap();
            assert_eq!(u.len(), 2);
        }
        assert_eq!(universe_size(2, 5, RunMode::SetBased), 21);
        assert_eq!(universe_size(2, 5, RunMode::RankBased), 243);
        assert_eq!(universe_size(2, 80, RunMode::RankBased), 3u128.pow(80));
        assert_eq!(universe_size(2, 100, RunMode::RankBased), u128::MAX);
        assert_eq!(universe_size(2, 100, RunMode::SetBased), 5151);
    }

    #[test]
    fn universe_cap_is_enforced() {
        let err = RunUniverse::enumerate(&scale(2), 11, RunMode::RankBased, DEFAULT_UNIVERSE_CAP).unwrap_err();
        assert_eq!(err, Error::UniverseTooLarge { size: 177_147, cap: DEFAULT_UNIVERSE_CAP });
        // The set-based universe at the same size is tiny.
        assert_eq!(
            RunUniverse::enumerate(&scale(2), 11, RunMode::SetBased, DEFAULT_UNIVERSE_CAP).unwrap().len(),
            78
        );
    }

    #[test]
    fn universe_matches_cartesian_product() {
        for c in 1..=3usize {
            for n in 1..=4usize {
                let s = scale(c);
                let mut tuples: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..n {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            (0..=c).map(move |d| {
                                let mut t = t.clone();
                                t.push(d);
                                t
                            })
                        })
                        .collect();
                }
                for mode in [RunMode::SetBased, RunMode::RankBased] {
                    let u = RunUniverse::enumerate(&s, n, mode, DEFAULT_UNIVERSE_CAP).unwrap();
                    let built: BTreeSet<JudgedRun> =
                        tuples.iter().map(|t| JudgedRun::new(mode, t, &s).unwrap()).collect();
                    assert_eq!(u.len(), built.len(), "duplicates in c={c} n={n} {mode}");
                    assert!(u.elements().windows(2).all(|w| w[0] < w[1]));
                    assert!(u.elements().iter().eq(built.iter()));
                    assert_eq!(u.len() as u128, universe_size(c, n, mode));
                }
            }
        }
    }

    #[test]
    fn bottom_and_top_runs() {
        let u = RunUniverse::enumerate(&scale(3), 2, RunMode::SetBased, 100).unwrap();
        assert_eq!(u.bottom_run().literal(), "0,0");
        assert_eq!(u.top_run().literal(), "3,3");
        assert_eq!(u.index_of(&u.bottom_run()), Some(0));
        assert_eq!(u.index_of(&u.top_run()), Some(u.len() - 1));
    }
}
