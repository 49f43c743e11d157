//! Invariants checked exhaustively on small universes and by proptest on
//! larger random runs. Order predicates are re-derived here from cumulated
//! masses and degree counts as independent oracles.

use std::collections::BTreeSet;

use proptest::prelude::*;
use runlattice_core::order::ForbiddenShape;
use runlattice_core::*;

fn scale(c: usize) -> RelevanceScale {
    RelevanceScale::linear(c).unwrap()
}

fn universe(c: usize, n: usize, mode: RunMode) -> RunUniverse {
    RunUniverse::enumerate(&scale(c), n, mode, DEFAULT_UNIVERSE_CAP).unwrap()
}

fn small_configs(max_size: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=3usize).flat_map(move |c| (1..=5usize).filter(move |&n| (c + 1).pow(n as u32) <= max_size).map(move |n| (c, n)))
}

fn mass(d: &[u8], j: usize) -> usize {
    d.iter().filter(|&&x| x as usize >= j).count()
}

/// Reference predicate for `r ⪯ s`, written from the definitions.
fn oracle_le(kind: OrderingKind, r: &[u8], s: &[u8], c: usize) -> bool {
    match kind {
        OrderingKind::ReplSet => (1..=c).all(|j| mass(r, j) <= mass(s, j)),
        OrderingKind::ReplRank => (0..r.len()).all(|k| (1..=c).all(|j| mass(&r[k..=k], j) <= mass(&s[k..=k], j))),
        OrderingKind::ReplSwapRank => (1..=r.len()).all(|k| (1..=c).all(|j| mass(&r[..k], j) <= mass(&s[..k], j))),
        OrderingKind::ProjReplRank => r <= s,
        OrderingKind::ProjReplSet => {
            let counts = |d: &[u8]| (1..=c).rev().map(|i| d.iter().filter(|&&x| x as usize == i).count()).collect::<Vec<_>>();
            counts(r) <= counts(s)
        }
    }
}

fn oracle_compare(kind: OrderingKind, r: &[u8], s: &[u8], c: usize) -> CompareResult {
    match (oracle_le(kind, r, s, c), oracle_le(kind, s, r, c)) {
        (true, true) => CompareResult::Equal,
        (true, false) => CompareResult::Less,
        (false, true) => CompareResult::Greater,
        (false, false) => CompareResult::Incomparable,
    }
}

#[test]
fn compare_matches_cumulated_mass_oracle() {
    for (c, n) in small_configs(256) {
        for kind in OrderingKind::ALL {
            let u = universe(c, n, kind.mode());
            for r in u.elements() {
                for s in u.elements() {
                    let got = compare(kind, r, s, u.scale()).unwrap();
                    assert_eq!(got, oracle_compare(kind, r.degrees(), s.degrees(), c), "{kind} {r} {s}");
                }
            }
        }
    }
}

#[test]
fn compare_is_antisymmetric() {
    for (c, n) in small_configs(1024) {
        for kind in OrderingKind::ALL {
            let u = universe(c, n, kind.mode());
            for r in u.elements() {
                for s in u.elements() {
                    let ab = compare(kind, r, s, u.scale()).unwrap();
                    assert_eq!(ab.reverse(), compare(kind, s, r, u.scale()).unwrap());
                    assert_eq!(ab == CompareResult::Equal, r == s);
                }
            }
        }
    }
}

#[test]
fn cumulated_mass_is_monotone() {
    for (c, n) in small_configs(1024) {
        for mode in [RunMode::SetBased, RunMode::RankBased] {
            for r in universe(c, n, mode).elements() {
                for j in 1..=c {
                    assert!(r.cumulated_mass(j + 1, None).unwrap() <= r.cumulated_mass(j, None).unwrap());
                    if mode == RunMode::RankBased {
                        for k in 1..n {
                            assert!(r.cumulated_mass(j, Some(k)).unwrap() <= r.cumulated_mass(j, Some(k + 1)).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn set_canonicalization_covers_all_permutations() {
    for (c, n) in small_configs(256).filter(|&(_, n)| n <= 4) {
        let s = scale(c);
        for tuple in universe(c, n, RunMode::RankBased).elements() {
            let raw: Vec<usize> = tuple.degrees().iter().map(|&d| d as usize).collect();
            let mut sorted = raw.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let run = JudgedRun::new(RunMode::SetBased, &raw, &s).unwrap();
            assert_eq!(run, JudgedRun::new(RunMode::SetBased, &sorted, &s).unwrap());
            assert_eq!(run.degrees().iter().map(|&d| d as usize).collect::<Vec<_>>(), sorted);
        }
    }
}

#[test]
fn set_universe_matches_cartesian_product() {
    for (c, n) in small_configs(1024) {
        let s = scale(c);
        let from_product: BTreeSet<JudgedRun> = universe(c, n, RunMode::RankBased)
            .elements()
            .iter()
            .map(|r| JudgedRun::new(RunMode::SetBased, &r.degrees().iter().map(|&d| d as usize).collect::<Vec<_>>(), &s).unwrap())
            .collect();
        let u = universe(c, n, RunMode::SetBased);
        assert_eq!(u.elements().iter().cloned().collect::<BTreeSet<_>>(), from_product);
        assert_eq!(u.len(), from_product.len());
    }
}

#[test]
fn swap_dominance_implies_total_mass_dominance() {
    for n in 1..=4 {
        let u = universe(2, n, RunMode::RankBased);
        for r in u.elements() {
            for s in u.elements() {
                if compare(OrderingKind::ReplSwapRank, r, s, u.scale()).unwrap() == CompareResult::Less {
                    for j in 1..=2 {
                        assert!(r.cumulated_mass(j, None).unwrap() <= s.cumulated_mass(j, None).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn chains_refine_their_posets() {
    for (poset, chain) in [
        (OrderingKind::ReplSet, OrderingKind::ProjReplSet),
        (OrderingKind::ReplRank, OrderingKind::ProjReplRank),
    ] {
        let u = universe(2, 5, poset.mode());
        for r in u.elements() {
            for s in u.elements() {
                if compare(poset, r, s, u.scale()).unwrap() == CompareResult::Less {
                    assert_eq!(compare(chain, r, s, u.scale()).unwrap(), CompareResult::Less, "{r} {s}");
                }
            }
        }
    }
}

fn lattices(kinds: &[OrderingKind], max_size: usize) -> Vec<RunLattice> {
    let mut out = Vec::new();
    for &kind in kinds {
        for (c, n) in small_configs(1024) {
            let u = universe(c, n, kind.mode());
            if u.len() <= max_size {
                out.push(RunLattice::build(u, kind).unwrap());
            }
        }
    }
    out
}

#[test]
fn joins_are_below_every_upper_bound() {
    for l in lattices(&[OrderingKind::ReplSet, OrderingKind::ReplRank], 81) {
        let c = l.universe().scale().max_degree();
        for x in 0..l.len() {
            for y in 0..l.len() {
                let (r, s) = (l.run(x).degrees(), l.run(y).degrees());
                let join: Vec<u8> = r.iter().zip(s).map(|(a, b)| *a.max(b)).collect();
                assert_eq!(l.run(l.join(x, y)).degrees(), join.as_slice());
                for t in 0..l.len() {
                    let td = l.run(t).degrees();
                    if l.le(x, t) && l.le(y, t) {
                        assert!((1..=c).all(|j| mass(&join, j) <= mass(td, j)));
                        assert!(l.le(l.join(x, y), t));
                    }
                }
            }
        }
    }
}

#[test]
fn reflexive_transitive_closure_of_covers_is_the_order() {
    for l in lattices(&OrderingKind::ALL[..4], 256) {
        let n = l.len();
        let mut reach = vec![vec![false; n]; n];
        for (x, row) in reach.iter_mut().enumerate() {
            row[x] = true;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| l.poset().lower_set(x).count());
        for &hi in order.iter() {
            for (lo, up) in l.covers() {
                if up == hi {
                    let below: Vec<usize> = (0..n).filter(|&z| reach[z][lo]).collect();
                    for z in below {
                        reach[z][hi] = true;
                    }
                }
            }
        }
        for (x, row) in reach.iter().enumerate() {
            for (y, &r) in row.iter().enumerate() {
                assert_eq!(r, l.le(x, y));
            }
        }
    }
}

/// Whether some 5 elements form an N5 or M3 sublattice.
fn has_forbidden_subset(l: &order::FiniteLattice) -> bool {
    let n = l.len();
    let le = |a: usize, b: usize| l.poset().le(a, b);
    for bottom in 0..n {
        for top in (0..n).filter(|&t| t != bottom && le(bottom, t)) {
            let inside: Vec<usize> = (0..n).filter(|&z| z != bottom && z != top && le(bottom, z) && le(z, top)).collect();
            for (i, &a) in inside.iter().enumerate() {
                for (k, &b) in inside.iter().enumerate().skip(i + 1) {
                    for &m in &inside[k + 1..] {
                        let five = [bottom, top, a, b, m];
                        let closed = five.iter().all(|&p| five.iter().all(|&q| five.contains(&l.join(p, q)) && five.contains(&l.meet(p, q))));
                        let comparable = [(a, b), (a, m), (b, m)].iter().filter(|&&(p, q)| le(p, q) || le(q, p)).count();
                        // A closed 5-set with at most one comparable middle pair is M3 (none) or N5 (one).
                        if closed && comparable <= 1 {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

#[test]
fn distributivity_matches_five_element_search() {
    let mut all = lattices(&OrderingKind::ALL[..4], 64);
    for n in 1..=6 {
        all.push(RunLattice::build(universe(1, n, RunMode::RankBased), OrderingKind::ReplSwapRank).unwrap());
    }
    for l in &all {
        let report = l.check_distributive();
        assert_eq!(report.distributive, !has_forbidden_subset(l.lattice()), "{} {:?}", l.kind(), l.universe().length());
    }
}

#[test]
fn swap_pentagon_matches_five_element_search() {
    let p = RunPoset::build(universe(2, 3, RunMode::RankBased), OrderingKind::ReplSwapRank).unwrap();
    let at = |d: &[usize]| p.universe().locate(d).unwrap();
    let five = p.interval(at(&[2, 1, 0]), at(&[2, 2, 1])).unwrap();
    let sub = order::FiniteLattice::from_poset(p.poset().subposet(&five)).unwrap();
    assert!(has_forbidden_subset(&sub));
    let report = sub.check_distributive();
    assert!(!report.distributive);
    let witness = report.sublattice_witness.unwrap();
    assert_eq!(witness.shape, ForbiddenShape::N5);
    let [x, y, z] = report.witness.unwrap();
    assert_ne!(sub.meet(x, sub.join(y, z)), sub.join(sub.meet(x, y), sub.meet(x, z)));
}

#[test]
fn meets_of_irreducibles_are_irreducible_or_bottom() {
    for l in lattices(&[OrderingKind::ReplSet, OrderingKind::ReplRank], 1024) {
        let j = l.join_irreducibles();
        for &a in j {
            for &b in j {
                let m = l.meet(a, b);
                assert!(m == l.bottom() || l.is_join_irreducible(m));
            }
        }
    }
}

fn builtin_metrics(mode: RunMode, n: usize) -> Vec<MetricSpec> {
    let mut specs = vec![MetricSpec::GeneralizedPrecision, MetricSpec::generalized_recall(n as f64 + 0.5).unwrap()];
    if mode == RunMode::RankBased {
        specs.extend([MetricSpec::graded_rbp(0.8).unwrap(), MetricSpec::dcg(2.0).unwrap()]);
    }
    specs
}

#[test]
fn metrics_are_monotone() {
    for l in lattices(&[OrderingKind::ReplSet, OrderingKind::ReplRank], 1024) {
        for spec in builtin_metrics(l.universe().mode(), l.universe().length()) {
            let v = metric_values(&spec, &l).unwrap();
            for (lo, hi) in l.covers() {
                assert!(v[lo] < v[hi], "{spec:?} {} {}", l.run(lo), l.run(hi));
            }
        }
    }
}

#[test]
fn recall_is_scaled_precision() {
    for (c, n) in small_configs(1024) {
        for mode in [RunMode::SetBased, RunMode::RankBased] {
            for r in universe(c, n, mode).elements() {
                let gp = eval_metric(&MetricSpec::GeneralizedPrecision, r, &scale(c)).unwrap();
                for rb in [0.5, 3.0, 7.0] {
                    let gr = eval_metric(&MetricSpec::generalized_recall(rb).unwrap(), r, &scale(c)).unwrap();
                    assert!((gr - n as f64 / rb * gp).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn nonlinear_gains_keep_the_valuation_property() {
    let s = RelevanceScale::new(3, Some(vec![0.0, 0.5, 3.0, 7.25])).unwrap();
    let u = RunUniverse::enumerate(&s, 3, RunMode::RankBased, DEFAULT_UNIVERSE_CAP).unwrap();
    let d = DistributiveLattice::new(RunLattice::build(u, OrderingKind::ReplRank).unwrap()).unwrap();
    for spec in builtin_metrics(RunMode::RankBased, 3) {
        assert!(check_valuation(&spec, &d).unwrap().is_valuation);
        let mut rec = Reconstructor::new(&spec, &d).unwrap();
        for x in 0..d.len() {
            let direct = eval_metric(&spec, d.run(x), &s).unwrap();
            assert!((rec.value(x).unwrap() - direct).abs() < 1e-9);
        }
    }
}

#[test]
fn custom_assignment_can_prefer_one_highly_relevant_document() {
    let s = scale(2);
    let d = DistributiveLattice::new(RunLattice::build(universe(2, 3, RunMode::RankBased), OrderingKind::ReplRank).unwrap()).unwrap();
    let run = |x: &[usize]| JudgedRun::new(RunMode::RankBased, x, &s).unwrap();
    let mut assignment = CustomAssignment::default();
    for (degrees, value) in [
        ([2, 0, 0], 1.0),
        ([0, 2, 0], 1.0),
        ([0, 0, 2], 1.0),
        ([1, 0, 0], 0.4),
        ([0, 1, 0], 0.4),
        ([0, 0, 1], 0.4),
    ] {
        assignment.values.insert(run(&degrees), value);
    }
    let ext = extend_custom(&d, &assignment).unwrap();
    assert!(ext.valuation.is_valuation && ext.monotone);
    let high = ext.values[d.index_of(&run(&[2, 0, 0])).unwrap()];
    let two = ext.values[d.index_of(&run(&[1, 1, 0])).unwrap()];
    assert!((two - 0.8).abs() < 1e-12);
    assert!(high > two);
}

#[test]
fn swap_valuation_is_decided_per_instance() {
    // The binary swap ordering is a distributive lattice; check the verdict
    // against a direct pairwise computation.
    for n in 1..=5 {
        let l = RunLattice::build(universe(1, n, RunMode::RankBased), OrderingKind::ReplSwapRank).unwrap();
        let v = metric_values(&MetricSpec::GeneralizedPrecision, &l).unwrap();
        let direct = (0..l.len()).all(|x| (0..l.len()).all(|y| (v[x] + v[y] - v[l.join(x, y)] - v[l.meet(x, y)]).abs() < 1e-9));
        assert_eq!(check_valuation(&MetricSpec::GeneralizedPrecision, &l).unwrap().is_valuation, direct);
    }
}

fn degrees_strategy() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
    (1usize..=4, 1usize..=8).prop_flat_map(|(c, n)| {
        (Just(c), prop::collection::vec(0..=c, n), prop::collection::vec(0..=c, n))
    })
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent_and_order_blind((c, r, _) in degrees_strategy(), seed in any::<u64>()) {
        let s = scale(c);
        let run = JudgedRun::new(RunMode::SetBased, &r, &s).unwrap();
        let again: Vec<usize> = run.degrees().iter().map(|&d| d as usize).collect();
        prop_assert_eq!(&JudgedRun::new(RunMode::SetBased, &again, &s).unwrap(), &run);
        let mut shuffled = r.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.swap(0, (seed as usize / 7) % len);
        prop_assert_eq!(JudgedRun::new(RunMode::SetBased, &shuffled, &s).unwrap(), run);
    }

    #[test]
    fn random_pairs_agree_with_oracle((c, r, t) in degrees_strategy()) {
        let s = scale(c);
        for kind in OrderingKind::ALL {
            let a = JudgedRun::new(kind.mode(), &r, &s).unwrap();
            let b = JudgedRun::new(kind.mode(), &t, &s).unwrap();
            let got = compare(kind, &a, &b, &s).unwrap();
            prop_assert_eq!(got, oracle_compare(kind, a.degrees(), b.degrees(), c));
            prop_assert_eq!(got.reverse(), compare(kind, &b, &a, &s).unwrap());
        }
    }

    #[test]
    fn closed_form_bounds_are_bounds((c, r, t) in degrees_strategy()) {
        let s = scale(c);
        for kind in OrderingKind::ALL.into_iter().filter(|k| k.has_closed_form()) {
            let a = JudgedRun::new(kind.mode(), &r, &s).unwrap();
            let b = JudgedRun::new(kind.mode(), &t, &s).unwrap();
            let (meet, join) = closed_meet_join(kind, &a, &b).unwrap();
            for x in [&a, &b] {
                prop_assert!(compare(kind, &meet, x, &s).unwrap().is_le());
                prop_assert!(compare(kind, x, &join, &s).unwrap().is_le());
            }
            let (m2, j2) = closed_meet_join(kind, &b, &a).unwrap();
            prop_assert_eq!((m2, j2), (meet.clone(), join.clone()));
        }
    }

    #[test]
    fn cumulated_mass_monotone_on_random_runs((c, r, _) in degrees_strategy()) {
        let run = JudgedRun::new(RunMode::RankBased, &r, &scale(c)).unwrap();
        for j in 0..=c {
            for k in 1..=r.len() {
                prop_assert!(run.cumulated_mass(j + 1, Some(k)).unwrap() <= run.cumulated_mass(j, Some(k)).unwrap());
                if k > 1 {
                    prop_assert!(run.cumulated_mass(j, Some(k - 1)).unwrap() <= run.cumulated_mass(j, Some(k)).unwrap());
                }
            }
        }
    }

    #[test]
    fn metrics_respect_the_product_order((c, r, t) in degrees_strategy(), p in 0.05f64..0.95, b in 1.1f64..12.0) {
        let s = scale(c);
        let a = JudgedRun::new(RunMode::RankBased, &r, &s).unwrap();
        let x = JudgedRun::new(RunMode::RankBased, &t, &s).unwrap();
        let (meet, join) = closed_meet_join(OrderingKind::ReplRank, &a, &x).unwrap();
        for spec in [MetricSpec::GeneralizedPrecision, MetricSpec::graded_rbp(p).unwrap(), MetricSpec::dcg(b).unwrap()] {
            let v = |q: &JudgedRun| eval_metric(&spec, q, &s).unwrap();
            prop_assert!((v(&a) + v(&x) - v(&join) - v(&meet)).abs() < 1e-9);
            prop_assert!(v(&meet) <= v(&a) + 1e-12 && v(&a) <= v(&join) + 1e-12);
        }
    }
}
