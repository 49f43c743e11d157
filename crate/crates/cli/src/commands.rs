use std::fmt::Write as _;

use num_bigint::BigUint;
use runlattice_core::metrics::check_valuation_values;
use runlattice_core::order::PosetViolation;
use runlattice_core::{
    eval_metric, extend_custom, is_total, metric_table, metric_values, verify_poset_axioms, DistributiveLattice, Error,
    HasseOptions, JudgedRun, MetricSpec, OrderingKind, Reconstructor, RunLattice, RunMode, RunPoset, RunUniverse,
    MAX_LATTICE_ELEMENTS, VALUATION_TOLERANCE,
};
use serde_json::json;

use crate::args::{CheckKind, Cli, Command, Format, Options};
use crate::config::{format, metric, Config};
use crate::output::{self, CountJson, DecompositionJson, LatticeJson, Row, TableJson, UniverseJson, ValueJson};
use crate::{usage, CliError, Outcome};

/// Lattices above this size skip the cubic distributivity check in `hasse`.
const HASSE_DISTRIBUTIVITY_LIMIT: usize = 1024;

type CmdResult = Result<Outcome, CliError>;

pub fn dispatch(cli: &Cli, out: &mut String, warnings: &mut Vec<String>) -> CmdResult {
    let o = &cli.opts;
    match &cli.command {
        Command::Enumerate => enumerate(o, out),
        Command::Hasse => hasse(o, out, warnings),
        Command::Check { what } => check(o, *what, out),
        Command::Decompose { run } => decompose(o, run, out),
        Command::Eval { run } => eval(o, run, out),
        Command::Reconstruct { run } => reconstruct(o, run, out),
        Command::Table => table(o, out),
        Command::Count => count(o, out),
    }
}

fn tag(kind: OrderingKind, cfg: &Config) -> String {
    format!("{kind} c={} N={}", cfg.c(), cfg.n)
}

/// Builds the lattice, or writes a failure line when the ordering has no
/// lattice structure at this size.
fn lattice_or_fail(cfg: &Config, kind: OrderingKind, out: &mut String, needed_for: &str) -> Result<Option<RunLattice>, CliError> {
    match RunLattice::build(cfg.universe()?, kind) {
        Ok(l) => Ok(Some(l)),
        Err(Error::NotALattice(w)) => {
            let _ = writeln!(out, "fail: {} is not a lattice ({w}); {needed_for}", tag(kind, cfg));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn distributive_or_fail(cfg: &Config, kind: OrderingKind, out: &mut String, needed_for: &str) -> Result<Option<DistributiveLattice>, CliError> {
    let Some(l) = lattice_or_fail(cfg, kind, out, needed_for)? else { return Ok(None) };
    match DistributiveLattice::new(l) {
        Ok(d) => Ok(Some(d)),
        Err(e @ Error::NotDistributive { .. }) => {
            let _ = writeln!(out, "fail: {} ({e}); {needed_for}", tag(kind, cfg));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn enumerate(o: &Options, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, None)?;
    let fmt = format(o, Format::Text, &[Format::Text, Format::Json, Format::Csv], "enumerate")?;
    let u = cfg.universe()?;
    match fmt {
        Format::Json => out.push_str(&output::json(&UniverseJson {
            mode: u.mode().name(),
            c: cfg.c(),
            n: cfg.n,
            count: u.len(),
            runs: u.elements().iter().map(|r| r.literal()).collect(),
        })),
        Format::Csv => out.push_str(&output::csv(["run"], u.elements().iter().map(|r| [r.literal()]))),
        _ => {
            let _ = writeln!(out, "# {} {} runs, c={}, N={}", u.len(), u.mode(), cfg.c(), cfg.n);
            for r in u.elements() {
                let _ = writeln!(out, "{r}");
            }
        }
    }
    Ok(Outcome::Pass)
}

fn hasse(o: &Options, out: &mut String, warnings: &mut Vec<String>) -> CmdResult {
    let cfg = Config::new(o, None)?;
    let kind = cfg.kind()?;
    let fmt = format(o, Format::Dot, &[Format::Dot, Format::Json], "hasse")?;
    let poset = RunPoset::build(cfg.universe()?, kind)?;
    let options = HasseOptions { highlight_irreducibles: o.highlight_irreducibles };
    match RunLattice::from_poset(poset.clone()) {
        Ok(l) => {
            if l.len() <= HASSE_DISTRIBUTIVITY_LIMIT && !l.check_distributive().distributive {
                warnings.push(format!("{} is a lattice but not a distributive one", tag(kind, &cfg)));
            }
            out.push_str(&match fmt {
                Format::Dot => l.export_hasse(&options),
                _ => output::json(&LatticeJson::new(l.universe(), kind, l.covers(), l.join_irreducibles().to_vec())),
            });
        }
        Err(Error::NotALattice(w)) => {
            warnings.push(format!(
                "{} is not a lattice ({w}), hence not a distributive lattice; the diagram shows the partial order",
                tag(kind, &cfg)
            ));
            out.push_str(&match fmt {
                Format::Dot => poset.export_hasse(&options),
                _ => output::json(&LatticeJson::new(
                    poset.universe(),
                    kind,
                    poset.poset().covers(),
                    poset.single_lower_cover_elements(),
                )),
            });
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Outcome::Pass)
}

fn check(o: &Options, what: CheckKind, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, None)?;
    format(o, Format::Text, &[Format::Text], "check")?;
    let kind = cfg.kind()?;
    let name = tag(kind, &cfg);
    match what {
        CheckKind::Poset => {
            let u = cfg.universe()?;
            let report = verify_poset_axioms(kind, &u)?;
            let r = |i: usize| u.get(i).literal();
            match report.violation {
                None => {
                    let _ = writeln!(out, "pass: {name} is a partial order on {} runs", report.elements);
                    Ok(Outcome::Pass)
                }
                Some(v) => {
                    let detail = match v {
                        PosetViolation::Reflexivity(a) => format!("reflexivity fails at {}", r(a)),
                        PosetViolation::Antisymmetry(a, b) => format!("antisymmetry fails: {} and {} precede each other", r(a), r(b)),
                        PosetViolation::Transitivity(a, b, c) => {
                            format!("transitivity fails: {} <= {} <= {} but not {} <= {}", r(a), r(b), r(c), r(a), r(c))
                        }
                    };
                    let _ = writeln!(out, "fail: {name}: {detail}");
                    Ok(Outcome::Fail)
                }
            }
        }
        CheckKind::Total => {
            let report = is_total(kind, &cfg.universe()?)?;
            match report.witness {
                None => {
                    let _ = writeln!(out, "pass: {name} is a chain");
                    Ok(Outcome::Pass)
                }
                Some((a, b)) => {
                    let _ = writeln!(out, "fail: {name} is not a chain: {a} and {b} are incomparable");
                    Ok(Outcome::Fail)
                }
            }
        }
        CheckKind::Distributive => check_distributive(&cfg, kind, out),
        CheckKind::Valuation => check_valuation(o, &cfg, kind, out),
    }
}

fn check_distributive(cfg: &Config, kind: OrderingKind, out: &mut String) -> CmdResult {
    let name = tag(kind, cfg);
    let poset = RunPoset::build(cfg.universe()?, kind)?;
    match RunLattice::from_poset(poset.clone()) {
        Ok(l) => {
            let report = l.check_distributive();
            let Some([x, y, z]) = report.witness else {
                let _ = writeln!(out, "pass: {name} is a distributive lattice");
                return Ok(Outcome::Pass);
            };
            let r = |i: usize| l.run(i).literal();
            let _ = writeln!(out, "fail: {name} is not distributive");
            let _ = writeln!(
                out,
                "law: x = {}, y = {}, z = {}: x ∧ (y ∨ z) = {} but (x ∧ y) ∨ (x ∧ z) = {}",
                r(x),
                r(y),
                r(z),
                r(l.meet(x, l.join(y, z))),
                r(l.join(l.meet(x, y), l.meet(x, z)))
            );
            if let Some(w) = report.sublattice_witness {
                let _ = writeln!(out, "sublattice {}", output::describe_forbidden(l.universe(), &w));
            }
        }
        Err(Error::NotALattice(w)) => {
            let _ = writeln!(out, "fail: {name} is not a lattice ({w}), hence not a distributive lattice");
            if let Some((lo, hi, f)) = poset.non_distributive_interval() {
                let _ = writeln!(
                    out,
                    "interval [{}, {}] is a non-distributive lattice: {}",
                    poset.run(lo),
                    poset.run(hi),
                    output::describe_forbidden(poset.universe(), &f)
                );
            }
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Outcome::Fail)
}

fn check_valuation(o: &Options, cfg: &Config, kind: OrderingKind, out: &mut String) -> CmdResult {
    let spec = metric(o, cfg)?;
    let name = tag(kind, cfg);
    let (lattice, values, monotone) = match &spec {
        MetricSpec::Custom(assignment) => {
            let Some(d) = distributive_or_fail(cfg, kind, out, "custom metrics need a distributive lattice")? else {
                return Ok(Outcome::Fail);
            };
            let ext = extend_custom(&d, assignment)?;
            let monotone = ext.monotonicity_witness.map(|(a, b)| (d.run(a).literal(), d.run(b).literal()));
            (d.into_inner(), ext.values, Some(monotone))
        }
        _ => {
            let Some(l) = lattice_or_fail(cfg, kind, out, "the valuation identity needs meet and join")? else {
                return Ok(Outcome::Fail);
            };
            let values = metric_values(&spec, &l)?;
            (l, values, None)
        }
    };
    let report = check_valuation_values(&lattice, &values);
    let outcome = match &report.counterexample {
        None => {
            let _ = writeln!(
                out,
                "pass: {} is a valuation on {name} (max |error| {:e})",
                spec.name(),
                report.max_error
            );
            Outcome::Pass
        }
        Some(ce) => {
            let [vx, vy, vj, vm] = ce.values;
            let (x, y) = (lattice.run(ce.x), lattice.run(ce.y));
            let _ = writeln!(out, "fail: {} is not a valuation on {name}", spec.name());
            let _ = writeln!(
                out,
                "x = {x}, y = {y}: v(x) + v(y) = {} but v(x ∨ y) + v(x ∧ y) = {} (v(x) = {vx}, v(y) = {vy}, v({}) = {vj}, v({}) = {vm})",
                vx + vy,
                vj + vm,
                lattice.run(lattice.join(ce.x, ce.y)),
                lattice.run(lattice.meet(ce.x, ce.y))
            );
            Outcome::Fail
        }
    };
    match monotone {
        Some(None) => {
            let _ = writeln!(out, "monotone: yes");
        }
        Some(Some((a, b))) => {
            let _ = writeln!(out, "monotone: no ({a} is covered by {b} but has a larger value)");
        }
        None => {}
    }
    Ok(outcome)
}

fn decompose(o: &Options, literal: &str, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, Some(literal))?;
    let kind = cfg.kind()?;
    let fmt = format(o, Format::Text, &[Format::Text, Format::Json], "decompose")?;
    let run = cfg.run(literal)?;
    let Some(d) = distributive_or_fail(&cfg, kind, out, "unique decompositions need a distributive lattice")? else {
        return Ok(Outcome::Fail);
    };
    let x = d.index_of(&run)?;
    let parts = match d.decompose(x) {
        Ok(dec) => dec.parts,
        Err(Error::BottomHasNoDecomposition) => {
            let _ = writeln!(out, "fail: {run} is the bottom element and has no decomposition into join-irreducibles");
            return Ok(Outcome::Fail);
        }
        Err(e) => return Err(e.into()),
    };
    let parts: Vec<String> = parts.iter().rev().map(|&p| d.run(p).literal()).collect();
    match fmt {
        Format::Json => out.push_str(&output::json(&DecompositionJson { run: run.literal(), parts })),
        _ => {
            let _ = writeln!(out, "{}", parts.join(" ∨ "));
        }
    }
    Ok(Outcome::Pass)
}

/// Values of a custom assignment extended over the whole lattice.
fn custom_values(cfg: &Config, spec: &MetricSpec, out: &mut String) -> Result<Option<(RunUniverse, Vec<f64>)>, CliError> {
    let MetricSpec::Custom(assignment) = spec else { unreachable!() };
    let kind = cfg.kind.ok_or_else(|| usage("--metric custom requires --ordering"))?;
    let Some(d) = distributive_or_fail(cfg, kind, out, "custom metrics need a distributive lattice")? else {
        return Ok(None);
    };
    let ext = extend_custom(&d, assignment)?;
    Ok(Some((d.universe().clone(), ext.values)))
}

fn eval(o: &Options, literal: &str, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, Some(literal))?;
    let fmt = format(o, Format::Text, &[Format::Text, Format::Json], "eval")?;
    let spec = metric(o, &cfg)?;
    let run = cfg.run(literal)?;
    let value = match &spec {
        MetricSpec::Custom(_) => {
            let Some((u, values)) = custom_values(&cfg, &spec, out)? else { return Ok(Outcome::Fail) };
            values[u.require(&run)?]
        }
        _ => eval_metric(&spec, &run, &cfg.scale)?,
    };
    match fmt {
        Format::Json => out.push_str(&output::json(&ValueJson { run: run.literal(), metric: spec.name(), value })),
        _ => {
            let _ = writeln!(out, "{value}");
        }
    }
    Ok(Outcome::Pass)
}

fn reconstruct(o: &Options, literal: &str, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, Some(literal))?;
    let kind = cfg.kind()?;
    let fmt = format(o, Format::Text, &[Format::Text, Format::Json], "reconstruct")?;
    let spec = metric(o, &cfg)?;
    let run = cfg.run(literal)?;
    let Some(d) = distributive_or_fail(&cfg, kind, out, "reconstruction needs a distributive lattice")? else {
        return Ok(Outcome::Fail);
    };
    let x = d.index_of(&run)?;
    let direct = match &spec {
        MetricSpec::Custom(assignment) => {
            extend_custom(&d, assignment)?;
            if x == d.bottom() {
                Some(assignment.bottom)
            } else {
                assignment.values.get(&run).copied()
            }
        }
        _ => Some(eval_metric(&spec, &run, &cfg.scale)?),
    };
    let mut rec = match Reconstructor::new(&spec, &d) {
        Ok(rec) => rec,
        Err(e @ Error::NotAValuation { .. }) => {
            let _ = writeln!(out, "fail: {} on {}: {e}", spec.name(), tag(kind, &cfg));
            return Ok(Outcome::Fail);
        }
        Err(e) => return Err(e.into()),
    };
    let value = rec.value(x)?;
    let terms = rec.expansion(x)?;
    let difference = direct.map(|v| (v - value).abs());
    let outcome = match difference {
        Some(diff) if diff.is_nan() || diff > VALUATION_TOLERANCE => Outcome::Fail,
        _ => Outcome::Pass,
    };
    match fmt {
        Format::Json => {
            let terms: Vec<_> = terms
                .iter()
                .map(|t| json!({"run": d.run(t.element).literal(), "sign": if t.positive { 1 } else { -1 }, "value": t.value}))
                .collect();
            let doc = json!({
                "run": run.literal(),
                "metric": spec.name(),
                "value": value,
                "direct": direct,
                "difference": difference,
                "terms": terms,
            });
            out.push_str(&output::json(&doc));
        }
        _ => {
            let mut expansion = String::new();
            for (i, t) in terms.iter().filter(|t| t.positive).enumerate() {
                let _ = write!(expansion, "{}{}", if i == 0 { "" } else { " + " }, t.value);
            }
            for t in terms.iter().filter(|t| !t.positive) {
                let _ = write!(expansion, " - {}", t.value);
            }
            let _ = writeln!(out, "reconstructed {value}");
            let _ = writeln!(out, "expansion {expansion}");
            if let (Some(direct), Some(diff)) = (direct, difference) {
                let _ = writeln!(out, "direct {direct}");
                let _ = writeln!(out, "difference {diff:e}");
            }
            if outcome == Outcome::Fail {
                let _ = writeln!(out, "fail: reconstruction differs from the direct value by more than {VALUATION_TOLERANCE:e}");
            }
        }
    }
    Ok(outcome)
}

fn table(o: &Options, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, None)?;
    let fmt = format(o, Format::Csv, &[Format::Csv, Format::Json, Format::Text], "table")?;
    let spec = metric(o, &cfg)?;
    let rows: Vec<(JudgedRun, f64)> = match &spec {
        MetricSpec::Custom(_) => {
            let Some((u, values)) = custom_values(&cfg, &spec, out)? else { return Ok(Outcome::Fail) };
            u.elements().iter().cloned().zip(values).collect()
        }
        _ => metric_table(&spec, &cfg.universe()?)?,
    };
    match fmt {
        Format::Json => out.push_str(&output::json(&TableJson {
            metric: spec.name(),
            mode: cfg.mode()?.name(),
            c: cfg.c(),
            n: cfg.n,
            rows: rows.into_iter().map(|(r, value)| Row { run: r.literal(), value }).collect(),
        })),
        Format::Text => {
            for (r, v) in rows {
                let _ = writeln!(out, "{r}\t{v}");
            }
        }
        _ => out.push_str(&output::csv(["run", "value"], rows.into_iter().map(|(r, v)| [r.literal(), v.to_string()]))),
    }
    Ok(Outcome::Pass)
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

fn count(o: &Options, out: &mut String) -> CmdResult {
    let cfg = Config::new(o, None)?;
    let fmt = format(o, Format::Text, &[Format::Text, Format::Json], "count")?;
    let (c, n) = (cfg.c(), cfg.n);
    let rank = BigUint::from(c + 1).pow(n as u32);
    let set = binomial(n + c, c);
    let formula = c * n;
    let limit = BigUint::from(MAX_LATTICE_ELEMENTS.min(cfg.cap));
    let computed = rank <= limit && set <= limit;
    if computed {
        for (kind, mode) in [(OrderingKind::ReplSet, RunMode::SetBased), (OrderingKind::ReplRank, RunMode::RankBased)] {
            let u = RunUniverse::enumerate(&cfg.scale, n, mode, cfg.cap)?;
            let found = RunLattice::build(u, kind)?.join_irreducibles().len();
            if found != formula {
                return Err(Error::Invariant("join-irreducible count differs from c·N").into());
            }
        }
    }
    match fmt {
        Format::Json => out.push_str(&output::json(&CountJson {
            c,
            n,
            rank_universe: rank.to_string(),
            set_universe: set.to_string(),
            irreducibles: formula,
            irreducibles_computed: computed,
        })),
        _ => {
            let _ = writeln!(out, "c={c} N={n}");
            let _ = writeln!(out, "rank-based universe (c+1)^N: {rank}");
            let _ = writeln!(out, "set-based universe C(N+c, c): {set}");
            let source = if computed { "computed on both lattices" } else { "formula" };
            let _ = writeln!(out, "join-irreducibles of repl-set and repl-rank, c·N: {formula} ({source})");
        }
    }
    Ok(Outcome::Pass)
}
