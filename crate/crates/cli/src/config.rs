use std::collections::BTreeMap;
use std::path::Path;

use runlattice_core::{
    parse_literal, CustomAssignment, Error, JudgedRun, MetricSpec, OrderingKind, RelevanceScale, RunMode, RunUniverse,
    DEFAULT_UNIVERSE_CAP,
};

use crate::args::{Format, MetricArg, Options};
use crate::{usage, CliError, HARD_CAP};

/// Flags resolved into engine values.
pub struct Config {
    pub kind: Option<OrderingKind>,
    pub mode: Option<RunMode>,
    pub scale: RelevanceScale,
    pub n: usize,
    pub cap: usize,
}

impl Config {
    /// `literal`, when present, supplies N if `--n` is absent.
    pub fn new(opts: &Options, literal: Option<&str>) -> Result<Self, CliError> {
        let c = opts.c.ok_or_else(|| usage("--c is required"))?;
        let scale = RelevanceScale::linear(c)?;
        let from_literal = literal.map(parse_literal).transpose()?.map(|d| d.len());
        let n = match (opts.n, from_literal) {
            (Some(n), Some(len)) if n != len => return Err(Error::LengthMismatch { left: len, right: n }.into()),
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return Err(usage("--n is required")),
        };
        if n == 0 {
            return Err(usage("--n must be at least 1"));
        }
        let cap = opts.cap.unwrap_or(DEFAULT_UNIVERSE_CAP);
        if cap > HARD_CAP {
            return Err(usage(format!("--cap {cap} exceeds the hard limit {HARD_CAP}")));
        }
        let kind = opts.ordering.map(OrderingKind::from);
        let flag_mode = opts.mode.map(RunMode::from);
        let mode = match (kind, flag_mode) {
            (Some(k), Some(m)) if k.mode() != m => {
                return Err(usage(format!("--ordering {k} requires --mode {}", k.mode().name())));
            }
            (Some(k), _) => Some(k.mode()),
            (None, m) => m,
        };
        Ok(Config { kind, mode, scale, n, cap })
    }

    pub fn c(&self) -> usize {
        self.scale.max_degree()
    }

    pub fn kind(&self) -> Result<OrderingKind, CliError> {
        self.kind.ok_or_else(|| usage("--ordering is required"))
    }

    pub fn mode(&self) -> Result<RunMode, CliError> {
        self.mode.ok_or_else(|| usage("--mode or --ordering is required"))
    }

    pub fn universe(&self) -> Result<RunUniverse, CliError> {
        Ok(RunUniverse::enumerate(&self.scale, self.n, self.mode()?, self.cap)?)
    }

    pub fn run(&self, literal: &str) -> Result<JudgedRun, CliError> {
        Ok(JudgedRun::parse(self.mode()?, literal, &self.scale)?)
    }
}

pub fn format(opts: &Options, default: Format, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let f = opts.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        Err(usage(format!("{command} supports --format {}", names.join("|"))))
    }
}

/// The metric named by the flags, after checking that no stray parameter
/// flags were given and that the metric applies to the run mode.
pub fn metric(opts: &Options, cfg: &Config) -> Result<MetricSpec, CliError> {
    let metric = opts.metric.ok_or_else(|| usage("--metric is required"))?;
    let stray = [
        (opts.rb.is_some(), MetricArg::Gr, "--rb"),
        (opts.p.is_some(), MetricArg::Grbp, "--p"),
        (opts.b.is_some(), MetricArg::Dcg, "--b"),
        (opts.custom.is_some(), MetricArg::Custom, "--custom"),
    ];
    for (given, owner, flag) in stray {
        if given && metric != owner {
            return Err(usage(format!("{flag} does not apply to this metric")));
        }
    }
    let spec = match metric {
        MetricArg::Gp => MetricSpec::GeneralizedPrecision,
        MetricArg::Gr => MetricSpec::generalized_recall(opts.rb.unwrap_or(cfg.n as f64))?,
        MetricArg::Grbp => MetricSpec::graded_rbp(opts.p.ok_or_else(|| usage("--metric grbp requires --p"))?)?,
        MetricArg::Dcg => MetricSpec::dcg(opts.b.ok_or_else(|| usage("--metric dcg requires --b"))?)?,
        MetricArg::Custom => {
            let path = opts.custom.as_deref().ok_or_else(|| usage("--metric custom requires --custom <file>"))?;
            MetricSpec::Custom(load_custom(path, cfg)?)
        }
    };
    let mode = cfg.mode()?;
    if !spec.accepts(mode) {
        return Err(Error::MetricModeMismatch { metric: spec.name(), expected: RunMode::RankBased }.into());
    }
    Ok(spec)
}

/// Reads `{"run literal": value, ..., "_bottom": value}`.
pub fn load_custom(path: &Path, cfg: &Config) -> Result<CustomAssignment, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: shown.clone(), source })?;
    let invalid = |reason: String| CliError::Custom { path: shown.clone(), reason };
    let raw: BTreeMap<String, f64> = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    let mut assignment = CustomAssignment::default();
    let mut bottom = None;
    for (key, value) in raw {
        if key == "_bottom" {
            bottom = Some(value);
            continue;
        }
        let run = cfg.run(&key)?;
        if run.len() != cfg.n {
            return Err(Error::LengthMismatch { left: run.len(), right: cfg.n }.into());
        }
        if assignment.values.insert(run.clone(), value).is_some() {
            return Err(invalid(format!("run {run} is assigned twice")));
        }
    }
    assignment.bottom = bottom.ok_or_else(|| invalid("missing \"_bottom\" value".into()))?;
    Ok(assignment)
}
