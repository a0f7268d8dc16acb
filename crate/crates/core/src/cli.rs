//! Run configuration and experiment orchestration behind the `eonsim`
//! binary.
//!
//! Configs are TOML:
//!
//! ```toml
//! topology = "../data/nsfnet.topo"   # relative to the config file
//! slots = 180                        # default 180
//! num_demands = 10000                # default 10000
//! warmup_demands = 0                 # default 0
//! seeds = [1, 2, 3, 4, 5]
//! output = "results/nsfnet.csv"      # relative to the config file
//! emit_outcome_log = false           # default false
//!
//! # Either explicit load points ...
//! [[loads]]
//! lambda = 10.0
//! mu = 0.05
//!
//! # ... or a list of Erlang values at a common arrival rate.
//! # lambda = 10.0
//! # erlangs = [100, 200, 300]
//!
//! [[metrics]]
//! metric = "LLU"          # LL | U | LLU | LLP
//! merge = "quadratic"     # linear | quadratic | sqrt, default linear
//! alpha = 1.0             # default 1.0
//! llp_literal = false     # default false
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;
use toml::{Table, Value};

use crate::cost::{CostSpec, Merge, Metric};
use crate::report::{write_atomic, write_outcomes_csv, write_results_csv};
use crate::sim::{Load, SimError, SimOptions, Sweep, SweepRun};
use crate::spectrum::DEFAULT_SLOTS;
use crate::topology::{Topology, TopologyError};
use crate::traffic::{generate_trace, write_trace_csv, DEFAULT_LAMBDA, DEFAULT_NUM_DEMANDS};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub topology_path: PathBuf,
    pub slots: usize,
    pub metrics: Vec<CostSpec>,
    pub loads: Vec<Load>,
    pub seeds: Vec<u64>,
    pub num_demands: usize,
    pub warmup_demands: usize,
    pub output_path: PathBuf,
    pub emit_outcome_log: bool,
}

impl RunConfig {
    /// Sweep description for this config.
    pub fn sweep(&self, audit: bool, jobs: usize) -> Sweep {
        let mut sweep = Sweep::new(
            self.metrics.clone(),
            self.loads.clone(),
            self.seeds.clone(),
            self.num_demands,
        );
        sweep.options = SimOptions {
            slots: self.slots,
            warmup_demands: self.warmup_demands,
            audit,
            record_outcomes: self.emit_outcome_log,
            record_events: false,
        };
        sweep.jobs = jobs;
        sweep
    }

    /// Resolves relative paths against `base`.
    pub fn rebase(mut self, base: &Path) -> Self {
        if self.topology_path.is_relative() {
            self.topology_path = base.join(&self.topology_path);
        }
        if self.output_path.is_relative() {
            self.output_path = base.join(&self.output_path);
        }
        self
    }
}

/// Every problem found in a config, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<String>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  - {d}")?;
        }
        Ok(())
    }
}

const TOP_KEYS: [&str; 12] = [
    "topology",
    "slots",
    "num_demands",
    "warmup_demands",
    "seeds",
    "output",
    "emit_outcome_log",
    "loads",
    "lambda",
    "erlangs",
    "metrics",
    "name",
];

struct Checker {
    diags: Vec<String>,
}

impl Checker {
    fn err(&mut self, msg: impl Into<String>) {
        self.diags.push(msg.into());
    }

    fn number(&mut self, v: &Value, what: &str) -> Option<f64> {
        match v {
            Value::Float(f) => Some(*f),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.err(format!("{what} must be a number"));
                None
            }
        }
    }

    fn positive(&mut self, v: &Value, what: &str) -> Option<f64> {
        let x = self.number(v, what)?;
        if x.is_finite() && x > 0.0 {
            Some(x)
        } else {
            self.err(format!("{what} must be > 0"));
            None
        }
    }

    fn count(&mut self, v: &Value, what: &str, min: i64) -> Option<usize> {
        match v {
            Value::Integer(i) if *i >= min => Some(*i as usize),
            Value::Integer(_) => {
                self.err(format!("{what} must be ≥ {min}"));
                None
            }
            _ => {
                self.err(format!("{what} must be an integer"));
                None
            }
        }
    }

    fn string<'v>(&mut self, v: &'v Value, what: &str) -> Option<&'v str> {
        match v {
            Value::String(s) => Some(s),
            _ => {
                self.err(format!("{what} must be a string"));
                None
            }
        }
    }

    fn array<'v>(&mut self, v: &'v Value, what: &str) -> Option<&'v [Value]> {
        match v {
            Value::Array(a) if a.is_empty() => {
                self.err(format!("{what} must not be empty"));
                None
            }
            Value::Array(a) => Some(a),
            _ => {
                self.err(format!("{what} must be an array"));
                None
            }
        }
    }

    fn unknown_keys(&mut self, table: &Table, allowed: &[&str], ctx: &str) {
        for key in table.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(format!("unknown key `{key}`{ctx}"));
            }
        }
    }

    fn metric(&mut self, v: &Value, idx: usize) -> Option<CostSpec> {
        let ctx = format!("metrics[{idx}]");
        let Value::Table(t) = v else {
            self.err(format!("{ctx} must be a table"));
            return None;
        };
        self.unknown_keys(t, &["metric", "merge", "alpha", "llp_literal"], &format!(" in {ctx}"));
        let metric = match t.get("metric") {
            None => {
                self.err(format!("{ctx}.metric is required"));
                None
            }
            Some(v) => self.string(v, &format!("{ctx}.metric")).and_then(|s| {
                s.parse::<Metric>()
                    .map_err(|e| self.err(format!("{ctx}.metric: {e}")))
                    .ok()
            }),
        };
        let merge = match t.get("merge") {
            None => Some(Merge::default()),
            Some(v) => self.string(v, &format!("{ctx}.merge")).and_then(|s| {
                s.parse::<Merge>()
                    .map_err(|e| self.err(format!("{ctx}.merge: {e}")))
                    .ok()
            }),
        };
        let alpha = match t.get("alpha") {
            None => Some(1.0),
            Some(v) => match self.number(v, &format!("{ctx}.alpha")) {
                Some(a) if a.is_finite() && a >= 0.0 => Some(a),
                Some(_) => {
                    self.err(format!("{ctx}: alpha must be ≥ 0"));
                    None
                }
                None => None,
            },
        };
        let literal = match t.get("llp_literal") {
            None => Some(false),
            Some(Value::Boolean(b)) => Some(*b),
            Some(_) => {
                self.err(format!("{ctx}.llp_literal must be a boolean"));
                None
            }
        };
        Some(CostSpec {
            metric: metric?,
            merge: merge?,
            alpha: alpha?,
            llp_literal: literal?,
        })
    }

    fn load(&mut self, v: &Value, idx: usize) -> Option<Load> {
        let ctx = format!("loads[{idx}]");
        let Value::Table(t) = v else {
            self.err(format!("{ctx} must be a table"));
            return None;
        };
        self.unknown_keys(t, &["lambda", "mu"], &format!(" in {ctx}"));
        let lambda = match t.get("lambda") {
            None => Some(DEFAULT_LAMBDA),
            Some(v) => self.positive(v, &format!("{ctx}.lambda")),
        };
        let mu = match t.get("mu") {
            None => {
                self.err(format!("{ctx}.mu is required"));
                None
            }
            Some(v) => self.positive(v, &format!("{ctx}.mu")),
        };
        Some(Load::new(lambda?, mu?))
    }
}

/// Parses and validates a config. Relative paths are returned as written;
/// see [`RunConfig::rebase`].
pub fn validate_config(raw: &str) -> Result<RunConfig, Diagnostics> {
    let table: Table = raw
        .parse()
        .map_err(|e: toml::de::Error| Diagnostics(vec![format!("syntax error: {e}")]))?;
    let mut c = Checker { diags: Vec::new() };
    c.unknown_keys(&table, &TOP_KEYS, "");

    let topology_path = match table.get("topology") {
        None => {
            c.err("topology is required");
            None
        }
        Some(v) => c.string(v, "topology").map(PathBuf::from),
    };
    let output_path = match table.get("output") {
        None => {
            c.err("output is required");
            None
        }
        Some(v) => c.string(v, "output").map(PathBuf::from),
    };
    let slots = table
        .get("slots")
        .map_or(Some(DEFAULT_SLOTS), |v| c.count(v, "slots", 1));
    let num_demands = table
        .get("num_demands")
        .map_or(Some(DEFAULT_NUM_DEMANDS), |v| c.count(v, "num_demands", 1));
    let warmup_demands = table
        .get("warmup_demands")
        .map_or(Some(0), |v| c.count(v, "warmup_demands", 0));
    if let (Some(n), Some(w)) = (num_demands, warmup_demands) {
        if w >= n {
            c.err(format!("warmup_demands ({w}) must be less than num_demands ({n})"));
        }
    }
    let emit_outcome_log = match table.get("emit_outcome_log") {
        None => Some(false),
        Some(Value::Boolean(b)) => Some(*b),
        Some(_) => {
            c.err("emit_outcome_log must be a boolean");
            None
        }
    };

    let seeds = match table.get("seeds") {
        None => {
            c.err("seeds is required");
            None
        }
        Some(v) => c.array(v, "seeds").and_then(|items| {
            let mut seeds = Vec::new();
            let mut ok = true;
            for (i, s) in items.iter().enumerate() {
                match s {
                    Value::Integer(x) if *x >= 0 => seeds.push(*x as u64),
                    _ => {
                        c.err(format!("seeds[{i}] must be a non-negative integer"));
                        ok = false;
                    }
                }
            }
            ok.then_some(seeds)
        }),
    };

    let metrics = match table.get("metrics") {
        None => {
            c.err("metrics is required");
            None
        }
        Some(v) => c.array(v, "metrics").and_then(|items| {
            let specs: Vec<Option<CostSpec>> =
                items.iter().enumerate().map(|(i, m)| c.metric(m, i)).collect();
            specs.into_iter().collect::<Option<Vec<_>>>()
        }),
    };

    let loads = match (table.get("loads"), table.get("erlangs")) {
        (Some(_), Some(_)) => {
            c.err("give either loads or erlangs, not both");
            None
        }
        (None, None) => {
            c.err("loads (or erlangs) is required");
            None
        }
        (Some(v), None) => {
            if table.contains_key("lambda") {
                c.err("top-level lambda only applies to erlangs");
            }
            c.array(v, "loads").and_then(|items| {
                let loads: Vec<Option<Load>> =
                    items.iter().enumerate().map(|(i, l)| c.load(l, i)).collect();
                loads.into_iter().collect::<Option<Vec<_>>>()
            })
        }
        (None, Some(v)) => {
            let lambda = table
                .get("lambda")
                .map_or(Some(DEFAULT_LAMBDA), |v| c.positive(v, "lambda"));
            let erlangs = c.array(v, "erlangs").and_then(|items| {
                let vals: Vec<Option<f64>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, e)| c.positive(e, &format!("erlangs[{i}]")))
                    .collect();
                vals.into_iter().collect::<Option<Vec<_>>>()
            });
            lambda
                .zip(erlangs)
                .map(|(l, es)| es.into_iter().map(|e| Load::erlang(l, e)).collect())
        }
    };

    if !c.diags.is_empty() {
        return Err(Diagnostics(c.diags));
    }
    Ok(RunConfig {
        topology_path: topology_path.unwrap(),
        slots: slots.unwrap(),
        metrics: metrics.unwrap(),
        loads: loads.unwrap(),
        seeds: seeds.unwrap(),
        num_demands: num_demands.unwrap(),
        warmup_demands: warmup_demands.unwrap(),
        output_path: output_path.unwrap(),
        emit_outcome_log: emit_outcome_log.unwrap(),
    })
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ConfigIo {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}:\n{diags}")]
    Config { path: String, diags: Diagnostics },
    #[error("topology error: {0}")]
    Topology(#[from] TopologyError),
    #[error("simulation failed: {0}")]
    Sim(#[from] SimError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: 1 config, 2 topology, 3 runtime.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigIo { .. } | CliError::Config { .. } | CliError::Usage(_) => 1,
            CliError::Topology(_) => 2,
            CliError::Sim(_) | CliError::Output { .. } | CliError::Csv(_) => 3,
        }
    }
}

/// Reads, validates and rebases a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigIo {
        path: path.display().to_string(),
        source,
    })?;
    let cfg = validate_config(&text).map_err(|diags| CliError::Config {
        path: path.display().to_string(),
        diags,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(cfg.rebase(base))
}

/// Command-line overrides for `run`.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub jobs: usize,
    pub audit: bool,
}

impl RunOverrides {
    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        if let Some(out) = &self.out {
            cfg.output_path = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seeds = vec![seed];
        }
        cfg
    }
}

/// Directory holding per-run outcome logs for a results file.
pub fn outcome_dir(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    output.with_file_name(format!("{stem}.outcomes"))
}

/// File name of one run's outcome log inside [`outcome_dir`].
pub fn outcome_file_name(run: &SweepRun) -> String {
    let r = &run.result;
    let mut name = format!(
        "{}_{}_{}_a{}_l{}_m{}_s{}",
        r.topology, r.spec.metric, r.spec.merge, r.spec.alpha, r.lambda, r.mu, r.seed
    );
    if r.spec.llp_literal {
        name.push_str("_literal");
    }
    name.push_str(".csv");
    name
}

/// Runs the configured sweep and writes the results CSV (and outcome logs
/// when enabled). Returns the runs in output order.
pub fn run_experiment(cfg: &RunConfig, audit: bool, jobs: usize) -> Result<Vec<SweepRun>, CliError> {
    let topology = Topology::load(&cfg.topology_path)?;
    let runs = cfg.sweep(audit, jobs).run(&topology)?;

    let mut buf = Vec::new();
    write_results_csv(runs.iter().map(|r| &r.result), &mut buf)?;
    write_atomic(&cfg.output_path, &buf).map_err(|source| CliError::Output {
        path: cfg.output_path.display().to_string(),
        source,
    })?;

    if cfg.emit_outcome_log {
        let dir = outcome_dir(&cfg.output_path);
        for run in &runs {
            let path = dir.join(outcome_file_name(run));
            let mut buf = Vec::new();
            write_outcomes_csv(&run.outcomes, &mut buf)?;
            write_atomic(&path, &buf).map_err(|source| CliError::Output {
                path: path.display().to_string(),
                source,
            })?;
        }
    }
    Ok(runs)
}

/// One-line human summary of a run.
pub fn summary_line(run: &SweepRun) -> String {
    let r = &run.result;
    format!(
        "{} {:<24} load={:<8} seed={:<4} blocking={:.5} (dist {}, spec {}) transceivers/served={:.4}",
        r.topology,
        r.spec.to_string(),
        r.load_erlang(),
        r.seed,
        r.blocking_probability(),
        r.stats.blocked_distance,
        r.stats.blocked_spectrum,
        r.transceivers_per_served(),
    )
}

/// Writes the demand trace of the `load_index`-th load point and the given
/// seed (first configured seed by default).
pub fn export_trace(
    cfg: &RunConfig,
    out: &Path,
    seed: Option<u64>,
    load_index: usize,
) -> Result<usize, CliError> {
    let topology = Topology::load(&cfg.topology_path)?;
    let load = *cfg.loads.get(load_index).ok_or_else(|| {
        CliError::Usage(format!(
            "load index {load_index} out of range (config has {} loads)",
            cfg.loads.len()
        ))
    })?;
    let seed = seed.unwrap_or(cfg.seeds[0]);
    let sweep = cfg.sweep(false, 1);
    let trace = generate_trace(&sweep.traffic(load, seed), &topology);
    let mut buf = Vec::new();
    write_trace_csv(&trace, &mut buf).map_err(|e| CliError::Usage(e.to_string()))?;
    write_atomic(out, &buf).map_err(|source| CliError::Output {
        path: out.display().to_string(),
        source,
    })?;
    Ok(trace.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
topology = "nsfnet.topo"
seeds = [1]
output = "out.csv"
erlangs = [100, 200]

[[metrics]]
metric = "LL"
"#;

    #[test]
    fn defaults_applied() {
        let cfg = validate_config(MINIMAL).unwrap();
        assert_eq!(cfg.slots, 180);
        assert_eq!(cfg.num_demands, 10_000);
        assert_eq!(cfg.warmup_demands, 0);
        assert!(!cfg.emit_outcome_log);
        assert_eq!(cfg.loads, vec![Load::new(10.0, 0.1), Load::new(10.0, 0.05)]);
        assert_eq!(cfg.metrics, vec![CostSpec::new(Metric::LL)]);
    }

    #[test]
    fn explicit_loads_and_metrics() {
        let cfg = validate_config(
            r#"
topology = "t.topo"
seeds = [3, 4]
output = "o.csv"
slots = 64
[[loads]]
lambda = 5
mu = 0.5
[[metrics]]
metric = "LLP"
merge = "sqrt"
alpha = 2.5
llp_literal = true
"#,
        )
        .unwrap();
        assert_eq!(cfg.slots, 64);
        assert_eq!(cfg.loads, vec![Load::new(5.0, 0.5)]);
        assert_eq!(
            cfg.metrics,
            vec![CostSpec::new(Metric::LLP)
                .with_merge(Merge::Sqrt)
                .with_alpha(2.5)
                .literal_llp(true)]
        );
    }

    #[test]
    fn reports_all_violations() {
        let diags = validate_config(
            r#"
topology = "t.topo"
seeds = []
output = "o.csv"
slots = 0
bogus = 1
erlangs = [100, -5]
[[metrics]]
metric = "LLU"
alpha = -1
[[metrics]]
metric = "XYZ"
"#,
        )
        .unwrap_err()
        .0;
        let joined = diags.join("\n");
        assert!(joined.contains("alpha must be ≥ 0"), "{joined}");
        assert!(joined.contains("seeds must not be empty"), "{joined}");
        assert!(joined.contains("slots must be ≥ 1"), "{joined}");
        assert!(joined.contains("unknown key `bogus`"), "{joined}");
        assert!(joined.contains("erlangs[1] must be > 0"), "{joined}");
        assert!(joined.contains("unknown metric"), "{joined}");
        assert_eq!(diags.len(), 6);
    }

    #[test]
    fn missing_required_keys() {
        let diags = validate_config("").unwrap_err().0;
        assert_eq!(diags.len(), 5, "{diags:?}");
        let syntax = validate_config("topology = ").unwrap_err().0;
        assert_eq!(syntax.len(), 1);
        assert!(syntax[0].starts_with("syntax error"));
    }

    #[test]
    fn rebase_and_overrides() {
        let cfg = validate_config(MINIMAL).unwrap().rebase(Path::new("/cfg"));
        assert_eq!(cfg.topology_path, PathBuf::from("/cfg/nsfnet.topo"));
        assert_eq!(cfg.output_path, PathBuf::from("/cfg/out.csv"));
        let cfg = RunOverrides {
            out: Some("/x.csv".into()),
            seed: Some(42),
            ..Default::default()
        }
        .apply(cfg);
        assert_eq!(cfg.seeds, vec![42]);
        assert_eq!(cfg.output_path, PathBuf::from("/x.csv"));
        assert_eq!(
            outcome_dir(&cfg.output_path),
            PathBuf::from("/x.outcomes")
        );
    }

    #[test]
    fn exit_codes() {
        let cfg = validate_config(MINIMAL).unwrap().rebase(Path::new("/nonexistent"));
        let err = run_experiment(&cfg, false, 1).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("/nonexistent/nsfnet.topo"));
        let err = load_config(Path::new("/nonexistent/cfg.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
