//! Experiment configuration, dispatch and output files.
//!
//! A run is a pure function of its [`ExperimentConfig`] and the crate
//! version: every CSV and JSON-lines file is bit-identical across repeated
//! runs. Wall time is confined to the `metadata.json` written alongside.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    certify_entropy_constant, check_ceil_log_inequality, check_conddecay, check_entropy_decomposition,
    check_escape_bound, check_maincor, check_q_escape_bound, check_rootdecay, check_transience_sum, log_grid,
    EntropyConstant,
};
use crate::counterexample::{
    check_hitting_time_bound, check_path_hitting_time, default_starts, drift_check, per_start_entropy_rates,
    profiles_to_csv, rate_ordering, recurrence_diagnostics,
};
use crate::error::{Error, Result};
use crate::evolving::{gap_length, EvolvingSetProcess};
use crate::graph::{GraphFamily, VertexId};
use crate::report::{BoundReport, Direction};
use crate::rng::{seed_stream, RNG_ALGORITHM};
use crate::space::CellSet;
use crate::walk::{fmt_f64, ExactWalk, PropagationOptions, DEFAULT_SUPPORT_CAP};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "EVOSET_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "evoset-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Entropy,
    Escape,
    Evolve,
    Green,
    Verify,
    Counterexample,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Entropy,
        Subcommand::Escape,
        Subcommand::Evolve,
        Subcommand::Green,
        Subcommand::Verify,
        Subcommand::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Entropy => "entropy",
            Subcommand::Escape => "escape",
            Subcommand::Evolve => "evolve",
            Subcommand::Green => "green",
            Subcommand::Verify => "verify",
            Subcommand::Counterexample => "counterexample",
        }
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand `{s}`")))
    }
}

/// Flat `key = value` configuration. Every field has a default, so an empty
/// file is valid; command-line flags override file values key by key.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: String,
    /// Start vertex label; the graph's origin when absent.
    pub x0: Option<String>,
    /// Target vertex label for `green`; `x0` when absent.
    pub y: Option<String>,
    pub c: f64,
    pub n_max: usize,
    pub m_max: usize,
    pub trials: usize,
    pub horizon: usize,
    /// Return-frequency horizons for `counterexample`.
    pub horizons: Vec<usize>,
    /// Radius of the ball A for `escape`.
    pub radius: usize,
    pub seed: u64,
    pub suite: String,
    pub support_cap: usize,
    /// Largest n covered by the entropy certificate in `verify` and `escape`.
    pub cert_n_max: usize,
    /// Include full vertex sets in trajectory logs.
    pub vertices: bool,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: "tree3".into(),
            x0: None,
            y: None,
            c: 0.2,
            n_max: 50,
            m_max: 10,
            trials: 2_000,
            horizon: 100,
            horizons: vec![1_000, 100_000, 1_000_000],
            radius: 1,
            seed: 7,
            suite: "all".into(),
            support_cap: DEFAULT_SUPPORT_CAP,
            cert_n_max: 120,
            vertices: false,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 17] = [
        "graph",
        "x0",
        "y",
        "c",
        "n_max",
        "m_max",
        "trials",
        "horizon",
        "horizons",
        "radius",
        "seed",
        "suite",
        "support_cap",
        "cert_n_max",
        "vertices",
        "out",
        "subcommand",
    ];

    /// Sets one key; `nmax`, `mmax` and dashes are accepted as spellings.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "graph" => self.graph = value.to_string(),
            "x0" => self.x0 = Some(value.to_string()),
            "y" => self.y = Some(value.to_string()),
            "c" => self.c = parse_value(&key, value)?,
            "n_max" | "nmax" => self.n_max = parse_value(&key, value)?,
            "m_max" | "mmax" => self.m_max = parse_value(&key, value)?,
            "trials" => self.trials = parse_value(&key, value)?,
            "horizon" => self.horizon = parse_value(&key, value)?,
            "horizons" => {
                self.horizons = value.split(',').map(|h| parse_value(&key, h.trim())).collect::<Result<Vec<usize>>>()?
            }
            "radius" => self.radius = parse_value(&key, value)?,
            "seed" => self.seed = parse_value(&key, value)?,
            "suite" => self.suite = value.to_string(),
            "support_cap" => self.support_cap = parse_value(&key, value)?,
            "cert_n_max" => self.cert_n_max = parse_value(&key, value)?,
            "vertices" => self.vertices = parse_value(&key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. A `subcommand` key is
    /// returned separately.
    pub fn parse(text: &str) -> Result<(Self, Option<Subcommand>)> {
        let mut cfg = ExperimentConfig::default();
        let mut sub = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            if k.trim() == "subcommand" {
                sub = Some(v.trim().parse()?);
            } else {
                cfg.set(k, v)?;
            }
        }
        Ok((cfg, sub))
    }

    pub fn load(path: &Path) -> Result<(Self, Option<Subcommand>)> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// The configuration as `key = value` lines, readable by [`parse`](Self::parse).
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph = {}", self.graph);
        if let Some(x0) = &self.x0 {
            let _ = writeln!(out, "x0 = {x0}");
        }
        if let Some(y) = &self.y {
            let _ = writeln!(out, "y = {y}");
        }
        let _ = writeln!(out, "c = {}", self.c);
        let _ = writeln!(out, "n_max = {}", self.n_max);
        let _ = writeln!(out, "m_max = {}", self.m_max);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "horizon = {}", self.horizon);
        let hs: Vec<String> = self.horizons.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "horizons = {}", hs.join(","));
        let _ = writeln!(out, "radius = {}", self.radius);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "suite = {}", self.suite);
        let _ = writeln!(out, "support_cap = {}", self.support_cap);
        let _ = writeln!(out, "cert_n_max = {}", self.cert_n_max);
        let _ = writeln!(out, "vertices = {}", self.vertices);
        if let Some(o) = &self.out {
            let _ = writeln!(out, "out = {}", o.display());
        }
        out
    }

    /// `out`, else `$EVOSET_OUT_DIR`, else `evoset-out`.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn graph_family(&self) -> Result<GraphFamily> {
        self.graph.parse()
    }

    pub fn start(&self, g: &GraphFamily) -> Result<VertexId> {
        match &self.x0 {
            Some(label) => g.parse_vertex(label),
            None => Ok(g.origin()),
        }
    }

    fn options(&self) -> PropagationOptions {
        PropagationOptions { support_cap: self.support_cap, ..PropagationOptions::default() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub subcommand: Subcommand,
    pub config: ExperimentConfig,
    pub code_version: String,
    pub rng_algorithm: String,
    pub wall_time_seconds: f64,
    pub support_cap_events: Vec<String>,
    pub files: Vec<String>,
    pub exit_code: i32,
}

/// Files written by a run and its exit code: 0 success, 2 when a non-vacuous
/// bound check failed.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
    pub reports: Vec<BoundReport>,
    pub metadata: RunMetadata,
}

struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
    cap_events: Vec<String>,
}

impl Output {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

fn jsonl(reports: &[BoundReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// Runs one subcommand and writes its outputs plus `metadata.json`.
pub fn run(sub: Subcommand, cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let started = Instant::now();
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir)?;
    let mut out = Output { dir, files: Vec::new(), cap_events: Vec::new() };
    let g = cfg.graph_family()?;
    let reports = match sub {
        Subcommand::Entropy => run_entropy(&g, cfg, &mut out)?,
        Subcommand::Escape => run_escape(&g, cfg, &mut out)?,
        Subcommand::Evolve => run_evolve(&g, cfg, &mut out)?,
        Subcommand::Green => run_green(&g, cfg, &mut out)?,
        Subcommand::Verify => {
            let reports = verify_suite(&g, cfg, &mut out.cap_events)?;
            out.write("verify.jsonl", &jsonl(&reports))?;
            reports
        }
        Subcommand::Counterexample => run_counterexample(&g, cfg, &mut out)?,
    };
    let exit_code = exit_code_for(&reports);
    let metadata = RunMetadata {
        subcommand: sub,
        config: cfg.clone(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        wall_time_seconds: started.elapsed().as_secs_f64(),
        support_cap_events: out.cap_events.clone(),
        files: out.files.iter().map(|p| p.display().to_string()).collect(),
        exit_code,
    };
    out.write("metadata.json", &serde_json::to_string_pretty(&metadata)?)?;
    Ok(RunOutcome { exit_code, files: out.files, reports, metadata })
}

fn run_entropy(g: &GraphFamily, cfg: &ExperimentConfig, out: &mut Output) -> Result<Vec<BoundReport>> {
    let x0 = cfg.start(g)?;
    let series = ExactWalk::centered(g, &x0)?.with_options(cfg.options()).entropy_series(&x0, cfg.n_max)?;
    out.write("entropy.csv", &series.to_csv())?;
    Ok(Vec::new())
}

fn run_escape(g: &GraphFamily, cfg: &ExperimentConfig, out: &mut Output) -> Result<Vec<BoundReport>> {
    let x0 = cfg.start(g)?;
    let a = g.ball(&x0, cfg.radius, cfg.support_cap)?;
    let walk = ExactWalk::centered(g, &x0)?.with_options(cfg.options());
    let mut csv = String::from("n,A_size,escape_probability\n");
    let mut mu = walk.point(&x0)?;
    for n in 0..=cfg.n_max {
        if n > 0 {
            mu = walk.step(&mu)?;
        }
        let q = (1.0 - walk.mass_on(&mu, &a)?).clamp(0.0, 1.0);
        let _ = writeln!(csv, "{n},{},{}", a.len(), fmt_f64(q));
    }
    out.write("escape.csv", &csv)?;
    let reports = match certify_entropy_constant(g, std::slice::from_ref(&x0), 1, cfg.n_max.max(1), cfg.c) {
        Ok(cert) => (1..=cfg.n_max).map(|n| check_escape_bound(g, &x0, n, &a, &cert)).collect::<Result<Vec<_>>>()?,
        Err(Error::CertificationFailed { violations }) => {
            out.cap_events.push(format!(
                "entropy certificate for c = {} failed at {} (start, n) pairs; escape bounds not evaluated",
                cfg.c,
                violations.len()
            ));
            Vec::new()
        }
        Err(e) => return Err(e),
    };
    out.write("escape_bounds.jsonl", &jsonl(&reports))?;
    Ok(reports)
}

fn run_evolve(g: &GraphFamily, cfg: &ExperimentConfig, out: &mut Output) -> Result<Vec<BoundReport>> {
    let x0 = cfg.start(g)?;
    let walk = ExactWalk::centered(g, &x0)?.with_options(cfg.options());
    let process = EvolvingSetProcess::new(walk, cfg.c)?;
    let mut log = String::new();
    for trial in 0..cfg.trials {
        let mut rng = seed_stream(cfg.seed, trial as u64);
        let traj = process.simulate(&x0, cfg.m_max, &mut rng)?;
        if traj.truncated {
            out.cap_events.push(format!("trial {trial}: support cap reached, trajectory truncated"));
        }
        let vertices = cfg.vertices.then_some((process.space(), cfg.support_cap));
        log.push_str(&traj.to_jsonl(Some(trial), vertices)?);
    }
    out.write("trajectories.jsonl", &log)?;
    let profile = process.decay_profile(&x0, cfg.m_max, cfg.trials, cfg.seed)?;
    out.write("decay.csv", &profile.to_csv())?;
    Ok(Vec::new())
}

fn run_green(g: &GraphFamily, cfg: &ExperimentConfig, out: &mut Output) -> Result<Vec<BoundReport>> {
    let x0 = cfg.start(g)?;
    let y = match &cfg.y {
        Some(label) => g.parse_vertex(label)?,
        None => x0.clone(),
    };
    let series = ExactWalk::centered(g, &x0)?.with_options(cfg.options()).green_series(&x0, &y, cfg.horizon)?;
    out.write("green.csv", &series.to_csv())?;
    Ok(Vec::new())
}

fn run_counterexample(g: &GraphFamily, cfg: &ExperimentConfig, out: &mut Output) -> Result<Vec<BoundReport>> {
    if g.schedule().is_none() {
        return Err(Error::Config(format!("counterexample needs a pendant_tower graph, got {g}")));
    }
    let starts = default_starts(g)?;
    let profiles = per_start_entropy_rates(g, &starts, cfg.n_max)?;
    out.write("rates.csv", &profiles_to_csv(&profiles))?;
    let x0 = cfg.start(g)?;
    let diag = recurrence_diagnostics(g, &x0, &cfg.horizons, cfg.trials, cfg.seed)?;
    let mut lines = String::new();
    let ordering: Vec<String> = rate_ordering(&profiles).iter().map(ToString::to_string).collect();
    lines.push_str(&serde_json::to_string(&serde_json::json!({ "kind": "rate_ordering", "ordering": ordering }))?);
    lines.push('\n');
    for r in &diag.returns {
        let mut v = serde_json::to_value(r)?;
        v["kind"] = "return_frequency".into();
        v["start"] = x0.to_string().into();
        lines.push_str(&serde_json::to_string(&v)?);
        lines.push('\n');
    }
    let mut v = serde_json::to_value(&diag.backbone)?;
    v["kind"] = "backbone_projection".into();
    lines.push_str(&serde_json::to_string(&v)?);
    lines.push('\n');
    lines.push_str(&serde_json::to_string(
        &serde_json::json!({ "kind": "backbone_resistance", "value": diag.backbone_resistance }),
    )?);
    lines.push('\n');
    let schedule = g.schedule().copied().expect("checked above");
    let mut reports = vec![drift_check(g, schedule.tallest_attachment(), cfg.trials.min(1_000), 100, cfg.seed)?];
    reports.extend(check_hitting_time_bound(&[7, 15, 31, 63])?);
    for r in &reports {
        lines.push_str(&r.to_json_line());
        lines.push('\n');
    }
    out.write("diagnostics.jsonl", &lines)?;
    Ok(reports)
}

/// Records a skipped group as a vacuous report so the output lists it.
fn skipped(name: &str, reason: &str) -> BoundReport {
    BoundReport::new(name, f64::NAN, f64::NAN, Direction::AtMost, 0.0).input("skipped", reason).vacuous(true)
}

/// Deterministic parameter sets of the verification suite.
pub struct SuitePlan {
    pub escape_ns: Vec<usize>,
    pub escape_radii: Vec<usize>,
    pub decomposition_cases: usize,
    pub ceil_log_points: usize,
    pub rootdecay_cases: usize,
    pub conddecay_states: usize,
    pub duality_times: Vec<usize>,
    pub hitting_sizes: Vec<usize>,
    pub transience_horizon: usize,
    pub transience_supersteps: usize,
}

impl Default for SuitePlan {
    fn default() -> Self {
        SuitePlan {
            escape_ns: vec![15, 20],
            escape_radii: vec![1, 2, 3],
            decomposition_cases: 100,
            ceil_log_points: 10_000,
            rootdecay_cases: 1_000,
            conddecay_states: 24,
            duality_times: vec![0, 4, 8, 12],
            hitting_sizes: vec![7, 15, 31, 63],
            transience_horizon: 40,
            transience_supersteps: 30,
        }
    }
}

/// Runs the suite named by `cfg.suite`: `all`, `exact` (no Monte Carlo) or
/// `mc` (only the Monte Carlo checks).
pub fn verify_suite(g: &GraphFamily, cfg: &ExperimentConfig, cap_events: &mut Vec<String>) -> Result<Vec<BoundReport>> {
    let (exact, mc) = match cfg.suite.as_str() {
        "all" => (true, true),
        "exact" => (true, false),
        "mc" => (false, true),
        other => return Err(Error::Config(format!("unknown suite `{other}` (all, exact, mc)"))),
    };
    let plan = SuitePlan::default();
    let x0 = cfg.start(g)?;
    let mut reports = Vec::new();

    let cert = match certify_entropy_constant(g, std::slice::from_ref(&x0), 1, cfg.cert_n_max, cfg.c) {
        Ok(cert) => {
            reports.push(
                BoundReport::new("certification", cert.min_slack, 0.0, Direction::AtLeast, 0.0)
                    .input("graph", g)
                    .input("x0", &x0)
                    .input("c", cfg.c)
                    .input("n_range", format!("[1, {}]", cfg.cert_n_max))
                    .provenance("min over n of E_n - c n"),
            );
            Some(cert)
        }
        Err(Error::CertificationFailed { violations }) => {
            reports.push(
                skipped("certification", "entropy condition fails; conditional checks skipped")
                    .input("violations", violations.len()),
            );
            None
        }
        Err(e) => return Err(e),
    };

    if exact {
        if let Some(cert) = &cert {
            reports.extend(escape_group(g, &x0, cert, &plan)?);
            match conddecay_group(g, &x0, cert, plan.conddecay_states) {
                Ok(rs) => reports.extend(rs),
                Err(Error::SupportCap { .. }) => {
                    cap_events.push("conditional decay: support cap reached".into());
                    reports.push(skipped("cond_decay", "support cap"));
                }
                Err(e) => return Err(e),
            }
        }
        reports.extend(decomposition_group(g, &x0, cfg.seed, plan.decomposition_cases)?);
        reports.extend(check_ceil_log_inequality(&log_grid(1.0, 1e6, plan.ceil_log_points))?);
        reports.extend(rootdecay_group(cfg.seed, plan.rootdecay_cases)?);
        reports.extend(check_hitting_time_bound(&plan.hitting_sizes)?);
        for i in [1, 2, 5, 10] {
            reports.push(check_path_hitting_time(i)?);
        }
    }
    if mc {
        let process = EvolvingSetProcess::new(ExactWalk::centered(g, &x0)?.with_options(cfg.options()), cfg.c)?;
        let mut y_choices = vec![x0.clone()];
        y_choices.extend(g.neighbors(&x0)?.into_iter().take(1));
        for (k, &t) in plan.duality_times.iter().enumerate() {
            for (j, y) in y_choices.iter().enumerate() {
                let seed = cfg.seed.wrapping_add(1_000 + (k * y_choices.len() + j) as u64);
                reports.push(process.duality_check(&x0, y, t, cfg.trials, seed)?);
            }
        }
        if let Some(cert) = &cert {
            reports.extend(check_maincor(&process, &x0, cert, cfg.m_max, cfg.trials, cfg.seed)?);
            reports.push(check_transience_sum(
                &process,
                &x0,
                &x0,
                cert,
                plan.transience_horizon,
                plan.transience_supersteps,
                cfg.trials,
                cfg.seed.wrapping_add(1),
            )?);
        }
        if let Some(s) = g.schedule() {
            reports.push(drift_check(g, s.tallest_attachment(), cfg.trials.min(1_000), 100, cfg.seed)?);
        }
    }
    Ok(reports)
}

fn escape_group(g: &GraphFamily, x0: &VertexId, cert: &EntropyConstant, plan: &SuitePlan) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for &n in &plan.escape_ns {
        if !cert.covers_n(n) {
            continue;
        }
        for &r in &plan.escape_radii {
            let a = g.ball(x0, r, DEFAULT_SUPPORT_CAP)?;
            out.push(check_escape_bound(g, x0, n, &a, cert)?);
        }
    }
    let n = *plan.escape_ns.last().expect("nonempty");
    if cert.covers_n(n) {
        let s = g.ball(x0, 1, DEFAULT_SUPPORT_CAP)?;
        if s.iter().all(|v| cert.covers_start(v)) {
            let a = g.ball(x0, 2, DEFAULT_SUPPORT_CAP)?;
            out.push(check_q_escape_bound(g, &s, n, &a, cert)?);
        }
    }
    Ok(out)
}

/// Evolving-set states reachable from `{x0}`: the level sets of the first
/// superstep, then those of the superstep from each of them, breadth first.
pub fn reachable_states(process: &EvolvingSetProcess, x0: &VertexId, count: usize) -> Result<Vec<CellSet>> {
    let mut seen: BTreeSet<CellSet> = BTreeSet::new();
    let mut states = vec![process.start_set(x0)?];
    seen.insert(states[0].clone());
    let mut k = 0;
    while k < states.len() && states.len() < count {
        let levels = process.scheduled_levels(&states[k])?;
        for j in 1..=levels.levels.len() {
            let set = levels.set(j);
            if states.len() >= count {
                break;
            }
            if seen.insert(set.clone()) {
                states.push(set);
            }
        }
        k += 1;
    }
    Ok(states)
}

fn conddecay_group(g: &GraphFamily, x0: &VertexId, cert: &EntropyConstant, count: usize) -> Result<Vec<BoundReport>> {
    let process = EvolvingSetProcess::centered(g, x0, cert.c)?;
    let states = reachable_states(&process, x0, count)?;
    let mut needed = 0;
    for set in &states {
        needed = needed.max(gap_length(process.pi_mass(set)?, cert.c)?);
    }
    // Extend the certificate to the gaps the states need; where the entropy
    // condition fails beyond the configured range, those states stay skipped.
    let extended = if needed > cert.n_hi {
        match certify_entropy_constant(g, std::slice::from_ref(x0), cert.n_lo, needed, cert.c) {
            Ok(c) => Some(c),
            Err(Error::CertificationFailed { .. } | Error::SupportCap { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let cert = extended.as_ref().unwrap_or(cert);
    let mut out = Vec::new();
    for set in states {
        let gap = gap_length(process.pi_mass(&set)?, cert.c)?;
        if !cert.covers_n(gap) {
            out.push(skipped("cond_decay", "gap length outside the certified range").input("L", gap));
            continue;
        }
        out.push(check_conddecay(&process, &set, cert)?);
    }
    Ok(out)
}

fn decomposition_group(g: &GraphFamily, x0: &VertexId, seed: u64, cases: usize) -> Result<Vec<BoundReport>> {
    use rand::Rng;
    let mut rng = seed_stream(seed, u64::MAX - 1);
    let mut starts = vec![x0.clone()];
    starts.extend(g.neighbors(x0)?);
    let mut out = Vec::with_capacity(cases);
    for _ in 0..cases {
        let start = &starts[rng.random_range(0..starts.len())];
        let n = rng.random_range(0..=12);
        let r = rng.random_range(0..=3);
        let a = g.ball(start, r, DEFAULT_SUPPORT_CAP)?;
        out.push(check_entropy_decomposition(g, start, n, &a)?);
    }
    Ok(out)
}

/// Random finite distributions rescaled to mean 1: support size at most 20,
/// raw values uniform on [0, 16].
pub fn random_mean_one_distribution<R: rand::Rng + ?Sized>(rng: &mut R) -> Vec<(f64, f64)> {
    let k = rng.random_range(1..=20);
    let values: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..=16.0)).collect();
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
    let wsum: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / wsum).collect();
    let mean: f64 = values.iter().zip(&probs).map(|(v, p)| v * p).sum();
    if mean <= 0.0 {
        return vec![(1.0, 1.0)];
    }
    values.iter().zip(probs).map(|(v, p)| (v / mean, p)).collect()
}

fn rootdecay_group(seed: u64, cases: usize) -> Result<Vec<BoundReport>> {
    let mut rng = seed_stream(seed, u64::MAX - 2);
    (0..cases).map(|_| check_rootdecay(&random_mean_one_distribution(&mut rng))).collect()
}

/// Summary counts per predicate name: (checked, failed).
/// 2 if any non-vacuous check failed, else 0.
pub fn exit_code_for(reports: &[BoundReport]) -> i32 {
    if reports.iter().any(BoundReport::is_failure) {
        2
    } else {
        0
    }
}

pub fn summarize(reports: &[BoundReport]) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for r in reports {
        let e = out.entry(r.name.clone()).or_default();
        e.0 += 1;
        if r.is_failure() {
            e.1 += 1;
        }
    }
    out
}
