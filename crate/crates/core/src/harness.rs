//! Monte Carlo experiment driver: parameter sweeps, paired runs of every
//! selected algorithm on the same realization, weighted time lines,
//! aggregation and persistence.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use log::warn;
use num_bigint::BigUint;
use num_traits::pow::Pow;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{solve_max_sinr, solve_min_interference};
use crate::channel::{
    draw_gains, linear_to_db, sample_disk, sample_scenario_with_sbs, sample_users, NetworkConfig, Point, Scenario,
};
use crate::error::{ConfigError, SolveError};
use crate::exact::{count_combinations, solve_bf, solve_bnb, SolveResult, DEFAULT_ENUMERATION_CAP};
use crate::greedy::{solve_umrcg, solve_wmrcg, SelectionOrder};
use crate::sinr::mu_sinr;
use crate::weights::{jain_index, WeightMode, WeightState};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    CapRefusal(String),
    #[error("no data")]
    NoData,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "BF")]
    Bf,
    #[serde(rename = "BnB")]
    Bnb,
    #[serde(rename = "WBF")]
    Wbf,
    #[serde(rename = "WBnB")]
    Wbnb,
    #[serde(rename = "UMRCG")]
    Umrcg,
    #[serde(rename = "WMRCG")]
    Wmrcg,
    MaxSinr,
    MinInterf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Bf,
        Algorithm::Bnb,
        Algorithm::Wbf,
        Algorithm::Wbnb,
        Algorithm::Umrcg,
        Algorithm::Wmrcg,
        Algorithm::MaxSinr,
        Algorithm::MinInterf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bf => "BF",
            Algorithm::Bnb => "BnB",
            Algorithm::Wbf => "WBF",
            Algorithm::Wbnb => "WBnB",
            Algorithm::Umrcg => "UMRCG",
            Algorithm::Wmrcg => "WMRCG",
            Algorithm::MaxSinr => "MaxSinr",
            Algorithm::MinInterf => "MinInterf",
        }
    }

    pub fn is_weighted(self) -> bool {
        matches!(self, Algorithm::Wbf | Algorithm::Wbnb | Algorithm::Wmrcg)
    }

    fn is_enumeration(self) -> bool {
        matches!(self, Algorithm::Bf | Algorithm::Wbf)
    }

    fn is_tree_search(self) -> bool {
        matches!(self, Algorithm::Bnb | Algorithm::Wbnb)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!("unknown algorithm `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    #[serde(rename = "N")]
    N,
    #[serde(rename = "K")]
    K,
    #[serde(rename = "gamma_db")]
    GammaDb,
    #[serde(rename = "gamma0_db")]
    Gamma0Db,
    #[serde(rename = "beta_db")]
    BetaDb,
    #[serde(rename = "beta0_db")]
    Beta0Db,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N => "N",
            SweepParam::K => "K",
            SweepParam::GammaDb => "gamma_db",
            SweepParam::Gamma0Db => "gamma0_db",
            SweepParam::BetaDb => "beta_db",
            SweepParam::Beta0Db => "beta0_db",
        }
    }

    fn is_count(self) -> bool {
        matches!(self, SweepParam::N | SweepParam::K)
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "n" => Ok(SweepParam::N),
            "K" | "k" => Ok(SweepParam::K),
            "gamma_db" | "gamma" => Ok(SweepParam::GammaDb),
            "gamma0_db" | "gamma0" => Ok(SweepParam::Gamma0Db),
            "beta_db" | "beta" => Ok(SweepParam::BetaDb),
            "beta0_db" | "beta0" => Ok(SweepParam::Beta0Db),
            other => Err(format!("unknown sweep parameter `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = String;

    /// `PARAM=v1,v2,...`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (param, values) = s.split_once('=').ok_or_else(|| format!("expected PARAM=v1,v2,... got `{s}`"))?;
        let param = param.trim().parse()?;
        let values = values
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("bad sweep value `{v}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sweep { param, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (csv | json)")),
        }
    }
}

/// Everything needed to reproduce one experiment. `base.seed` is the
/// master seed; trial `t` draws from a generator seeded with `seed ^ t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub base: NetworkConfig,
    pub sweep: Sweep,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    /// Time slots per trial; weights are threaded across them.
    pub slots: usize,
    /// Fairness window `T`.
    pub window: usize,
    pub weight_mode: WeightMode,
    /// One SBS layout shared by every trial.
    pub fixed_sbs: bool,
    /// Keep SU and MU positions for the whole trial and only redraw fading
    /// per slot.
    pub hold_users: bool,
    pub selection_order: SelectionOrder,
    pub enumeration_cap: u64,
    /// Branch-and-bound is skipped (with a warning) when `K * N` exceeds this.
    pub bnb_max_cells: usize,
    /// Measure wall time per solve. Off by default so output is reproducible.
    pub record_timing: bool,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let base = NetworkConfig::default();
        Self {
            sweep: Sweep { param: SweepParam::N, values: vec![base.n as f64] },
            base,
            algorithms: vec![Algorithm::Bnb, Algorithm::Umrcg],
            trials: 500,
            slots: 1,
            window: 50,
            weight_mode: WeightMode::PerSu,
            fixed_sbs: false,
            hold_users: false,
            selection_order: SelectionOrder::default(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            bnb_max_cells: 256,
            record_timing: false,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentSpec {
    /// Parses TOML when `path` ends in `.toml`, JSON otherwise.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))
        } else {
            serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))
        }
    }

    /// Network configuration at one sweep point.
    pub fn point_config(&self, value: f64) -> NetworkConfig {
        let mut cfg = self.base;
        match self.sweep.param {
            SweepParam::N => cfg.n = value as usize,
            SweepParam::K => cfg.k = value as usize,
            SweepParam::GammaDb => cfg.gamma_db = value,
            SweepParam::Gamma0Db => cfg.gamma0_db = value,
            SweepParam::BetaDb => cfg.beta_db = value,
            SweepParam::Beta0Db => cfg.beta0_db = value,
        }
        cfg
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |field: &str, reason: String| HarnessError::Config(ConfigError::invalid(field, reason));
        self.base.validate()?;
        if self.trials < 1 {
            return Err(bad("trials", "need at least one trial".into()));
        }
        if self.slots < 1 {
            return Err(bad("slots", "need at least one slot".into()));
        }
        if self.window < 1 {
            return Err(bad("window", "window must be at least one slot".into()));
        }
        if self.sweep.values.is_empty() {
            return Err(bad("sweep.values", "sweep needs at least one value".into()));
        }
        if self.algorithms.is_empty() {
            return Err(bad("algorithms", "select at least one algorithm".into()));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].contains(a) {
                return Err(bad("algorithms", format!("{a} listed twice")));
            }
        }
        for &v in &self.sweep.values {
            if self.sweep.param.is_count() && !(v.is_finite() && v >= 1.0 && v.fract() == 0.0) {
                return Err(bad("sweep.values", format!("{} must be a positive integer, got {v}", self.sweep.param.name())));
            }
            if !v.is_finite() {
                return Err(bad("sweep.values", format!("non-finite value {v}")));
            }
            self.point_config(v).validate()?;
        }
        if self.algorithms.iter().any(|a| a.is_enumeration()) {
            for &v in &self.sweep.values {
                let cfg = self.point_config(v);
                let count = count_combinations(cfg.k, cfg.n) + 1u32;
                if count > BigUint::from(self.enumeration_cap) {
                    return Err(HarnessError::CapRefusal(format!(
                        "brute force at {}={v} (K={}, N={}) needs {count} associations, cap is {}",
                        self.sweep.param.name(),
                        cfg.k,
                        cfg.n,
                        self.enumeration_cap
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One solver run on one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub trial: usize,
    pub slot: usize,
    pub algorithm: Algorithm,
    pub objective: f64,
    pub associated: usize,
    pub su_associated: Vec<bool>,
    pub sbs_associated: Vec<bool>,
    pub mu_sinr: f64,
    pub mu_infeasible: bool,
    pub wall_ms: f64,
    pub scenario_hash: String,
    pub config: NetworkConfig,
    pub window: usize,
}

impl TrialRecord {
    pub fn mu_sinr_db(&self) -> f64 {
        linear_to_db(self.mu_sinr)
    }
}

fn fixed_layout(spec: &ExperimentSpec, n: usize) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.base.seed);
    rng.set_stream(1);
    (0..n).map(|_| sample_disk(spec.base.radius, &mut rng)).collect()
}

fn algorithms_at(spec: &ExperimentSpec, cfg: &NetworkConfig) -> Vec<Algorithm> {
    spec.algorithms
        .iter()
        .copied()
        .filter(|a| {
            if a.is_tree_search() && cfg.k * cfg.n > spec.bnb_max_cells {
                warn!(
                    "skipping {a} at K={}, N={}: K*N exceeds bnb_max_cells = {}",
                    cfg.k, cfg.n, spec.bnb_max_cells
                );
                false
            } else {
                true
            }
        })
        .collect()
}

fn run_one(
    spec: &ExperimentSpec,
    alg: Algorithm,
    scn: &Scenario,
    state: Option<&WeightState>,
) -> Result<SolveResult, SolveError> {
    let weights = state.map(WeightState::weight_vector);
    match alg {
        Algorithm::Bf => solve_bf(scn, None, spec.enumeration_cap),
        Algorithm::Bnb => solve_bnb(scn, None),
        Algorithm::Wbf => solve_bf(scn, weights.as_ref(), spec.enumeration_cap),
        Algorithm::Wbnb => solve_bnb(scn, weights.as_ref()),
        Algorithm::Umrcg => Ok(solve_umrcg(scn, spec.selection_order)),
        Algorithm::Wmrcg => solve_wmrcg(scn, weights.as_ref().expect("weighted run has a state"), spec.selection_order),
        Algorithm::MaxSinr => Ok(solve_max_sinr(scn)),
        Algorithm::MinInterf => Ok(solve_min_interference(scn)),
    }
}

fn run_trial(
    spec: &ExperimentSpec,
    sweep_value: f64,
    cfg: &NetworkConfig,
    algorithms: &[Algorithm],
    layout: Option<&[Point]>,
    trial: usize,
) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.base.seed ^ trial as u64);
    let sbs: Vec<Point> = match layout {
        Some(l) => l.to_vec(),
        None => (0..cfg.n).map(|_| sample_disk(cfg.radius, &mut rng)).collect(),
    };
    let held = spec.hold_users.then(|| sample_users(cfg, &sbs, &mut rng));
    let mut states: Vec<Option<WeightState>> = algorithms
        .iter()
        .map(|a| a.is_weighted().then(|| WeightState::new(spec.window, spec.weight_mode, cfg.k, cfg.n)))
        .collect();

    let mut out = Vec::with_capacity(spec.slots * algorithms.len());
    for slot in 0..spec.slots {
        let scn = match &held {
            Some(pos) => draw_gains(cfg, pos.clone(), &mut rng),
            None => sample_scenario_with_sbs(cfg, &sbs, &mut rng),
        };
        let hash = scn.gain_hash();
        for (alg, state) in algorithms.iter().zip(states.iter_mut()) {
            let start = Instant::now();
            let res = run_one(spec, *alg, &scn, state.as_ref())?;
            let wall_ms = if spec.record_timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            if let Some(st) = state.as_mut() {
                st.push(res.association.clone());
            }
            out.push(TrialRecord {
                sweep_param: spec.sweep.param,
                sweep_value,
                trial,
                slot,
                algorithm: *alg,
                objective: res.objective,
                associated: res.association.len(),
                su_associated: res.association.su_flags(),
                sbs_associated: res.association.sbs_flags(),
                mu_sinr: mu_sinr(&scn, &res.association),
                mu_infeasible: res.mu_infeasible,
                wall_ms,
                scenario_hash: hash.clone(),
                config: *cfg,
                window: spec.window,
            });
        }
    }
    Ok(out)
}

/// Runs every sweep point and trial. Trials run in parallel; the returned
/// records are ordered by (sweep point, trial, slot, algorithm position).
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>, HarnessError> {
    spec.validate()?;
    let mut records = Vec::new();
    for &value in &spec.sweep.values {
        let cfg = spec.point_config(value);
        let algorithms = algorithms_at(spec, &cfg);
        if algorithms.is_empty() {
            continue;
        }
        let layout = spec.fixed_sbs.then(|| fixed_layout(spec, cfg.n));
        let chunks: Vec<Vec<TrialRecord>> = (0..spec.trials)
            .into_par_iter()
            .map(|t| run_trial(spec, value, &cfg, &algorithms, layout.as_deref(), t))
            .collect::<Result<_, _>>()?;
        records.extend(chunks.into_iter().flatten());
    }
    Ok(records)
}

pub const CSV_HEADER: [&str; 10] = [
    "sweep_param",
    "sweep_value",
    "trial",
    "slot",
    "algorithm",
    "objective",
    "associated",
    "mu_sinr_db",
    "wall_ms",
    "scenario_hash",
];

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| HarnessError::Output(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.sweep_param.name().to_string(),
            r.sweep_value.to_string(),
            r.trial.to_string(),
            r.slot.to_string(),
            r.algorithm.name().to_string(),
            r.objective.to_string(),
            r.associated.to_string(),
            r.mu_sinr_db().to_string(),
            r.wall_ms.to_string(),
            r.scenario_hash.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Output metadata: the full spec plus how realizations vary across slots.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata<'a> {
    pub spec: &'a ExperimentSpec,
    pub slot_resampling: &'static str,
    pub sbs_layout: &'static str,
}

impl<'a> RunMetadata<'a> {
    pub fn new(spec: &'a ExperimentSpec) -> Self {
        Self {
            spec,
            slot_resampling: if spec.hold_users {
                "fading redrawn every slot; SU and MU positions held per trial"
            } else {
                "fading and SU/MU positions redrawn every slot"
            },
            sbs_layout: if spec.fixed_sbs { "fixed across trials" } else { "redrawn per trial" },
        }
    }
}

pub fn write_json<W: Write>(spec: &ExperimentSpec, records: &[TrialRecord], out: W) -> Result<(), HarnessError> {
    #[derive(Serialize)]
    struct Doc<'a> {
        metadata: RunMetadata<'a>,
        records: &'a [TrialRecord],
    }
    serde_json::to_writer_pretty(out, &Doc { metadata: RunMetadata::new(spec), records })
        .map_err(|e| HarnessError::Output(e.to_string()))
}

/// Mean and standard error per (sweep value, algorithm).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub sweep_param: SweepParam,
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub records: usize,
    pub mean_associated: f64,
    pub stderr_associated: f64,
    pub mean_objective: f64,
    /// Mean over trials of Jain's index on per-SU association counts.
    pub jain_su: Option<f64>,
    /// Same over per-SBS counts.
    pub jain_sbs: Option<f64>,
    /// `100 * (exact - mean) / exact` against BnB (or BF) at the same point.
    pub gap_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn get(&self, sweep_value: f64, algorithm: Algorithm) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.sweep_value == sweep_value && r.algorithm == algorithm)
    }

    pub fn sweep_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.rows.iter().map(|r| r.sweep_value).collect();
        v.dedup();
        v
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>10} {:>10} {:>7} {:>9} {:>8} {:>9} {:>7} {:>7} {:>7}",
            "sweep", "algorithm", "n", "assoc", "stderr", "objective", "jainSU", "jainSBS", "gap%"
        )?;
        let opt = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |x| format!("{x:.p$}"));
        for r in &self.rows {
            writeln!(
                f,
                "{:>10} {:>10} {:>7} {:>9.4} {:>8.4} {:>9.4} {:>7} {:>7} {:>7}",
                r.sweep_value,
                r.algorithm.name(),
                r.records,
                r.mean_associated,
                r.stderr_associated,
                r.mean_objective,
                opt(r.jain_su, 4),
                opt(r.jain_sbs, 4),
                opt(r.gap_pct, 3),
            )?;
        }
        Ok(())
    }
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Folds records into per-point statistics. The result does not depend on
/// record order.
pub fn aggregate(records: &[TrialRecord]) -> Result<Summary, HarnessError> {
    let first = records.first().ok_or(HarnessError::NoData)?;
    let param = first.sweep_param;

    // (value bits, algorithm) -> trial -> records
    type Key = (OrderedF64, Algorithm);
    let mut groups: BTreeMap<Key, BTreeMap<usize, Vec<&TrialRecord>>> = BTreeMap::new();
    for r in records {
        groups.entry((OrderedF64(r.sweep_value), r.algorithm)).or_default().entry(r.trial).or_default().push(r);
    }

    let mut rows = Vec::with_capacity(groups.len());
    for ((value, algorithm), trials) in &groups {
        let mut associated = Vec::new();
        let mut objective = Vec::new();
        let mut jain_su = Vec::new();
        let mut jain_sbs = Vec::new();
        for recs in trials.values() {
            let mut recs = recs.clone();
            recs.sort_by_key(|r| r.slot);
            let mut su_counts = vec![0.0; recs[0].su_associated.len()];
            let mut sbs_counts = vec![0.0; recs[0].sbs_associated.len()];
            for r in &recs {
                associated.push(r.associated as f64);
                objective.push(r.objective);
                for (c, f) in su_counts.iter_mut().zip(&r.su_associated) {
                    *c += f64::from(u8::from(*f));
                }
                for (c, f) in sbs_counts.iter_mut().zip(&r.sbs_associated) {
                    *c += f64::from(u8::from(*f));
                }
            }
            jain_su.extend(jain_index(&su_counts));
            jain_sbs.extend(jain_index(&sbs_counts));
        }
        let (mean_associated, stderr_associated) = mean_stderr(&associated);
        let mean_objective = objective.iter().sum::<f64>() / objective.len() as f64;
        let mean_opt = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
        rows.push(SummaryRow {
            sweep_param: param,
            sweep_value: value.0,
            algorithm: *algorithm,
            records: associated.len(),
            mean_associated,
            stderr_associated,
            mean_objective,
            jain_su: mean_opt(&jain_su),
            jain_sbs: mean_opt(&jain_sbs),
            gap_pct: None,
        });
    }

    let reference: BTreeMap<OrderedF64, f64> = rows
        .iter()
        .filter(|r| r.algorithm == Algorithm::Bnb)
        .chain(rows.iter().filter(|r| r.algorithm == Algorithm::Bf))
        .map(|r| (OrderedF64(r.sweep_value), r.mean_associated))
        .rev()
        .collect();
    for r in &mut rows {
        if let Some(&exact) = reference.get(&OrderedF64(r.sweep_value)) {
            if exact > 0.0 {
                r.gap_pct = Some(100.0 * (exact - r.mean_associated) / exact);
            } else if r.mean_associated == 0.0 {
                r.gap_pct = Some(0.0);
            }
        }
    }
    Ok(Summary { rows })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrderedF64(f64);

impl Eq for OrderedF64 {}

impl PartialOrd for OrderedF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeRegime {
    FewerUsers,
    MoreUsers,
    Equal,
}

/// Worst-case operation counts of the four algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityTable {
    pub k: usize,
    pub n: usize,
    pub t: usize,
    pub regime: SizeRegime,
    pub ubf: BigUint,
    pub wbf: BigUint,
    pub umrcg: BigUint,
    pub wmrcg: BigUint,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

pub fn estimate_complexity(k: usize, n: usize, t: usize) -> ComplexityTable {
    let big = |x: usize| BigUint::from(x);
    let p = |base: usize, e: usize| -> BigUint { Pow::pow(big(base), e) };
    let (regime, ubf, wbf) = match k.cmp(&n) {
        std::cmp::Ordering::Less => (SizeRegime::FewerUsers, p(k, 3) * p(n, k + 2), p(k, 4) * p(n, k + 3)),
        std::cmp::Ordering::Greater => (SizeRegime::MoreUsers, p(n, 3) * p(k, n + 2), p(n, 4) * p(k, n + 3)),
        std::cmp::Ordering::Equal => (SizeRegime::Equal, p(n, 5) * factorial(n), p(n, 7) * factorial(n)),
    };
    let umrcg = p(k, 2) * p(n, 2);
    let wmrcg = big(n) * big(k) * big(t) + umrcg.clone();
    ComplexityTable { k, n, t, regime, ubf, wbf, umrcg, wmrcg }
}

/// Scientific notation with at most `sig` significant digits, e.g. `2.4e5`.
pub fn scientific(x: &BigUint, sig: usize) -> String {
    let digits = x.to_string();
    if digits == "0" {
        return "0".into();
    }
    let sig = sig.max(1);
    let mut exp = digits.len() - 1;
    let head: u128 = digits[..sig.min(digits.len())].parse().expect("decimal digits");
    let round_up = digits.as_bytes().get(sig).is_some_and(|d| *d >= b'5');
    let mut mantissa = (head + u128::from(round_up)).to_string();
    if mantissa.len() > sig.min(digits.len()) {
        mantissa.pop();
        exp += 1;
    }
    let (lead, frac) = mantissa.split_at(1);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{lead}e{exp}")
    } else {
        format!("{lead}.{frac}e{exp}")
    }
}

impl fmt::Display for ComplexityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K = {}, N = {}, T = {} ({:?})", self.k, self.n, self.t, self.regime)?;
        for (name, v) in [("UBF-C", &self.ubf), ("WBF-C", &self.wbf), ("UMRCG-C", &self.umrcg), ("WMRCG-C", &self.wmrcg)] {
            writeln!(f, "{name:<8} {v:>32}  ~ {}", scientific(v, 3))?;
        }
        Ok(())
    }
}
