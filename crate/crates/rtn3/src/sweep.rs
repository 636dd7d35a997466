//! Parameter sweeps over `(γt, r)` grids and their CSV serialization.
//!
//! This is the engine behind the `rtn3` binary: a [`SweepConfig`] fixes the
//! scenario, the grids, the measures and the evolution engine(s); `run_sweep`
//! evaluates every grid point (in parallel, with deterministic output order)
//! and `write_csv` renders the records.
//!
//! The time axis is dimensionless γt. Internally the switching rate is
//! γ = `gamma_ratio` in units of ν = 1, so absolute time is t = γt / γ.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::correlations::{
    genuine_discord_d3, genuine_total_t3, tripartite_negativity, witness_expectation,
    CorrelationReport, OptimizerSettings, WitnessKind,
};
use crate::evolution::{
    evolve_analytic, evolve_monte_carlo, Coupling, EnsembleSpec, Family, ScenarioConfig,
};
use crate::matrix::DensityMatrix;
use crate::noise::NoiseParams;
use crate::{Error, Result};

/// Quantities that can be requested per grid point. `Totals` is the genuine
/// total correlation alone (cheap); `Discord` implies the full
/// total/classical/discord triple plus the optimal measurement frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Negativity,
    Witness,
    Discord,
    Totals,
}

impl Measure {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "negativity" => Ok(Measure::Negativity),
            "witness" => Ok(Measure::Witness),
            "discord" => Ok(Measure::Discord),
            "totals" => Ok(Measure::Totals),
            other => Err(Error::InvalidArgument(format!(
                "measures: unknown measure `{other}` (expected negativity, witness, discord or totals)"
            ))),
        }
    }
}

/// Which evolution engine(s) to run at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Analytic,
    MonteCarlo,
    Both,
}

impl EngineChoice {
    fn includes_analytic(self) -> bool {
        matches!(self, EngineChoice::Analytic | EngineChoice::Both)
    }

    fn includes_monte_carlo(self) -> bool {
        matches!(self, EngineChoice::MonteCarlo | EngineChoice::Both)
    }
}

/// The engine that produced one CSV row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Analytic,
    MonteCarlo,
}

impl EngineKind {
    pub fn label(self) -> &'static str {
        match self {
            EngineKind::Analytic => "analytic",
            EngineKind::MonteCarlo => "mc",
        }
    }
}

/// Non-fatal per-row conditions, rendered as `;`-joined tokens in the
/// `warnings` CSV column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// Monte Carlo state differs entrywise from the analytic one by more
    /// than 10× the statistical tolerance 0.5/√N.
    EngineDisagreement,
    /// A measurement-frame refinement hit its iteration cap; the reported
    /// value is the best found.
    OptimizerMaxIterations,
}

impl Warning {
    pub fn token(self) -> &'static str {
        match self {
            Warning::EngineDisagreement => "engine_disagreement",
            Warning::OptimizerMaxIterations => "optimizer_max_iterations",
        }
    }
}

/// One CSV row: a fully evaluated (γt, r, engine) triple.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub engine: EngineKind,
    /// Present exactly when the witness measure was requested.
    pub witness_kind: Option<WitnessKind>,
    pub report: CorrelationReport,
    pub warnings: Vec<Warning>,
}

/// A fully resolved sweep: scenario, grids, measures, engines and output.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: Family,
    pub coupling: Coupling,
    pub noise: NoiseParams,
    /// Ascending γt values.
    pub t_grid: Vec<f64>,
    /// Ascending purities in [0, 1].
    pub r_grid: Vec<f64>,
    pub measures: Vec<Measure>,
    pub engine: EngineChoice,
    pub ensemble: EnsembleSpec,
    pub optimizer: OptimizerSettings,
    /// Discord is evaluated only where both grid indices are multiples of
    /// this stride; other measures stay dense.
    pub discord_stride: usize,
    /// CSV destination; `None` means stdout.
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    fn wants(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

/// Entrywise deviation above which an MC state is flagged as disagreeing
/// with the analytic one: ten times the 0.5/√N statistical scale of an
/// ensemble-averaged matrix entry.
fn disagreement_threshold(n_trajectories: usize) -> f64 {
    10.0 * 0.5 / (n_trajectories as f64).sqrt()
}

/// Evaluate the whole grid. Points are distributed across a worker pool;
/// records come back ordered r-outer, γt-inner, engine-last (analytic before
/// Monte Carlo) regardless of completion order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    validate(cfg)?;
    let points: Vec<(usize, usize)> = (0..cfg.r_grid.len())
        .flat_map(|ir| (0..cfg.t_grid.len()).map(move |it| (ir, it)))
        .collect();
    let nested: Vec<Vec<SweepRecord>> = points
        .par_iter()
        .map(|&(ir, it)| evaluate_point(cfg, ir, it))
        .collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    if cfg.t_grid.is_empty() {
        return Err(Error::InvalidArgument("tmax/steps: empty time grid".into()));
    }
    if cfg.r_grid.is_empty() {
        return Err(Error::InvalidArgument("r: empty purity grid".into()));
    }
    if cfg.t_grid.windows(2).any(|w| w[0] > w[1]) || cfg.t_grid[0] < 0.0 {
        return Err(Error::InvalidArgument(
            "tmax/steps: time grid must be ascending and nonnegative".into(),
        ));
    }
    if cfg.r_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "r: purity grid must be ascending".into(),
        ));
    }
    if cfg.discord_stride == 0 {
        return Err(Error::InvalidArgument(
            "discord-grid-stride: stride must be positive".into(),
        ));
    }
    if cfg.engine.includes_monte_carlo() && cfg.ensemble.n_trajectories == 0 {
        return Err(Error::InvalidArgument(
            "trajectories: Monte Carlo engine needs at least one trajectory".into(),
        ));
    }
    Ok(())
}

fn evaluate_point(cfg: &SweepConfig, ir: usize, it: usize) -> Result<Vec<SweepRecord>> {
    let r = cfg.r_grid[ir];
    let gamma_t = cfg.t_grid[it];
    let scenario = ScenarioConfig::new(cfg.family, r, cfg.coupling, cfg.noise)?;
    let t_abs = gamma_t / cfg.noise.gamma;
    let discord_here = cfg.wants(Measure::Discord)
        && ir.is_multiple_of(cfg.discord_stride)
        && it.is_multiple_of(cfg.discord_stride);
    let witness_kind = cfg
        .wants(Measure::Witness)
        .then(|| WitnessKind::for_family(cfg.family));

    let analytic = cfg
        .engine
        .includes_analytic()
        .then(|| evolve_analytic(&scenario, t_abs))
        .transpose()?;
    let monte_carlo = cfg
        .engine
        .includes_monte_carlo()
        .then(|| evolve_monte_carlo(&scenario, t_abs, &cfg.ensemble))
        .transpose()?;

    let disagreement = match (&analytic, &monte_carlo) {
        (Some(a), Some(m)) => {
            a.matrix().max_abs_diff(m.matrix())
                > disagreement_threshold(cfg.ensemble.n_trajectories)
        }
        _ => false,
    };

    let mut records = Vec::new();
    for (engine, state) in [
        (EngineKind::Analytic, &analytic),
        (EngineKind::MonteCarlo, &monte_carlo),
    ] {
        let Some(state) = state else { continue };
        let (report, optimizers_converged) =
            measure_state(cfg, state, gamma_t, r, discord_here)?;
        let mut warnings = Vec::new();
        if engine == EngineKind::MonteCarlo && disagreement {
            warnings.push(Warning::EngineDisagreement);
        }
        if !optimizers_converged {
            warnings.push(Warning::OptimizerMaxIterations);
        }
        records.push(SweepRecord {
            engine,
            witness_kind,
            report,
            warnings,
        });
    }
    Ok(records)
}

fn measure_state(
    cfg: &SweepConfig,
    state: &DensityMatrix,
    gamma_t: f64,
    r: f64,
    discord_here: bool,
) -> Result<(CorrelationReport, bool)> {
    let mut report = CorrelationReport {
        t: gamma_t,
        r,
        negativity3: None,
        witness_value: None,
        total3: None,
        classical3: None,
        discord3: None,
        optimizer_frame: None,
    };
    let mut converged = true;
    if cfg.wants(Measure::Negativity) {
        report.negativity3 = Some(tripartite_negativity(state)?);
    }
    if cfg.wants(Measure::Witness) {
        report.witness_value = Some(witness_expectation(
            state,
            WitnessKind::for_family(cfg.family),
        )?);
    }
    if cfg.wants(Measure::Totals) {
        report.total3 = Some(genuine_total_t3(state)?);
    }
    if discord_here {
        let d = genuine_discord_d3(state, &cfg.optimizer)?;
        report.total3 = Some(d.total3);
        report.classical3 = Some(d.classical3);
        report.discord3 = Some(d.discord3);
        report.optimizer_frame = Some(d.frame);
        converged &= d.converged;
    }
    Ok((report, converged))
}

/// CSV column order; floats are rendered with 12 significant digits and
/// unrequested measures as empty fields.
pub const CSV_HEADER: &str = "gamma_t,r,engine,negativity3,witness_kind,witness_value,total3,\
classical3,discord3,theta_a,theta_b,phi_a,phi_b,warnings";

fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

/// Render records in their given order. An empty record list produces a
/// header-only file.
pub fn write_csv<W: Write>(records: &[SweepRecord], out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for rec in records {
        let frame = rec.report.optimizer_frame;
        let warnings = rec
            .warnings
            .iter()
            .map(|w| w.token())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(rec.report.t),
            fmt(rec.report.r),
            rec.engine.label(),
            fmt_opt(rec.report.negativity3),
            rec.witness_kind.map(|k| k.label()).unwrap_or(""),
            fmt_opt(rec.report.witness_value),
            fmt_opt(rec.report.total3),
            fmt_opt(rec.report.classical3),
            fmt_opt(rec.report.discord3),
            fmt_opt(frame.map(|f| f.theta_a)),
            fmt_opt(frame.map(|f| f.theta_b)),
            fmt_opt(frame.map(|f| f.phi_a)),
            fmt_opt(frame.map(|f| f.phi_b)),
            warnings,
        )?;
    }
    Ok(())
}

/// Inclusive linear grid; a single point collapses to the lower endpoint.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

// ---------------------------------------------------------------------------
// Configuration resolution: a flat key = value model shared by the config
// file and the command line (command-line entries are appended after file
// entries, so flags override the file).
// ---------------------------------------------------------------------------

/// Parse a line-oriented `key = value` configuration file (`#` starts a
/// comment). Returns entries in file order.
pub fn parse_config_file(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidArgument(format!(
                "config line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        entries.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("{key}: malformed number `{value}`")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::InvalidArgument(format!("{key}: malformed integer `{value}`")))
}

fn parse_u64(key: &str, value: &str) -> Result<u64> {
    value
        .parse::<u64>()
        .map_err(|_| Error::InvalidArgument(format!("{key}: malformed integer `{value}`")))
}

/// Resolve a sequence of `(key, value)` assignments (later entries override
/// earlier ones) into a validated [`SweepConfig`], applying defaults for
/// everything except the mandatory `family` and `coupling`.
pub fn resolve_config(entries: &[(String, String)]) -> Result<SweepConfig> {
    let mut family = None;
    let mut coupling = None;
    let mut gamma_ratio = 1.0;
    let mut r_single: Option<f64> = None;
    let mut r_min: Option<f64> = None;
    let mut r_max: Option<f64> = None;
    let mut r_steps: Option<usize> = None;
    let mut tmax = 20.0;
    let mut steps = 200usize;
    let mut measures = vec![Measure::Negativity, Measure::Witness];
    let mut engine = EngineChoice::Analytic;
    let mut trajectories = 100_000usize;
    let mut seed = 0u64;
    let mut grid_per_angle = 8usize;
    let mut discord_stride = 1usize;
    let mut output = None;

    for (key, value) in entries {
        match key.as_str() {
            "family" => {
                family = Some(match value.as_str() {
                    "ghz" => Family::Ghz,
                    "w" => Family::W,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "family: expected `ghz` or `w`, got `{other}`"
                        )))
                    }
                });
            }
            "coupling" => {
                coupling = Some(match value.as_str() {
                    "local" => Coupling::Local,
                    "common" => Coupling::Common,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "coupling: expected `local` or `common`, got `{other}`"
                        )))
                    }
                });
            }
            "gamma-ratio" => gamma_ratio = parse_f64(key, value)?,
            "r" => r_single = Some(parse_f64(key, value)?),
            "r-min" => r_min = Some(parse_f64(key, value)?),
            "r-max" => r_max = Some(parse_f64(key, value)?),
            "r-steps" => r_steps = Some(parse_usize(key, value)?),
            "tmax" => tmax = parse_f64(key, value)?,
            "steps" => steps = parse_usize(key, value)?,
            "measures" => {
                measures = value
                    .split(',')
                    .map(|m| Measure::parse(m.trim()))
                    .collect::<Result<Vec<_>>>()?;
                measures.dedup();
            }
            "engine" => {
                engine = match value.as_str() {
                    "analytic" => EngineChoice::Analytic,
                    "mc" => EngineChoice::MonteCarlo,
                    "both" => EngineChoice::Both,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "engine: expected `analytic`, `mc` or `both`, got `{other}`"
                        )))
                    }
                };
            }
            "trajectories" => trajectories = parse_usize(key, value)?,
            "seed" => seed = parse_u64(key, value)?,
            "grid-per-angle" => grid_per_angle = parse_usize(key, value)?,
            "discord-grid-stride" => discord_stride = parse_usize(key, value)?,
            "output" => output = Some(PathBuf::from(value)),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown configuration key `{other}`"
                )))
            }
        }
    }

    let family = family
        .ok_or_else(|| Error::InvalidArgument("family: missing (specify `ghz` or `w`)".into()))?;
    let coupling = coupling.ok_or_else(|| {
        Error::InvalidArgument("coupling: missing (specify `local` or `common`)".into())
    })?;

    let noise = NoiseParams::new(gamma_ratio, 1.0)
        .map_err(|e| Error::InvalidArgument(format!("gamma-ratio: {e}")))?;

    let r_range = (r_min, r_max, r_steps);
    let r_grid = match (r_single, r_range) {
        (Some(_), (Some(_), _, _) | (_, Some(_), _) | (_, _, Some(_))) => {
            return Err(Error::InvalidArgument(
                "r: conflicts with r-min/r-max/r-steps (give one form or the other)".into(),
            ))
        }
        (Some(r), _) => vec![r],
        (None, (None, None, None)) => vec![1.0],
        (None, (Some(lo), Some(hi), Some(n))) => {
            if n == 0 {
                return Err(Error::InvalidArgument("r-steps: must be positive".into()));
            }
            if lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "r-min: {lo} exceeds r-max {hi}"
                )));
            }
            linspace(lo, hi, n)
        }
        _ => {
            return Err(Error::InvalidArgument(
                "r-min/r-max/r-steps: all three are required for a purity range".into(),
            ))
        }
    };
    for r in &r_grid {
        if !(0.0..=1.0).contains(r) {
            return Err(Error::InvalidArgument(format!(
                "r: purity {r} outside [0, 1]"
            )));
        }
    }

    if tmax < 0.0 || !tmax.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tmax: must be a nonnegative finite γt, got {tmax}"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps: must be positive".into()));
    }
    let t_grid = linspace(0.0, tmax, steps);

    let optimizer = OptimizerSettings::new(grid_per_angle, 5, 1e-6, 400)
        .map_err(|e| Error::InvalidArgument(format!("grid-per-angle: {e}")))?;
    if discord_stride == 0 {
        return Err(Error::InvalidArgument(
            "discord-grid-stride: must be positive".into(),
        ));
    }
    if engine.includes_monte_carlo() && trajectories == 0 {
        return Err(Error::InvalidArgument(
            "trajectories: must be positive for the Monte Carlo engine".into(),
        ));
    }

    Ok(SweepConfig {
        family,
        coupling,
        noise,
        t_grid,
        r_grid,
        measures,
        engine,
        ensemble: EnsembleSpec {
            n_trajectories: trajectories,
            seed,
        },
        optimizer,
        discord_stride,
        output,
    })
}
