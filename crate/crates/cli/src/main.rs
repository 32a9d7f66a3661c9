//! `arcsum`: evaluate, construct and verify the arc-sum bounds from the shell.
//!
//! Exit status: 0 on success, 1 on usage or I/O errors, 2 when the parameters
//! are outside the domain where the requested result applies, 3 when a
//! verification finds a negative margin.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arcsum::bounds::{self, BoundValue, CSV_HEADER};
use arcsum::extremal::ExtremalSpec;
use arcsum::geometry::{format_f64, AdmissibleParams, Configuration};
use arcsum::residue::{self, ResidueClassSet};
use arcsum::verify::{self, AdmissibilityReport, BoundCheck, ConformanceReport, LatticeOracle, StepSchedule, MARGIN_TOLERANCE};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

const EXIT_USAGE: u8 = 1;
const EXIT_INAPPLICABLE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

/// Environment variable holding the oracle's worker count.
const WORKERS_ENV: &str = "ARC_SUM_WORKERS";

/// Most points a delta sweep may produce.
const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "arcsum",
    version,
    about = "Sharp bounds for sums of unit vectors under arc-density and separation constraints",
    after_help = "Exit status: 0 success, 1 usage or I/O error, 2 inapplicable parameters, 3 negative margin.\n\
                  Angles are radians unless --degrees is given; configuration files are always radians."
)]
struct Cli {
    /// Read angle-valued flags (--delta, --phi, --sweep-delta) in degrees.
    #[arg(long, global = true)]
    degrees: bool,

    /// Output format; defaults to csv for sweeps and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized starts and samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the run manifest (subcommand, parameters, seed, format) here.
    #[arg(long, global = true, value_name = "PATH")]
    manifest_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "params", rename_all = "lowercase")]
enum Command {
    /// Evaluate every bound for one parameter set, or sweep δ.
    Bounds(BoundsArgs),
    /// Build the configuration attaining the sharp bound.
    Extremal(ExtremalArgs),
    /// Check a configuration (or random samples) against the bounds.
    Check(CheckArgs),
    /// Locally maximize |S| over admissible configurations.
    Optimize(OptimizeArgs),
    /// Exhaustively maximize |S| over N-subsets of a grid.
    Oracle(OracleArgs),
    /// Fourier bias and interval concentration of a residue set.
    Analyze(AnalyzeArgs),
    /// Re-run a saved manifest.
    #[serde(skip)]
    Replay {
        manifest: PathBuf,
    },
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct BoundsArgs {
    /// Most points allowed in any open arc of length φ.
    #[arg(long)]
    n: u64,
    /// Number of points.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    total: u64,
    /// Minimum separation.
    #[arg(long, value_parser = finite, required_unless_present = "sweep_delta")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    /// Arc length of the density condition.
    #[arg(long, value_parser = finite)]
    phi: f64,
    /// Sweep δ over `start:end:step` instead of a single --delta.
    #[arg(long, value_name = "A:B:STEP", conflicts_with = "delta")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep_delta: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ExtremalArgs {
    #[arg(long)]
    n: u64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    total: u64,
    #[arg(long, value_parser = finite)]
    delta: f64,
    #[arg(long, value_parser = finite)]
    phi: f64,
    /// Write the configuration here, and its layout to the `.spec.json` sidecar.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct CheckArgs {
    /// Configuration JSON `{"angles": [...]}`; without it, random admissible
    /// configurations are drawn.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<PathBuf>,
    #[arg(long)]
    n: u64,
    #[arg(long, value_parser = finite)]
    delta: f64,
    #[arg(long, value_parser = finite)]
    phi: f64,
    /// Points per random configuration (required without CONFIG).
    #[arg(long = "N", required_unless_present = "config")]
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    total: Option<u64>,
    /// Number of random configurations.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OptimizeArgs {
    /// Starting configuration; without it, a random admissible start.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    config: Option<PathBuf>,
    #[arg(long)]
    n: u64,
    #[arg(long, value_parser = finite)]
    delta: f64,
    #[arg(long, value_parser = finite)]
    phi: f64,
    /// Points in the random start (required without CONFIG).
    #[arg(long = "N", required_unless_present = "config")]
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    total: Option<u64>,
    /// Most accepted moves.
    #[arg(long, default_value_t = 1000)]
    iters: usize,
    /// Write the final configuration here.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OracleArgs {
    #[arg(long)]
    n: u64,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    total: usize,
    #[arg(long, value_parser = finite)]
    delta: f64,
    #[arg(long, value_parser = finite)]
    phi: f64,
    /// Grid size M: candidate angles 2πt/M.
    #[arg(long)]
    grid: usize,
    /// Most subsets C(M, N) to enumerate [default: C(24, 6)].
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct AnalyzeArgs {
    /// Modulus (with --set).
    #[arg(long, requires = "set")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    /// Comma-separated residues.
    #[arg(long, requires = "m", conflicts_with = "input", allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    set: Option<String>,
    /// JSON file `{"m": ..., "elements": [...]}`.
    #[arg(long, required_unless_present = "set")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<PathBuf>,
    /// Number of arcs the circle is split into.
    #[arg(long, default_value_t = 2)]
    k: u64,
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunManifest {
    #[serde(flatten)]
    command: Command,
    seed: u64,
    format: Format,
    degrees: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(arcsum::Error),
}

impl From<arcsum::Error> for Failure {
    fn from(err: arcsum::Error) -> Self {
        Failure::Library(err)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use arcsum::Error::*;
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Library(Inapplicable { .. } | InvalidParameter(_) | UndefinedGap | EmptyFeasible(_) | BudgetExceeded { .. }) => {
                EXIT_INAPPLICABLE
            }
            Failure::Library(_) => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Library(err) => write!(f, "{err}"),
        }
    }
}

struct Outcome {
    body: String,
    exit: u8,
}

impl RunManifest {
    fn angle(&self, x: f64) -> f64 {
        if self.degrees { x.to_radians() } else { x }
    }

    /// The report as a JSON object with the manifest attached.
    fn json<T: Serialize>(&self, report: &T) -> Result<String, Failure> {
        let mut value = serde_json::to_value(report)?;
        let Value::Object(map) = &mut value else {
            return Err(Failure::Usage("report is not a JSON object".into()));
        };
        map.insert("manifest".into(), serde_json::to_value(self)?);
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("spec.json")
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(Failure::Usage(format!("sweep `{spec}` is not start:end:step")));
    };
    let parse = |s: &str| finite(s).map_err(Failure::Usage);
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if step <= 0.0 || b < a {
        return Err(Failure::Usage(format!("sweep `{spec}` needs start ≤ end and step > 0")));
    }
    // the end point is included when it is hit up to rounding
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SWEEP_POINTS {
        return Err(Failure::Usage(format!("sweep `{spec}` has more than {MAX_SWEEP_POINTS} points")));
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

#[derive(Serialize)]
struct SweepReport {
    reports: Vec<bounds::BoundReport>,
}

fn cmd_bounds(m: &RunManifest, a: &BoundsArgs) -> Result<Outcome, Failure> {
    let phi = m.angle(a.phi);
    let deltas = match (&a.sweep_delta, a.delta) {
        (Some(spec), _) => parse_sweep(spec)?,
        (None, Some(delta)) => vec![delta],
        (None, None) => return Err(Failure::Usage("--delta or --sweep-delta is required".into())),
    };
    let reports: Vec<_> = deltas
        .into_iter()
        .map(|d| bounds::evaluate_all(a.n, a.total, m.angle(d), phi))
        .collect();
    let any_applicable = reports.iter().any(|r| !r.applicable().is_empty());
    let body = match m.format {
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for r in &reports {
                out.push_str(&r.csv_rows());
            }
            out
        }
        Format::Json if a.sweep_delta.is_some() => m.json(&SweepReport { reports })?,
        Format::Json => m.json(&reports[0])?,
    };
    Ok(Outcome {
        body,
        exit: if any_applicable { 0 } else { EXIT_INAPPLICABLE },
    })
}

fn angles_csv(header: &str, angles: &[f64]) -> String {
    let mut out = format!("{header}\n");
    for (i, a) in angles.iter().enumerate() {
        out.push_str(&format!("{i},{a}\n"));
    }
    out
}

#[derive(Serialize)]
struct ExtremalReport {
    spec: ExtremalSpec,
    angles: Vec<f64>,
    sum: [f64; 2],
    sum_magnitude: f64,
    main_bound: f64,
}

fn cmd_extremal(m: &RunManifest, a: &ExtremalArgs) -> Result<Outcome, Failure> {
    let (delta, phi) = (m.angle(a.delta), m.angle(a.phi));
    let spec = ExtremalSpec::new(a.n, a.total, delta, phi)?;
    let config = spec.build();
    if let Some(path) = &a.out {
        write(path, &config.to_json())?;
        write(&sidecar_path(path), &(serde_json::to_string_pretty(&spec)? + "\n"))?;
    }
    let sum = config.sum();
    let report = ExtremalReport {
        main_bound: bounds::main_bound(a.n, a.total, delta, phi)?,
        spec,
        angles: config.radians(),
        sum: [sum.re, sum.im],
        sum_magnitude: sum.norm(),
    };
    let body = match m.format {
        Format::Json => m.json(&report)?,
        Format::Csv => angles_csv("index,angle", &report.angles),
    };
    Ok(Outcome { body, exit: 0 })
}

/// Bounds implied by admissibility at the stated parameters.
#[derive(Serialize)]
struct StatedChecks {
    checks: Vec<BoundCheck>,
    min_margin: Option<f64>,
}

#[derive(Serialize)]
struct CheckEntry {
    angles: Vec<f64>,
    #[serde(rename = "N")]
    total: usize,
    sum_magnitude: f64,
    admissibility: AdmissibilityReport,
    stated: StatedChecks,
    derived: ConformanceReport,
}

impl CheckEntry {
    fn min_margin(&self) -> Option<f64> {
        [self.stated.min_margin, self.derived.min_margin]
            .into_iter()
            .flatten()
            .reduce(f64::min)
    }
}

#[derive(Serialize)]
struct CheckReport {
    checked: usize,
    admissible: bool,
    conformant: bool,
    min_margin: Option<f64>,
    /// Every configuration for file input; only the failing ones for samples.
    results: Vec<CheckEntry>,
}

fn check_one(config: &Configuration, params: &AdmissibleParams) -> Result<CheckEntry, Failure> {
    let admissibility = verify::check_admissible(config, params)?;
    let s = config.sum().norm();
    let mut checks = Vec::new();
    if admissibility.is_admissible() {
        let report = bounds::evaluate_all(params.n(), config.len() as u64, params.delta(), params.phi());
        // the semicircle bounds need the density condition on arcs of length π
        let semicircle = params.phi() >= std::f64::consts::PI * (1.0 - bounds::PRECONDITION_SLACK);
        for (name, value) in report.applicable() {
            if !semicircle && (name == "freiman" || name == "lev") {
                continue;
            }
            checks.push(BoundCheck {
                name,
                n: params.n(),
                delta: params.delta(),
                value,
                margin: value - s,
            });
        }
    }
    let min_margin = checks.iter().map(|c| c.margin).reduce(f64::min);
    Ok(CheckEntry {
        angles: config.radians(),
        total: config.len(),
        sum_magnitude: s,
        admissibility,
        stated: StatedChecks { checks, min_margin },
        derived: verify::check_theorems(config, params.phi())?,
    })
}

/// A negative margin outranks an inadmissible input.
fn verdict(admissible: bool, conformant: bool) -> u8 {
    if !conformant {
        EXIT_VERIFICATION
    } else if !admissible {
        EXIT_INAPPLICABLE
    } else {
        0
    }
}

fn cmd_check(m: &RunManifest, a: &CheckArgs) -> Result<Outcome, Failure> {
    let params = AdmissibleParams::new(a.n, m.angle(a.delta), m.angle(a.phi))?;
    let mut results = Vec::new();
    let (mut admissible, mut conformant, mut min_margin) = (true, true, None::<f64>);
    let mut record = |entry: CheckEntry, keep_all: bool| {
        let ok = entry.min_margin().is_none_or(|x| x >= -MARGIN_TOLERANCE);
        admissible &= entry.admissibility.is_admissible();
        conformant &= ok;
        if let Some(x) = entry.min_margin() {
            min_margin = Some(min_margin.map_or(x, |y| y.min(x)));
        }
        if keep_all || !ok {
            results.push(entry);
        }
    };
    let checked = match (&a.config, a.total) {
        (Some(path), _) => {
            let config = Configuration::from_json(&read(path)?)?;
            record(check_one(&config, &params)?, true);
            1
        }
        (None, Some(total)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(m.seed);
            for _ in 0..a.samples {
                let config = verify::random_admissible(&params, total as usize, &mut rng, verify::MAX_REJECTIONS)?;
                record(check_one(&config, &params)?, false);
            }
            a.samples
        }
        (None, None) => return Err(Failure::Usage("either CONFIG or --N is required".into())),
    };
    let report = CheckReport { checked, admissible, conformant, min_margin, results };
    let body = match m.format {
        Format::Json => m.json(&report)?,
        Format::Csv => {
            let mut out = String::from("config,source,name,n,delta,value,margin\n");
            for (i, e) in report.results.iter().enumerate() {
                let rows = e.stated.checks.iter().map(|c| ("stated", c));
                for (source, c) in rows.chain(e.derived.checks.iter().map(|c| ("derived", c))) {
                    out.push_str(&format!("{i},{source},{},{},{},{},{}\n", c.name, c.n, c.delta, c.value, c.margin));
                }
            }
            out
        }
    };
    Ok(Outcome { body, exit: verdict(admissible, conformant) })
}

#[derive(Serialize)]
struct ConfigSummary {
    angles: Vec<f64>,
    sum_magnitude: f64,
}

impl From<&Configuration> for ConfigSummary {
    fn from(c: &Configuration) -> Self {
        Self {
            angles: c.radians(),
            sum_magnitude: c.sum().norm(),
        }
    }
}

#[derive(Serialize)]
struct OptimizeReport {
    start: ConfigSummary,
    result: ConfigSummary,
    admissible: bool,
    main_bound: BoundValue,
    margin: Option<f64>,
}

fn cmd_optimize(m: &RunManifest, a: &OptimizeArgs) -> Result<Outcome, Failure> {
    let params = AdmissibleParams::new(a.n, m.angle(a.delta), m.angle(a.phi))?;
    let start = match (&a.config, a.total) {
        (Some(path), _) => Configuration::from_json(&read(path)?)?,
        (None, Some(total)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(m.seed);
            verify::random_admissible(&params, total as usize, &mut rng, verify::MAX_REJECTIONS)?
        }
        (None, None) => return Err(Failure::Usage("either CONFIG or --N is required".into())),
    };
    if !verify::check_admissible(&start, &params)?.is_admissible() {
        return Err(arcsum::Error::Inapplicable {
            bound: "optimize",
            reason: "starting configuration is not admissible".into(),
        }
        .into());
    }
    let result = verify::ascent_optimize(&start, &params, a.iters, StepSchedule::default())?;
    if let Some(path) = &a.out {
        write(path, &result.to_json())?;
    }
    let admissible = verify::check_admissible(&result, &params)?.is_admissible();
    let main_bound: BoundValue =
        bounds::main_bound(params.n(), result.len() as u64, params.delta(), params.phi()).into();
    let result = ConfigSummary::from(&result);
    let margin = main_bound.value().map(|b| b - result.sum_magnitude);
    let report = OptimizeReport {
        start: ConfigSummary::from(&start),
        result,
        admissible,
        main_bound,
        margin,
    };
    let body = match m.format {
        Format::Json => m.json(&report)?,
        Format::Csv => angles_csv("index,angle", &report.result.angles),
    };
    let failed = !admissible || margin.is_some_and(|x| x < -MARGIN_TOLERANCE);
    Ok(Outcome { body, exit: if failed { EXIT_VERIFICATION } else { 0 } })
}

#[derive(Serialize)]
struct OracleReport {
    #[serde(flatten)]
    result: verify::OracleResult,
    main_bound: BoundValue,
    margin: Option<f64>,
}

fn workers_from_env() -> Result<usize, Failure> {
    match std::env::var(WORKERS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(w) if w >= 1 => Ok(w),
            _ => Err(Failure::Usage(format!("{WORKERS_ENV}={s} is not a positive integer"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn cmd_oracle(m: &RunManifest, a: &OracleArgs) -> Result<Outcome, Failure> {
    let params = AdmissibleParams::new(a.n, m.angle(a.delta), m.angle(a.phi))?;
    let mut oracle = LatticeOracle {
        workers: workers_from_env()?,
        ..LatticeOracle::default()
    };
    if let Some(budget) = a.budget {
        oracle.budget = budget.into();
    }
    let result = oracle.run(&params, a.total, a.grid)?;
    let main_bound: BoundValue = bounds::main_bound(a.n, a.total as u64, params.delta(), params.phi()).into();
    let margin = main_bound.value().map(|b| b - result.max_abs_sum);
    let report = OracleReport { result, main_bound, margin };
    let body = match m.format {
        Format::Json => m.json(&report)?,
        Format::Csv => {
            let mut out = String::from("index,grid_index,angle\n");
            for (i, (t, a)) in report.result.argmax_indices.iter().zip(&report.result.argmax_angles).enumerate() {
                out.push_str(&format!("{i},{t},{a}\n"));
            }
            out
        }
    };
    let failed = margin.is_some_and(|x| x < -MARGIN_TOLERANCE);
    Ok(Outcome { body, exit: if failed { EXIT_VERIFICATION } else { 0 } })
}

#[derive(Deserialize)]
struct ResidueInput {
    m: u64,
    elements: Vec<i64>,
}

fn cmd_analyze(m: &RunManifest, a: &AnalyzeArgs) -> Result<Outcome, Failure> {
    let set = match (&a.input, a.m, &a.set) {
        (Some(path), _, _) => {
            let input: ResidueInput = serde_json::from_str(&read(path)?)?;
            ResidueClassSet::new(input.m, input.elements)?
        }
        (None, Some(modulus), Some(list)) => {
            let elements = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|e| Failure::Usage(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            ResidueClassSet::new(modulus, elements)?
        }
        _ => return Err(Failure::Usage("give --m with --set, or --input".into())),
    };
    let report = residue::analyze(&set, a.k)?;
    let body = match m.format {
        Format::Json => m.json(&report)?,
        Format::Csv => {
            let fields = [
                ("m", report.m.to_string()),
                ("N", report.total.to_string()),
                ("x_star", report.x_star.to_string()),
                ("max_bias", format_f64(report.max_bias)),
                ("k", report.k.to_string()),
                ("n0", report.n0.to_string()),
                ("best_u", report.best_u.to_string()),
                ("best_v", report.best_v.to_string()),
                ("best_count", report.best_count.to_string()),
            ];
            let mut out = String::from("field,value\n");
            for (k, v) in fields {
                out.push_str(&format!("{k},{v}\n"));
            }
            out
        }
    };
    let failed = report.best_count < report.n0;
    Ok(Outcome { body, exit: if failed { EXIT_VERIFICATION } else { 0 } })
}

fn execute(manifest: &RunManifest) -> Result<Outcome, Failure> {
    match &manifest.command {
        Command::Bounds(a) => cmd_bounds(manifest, a),
        Command::Extremal(a) => cmd_extremal(manifest, a),
        Command::Check(a) => cmd_check(manifest, a),
        Command::Optimize(a) => cmd_optimize(manifest, a),
        Command::Oracle(a) => cmd_oracle(manifest, a),
        Command::Analyze(a) => cmd_analyze(manifest, a),
        Command::Replay { .. } => Err(Failure::Usage("a manifest cannot replay another manifest".into())),
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let manifest = match cli.command {
        Command::Replay { manifest } => serde_json::from_str(&read(&manifest)?)?,
        command => {
            let sweep = matches!(&command, Command::Bounds(a) if a.sweep_delta.is_some());
            let default = if sweep { Format::Csv } else { Format::Json };
            RunManifest {
                command,
                seed: cli.seed,
                format: cli.format.unwrap_or(default),
                degrees: cli.degrees,
            }
        }
    };
    if let Some(path) = &cli.manifest_out {
        write(path, &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    }
    execute(&manifest)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.body);
            ExitCode::from(outcome.exit)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
