//! Command-line front end: scans, tables, and worked examples as CSV/JSON
//! artifacts.
//!
//! Output is deterministic: stable field order, 17-significant-digit floats,
//! LF line endings, and a byte-identical result regardless of the worker
//! thread count.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

use crate::closedform::{self, Scenario, ScenarioError};
use crate::metrics::{self, MetricsError, ProductState, TwoPhotonAmplitude};
use crate::modes::{ModeError, ModeListSpec, TemporalMode};
use crate::noon::{self, NoonError, PhotonConfig, ScanTarget};

/// Environment variable capping the worker count (overridden by `--threads`).
pub const THREADS_ENV: &str = "NPHOTON_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("golden table mismatch: {0}")]
    Golden(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Golden(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

macro_rules! from_validation {
    ($($ty:ty),*) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Validation(e.to_string())
            }
        }
    )*};
}
from_validation!(ModeError, MetricsError, NoonError, ScenarioError);

/// Parses the compact scenario notation, e.g. `2H1V+1V` or `HV+V+H+V`.
pub fn parse_scenario_string(s: &str) -> Result<Scenario, ScenarioError> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(name = "nphoton", version, about = "Multi-photon temporal distinguishability simulator")]
pub struct Cli {
    /// Worker threads (0 = automatic; NPHOTON_THREADS also honored)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-photon HOM dip visibility vs relative delay
    HomScan {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Packet bandwidth
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
    },
    /// Multi-photon coincidence of the projection measurement vs H-photon delay
    NoonScan {
        /// JSON photon-configuration file (fields: sigma, photons[])
        #[arg(long, conflicts_with = "scenario")]
        input: Option<PathBuf>,
        /// Inline scenario string such as "2H1V+1V"
        #[arg(long)]
        scenario: Option<String>,
        /// H photons to scan: "all" or a group index
        #[arg(long, default_value = "all")]
        target: String,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// N-photon bunching ratio between coincident and separated packets
    Bunching {
        #[arg(long)]
        n: usize,
        /// Group separation in units of 1/sigma
        #[arg(long, default_value_t = 15.0)]
        separation: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Two- and four-photon down-conversion rates vs pair separation
    Pdc {
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form vs brute-force visibility table for |kH, nV>
    Tables {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Canonical temporal-distribution scenarios of |kH, nV>
    Scenarios {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Grid start, in units of 1/sigma
    #[arg(long, default_value_t = -6.0)]
    min: f64,
    /// Grid end, in units of 1/sigma
    #[arg(long, default_value_t = 6.0)]
    max: f64,
    /// Grid step, in units of 1/sigma
    #[arg(long, default_value_t = 0.05)]
    step: f64,
}

impl GridArgs {
    fn build(&self, sigma: f64) -> Result<Vec<f64>, CliError> {
        if !(self.step > 0.0) {
            return Err(CliError::Validation(format!("grid step must be positive, got {}", self.step)));
        }
        if !(self.max >= self.min) {
            return Err(CliError::Validation(format!(
                "grid max {} below min {}",
                self.max, self.min
            )));
        }
        if !(sigma > 0.0) {
            return Err(CliError::Validation(format!("sigma must be positive, got {sigma}")));
        }
        let steps = ((self.max - self.min) / self.step).floor() as usize;
        Ok((0..=steps)
            .map(|i| (self.min + i as f64 * self.step) / sigma)
            .collect())
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// 17 significant digits: lossless f64 round-trip for regression diffs.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn csv<R: IntoIterator<Item = Vec<String>>>(header: &str, rows: R) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Runs a parsed command line to completion. Exit code on error via
/// [`CliError::exit_code`].
pub fn run(cli: Cli) -> Result<(), CliError> {
    let threads = if cli.threads > 0 {
        cli.threads
    } else {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::HomScan { grid, out, sigma } => hom_scan(&grid, &out, sigma),
        Command::NoonScan { input, scenario, target, sigma, grid, out } => {
            noon_scan(input, scenario, &target, sigma, &grid, &out)
        }
        Command::Bunching { n, separation, sigma, out } => bunching(n, separation, sigma, &out),
        Command::Pdc { eta, sigma, grid, out } => pdc(eta, sigma, &grid, &out),
        Command::Tables { k, n, out } => tables(k, n, &out),
        Command::Scenarios { k, n, out } => scenarios(k, n, &out),
    }
}

fn hom_scan(grid: &GridArgs, out: &OutputArgs, sigma: f64) -> Result<(), CliError> {
    use rayon::prelude::*;
    let delays = grid.build(sigma)?;
    let mode = TemporalMode::new(0.0, sigma)?;
    let visibility: Vec<f64> = delays
        .par_iter()
        .map(|&t| metrics::hom_visibility(&TwoPhotonAmplitude::symmetric(mode, t)))
        .collect();

    #[derive(Serialize)]
    struct HomScanOut {
        sigma: f64,
        delays: Vec<f64>,
        visibility: Vec<f64>,
    }
    let content = match out.format {
        Format::Csv => csv(
            "delay,visibility",
            delays
                .iter()
                .zip(&visibility)
                .map(|(&d, &v)| vec![fmt_float(d), fmt_float(v)]),
        ),
        Format::Json => json(&HomScanOut { sigma, delays, visibility }),
    };
    emit(out, &content)
}

fn noon_scan(
    input: Option<PathBuf>,
    scenario: Option<String>,
    target: &str,
    sigma: f64,
    grid: &GridArgs,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let config: PhotonConfig = match (input, scenario) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            let spec: ModeListSpec = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("bad photon config: {e}")))?;
            PhotonConfig::from_spec(&spec)?
        }
        (None, Some(s)) => parse_scenario_string(&s)?.to_config(sigma)?,
        (None, None) => {
            return Err(CliError::Validation(
                "provide --input or --scenario".to_string(),
            ))
        }
    };
    let scan_target = match target {
        "all" => ScanTarget::AllH,
        idx => ScanTarget::HGroup(idx.parse().map_err(|_| {
            CliError::Validation(format!("bad --target {idx:?}: expected \"all\" or a group index"))
        })?),
    };
    let delays = grid.build(config.min_sigma())?;
    let result = noon::scan(&config, scan_target, &delays)?;

    let content = match out.format {
        Format::Csv => csv(
            "delay,raw,normalized",
            result.delays.iter().zip(&result.raw).map(|(&d, &p)| {
                vec![fmt_float(d), fmt_float(p), fmt_float(p / result.baseline)]
            }),
        ),
        Format::Json => json(&result),
    };
    emit(out, &content)
}

fn bunching(n: usize, separation: f64, sigma: f64, out: &OutputArgs) -> Result<(), CliError> {
    let coincident_mode = TemporalMode::new(0.0, sigma)?;
    let coincident = metrics::coincidence_total(&ProductState::single_polarization(
        vec![coincident_mode; n],
    )?)?;
    let separated_modes: Vec<TemporalMode> = (0..n)
        .map(|i| TemporalMode::new(i as f64 * separation / sigma, sigma))
        .collect::<Result<_, _>>()?;
    let separated =
        metrics::coincidence_total(&ProductState::single_polarization(separated_modes)?)?;
    let ratio = coincident / separated;

    #[derive(Serialize)]
    struct BunchingOut {
        n: usize,
        coincident: f64,
        separated: f64,
        ratio: f64,
    }
    let content = match out.format {
        Format::Csv => csv(
            "n,coincident,separated,ratio",
            [vec![
                n.to_string(),
                fmt_float(coincident),
                fmt_float(separated),
                fmt_float(ratio),
            ]],
        ),
        Format::Json => json(&BunchingOut { n, coincident, separated, ratio }),
    };
    emit(out, &content)
}

fn pdc(eta: f64, sigma: f64, grid: &GridArgs, out: &OutputArgs) -> Result<(), CliError> {
    use rayon::prelude::*;
    let separations = grid.build(sigma)?;
    let amp = TwoPhotonAmplitude::symmetric(TemporalMode::new(0.0, sigma)?, 0.0);
    #[derive(Serialize)]
    struct PdcRow {
        separation: f64,
        ea: f64,
        p2_degenerate: f64,
        p4_degenerate: f64,
        p2_nondegenerate: f64,
        p4_nondegenerate: f64,
    }
    let rows: Vec<PdcRow> = separations
        .par_iter()
        .map(|&d| -> Result<PdcRow, CliError> {
            let ea = metrics::pair_ratio_ea(&amp, d)?;
            let deg = metrics::pdc_rates(&amp, eta, true, d)?;
            let non = metrics::pdc_rates(&amp, eta, false, d)?;
            Ok(PdcRow {
                separation: d,
                ea,
                p2_degenerate: deg.p2,
                p4_degenerate: deg.p4,
                p2_nondegenerate: non.p2,
                p4_nondegenerate: non.p4,
            })
        })
        .collect::<Result<_, _>>()?;

    let content = match out.format {
        Format::Csv => csv(
            "separation,ea,p2_degenerate,p4_degenerate,p2_nondegenerate,p4_nondegenerate",
            rows.iter().map(|r| {
                vec![
                    fmt_float(r.separation),
                    fmt_float(r.ea),
                    fmt_float(r.p2_degenerate),
                    fmt_float(r.p4_degenerate),
                    fmt_float(r.p2_nondegenerate),
                    fmt_float(r.p4_nondegenerate),
                ]
            }),
        ),
        Format::Json => json(&rows),
    };
    emit(out, &content)
}

fn tables(k: u32, n: u32, out: &OutputArgs) -> Result<(), CliError> {
    if k < 1 || n < 1 {
        return Err(CliError::Validation("need k >= 1 and n >= 1".to_string()));
    }
    let rows = closedform::make_table(k, n)?;

    #[derive(Serialize)]
    struct JsonRow {
        scenario: String,
        formula_num: String,
        formula_den: String,
        formula_value: f64,
        bruteforce_value: f64,
        abs_diff: f64,
    }
    let json_rows: Vec<JsonRow> = rows
        .iter()
        .map(|r| JsonRow {
            scenario: r.scenario.to_string(),
            formula_num: r.formula.numer().to_string(),
            formula_den: r.formula.denom().to_string(),
            formula_value: r.formula_value,
            bruteforce_value: r.bruteforce_value,
            abs_diff: r.abs_diff,
        })
        .collect();
    let content = match out.format {
        Format::Csv => csv(
            "scenario,formula_num,formula_den,formula_value,bruteforce_value,abs_diff",
            json_rows.iter().map(|r| {
                vec![
                    r.scenario.clone(),
                    r.formula_num.clone(),
                    r.formula_den.clone(),
                    fmt_float(r.formula_value),
                    fmt_float(r.bruteforce_value),
                    fmt_float(r.abs_diff),
                ]
            }),
        ),
        Format::Json => json(&json_rows),
    };
    emit(out, &content)?;

    // Published values, where available, are a hard gate.
    if let Some(golden) = closedform::golden_rows(k, n) {
        for &(name, num, den) in golden {
            let expected = closedform::Rational::new(num.into(), den.into());
            let target = parse_scenario_string(name)?;
            let row = rows
                .iter()
                .find(|r| r.scenario == target)
                .ok_or_else(|| CliError::Golden(format!("scenario {name} not enumerated")))?;
            if row.formula != expected {
                return Err(CliError::Golden(format!(
                    "{name}: formula gives {}, published value is {num}/{den}",
                    row.formula
                )));
            }
            let value = expected.to_f64().expect("small rational");
            if (row.bruteforce_value - value).abs() > 1e-9 {
                return Err(CliError::Golden(format!(
                    "{name}: brute force gives {}, published value is {num}/{den}",
                    row.bruteforce_value
                )));
            }
        }
    }
    Ok(())
}

fn scenarios(k: u32, n: u32, out: &OutputArgs) -> Result<(), CliError> {
    if k < 1 || n < 1 {
        return Err(CliError::Validation("need k >= 1 and n >= 1".to_string()));
    }
    let list = closedform::enumerate_scenarios(k, n);
    #[derive(Serialize)]
    struct ScenarioRow {
        scenario: String,
        k: u32,
        n: u32,
    }
    let rows: Vec<ScenarioRow> = list
        .iter()
        .map(|s| ScenarioRow { scenario: s.to_string(), k: s.k(), n: s.n() })
        .collect();
    let content = match out.format {
        Format::Csv => csv(
            "scenario,k,n",
            rows.iter()
                .map(|r| vec![r.scenario.clone(), r.k.to_string(), r.n.to_string()]),
        ),
        Format::Json => json(&rows),
    };
    emit(out, &content)
}
