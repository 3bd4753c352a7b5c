//! File formats, experiments and the `horogeo` command-line driver built on
//! [`horogeo_core`].

pub mod check;
pub mod config;
pub mod converge;
pub mod error;
pub mod flow;
pub mod fmt;
pub mod io;
pub mod oracle;
pub mod report;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use horogeo_core::{optimal_geodesic, Origami, PerronOptions, Side};
use serde_json::json;

pub use horogeo_core;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::GeodesicReport;

#[derive(Debug, Parser)]
#[command(
    name = "horogeo",
    version,
    about = "Optimal Teichmüller geodesics on square-tiled surfaces"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Perron tolerance.
    #[arg(
        long,
        global = true,
        allow_hyphen_values = true,
        default_value_t = 1e-12
    )]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "t-min", global = true, allow_hyphen_values = true, default_value_t = -3.0)]
    pub t_min: f64,
    #[arg(
        long = "t-max",
        global = true,
        allow_hyphen_values = true,
        default_value_t = 3.0
    )]
    pub t_max: f64,
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = 0.5)]
    pub step: f64,
    /// Busemann horizon T (default: t-max + 5).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub horizon: Option<f64>,
    #[arg(long = "n-max", global = true, default_value_t = 20)]
    pub n_max: usize,
    /// Jitter amplitude for the convergence demonstration.
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = 0.1)]
    pub eps: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            tolerance: self.tol,
            seed: self.seed,
            t_min: self.t_min,
            t_max: self.t_max,
            step: self.step,
            horizon: self.horizon,
            n_max: self.n_max,
            eps: self.eps,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an origami file and print its cylinders, N, genus and cone angles.
    Validate { origami: PathBuf },
    /// Build the geodesic between two Busemann points and write its report.
    Geodesic {
        origami: PathBuf,
        xi: PathBuf,
        eta: PathBuf,
    },
    /// Sample a geodesic report along the time grid as CSV.
    Flow { report: PathBuf },
    /// Run the convergence experiment on a geodesic report.
    Converge { report: PathBuf },
    /// Run the invariant suites.
    Check {
        /// Restrict to these suites (repeatable or comma separated).
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
}

pub fn validate_summary(o: &Origami) -> serde_json::Value {
    let cyl = |side: Side| -> Vec<serde_json::Value> {
        o.cylinders(side)
            .iter()
            .map(|c| {
                json!({
                    "id": c.id.to_string(),
                    "squares": c.squares.iter().map(|s| s + 1).collect::<Vec<_>>(),
                    "length": c.combinatorial_length(),
                })
            })
            .collect()
    };
    let n = o.intersection_matrix();
    json!({
        "squares": o.squares(),
        "genus": o.genus(),
        "coneAngles": o.cone_angles(),
        "horizontal": cyl(Side::Horizontal),
        "vertical": cyl(Side::Vertical),
        "intersectionMatrix": (0..n.rows()).map(|i| (0..n.cols()).map(|j| n.get(i, j)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

pub fn geodesic_report(
    origami: &Path,
    xi: &Path,
    eta: &Path,
    cfg: &RunConfig,
) -> Result<GeodesicReport, CliError> {
    cfg.validate()?;
    let o = Arc::new(io::read_origami(origami)?);
    let xi = io::read_busemann(xi, o.clone())?;
    let eta = io::read_busemann(eta, o)?;
    let opts = PerronOptions {
        tol: cfg.tolerance,
        seed: cfg.seed,
        ..PerronOptions::default()
    };
    let line = optimal_geodesic(&xi, &eta, &opts)?;
    Ok(GeodesicReport::new(&line, &opts))
}

/// Runs one command and returns what it prints.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.opts.config();
    match &cli.command {
        Command::Validate { origami } => Ok(pretty(&validate_summary(&io::read_origami(origami)?))),
        Command::Geodesic { origami, xi, eta } => {
            Ok(geodesic_report(origami, xi, eta, &cfg)?.to_json())
        }
        Command::Flow { report } => {
            cfg.validate()?;
            let (line, _) = report::read_report(report)?.rebuild()?;
            let rows = flow::flow_rows(&line, &cfg)?;
            let mut buf = Vec::new();
            flow::write_csv(&line, &rows, &mut buf)?;
            Ok(String::from_utf8(buf).expect("csv is utf-8"))
        }
        Command::Converge { report } => {
            cfg.validate()?;
            let (line, _) = report::read_report(report)?.rebuild()?;
            Ok(converge::converge(&line, &cfg)?.to_json())
        }
        Command::Check { suite } => Ok(check::run_checks(&cfg, suite)?.to_json()),
    }
}

/// Runs `cli`, writing to `--out` or stdout, and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|text| match &cli.opts.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("horogeo: {e}");
            e.exit_code()
        }
    }
}
