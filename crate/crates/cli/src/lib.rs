//! The `biloc` command line: argument schema, dispatch and output rendering.

mod commands;
mod export;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub use export::{detection_rows, export_slice, parse_grid, DetectionRow, SliceRow};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser, Serialize)]
#[command(name = "biloc", version, about = "Bilocality analysis of tripartite correlations")]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with code 3 when the verdict is inconclusive.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Numerical tolerance override (search: squared distance; certify: constraint check).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a correlation from a named setup or a setup file.
    Gen {
        /// pq14, pq22, pq13, p0_14, p0_22, p0_13, detection, tradeoff or nonmaxent.
        #[arg(long, required_unless_present = "setup_file")]
        setup: Option<String>,
        /// Quantum setup JSON (states, visibilities, Bob's measurement, settings).
        #[arg(long, conflicts_with = "setup")]
        setup_file: Option<PathBuf>,
        /// Visibility, as a decimal or an exact fraction like 1/2.
        #[arg(long, default_value = "1")]
        v: String,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        theta1: Option<f64>,
        #[arg(long)]
        theta2: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate I, J and the inequalities on a correlation file.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Search for a bilocal model, falling back to a non-bilocality proof.
    Search {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        rounds: usize,
        #[arg(long, default_value_t = 2)]
        relax_depth: usize,
        #[arg(long, default_value_t = 65536)]
        max_nodes: usize,
    },
    /// Build and check one of the explicit decomposition tables.
    Certify {
        /// I, II, III, IV or V.
        #[arg(long)]
        table: String,
        #[arg(long)]
        i: Option<f64>,
        #[arg(long)]
        j: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        /// Table V model: local or bilocal.
        #[arg(long, default_value = "bilocal")]
        model: String,
    },
    /// Bisect the bilocal threshold of a one-parameter family.
    Threshold {
        /// pq14, pq22, pq13, detection (V at fixed --eta), detection-eta (η at fixed --v) or tradeoff.
        #[arg(long)]
        family: String,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        width: f64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
        /// Defaults to 24 for detection-eta and 2 otherwise.
        #[arg(long)]
        relax_depth: Option<usize>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
    },
    /// Trade-off front between local and bilocal visibility thresholds (CSV).
    Tradeoff {
        /// Number of ξ values in [0, 1].
        #[arg(long, default_value_t = 5)]
        grid: usize,
        /// Also measure both thresholds numerically.
        #[arg(long)]
        measure: bool,
    },
    /// Bilocal visibility against detection efficiency (CSV).
    Detection {
        /// lo:hi:step
        #[arg(long, default_value = "0.5:1.0:0.01")]
        eta_grid: String,
    },
    /// Monte Carlo estimate of a hidden-variable protocol.
    Simulate {
        /// werner or comm2.
        #[arg(long)]
        protocol: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Alice's measurement direction x,y,z.
        #[arg(long, default_value = "0,0,1")]
        a: String,
        /// Charlie's measurement direction x,y,z.
        #[arg(long, default_value = "0,0,1")]
        c: String,
    },
    /// Four-partite trilocality demo.
    Triloc {
        #[arg(long)]
        demo: bool,
        /// closed (tabulated tensor) or born (qubit Born rule).
        #[arg(long, default_value = "closed")]
        construction: String,
    },
    /// (I, J) slice boundaries as plot data (CSV).
    ExportSlice {
        /// 22, 14 or 13.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 201)]
        grid: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gen { .. } => "gen",
            Self::Eval { .. } => "eval",
            Self::Search { .. } => "search",
            Self::Certify { .. } => "certify",
            Self::Threshold { .. } => "threshold",
            Self::Tradeoff { .. } => "tradeoff",
            Self::Detection { .. } => "detection",
            Self::Simulate { .. } => "simulate",
            Self::Triloc { .. } => "triloc",
            Self::ExportSlice { .. } => "export-slice",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(
    biloc_scenario::ScenarioError,
    biloc_quantum::QuantumError,
    biloc_inequalities::InequalityError,
    biloc_correlators::CorrelatorError,
    biloc_feasibility::FeasibilityError,
    biloc_simulators::SimError,
    biloc_trilocality::TrilocError,
    serde_json::Error
);

/// A rendered command result.
#[derive(Debug)]
pub enum Output {
    Json(Value),
    Csv { header: Vec<String>, rows: Vec<Vec<String>> },
}

#[derive(Debug)]
pub struct Report {
    pub output: Output,
    pub inconclusive: bool,
}

impl Report {
    fn json(v: Value) -> Self {
        Self { output: Output::Json(v), inconclusive: false }
    }
}

pub fn metadata(cli: &Cli, argv: &[String]) -> Value {
    json!({
        "version": VERSION,
        "command": cli.command.name(),
        "seed": cli.seed,
        "argv": argv,
        "flags": serde_json::to_value(cli).unwrap_or(Value::Null),
    })
}

/// Text written to standard output or `--out`.
pub fn render(report: &Report, meta: &Value) -> String {
    match &report.output {
        Output::Json(v) => {
            let mut v = v.clone();
            if let Value::Object(m) = &mut v {
                m.insert("metadata".into(), meta.clone());
            }
            let mut s = serde_json::to_string_pretty(&v).expect("JSON value serializes");
            s.push('\n');
            s
        }
        Output::Csv { header, rows } => {
            let mut s = String::new();
            for (k, v) in meta.as_object().into_iter().flatten() {
                s.push_str(&format!("# {k}: {v}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory CSV");
            for r in rows {
                w.write_record(r).expect("in-memory CSV");
            }
            s.push_str(&String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8 CSV"));
            s
        }
    }
}

/// Size the global worker pool from `BILOC_THREADS`.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BILOC_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Domain(format!("BILOC_THREADS must be a positive integer, got {raw:?}")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    commands::dispatch(cli)
}

/// Full run as the binary does it; returns the exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = init_threads().and_then(|()| execute(&cli));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = render(&report, &metadata(&cli, &argv));
    let written = match &cli.out {
        Some(p) => std::fs::write(p, text)
            .map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if report.inconclusive {
        eprintln!("verdict inconclusive");
        if cli.strict {
            return 3;
        }
    }
    0
}

/// 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
