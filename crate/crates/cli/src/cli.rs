use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ssf_core::weyl::default_c;
use ssf_core::{FuzzSizes, FuzzThresholds, OracleGeometry, WeylMode};

use crate::commands::{self, parse_complex, parse_orders, Outcome};
use crate::config::LoadedConfig;

#[derive(Debug, Parser)]
#[command(name = "ssf", version, about = "Spectral shift functions of δ-interactions on closed curves")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep ξ over the configured λ grid; writes CSV and a JSON manifest.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides `tolerances.err_ceiling`.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Check the trace formula against a swept curve.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// A curve written by `sweep` with the same config; swept afresh if absent.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Spectral parameter such as `-1` or `2+2i`; replaces `validate.z`.
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
        /// Overrides `tolerances.validate`.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Closed-form mode-sum references.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Randomized checks of the finite-rank Krein model identities.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Replaces every residual threshold.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Write `fuzz.json` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wronskian and route-overlap identities of the Bessel functions.
    SpecfunCheck {
        /// Write `specfun.json` here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GeometryArg {
    Circle,
    Sphere,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Pair,
    AlphaNegative,
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    #[arg(long, value_enum, default_value = "circle")]
    pub geometry: GeometryArg,
    #[arg(long, visible_aliases = ["R", "a"], default_value_t = 1.0)]
    pub radius: f64,
}

impl GeometryArgs {
    fn oracle(&self) -> OracleGeometry {
        match self.geometry {
            GeometryArg::Circle => OracleGeometry::Circle { radius: self.radius },
            GeometryArg::Sphere => OracleGeometry::Sphere { radius: self.radius },
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Single-layer eigenvalues `e_m(z)`.
    Modes {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Order `k` or inclusive range `a..b`.
        #[arg(long = "m", default_value = "0..4")]
        orders: String,
    },
    /// Mode-sum ξ at the given λ.
    Xi {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "pair")]
        mode: ModeArg,
        /// Comparison strength in pair mode (default `max(α + 1, 1)`).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long = "lambda", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambdas: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 63)]
        m_max: usize,
    },
    /// Bound states of constant `α > 0`.
    BoundStates {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 63)]
        m_max: usize,
    },
}

fn to_file_or_stdout(out: Option<&Path>, name: &str, f: impl FnOnce(&mut dyn Write) -> Result<Outcome>) -> Result<Outcome> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
            let outcome = f(&mut w)?;
            w.flush()?;
            Ok(outcome)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Sweep { config, out, tolerance } => {
            let mut loaded = LoadedConfig::load(&config)?;
            if let Some(t) = tolerance {
                loaded.config.tolerances.err_ceiling = t;
                loaded.config.check()?;
            }
            commands::sweep(&loaded, &out)
        }
        Command::Validate { config, out, curve, z, tolerance } => {
            let loaded = LoadedConfig::load(&config)?;
            let z = z.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?;
            let (outcome, report) = commands::validate(&loaded, &out, curve.as_deref(), &z, tolerance)?;
            for c in &report.report.checks {
                println!("z = {}{:+}i  rel_err = {:.3e}  {}", c.z[0], c.z[1], c.rel_err, if c.passed { "ok" } else { "FAIL" });
            }
            Ok(outcome)
        }
        Command::Oracle(cmd) => to_file_or_stdout(None, "", |w| match cmd {
            OracleCommand::Modes { geometry, z, orders } => {
                commands::oracle_modes(w, geometry.oracle(), parse_complex(&z)?, parse_orders(&orders)?)
            }
            OracleCommand::Xi { geometry, alpha, mode, c, lambdas, eps, m_max } => {
                let mode = match mode {
                    ModeArg::Pair => WeylMode::PairWithC { c: c.unwrap_or_else(|| default_c(&[alpha])) },
                    ModeArg::AlphaNegative => WeylMode::AlphaNegative,
                };
                commands::oracle_xi(w, geometry.oracle(), alpha, mode, &lambdas, eps, m_max)
            }
            OracleCommand::BoundStates { geometry, alpha, m_max } => {
                commands::oracle_bound_states(w, geometry.oracle(), alpha, m_max)
            }
        }),
        Command::Fuzz { seed, trials, tolerance, n_max, m_max, out } => {
            let thresholds = tolerance.map(FuzzThresholds::uniform).unwrap_or_default();
            let sizes = FuzzSizes { n_max, m_max };
            to_file_or_stdout(out.as_deref(), "fuzz.json", |w| commands::fuzz_cmd(w, seed, trials, sizes, thresholds))
        }
        Command::SpecfunCheck { out } => to_file_or_stdout(out.as_deref(), "specfun.json", |w| commands::specfun_check(w)),
    }
}

/// Runs one command inside a pool of `--threads` workers.
pub fn run(cli: Cli) -> Result<Outcome> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = cli.threads {
        anyhow::ensure!(k > 0, "--threads must be positive");
        builder = builder.num_threads(k);
    }
    let pool = builder.build().context("building the worker pool")?;
    pool.install(|| dispatch(cli.command))
}
