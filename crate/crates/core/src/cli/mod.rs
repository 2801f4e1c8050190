//! The `large-sieve` command line front end.
//!
//! Every subcommand resolves an [`ExperimentConfig`] from flags, an optional
//! `key=value` file and defaults (in that priority order), runs the matching
//! library operation and writes one JSON object or one CSV table. Exit codes:
//! 0 when every check passed, 1 when an inequality was violated, 2 on usage
//! or configuration errors.

pub mod commands;
pub mod config;

pub use commands::Outcome;
pub use config::{CharacterSelector, CoefficientSelector, ExperimentConfig, FileConfig, OutputFormat};

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "large-sieve", version, about = "Numerical checks of a large sieve inequality for Euler products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dump the character value table mod d.
    Characters,
    /// Empirical sup of Re Σ χ(p) p^{-1-it} over dyadic (w, y) grids.
    LemmaScan,
    /// Check the inequality over seeded coefficient draws.
    Verify,
    /// Check the real-part variant over seeded coefficient draws.
    VariantVerify,
    /// Estimate ĉ₁ and L.
    EstimateConstants,
    /// Top Gram eigenvalue against L over a shift/cutoff grid.
    Extremal,
    /// Duality checks on the Euler δ-matrix and synthetic fixtures.
    DualitySelftest,
    /// Compare the σ = 1 maximum with the full rectangle maximum.
    AbelCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Characters => "characters",
            Self::LemmaScan => "lemma-scan",
            Self::Verify => "verify",
            Self::VariantVerify => "variant-verify",
            Self::EstimateConstants => "estimate-constants",
            Self::Extremal => "extremal",
            Self::DualitySelftest => "duality-selftest",
            Self::AbelCheck => "abel-check",
        }
    }

    pub const ALL: [Command; 8] = [
        Self::Characters,
        Self::LemmaScan,
        Self::Verify,
        Self::VariantVerify,
        Self::EstimateConstants,
        Self::Extremal,
        Self::DualitySelftest,
        Self::AbelCheck,
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::Config(format!("unknown subcommand {name:?}")))
    }
}

#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Modulus D.
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// Outer prime limit x.
    #[arg(long, global = true)]
    pub x: Option<u64>,
    /// Exponent B in |t| ≤ D^B.
    #[arg(long, global = true)]
    pub b: Option<f64>,
    /// "all", "non-principal" or a comma-separated index list.
    #[arg(long, global = true)]
    pub chars: Option<String>,
    /// "ones", "random-complex", "random-real" or a file of "p re im" lines.
    #[arg(long, global = true)]
    pub coeffs: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Constant c; defaults to the estimated one.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    #[arg(long = "sigma-max", global = true)]
    pub sigma_max: Option<f64>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// key=value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    /// Merges flags over the config file over defaults.
    pub fn resolve(&self, command: Command) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => FileConfig::read(path)?,
            None => FileConfig::default(),
        };
        self.resolve_with(command, &file)
    }

    /// Like [`Flags::resolve`] with an already parsed config file.
    pub fn resolve_with(&self, command: Command, file: &FileConfig) -> Result<ExperimentConfig> {
        let cfg = ExperimentConfig {
            command: command.name().to_string(),
            d: pick(self.d, file.get("d")?, 5),
            x: pick(self.x, file.get("x")?, 10_000),
            b_exponent: pick(self.b, file.get("b")?, 1.0),
            characters: match &self.chars {
                Some(s) => s.parse()?,
                None => file.get("chars")?.unwrap_or(CharacterSelector::NonPrincipal),
            },
            coefficients: match &self.coeffs {
                Some(s) => s.parse()?,
                None => file.get("coeffs")?.unwrap_or(CoefficientSelector::Ones),
            },
            trials: pick(self.trials, file.get("trials")?, 1),
            seed: pick(self.seed, file.get("seed")?, 0),
            c_override: self.c.or(file.get("c")?),
            sigma_max: self.sigma_max.or(file.get("sigma-max")?),
            output: self.out.clone().or(file.get("out")?),
            format: pick(self.format, file.get("format")?, OutputFormat::Json),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Runs one subcommand and returns its outcome.
pub fn execute(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    match command {
        Command::Characters => commands::characters(cfg),
        Command::LemmaScan => commands::lemma_scan(cfg),
        Command::Verify => commands::verify(cfg),
        Command::VariantVerify => commands::variant_verify(cfg),
        Command::EstimateConstants => commands::estimate_constants(cfg),
        Command::Extremal => commands::extremal(cfg),
        Command::DualitySelftest => commands::duality_selftest(cfg),
        Command::AbelCheck => commands::abel_check(cfg),
    }
}

/// Serialises an outcome in the requested format.
pub fn render(outcome: &Outcome, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&outcome.json).map_err(|e| Error::Config(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &outcome.csv {
                w.write_record(row).map_err(|e| Error::Config(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Config(e.to_string()))
        }
    }
}

/// Worker count from `LSL_THREADS`; `0` or unset means automatic.
pub fn thread_count() -> Result<usize> {
    match std::env::var("LSL_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("LSL_THREADS must be a nonnegative integer, got {v:?}"))),
    }
}

fn run_parsed(cli: &Cli) -> Result<bool> {
    let cfg = cli.flags.resolve(cli.command)?;
    let threads = thread_count()?;
    let outcome = if threads == 0 {
        execute(cli.command, &cfg)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        pool.install(|| execute(cli.command, &cfg))?
    };
    let bytes = render(&outcome, cfg.format)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&bytes)?;
            stdout.flush()?;
        }
    }
    Ok(outcome.passed)
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("large-sieve: {e}");
            EXIT_USAGE
        }
    }
}
