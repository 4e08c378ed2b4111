//! Configuration, command dispatch, result cache and table output for the
//! `heegner` binary.

pub mod cache;
pub mod commands;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use cache::{Cache, Lookup, CACHE_ENV, CODE_VERSION};
pub use table::{Check, OutputFormat, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Route agreement, ODE, edge asymptote and harmonicity checks for Q_{k,t}.
    SpecialSuite,
    /// Reduced forms, class group and Heegner points.
    Classgroup,
    /// Partial theta coefficients r_{A,chi}(n) per class.
    Theta,
    /// sigma_A(n) and sigma'_A(n).
    SigmaTable,
    /// a_m(A) = a_fin + a_inf over an m-range.
    FourierTable,
    /// Lattice side against the Q-series side of the archimedean height.
    GreenIdentity,
    /// Class sum of the regularised diagonal against the L'/L constant.
    Chowla,
    /// Green's-sum combination for a relation against its exact log p form.
    Algebraicity,
    /// Completed Rankin-Selberg L-function, FE residual and L'(k+t).
    Lseries,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SpecialSuite => "special-suite",
            Command::Classgroup => "classgroup",
            Command::Theta => "theta",
            Command::SigmaTable => "sigma-table",
            Command::FourierTable => "fourier-table",
            Command::GreenIdentity => "green-identity",
            Command::Chowla => "chowla",
            Command::Algebraicity => "algebraicity",
            Command::Lseries => "lseries",
        }
    }
}

/// Every value a command consumes; echoed into the output metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub prec: u32,
    pub k: u32,
    pub t: u32,
    #[serde(rename = "N")]
    pub level: i64,
    #[serde(rename = "D")]
    pub d: i64,
    /// B mod 2N of the Heegner points; the smallest admissible value if absent.
    pub beta: Option<i64>,
    pub branch: usize,
    /// Restrict to one class; all classes if absent.
    pub cls: Option<usize>,
    /// Explicit m values; takes precedence over the range.
    pub m: Vec<u64>,
    pub m_from: u64,
    pub m_to: u64,
    /// Shell cutoff for lattice sums.
    pub n_max: u64,
    /// Truncation of the Q-series in a_inf.
    pub n0: u64,
    /// Table length for theta and sigma-table.
    pub upto: u64,
    /// Overrides the command's default tolerance.
    pub tolerance: Option<f64>,
    pub eigenform: Option<PathBuf>,
    pub mesh: usize,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
    pub format: OutputFormat,
    pub strict: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec: 128,
            k: 3,
            t: 1,
            level: 3,
            d: -11,
            beta: None,
            branch: 0,
            cls: None,
            m: Vec::new(),
            m_from: 1,
            m_to: 10,
            n_max: 10_000,
            n0: 20_000,
            upto: 100,
            tolerance: None,
            eigenform: None,
            mesh: 32,
            cache_dir: None,
            no_cache: false,
            format: OutputFormat::Csv,
            strict: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prec < 53 {
            return Err(Error::Config(format!("precision {} below 53 bits", self.prec)));
        }
        if self.level < 1 {
            return Err(Error::Config(format!("level {} must be positive", self.level)));
        }
        if self.n_max < 1 || self.n0 < 1 {
            return Err(Error::Config("n_max and n0 must be at least 1".into()));
        }
        if self.t >= self.k {
            return Err(Error::Config(format!("need t < k, got k = {}, t = {}", self.k, self.t)));
        }
        Ok(())
    }

    /// The explicit list, else m_from..=m_to (empty when m_from > m_to).
    pub fn m_values(&self) -> Vec<u64> {
        if !self.m.is_empty() {
            return self.m.clone();
        }
        (self.m_from..=self.m_to).collect()
    }

    /// Smallest B in [0, 2N) with B^2 = D mod 4N unless given.
    pub fn beta(&self) -> Result<i64> {
        if let Some(b) = self.beta {
            return Ok(b);
        }
        let n4 = 4 * self.level;
        (0..2 * self.level)
            .find(|b| (b * b - self.d).rem_euclid(n4) == 0)
            .ok_or_else(|| Error::Config(format!("no B with B^2 = {} mod {n4}", self.d)))
    }
}

/// Flags mirroring [`RunConfig`]; anything given overrides the config file.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// JSON config file with the same field names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    #[arg(long, global = true)]
    pub k: Option<u32>,
    #[arg(long, global = true)]
    pub t: Option<u32>,
    #[arg(long = "N", global = true)]
    pub level: Option<i64>,
    #[arg(long = "D", global = true, allow_hyphen_values = true)]
    pub d: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<i64>,
    #[arg(long, global = true)]
    pub branch: Option<usize>,
    #[arg(long, global = true)]
    pub cls: Option<usize>,
    /// Comma-separated m values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub m: Vec<u64>,
    #[arg(long, global = true)]
    pub m_from: Option<u64>,
    #[arg(long, global = true)]
    pub m_to: Option<u64>,
    #[arg(long, global = true)]
    pub n_max: Option<u64>,
    #[arg(long, global = true)]
    pub n0: Option<u64>,
    #[arg(long, global = true)]
    pub upto: Option<u64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Eigenform coefficient file, one "n a_n" per line.
    #[arg(long, global = true)]
    pub eigenform: Option<PathBuf>,
    #[arg(long, global = true)]
    pub mesh: Option<usize>,
    /// Cache directory; defaults to $HEEGNER_CACHE_DIR, then ./.heegner-cache.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Exit with status 2 when any check fails.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "heegner", version, about = "Green's functions, theta series and L-series at Heegner points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

impl Flags {
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f.clone() { c.$f = v; })* };
        }
        set!(prec, k, t, level, d, branch, m_from, m_to, n_max, n0, upto, mesh, format);
        if self.beta.is_some() {
            c.beta = self.beta;
        }
        if self.cls.is_some() {
            c.cls = self.cls;
        }
        if self.tolerance.is_some() {
            c.tolerance = self.tolerance;
        }
        if self.eigenform.is_some() {
            c.eigenform = self.eigenform.clone();
        }
        if self.cache_dir.is_some() {
            c.cache_dir = self.cache_dir.clone();
        }
        if !self.m.is_empty() {
            c.m = self.m.clone();
        }
        c.no_cache |= self.no_cache;
        c.strict |= self.strict;
        c.validate()?;
        Ok(c)
    }
}

/// Run one command and return its table, metadata included.
pub fn run(command: Command, config: &RunConfig) -> Result<Table> {
    config.validate()?;
    let mut table = commands::dispatch(command, config)?;
    table.meta("command", command.name());
    table.meta("code_version", CODE_VERSION);
    table.meta("config", serde_json::to_string(config)?);
    table.meta("status", if table.passed() { "PASS" } else { "FAIL" });
    Ok(table)
}

/// Entry point of the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let config = cli.flags.to_config()?;
    let table = run(cli.command, &config)?;
    let text = table.render(config.format)?;
    match &cli.flags.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    for c in &table.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{}: {:e} (tolerance {:e}) {verdict}", c.name, c.value, c.tolerance);
    }
    Ok(if config.strict && !table.passed() { 2 } else { 0 })
}
