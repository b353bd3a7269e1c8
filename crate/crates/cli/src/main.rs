//! `genosc` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genosc::model::{Branch, SystemParams};
use genosc::oracles::ToleranceProfile;
use genosc::spheroidal::SpheroidalKind;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "genosc", version, about = "Generalized oscillator: bases, interbasis coefficients, spheroidal systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Energies and separation constants.
    Spectrum,
    /// Interbasis coefficient matrix W.
    Interbasis,
    /// Spheroidal separation constants and expansion coefficients.
    Spheroidal,
    /// Perturbation series against the exact eigensolve.
    Perturb,
    /// Morse levels, normalization and wavefunction grid.
    Morse,
    /// Run the fixed verification suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    #[arg(long, global = true, default_value_t = 1.0)]
    omega: f64,
    #[arg(long = "P", global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    p_strength: f64,
    #[arg(long = "Q", global = true, default_value_t = 0.0)]
    q_strength: f64,
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    m: i32,
    /// plus or minus.
    #[arg(long, global = true, default_value = "plus", value_parser = parse_branch)]
    branch: Branch,
    /// Level n (upper bound for `spectrum`).
    #[arg(long, global = true, default_value_t = 3)]
    n: u32,
    /// Restrict to one index k.
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Interfocus distance.
    #[arg(long = "R", global = true, default_value_t = 1.0)]
    r: f64,
    /// start:stop:count, inclusive and evenly spaced.
    #[arg(long = "R-grid", global = true, value_parser = parse_grid)]
    r_grid: Option<Grid>,
    /// prolate or oblate.
    #[arg(long, global = true, default_value = "prolate", value_parser = parse_kind)]
    kind: SpheroidalKind,
    /// Perturbation order J.
    #[arg(long, global = true, default_value_t = genosc::perturbation::DEFAULT_ORDER)]
    order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// default or strict.
    #[arg(long = "tolerance-profile", global = true, default_value = "default", value_parser = parse_profile)]
    tolerance_profile: ToleranceProfile,
    /// Multiplies every verification tolerance.
    #[arg(long = "tolerance-scale", global = true, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Morse well depth V0.
    #[arg(long, global = true, default_value_t = 2.0)]
    v0: f64,
    /// Morse range parameter a.
    #[arg(long, global = true, default_value_t = 1.0)]
    a: f64,
    /// x grid for Morse wavefunctions, start:stop:count.
    #[arg(long = "x-grid", global = true, value_parser = parse_grid)]
    x_grid: Option<Grid>,
    /// Ring-shape (P = 0) relabeled output for `interbasis`.
    #[arg(long, global = true)]
    ring: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("expected start:stop:count, got '{s}'"));
    };
    let start: f64 = start.parse().map_err(|e| format!("bad start '{start}': {e}"))?;
    let stop: f64 = stop.parse().map_err(|e| format!("bad stop '{stop}': {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("bad count '{count}': {e}"))?;
    if count == 0 || !start.is_finite() || !stop.is_finite() || (count > 1 && !(stop > start)) {
        return Err(format!("grid '{s}' must have count >= 1 and stop > start"));
    }
    Ok(Grid { start, stop, count })
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse().map_err(|e: genosc::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<SpheroidalKind, String> {
    s.parse().map_err(|e: genosc::Error| e.to_string())
}

fn parse_profile(s: &str) -> Result<ToleranceProfile, String> {
    s.parse().map_err(|e: genosc::Error| e.to_string())
}

/// Fully resolved configuration, echoed into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct JobConfig {
    pub command: Command,
    pub omega: f64,
    #[serde(rename = "P")]
    pub p_strength: f64,
    #[serde(rename = "Q")]
    pub q_strength: f64,
    pub m: i32,
    pub branch: Branch,
    pub n: u32,
    pub k: Option<u32>,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R_grid")]
    pub r_grid: Option<Grid>,
    pub kind: SpheroidalKind,
    pub order: usize,
    pub format: Format,
    pub tolerance_profile: ToleranceProfile,
    pub tolerance_scale: f64,
    pub v0: f64,
    pub a: f64,
    pub x_grid: Option<Grid>,
    pub ring: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl JobConfig {
    fn from_cli(cli: Cli) -> Self {
        let c = cli.common;
        JobConfig {
            command: cli.command,
            omega: c.omega,
            p_strength: c.p_strength,
            q_strength: c.q_strength,
            m: c.m,
            branch: c.branch,
            n: c.n,
            k: c.k,
            r: c.r,
            r_grid: c.r_grid,
            kind: c.kind,
            order: c.order,
            format: c.format,
            tolerance_profile: c.tolerance_profile,
            tolerance_scale: c.tolerance_scale,
            v0: c.v0,
            a: c.a,
            x_grid: c.x_grid,
            ring: c.ring,
            out: c.out,
        }
    }

    /// System parameters with the branch checked for admissibility.
    pub fn params(&self) -> genosc::Result<SystemParams> {
        let params = SystemParams::new(self.omega, self.p_strength, self.q_strength, self.m)?;
        params.signed_b(self.branch)?;
        Ok(params)
    }

    pub fn k_range(&self) -> genosc::Result<Vec<u32>> {
        match self.k {
            Some(k) if k > self.n => Err(genosc::Error::Index(format!("k = {k} exceeds n = {}", self.n))),
            Some(k) => Ok(vec![k]),
            None => Ok((0..=self.n).collect()),
        }
    }
}

/// Exit status classes.
pub enum Failure {
    /// Invalid configuration: exit 2.
    Config(String),
    /// A verification check failed: exit 3.
    Verification(String),
    /// Numeric breakdown: exit 4.
    Numeric(String),
}

impl From<genosc::Error> for Failure {
    fn from(e: genosc::Error) -> Self {
        use genosc::Error::*;
        match e {
            Domain(_) | Branch { .. } | Index(_) | NoBoundState(_) => Failure::Config(e.to_string()),
            Degenerate(_) | Numeric(_) => Failure::Numeric(e.to_string()),
        }
    }
}

fn emit(config: &JobConfig, doc: &output::Document) -> Result<(), Failure> {
    let text = match config.format {
        Format::Csv => doc.to_csv(),
        Format::Json => doc.to_json(),
    };
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(config: &JobConfig) -> Result<(), Failure> {
    if !(config.tolerance_scale > 0.0 && config.tolerance_scale.is_finite()) {
        return Err(Failure::Config(format!("tolerance scale must be positive, got {}", config.tolerance_scale)));
    }
    let (doc, verdict) = commands::dispatch(config)?;
    emit(config, &doc)?;
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = JobConfig::from_cli(cli);
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("genosc: invalid configuration: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("genosc: verification failed: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("genosc: numeric failure: {msg}");
            ExitCode::from(4)
        }
    }
}
