//! `szl`: group data, Selberg zeta evaluations, zero counts and asymptotic
//! predictors from the command line.

mod cache;
mod commands;
mod config;
mod plot;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use config::{Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "szl", version, about = "Selberg zeta, scattering determinants and zero-count predictors")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Group id: psl2z, gamma0:N, gamma0plus:f, compact:g[:m1,m2,...]
    #[arg(long, global = true)]
    group: Option<String>,
    /// Height T
    #[arg(long = "T", global = true)]
    t: Option<f64>,
    /// Derivative order
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Complex point as re,im
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Option<Complex64>,
    #[arg(long, global = true)]
    x: Option<f64>,
    /// Window length U for short sums
    #[arg(long = "U", global = true)]
    u: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Also write an SVG chart
    #[arg(long, global = true)]
    plot: bool,
    #[arg(long, global = true)]
    plot_file: Option<PathBuf>,
    #[arg(long, global = true)]
    census_cutoff: Option<f64>,
    #[arg(long, global = true)]
    series_cutoff: Option<f64>,
    #[arg(long, global = true)]
    c_max: Option<f64>,
    #[arg(long, global = true)]
    m0_override: Option<u32>,
    /// Systole length for compact groups
    #[arg(long, global = true)]
    systole: Option<f64>,
    /// TOML file with defaults; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Signature, systole, scattering constants and invariants
    GroupInfo,
    /// Evaluate one function at --s
    Eval {
        #[arg(long, value_enum)]
        target: EvalTarget,
    },
    /// Count zeros on a rectangle
    Count {
        #[arg(long, value_enum, default_value = "h")]
        target: CountTarget,
    },
    /// Asymptotic predictors
    Predict {
        #[arg(long, value_enum)]
        law: Law,
    },
    /// Prime geodesic function ψ(x) (modular group)
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalTarget {
    Phi,
    K,
    H,
    Z,
    D,
    ZhDeriv,
    XMk,
    EtaLogderiv,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountTarget {
    H,
    RiemannZeta,
    Test,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Nver,
    Nhor,
    Weyl,
    WeylNew,
    HejhalH,
    Comparison,
    ShortSum,
    Ratio,
}

fn parse_complex(t: &str) -> Result<Complex64, String> {
    let (re, im) = t.split_once(',').unwrap_or((t, "0"));
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad number {v:?}: {e}"));
    Ok(Complex64::new(p(re)?, p(im)?))
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let cfg = RunConfig::resolve(cli)?;
    let rep = commands::dispatch(cli, &cfg)?;
    Ok(match cfg.format {
        Format::Json => rep.to_json() + "\n",
        Format::Csv => rep.to_csv(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
