//! `schatten`: run checks, estimates, samplers and sweeps, emitting
//! line-delimited records with a self-describing header.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use schatten_core::samplers::Budget;
use schatten_core::verify::Suite;
use schatten_core::{Error, Exponent, Field, Subspace};

use output::Format;

#[derive(Debug, Parser, Serialize)]
#[command(name = "schatten", version, about = "Log-gas moments and checks for Schatten-class unit balls")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// 64-bit seed; every random stream derives from it
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// write records here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// worker threads (default: all cores)
    #[arg(long, global = true, env = "SCHATTEN_WORKERS")]
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct BudgetArgs {
    /// independent chains
    #[arg(long, default_value_t = 4)]
    pub chains: usize,
    /// recorded samples per chain
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 2_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1)]
    pub thinning: usize,
}

impl BudgetArgs {
    pub fn budget(&self) -> Budget {
        Budget::new(self.chains, self.samples, self.burn_in, self.thinning)
    }
}

/// `a,b,c`
pub fn parse_triple(s: &str) -> Result<(u32, u32, u32), String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected a,b,c, got {s:?}")),
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Run a named suite of checks; exit 1 if any fails
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        /// a,b,c; omitted means every family the checks apply to
        #[arg(long, value_parser = parse_triple)]
        ensemble: Option<(u32, u32, u32)>,
        /// multiplies the default Monte Carlo sample counts
        #[arg(long, default_value_t = 1.0)]
        budget_scale: f64,
    },
    /// Estimate moments, sigma^2 or the variance decomposition
    Estimate {
        #[command(subcommand)]
        what: Estimate,
    },
    /// Stream gas points or matrix singular values
    Sample {
        #[arg(long, value_enum, default_value_t = commands::PointSampler::Mcmc)]
        sampler: commands::PointSampler,
        #[arg(long, value_parser = parse_triple, default_value = "2,1,0")]
        ensemble: (u32, u32, u32),
        /// field for hit-and-run
        #[arg(long, default_value = "R")]
        field: Field,
        /// subspace for hit-and-run
        #[arg(long, default_value = "full")]
        subspace: Subspace,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        /// push gas points forward to the unit ball
        #[arg(long)]
        ball: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Gas moments over a grid of ensembles, sizes and exponents (long format)
    Sweep {
        /// semicolon-separated a,b,c triples
        #[arg(long, value_delimiter = ';', value_parser = parse_triple, default_value = "2,1,0;2,2,1")]
        ensembles: Vec<(u32, u32, u32)>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        ns: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,inf")]
        ps: Vec<Exponent>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Tabulate Gamma(1+d/p)/Gamma(1+(d+q)/p), its approximant and gap
    Gamma {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<f64>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "quantity", rename_all = "kebab-case")]
pub enum Estimate {
    /// M_p(F)/M_p(1) for one or more functionals
    Moment {
        #[arg(long, value_parser = parse_triple, default_value = "2,1,0")]
        ensemble: (u32, u32, u32),
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        /// e.g. one, x1^2, x1^2*x2^2, sum|x|^4, norm2^2, norminf^2, f&g
        #[arg(long = "functional", default_value = "x1^2")]
        functionals: Vec<String>,
        #[arg(long, value_enum, default_value_t = commands::MomentMethod::Auto)]
        method: commands::MomentMethod,
        /// absolute tolerance for quadrature
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// sigma^2 of the uniform measure on a Schatten ball
    Sigma {
        #[arg(long, default_value = "R")]
        field: Field,
        #[arg(long, default_value = "full")]
        subspace: Subspace,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[arg(long, value_enum, default_value_t = commands::SigmaMethod::Auto)]
        sampler: commands::SigmaMethod,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Covariance of the uniform measure on a subspace ball, compared with
    /// a multiple of the identity (hit-and-run, n <= 12)
    Isotropy {
        #[arg(long, default_value = "C")]
        field: Field,
        #[arg(long, default_value = "complex-symmetric")]
        subspace: Subspace,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value = "inf")]
        p: Exponent,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Var_{M_p}(|x|_2^2) and its three terms
    Var {
        #[arg(long, value_parser = parse_triple, default_value = "2,1,0")]
        ensemble: (u32, u32, u32),
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "2")]
        p: Exponent,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Exit codes: 0 success, 1 a check failed, 2 usage or configuration
/// error, 3 the numerical oracle failed.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OracleFailure(_) | Error::Numerical(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(all_pass) => ExitCode::from(if all_pass { 0 } else { 1 }),
        Err(commands::RunError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(commands::RunError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
