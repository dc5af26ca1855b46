//! Subcommand bodies. Each writes records to the sink and reports whether
//! every check it ran passed.

use std::io;

use clap::ValueEnum;
use serde::Serialize;

use schatten_core::gamma::{gamma_gap, gamma_gap_relative, gamma_ratio, GammaRatio};
use schatten_core::moments::{
    estimate_joint, quadrature_moments, sample_gas, sigma_from_gas, sigma_pipeline, var_from_batch,
    Functional, GasSampler, MomentEstimate, SigmaEstimate, SigmaSampler, VarMpEstimate,
};
use schatten_core::samplers::{ball_pushforward, exact_p2_sample, matrix_hit_and_run, mcmc_sample, SampleBatch};
use schatten_core::verify::{measure_isotropy, run_suite, SuiteConfig};
use schatten_core::{EnsembleParams, Error, Exponent, Field, SchattenSpec, Subspace};

use crate::output::Sink;
use crate::{BudgetArgs, Cli, Command, Estimate};

pub enum RunError {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> RunError {
        RunError::Core(e)
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> RunError {
        RunError::Io(e)
    }
}

type Run<T> = std::result::Result<T, RunError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSampler {
    Mcmc,
    /// tridiagonal models, p = 2 only
    Exact,
    /// matrices, uniform on the ball
    HitAndRun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    /// quadrature for n <= 3, else exact at p = 2, else Markov chain
    Auto,
    Quadrature,
    Mcmc,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaMethod {
    /// pushforward of exact samples at p = 2, of Markov chain samples otherwise
    Auto,
    Pushforward,
    PushforwardExact,
    HitAndRun,
}

fn params((a, b, c): (u32, u32, u32), n: usize) -> Run<EnsembleParams> {
    Ok(EnsembleParams::new(a, b, c, n)?)
}

/// Exact draws at `p = 2` where a tridiagonal model exists.
fn auto_gas(e: &EnsembleParams, p: Exponent) -> GasSampler {
    let exact_family = e.a == 2 || (e.a == 1 && e.c == 0);
    if p == Exponent::Finite(2.0) && exact_family {
        GasSampler::ExactP2
    } else {
        GasSampler::Mcmc
    }
}

fn gas_name(g: GasSampler) -> &'static str {
    match g {
        GasSampler::Mcmc => "mcmc",
        GasSampler::ExactP2 => "exact",
    }
}

pub fn run(cli: &Cli) -> Run<bool> {
    let mut sink = Sink::open(cli.global.output.as_deref(), cli.global.format, cli)?;
    let seed = cli.global.seed;
    let pass = match &cli.command {
        Command::Verify { suite, n, p, ensemble, budget_scale } => {
            let cfg = SuiteConfig { n: *n, p: *p, ensemble: *ensemble, seed, budget_scale: *budget_scale };
            let reports = run_suite(*suite, &cfg)?;
            for r in &reports {
                eprintln!("{r}");
                sink.write("check", r)?;
            }
            if reports.is_empty() {
                eprintln!("no checks of suite {suite} apply at n={n} p={p}");
            }
            reports.iter().all(|r| r.pass)
        }
        Command::Estimate { what } => {
            estimate(what, seed, &mut sink)?;
            true
        }
        Command::Sample { sampler, ensemble, field, subspace, n, p, ball, budget } => {
            sample(*sampler, *ensemble, *field, *subspace, *n, *p, *ball, budget, seed, &mut sink)?;
            true
        }
        Command::Sweep { ensembles, ns, ps, budget } => {
            sweep(ensembles, ns, ps, budget, seed, &mut sink)?;
            true
        }
        Command::Gamma { d, p, q } => {
            gamma(d, p, q, &mut sink)?;
            true
        }
    };
    sink.finish()?;
    Ok(pass)
}

#[derive(Serialize)]
struct MomentRecord<'a> {
    params: EnsembleParams,
    p: Exponent,
    functional: String,
    #[serde(flatten)]
    estimate: &'a MomentEstimate,
}

#[derive(Serialize)]
struct SigmaRecord<'a> {
    field: Field,
    subspace: Subspace,
    n: usize,
    p: Exponent,
    sampler: SigmaMethod,
    #[serde(flatten)]
    estimate: &'a SigmaEstimate,
}

#[derive(Serialize)]
struct VarRecord<'a> {
    sampler: &'static str,
    #[serde(flatten)]
    estimate: &'a VarMpEstimate,
}

fn estimate(what: &Estimate, seed: u64, sink: &mut Sink) -> Run<()> {
    match what {
        Estimate::Moment { ensemble, n, p, functionals, method, tol, budget } => {
            let e = params(*ensemble, *n)?;
            let fs: Vec<Functional> = functionals.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            let method = match method {
                MomentMethod::Auto if *n <= 3 => MomentMethod::Quadrature,
                MomentMethod::Auto if auto_gas(&e, *p) == GasSampler::ExactP2 => MomentMethod::Exact,
                MomentMethod::Auto => MomentMethod::Mcmc,
                m => *m,
            };
            let estimates: Vec<MomentEstimate> = match method {
                MomentMethod::Quadrature => quadrature_moments(&e, *p, &fs, *tol)?.estimates,
                _ => {
                    let batch = if method == MomentMethod::Exact {
                        if *p != Exponent::Finite(2.0) {
                            return Err(Error::NotAvailable("exact sampler needs p = 2".into()).into());
                        }
                        exact_p2_sample(&e, budget.budget().total(), seed)?
                    } else {
                        mcmc_sample(&e, *p, &budget.budget(), seed)?
                    };
                    let j = estimate_joint(&batch, &fs);
                    (0..fs.len()).map(|k| j.estimate(k)).collect()
                }
            };
            for (f, est) in fs.iter().zip(&estimates) {
                sink.write("moment", &MomentRecord { params: e, p: *p, functional: f.to_string(), estimate: est })?;
            }
        }
        Estimate::Sigma { field, subspace, n, p, sampler, budget } => {
            let spec = SchattenSpec::new(*field, *subspace, *n, *p)?;
            let ens = schatten_core::ensemble_of(&spec)?;
            let s = match sampler {
                SigmaMethod::Auto => SigmaSampler::Pushforward(auto_gas(&ens.params, *p)),
                SigmaMethod::Pushforward => SigmaSampler::Pushforward(GasSampler::Mcmc),
                SigmaMethod::PushforwardExact => SigmaSampler::Pushforward(GasSampler::ExactP2),
                SigmaMethod::HitAndRun => SigmaSampler::HitAndRun,
            };
            let est = sigma_pipeline(&spec, s, &budget.budget(), seed)?;
            sink.write(
                "sigma",
                &SigmaRecord { field: *field, subspace: *subspace, n: *n, p: *p, sampler: *sampler, estimate: &est },
            )?;
        }
        Estimate::Isotropy { field, subspace, n, p, budget } => {
            let spec = SchattenSpec::new(*field, *subspace, *n, *p)?;
            sink.write("isotropy", &measure_isotropy(&spec, &budget.budget(), seed)?)?;
        }
        Estimate::Var { ensemble, n, p, budget } => {
            let e = params(*ensemble, *n)?;
            let g = auto_gas(&e, *p);
            let gas = sample_gas(&e, *p, g, &budget.budget(), seed)?;
            sink.write("var", &VarRecord { sampler: gas_name(g), estimate: &var_from_batch(&e, *p, &gas) })?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PointRecord<'a> {
    chain: usize,
    index: usize,
    x: &'a [f64],
}

#[derive(Serialize)]
struct MatrixRecord<'a> {
    chain: usize,
    index: usize,
    singular_values: &'a [f64],
}

fn write_points(batch: &SampleBatch, sink: &mut Sink) -> Run<()> {
    let mut k = 0;
    for (chain, &len) in batch.chain_lengths.iter().enumerate() {
        for index in 0..len {
            sink.write("point", &PointRecord { chain, index, x: batch.point(k) })?;
            k += 1;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sample(
    sampler: PointSampler,
    ensemble: (u32, u32, u32),
    field: Field,
    subspace: Subspace,
    n: usize,
    p: Exponent,
    ball: bool,
    budget: &BudgetArgs,
    seed: u64,
    sink: &mut Sink,
) -> Run<()> {
    let b = budget.budget();
    match sampler {
        PointSampler::HitAndRun => {
            let spec = SchattenSpec::new(field, subspace, n, p)?;
            let mb = matrix_hit_and_run(&spec, &b, seed)?;
            let mut k = 0;
            for (chain, &len) in mb.chain_lengths.iter().enumerate() {
                for index in 0..len {
                    let s = schatten_core::matrix::svd(&mb.samples[k])?.singular_values;
                    sink.write("matrix", &MatrixRecord { chain, index, singular_values: &s })?;
                    k += 1;
                }
            }
        }
        PointSampler::Mcmc | PointSampler::Exact => {
            let e = params(ensemble, n)?;
            let g = if sampler == PointSampler::Exact { GasSampler::ExactP2 } else { GasSampler::Mcmc };
            let mut batch = sample_gas(&e, p, g, &b, seed)?;
            if ball {
                batch = ball_pushforward(&batch, &e, p, seed ^ 0x9e37_79b9_7f4a_7c15)?;
            }
            write_points(&batch, sink)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    ensemble: String,
    n: usize,
    p: Exponent,
    quantity: &'static str,
    value: f64,
    std_err: f64,
    sampler: &'static str,
    n_samples: usize,
}

fn full_field(e: &EnsembleParams) -> Option<Field> {
    if e.a == 2 && e.c + 1 == e.b {
        Field::from_beta(e.b)
    } else {
        None
    }
}

fn sweep(
    ensembles: &[(u32, u32, u32)],
    ns: &[usize],
    ps: &[Exponent],
    budget: &BudgetArgs,
    seed: u64,
    sink: &mut Sink,
) -> Run<()> {
    let mut point = 0u64;
    for &t in ensembles {
        for &n in ns {
            for &p in ps {
                let e = params(t, n)?;
                let g = auto_gas(&e, p);
                let s = seed ^ point.wrapping_mul(0x9e37_79b9_7f4a_7c15);
                point += 1;
                let gas = sample_gas(&e, p, g, &budget.budget(), s)?;
                let v = var_from_batch(&e, p, &gas);
                let mut rows = vec![
                    ("m2", v.m2, v.m2_err),
                    ("m4", v.m4, v.m4_err),
                    ("x22", v.x22, v.x22_err),
                    ("var", v.var, v.var_err),
                    ("cross_cov", v.cross_cov, v.cross_cov_err),
                    ("ratio", v.ratio, v.ratio_err),
                ];
                if let Some(field) = full_field(&e) {
                    let spec = SchattenSpec::new(field, Subspace::Full, n, p)?;
                    let sg = sigma_from_gas(&spec, &gas, s)?;
                    rows.push(("sigma_sq", sg.sigma_sq, sg.sigma_sq_err));
                }
                for (quantity, value, std_err) in rows {
                    sink.write(
                        "row",
                        &SweepRow {
                            ensemble: format!("{},{},{}", t.0, t.1, t.2),
                            n,
                            p,
                            quantity,
                            value,
                            std_err,
                            sampler: gas_name(g),
                            n_samples: v.n_samples,
                        },
                    )?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GammaRecord {
    #[serde(flatten)]
    ratio: GammaRatio,
    /// `R_2² − R_4`
    gap: f64,
    gap_relative: f64,
}

fn gamma(ds: &[f64], ps: &[f64], qs: &[f64], sink: &mut Sink) -> Run<()> {
    for &d in ds {
        for &p in ps {
            for &q in qs {
                let ratio = gamma_ratio(d, p, q)?;
                sink.write(
                    "gamma",
                    &GammaRecord { ratio, gap: gamma_gap(d, p)?, gap_relative: gamma_gap_relative(d, p) },
                )?;
            }
        }
    }
    Ok(())
}
