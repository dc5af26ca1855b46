//! Thin-shell statistics assembled from samplers and estimators.

use serde::{Deserialize, Serialize};

use super::estimate::{estimate_joint, joint_means, JointMeans};
use super::functional::Functional;
use crate::error::{Error, Result};
use crate::samplers::{
    ball_pushforward, exact_p2_sample, matrix_hit_and_run, mcmc_sample, Budget, SampleBatch,
};
use crate::types::{ensemble_of, EnsembleParams, Exponent, SchattenSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GasSampler {
    Mcmc,
    /// exact tridiagonal sampler; only at `p = 2`
    ExactP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaSampler {
    Pushforward(GasSampler),
    HitAndRun,
}

/// Draw a gas sample with the requested sampler.
pub fn sample_gas(
    params: &EnsembleParams,
    p: Exponent,
    sampler: GasSampler,
    budget: &Budget,
    seed: u64,
) -> Result<SampleBatch> {
    match sampler {
        GasSampler::Mcmc => mcmc_sample(params, p, budget, seed),
        GasSampler::ExactP2 => {
            if p != Exponent::Finite(2.0) {
                return Err(Error::NotAvailable("exact sampler needs p = 2".into()));
            }
            exact_p2_sample(params, budget.total(), seed)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaEstimate {
    /// `d·Var(‖T‖_2²)/E(‖T‖_2²)²`
    pub sigma_sq: f64,
    pub sigma_sq_err: f64,
    pub var_norm_sq: f64,
    pub mean_norm_sq: f64,
    pub mean_norm_sq_err: f64,
    pub d: usize,
    /// `E‖T‖_2² / d` on the unit ball itself (not volume-normalized)
    pub mean_norm_sq_over_d: f64,
    pub n_samples: usize,
    pub ess: f64,
}

impl SigmaEstimate {
    fn from_norms(norms: Vec<f64>, chain_lengths: &[usize], d: usize) -> SigmaEstimate {
        let sq: Vec<f64> = norms.iter().map(|v| v * v).collect();
        let j = joint_means(&[norms, sq], chain_lengths);
        let (m1, m2) = (j.means[0], j.means[1]);
        let df = d as f64;
        let var = m2 - m1 * m1;
        let sigma_sq = df * var / (m1 * m1);
        let g = [-2.0 * df * m2 / (m1 * m1 * m1), df / (m1 * m1)];
        let (_, err) = j.linear(&g);
        SigmaEstimate {
            sigma_sq,
            sigma_sq_err: err,
            var_norm_sq: var,
            mean_norm_sq: m1,
            mean_norm_sq_err: j.std_err(0),
            d,
            mean_norm_sq_over_d: m1 / df,
            n_samples: j.n_samples,
            ess: j.ess[0].min(j.ess[1]),
        }
    }
}

/// `σ²` of the uniform measure on `K_{p,E}`, from pushed-forward gas
/// samples or from hit-and-run on matrices.
pub fn sigma_pipeline(
    spec: &SchattenSpec,
    sampler: SigmaSampler,
    budget: &Budget,
    seed: u64,
) -> Result<SigmaEstimate> {
    let ens = ensemble_of(spec)?;
    let d = spec.real_dim();
    match sampler {
        SigmaSampler::Pushforward(gs) => {
            let gas = sample_gas(&ens.params, spec.p, gs, budget, seed)?;
            sigma_from_gas(spec, &gas, seed)
        }
        SigmaSampler::HitAndRun => {
            let mb = matrix_hit_and_run(spec, budget, seed)?;
            let norms = mb.samples.iter().map(|t| t.frobenius_sq()).collect();
            Ok(SigmaEstimate::from_norms(norms, &mb.chain_lengths, d))
        }
    }
}

/// `σ²` of the uniform measure on `K_{p,E}` from an existing gas sample of
/// the matching ensemble, pushed forward to the ball.
pub fn sigma_from_gas(spec: &SchattenSpec, gas: &SampleBatch, seed: u64) -> Result<SigmaEstimate> {
    let ens = ensemble_of(spec)?;
    let z = ball_pushforward(gas, &ens.params, spec.p, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    // ‖T‖_p^p = m‖x‖_p^p with multiplicity m, so the unit matrix
    // ball is the gas ball shrunk by m^{-1/p}
    let shrink = match spec.p {
        Exponent::Finite(q) => (ens.multiplicity as f64).powf(-2.0 / q),
        Exponent::Infinity => 1.0,
    };
    let norms = z.map_values(|x| shrink * ens.frobenius_sq(x));
    Ok(SigmaEstimate::from_norms(norms, &z.chain_lengths, spec.real_dim()))
}

/// The symmetrized second and fourth moments behind `Var_{M_p}(‖x‖_2²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarMpEstimate {
    pub params: EnsembleParams,
    pub p: Exponent,
    /// `M(x_1²)/M(1)`
    pub m2: f64,
    pub m2_err: f64,
    /// `M(x_1⁴)/M(1)`
    pub m4: f64,
    pub m4_err: f64,
    /// `M(x_1² x_2²)/M(1)`
    pub x22: f64,
    pub x22_err: f64,
    /// `n·M(x_1⁴)/M(1)`
    pub term_fourth: f64,
    /// `n(n−1)·M(x_1² x_2²)/M(1)`
    pub term_cross: f64,
    /// `n²·(M(x_1²)/M(1))²`
    pub term_square: f64,
    /// `Var_{M_p}(‖x‖_2²)`, the signed combination of the three terms
    pub var: f64,
    pub var_err: f64,
    /// `M(x_1² x_2²)/M(1) − (M(x_1²)/M(1))²`
    pub cross_cov: f64,
    pub cross_cov_err: f64,
    /// `M(x_1⁴)/M(1) ÷ (M(x_1²)/M(1))²`
    pub ratio: f64,
    pub ratio_err: f64,
    pub n_samples: usize,
    pub min_ess: f64,
}

impl VarMpEstimate {
    pub fn from_joint(params: &EnsembleParams, p: Exponent, j: &JointMeans) -> VarMpEstimate {
        let n = params.n as f64;
        let (m2, m4, x22) = (j.means[0], j.means[1], j.means[2]);
        let (var, var_err) = {
            let g = [-2.0 * n * n * m2, n, n * (n - 1.0)];
            let (_, e) = j.linear(&g);
            (n * m4 + n * (n - 1.0) * x22 - n * n * m2 * m2, e)
        };
        let (_, cross_cov_err) = j.linear(&[-2.0 * m2, 0.0, 1.0]);
        let (_, ratio_err) = j.linear(&[-2.0 * m4 / (m2 * m2 * m2), 1.0 / (m2 * m2), 0.0]);
        VarMpEstimate {
            params: *params,
            p,
            m2,
            m2_err: j.std_err(0),
            m4,
            m4_err: j.std_err(1),
            x22,
            x22_err: j.std_err(2),
            term_fourth: n * m4,
            term_cross: n * (n - 1.0) * x22,
            term_square: n * n * m2 * m2,
            var,
            var_err,
            cross_cov: x22 - m2 * m2,
            cross_cov_err,
            ratio: m4 / (m2 * m2),
            ratio_err,
            n_samples: j.n_samples,
            min_ess: j.ess.iter().cloned().fold(f64::INFINITY, f64::min),
        }
    }
}

pub fn var_functionals() -> [Functional; 3] {
    [Functional::Coord(2.0), Functional::Coord(4.0), Functional::Pair(2.0)]
}

/// `Var_{M_p}(‖x‖_2²)` with its three terms estimated on shared draws.
pub fn var_mp_pipeline(
    params: &EnsembleParams,
    p: Exponent,
    sampler: GasSampler,
    budget: &Budget,
    seed: u64,
) -> Result<VarMpEstimate> {
    let gas = sample_gas(params, p, sampler, budget, seed)?;
    Ok(var_from_batch(params, p, &gas))
}

pub fn var_from_batch(params: &EnsembleParams, p: Exponent, gas: &SampleBatch) -> VarMpEstimate {
    let j = estimate_joint(gas, &var_functionals());
    VarMpEstimate::from_joint(params, p, &j)
}
