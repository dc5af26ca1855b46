//! Per-coordinate random-walk Metropolis on `f_{a,b,c,p}`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{stream_rng, Budget, Diagnostics, SampleBatch};
use crate::density::{log_f_coordinate_delta, log_f_p_raw};
use crate::error::{Error, Result};
use crate::types::{EnsembleParams, Exponent};

const TARGET_ACCEPTANCE: f64 = 0.44;
const ADAPT_EVERY: usize = 25;
const RESYNC_EVERY: usize = 1024;

struct ChainState {
    position: Vec<f64>,
    log_density: f64,
    step_sizes: Vec<f64>,
    accepted: Vec<u64>,
    proposed: Vec<u64>,
}

fn starting_point(params: &EnsembleParams, p: Exponent) -> Vec<f64> {
    let n = params.n;
    let scale = match p {
        Exponent::Infinity => 1.0,
        Exponent::Finite(q) => (params.d() as f64 / (n as f64 * q)).max(1.0).powf(1.0 / q),
    };
    (0..n)
        .map(|i| {
            let t = (i + 1) as f64 / (n + 1) as f64;
            if params.a % 2 == 1 {
                // signed coordinates: spread over (-scale, scale), off zero
                scale * (2.0 * t - 1.0 + 0.5 / (n + 1) as f64)
            } else {
                scale * t
            }
        })
        .collect()
}

impl ChainState {
    fn new(params: &EnsembleParams, p: Exponent) -> Result<ChainState> {
        let position = starting_point(params, p);
        let log_density = log_f_p_raw(params, p, &position);
        if !log_density.is_finite() {
            return Err(Error::Numerical(format!(
                "starting point has zero density for {params}"
            )));
        }
        let n = params.n;
        let step = match p {
            Exponent::Infinity => 0.5 / n as f64,
            Exponent::Finite(_) => position.iter().fold(0.0f64, |m, v| m.max(v.abs())) / n as f64,
        }
        .max(1e-3);
        Ok(ChainState {
            position,
            log_density,
            step_sizes: vec![step; n],
            accepted: vec![0; n],
            proposed: vec![0; n],
        })
    }

    fn update<R: Rng>(&mut self, params: &EnsembleParams, p: Exponent, i: usize, rng: &mut R) {
        let old = self.position[i];
        let z: f64 = rng.sample(StandardNormal);
        let new = old + self.step_sizes[i] * z;
        self.proposed[i] += 1;
        let weight = match p {
            Exponent::Infinity => {
                if new.abs() > 1.0 {
                    // burn the uniform anyway so the stream does not depend on the branch
                    let _: f64 = rng.random();
                    return;
                }
                0.0
            }
            Exponent::Finite(q) => old.abs().powf(q) - new.abs().powf(q),
        };
        let delta = log_f_coordinate_delta(params, &self.position, i, new) + weight;
        let u: f64 = rng.random();
        if delta.is_finite() && (delta >= 0.0 || u.ln() < delta) {
            self.position[i] = new;
            self.log_density += delta;
            self.accepted[i] += 1;
        }
    }

    fn sweep<R: Rng>(&mut self, params: &EnsembleParams, p: Exponent, rng: &mut R) {
        for i in 0..params.n {
            self.update(params, p, i, rng);
        }
    }

    fn resync(&mut self, params: &EnsembleParams, p: Exponent) {
        let full = log_f_p_raw(params, p, &self.position);
        debug_assert!(
            (full - self.log_density).abs() <= 1e-6 * full.abs().max(1.0),
            "cached log density drifted: {} vs {}",
            self.log_density,
            full
        );
        self.log_density = full;
    }

    fn reset_counters(&mut self) {
        self.accepted.iter_mut().for_each(|v| *v = 0);
        self.proposed.iter_mut().for_each(|v| *v = 0);
    }

    fn adapt(&mut self) {
        for i in 0..self.step_sizes.len() {
            if self.proposed[i] == 0 {
                continue;
            }
            let rate = self.accepted[i] as f64 / self.proposed[i] as f64;
            self.step_sizes[i] *= (2.0 * (rate - TARGET_ACCEPTANCE)).exp();
            self.step_sizes[i] = self.step_sizes[i].clamp(1e-8, 1e8);
        }
        self.reset_counters();
    }
}

struct ChainOutput {
    coords: Vec<f64>,
    acceptance: Vec<f64>,
}

fn run_chain(
    params: &EnsembleParams,
    p: Exponent,
    budget: &Budget,
    seed: u64,
    chain: usize,
) -> Result<ChainOutput> {
    let mut rng = stream_rng(seed, chain as u64);
    let mut st = ChainState::new(params, p)?;
    for s in 0..budget.burn_in {
        st.sweep(params, p, &mut rng);
        if (s + 1) % ADAPT_EVERY == 0 {
            st.adapt();
        }
        if (s + 1) % RESYNC_EVERY == 0 {
            st.resync(params, p);
        }
    }
    st.reset_counters();
    let n = params.n;
    let mut coords = Vec::with_capacity(budget.samples * n);
    let mut sweeps = 0usize;
    for _ in 0..budget.samples {
        for _ in 0..budget.thinning {
            st.sweep(params, p, &mut rng);
            sweeps += 1;
            if sweeps.is_multiple_of(RESYNC_EVERY) {
                st.resync(params, p);
            }
        }
        coords.extend_from_slice(&st.position);
    }
    st.resync(params, p);
    let acceptance = st
        .accepted
        .iter()
        .zip(&st.proposed)
        .map(|(a, b)| if *b == 0 { 0.0 } else { *a as f64 / *b as f64 })
        .collect();
    Ok(ChainOutput { coords, acceptance })
}

/// Random-walk Metropolis on `f_{a,b,c,p}` (on the cube at `p = ∞`).
///
/// Each chain runs `burn_in` sweeps with step-size adaptation, then records
/// `samples` points, one every `thinning` sweeps, with the kernel frozen.
/// Chain `k` uses stream `k` of `seed`, so the output does not depend on
/// how chains are scheduled.
pub fn mcmc_sample(
    params: &EnsembleParams,
    p: Exponent,
    budget: &Budget,
    seed: u64,
) -> Result<SampleBatch> {
    let outs: Vec<Result<ChainOutput>> = (0..budget.chains)
        .into_par_iter()
        .map(|k| run_chain(params, p, budget, seed, k))
        .collect();
    let n = params.n;
    let mut coords = Vec::with_capacity(budget.total() * n);
    let mut chain_lengths = Vec::with_capacity(budget.chains);
    let mut acceptance = vec![0.0; n];
    for out in outs {
        let out = out?;
        chain_lengths.push(out.coords.len() / n);
        coords.extend_from_slice(&out.coords);
        for (a, v) in acceptance.iter_mut().zip(&out.acceptance) {
            *a += v / budget.chains as f64;
        }
    }
    Ok(SampleBatch {
        n,
        coords,
        chain_lengths,
        diagnostics: Diagnostics {
            method: "mcmc".into(),
            chains: budget.chains,
            burn_in: budget.burn_in,
            thinning: budget.thinning,
            acceptance,
        },
    })
}
