//! Samplers for the gas densities and for uniform measure on Schatten balls.

mod exact;
mod hit_and_run;
mod mcmc;
mod pushforward;
pub mod tridiag;

pub use exact::exact_p2_sample;
pub use hit_and_run::{matrix_hit_and_run, MatrixBatch, SubspaceBasis};
pub use mcmc::mcmc_sample;
pub use pushforward::ball_pushforward;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Deterministic generator for work unit `stream` of a run seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sampling budget shared by the Monte Carlo routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub chains: usize,
    /// recorded points per chain
    pub samples: usize,
    pub burn_in: usize,
    pub thinning: usize,
}

impl Budget {
    pub fn new(chains: usize, samples: usize, burn_in: usize, thinning: usize) -> Budget {
        Budget {
            chains: chains.max(1),
            samples: samples.max(1),
            burn_in,
            thinning: thinning.max(1),
        }
    }

    pub fn total(&self) -> usize {
        self.chains * self.samples
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: String,
    pub chains: usize,
    pub burn_in: usize,
    pub thinning: usize,
    /// mean acceptance rate per coordinate after burn-in (empty for exact samplers)
    pub acceptance: Vec<f64>,
}

/// Gas points from one sampler run. Points are stored flat, chain after chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub n: usize,
    pub coords: Vec<f64>,
    /// number of points contributed by each chain, in chain order
    pub chain_lengths: Vec<usize>,
    pub diagnostics: Diagnostics,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.coords.len() / self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.coords[k * self.n..(k + 1) * self.n]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.n.max(1))
    }

    /// Apply `f` to each point, keeping the chain structure.
    pub fn map_values<F: Fn(&[f64]) -> f64>(&self, f: F) -> Vec<f64> {
        self.points().map(f).collect()
    }
}
