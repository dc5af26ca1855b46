//! Sample means with batch-means error bars.

use serde::{Deserialize, Serialize};

use super::functional::Functional;
use crate::samplers::SampleBatch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Mc,
    Quadrature,
    ClosedForm,
    /// deterministic evaluation at random test points
    Pointwise,
}

/// A moment ratio `M_p(F)/M_p(1)` with its error.
///
/// For quadrature and closed forms `std_err` is an absolute error bound,
/// not a statistical error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_err: f64,
    pub n_samples: usize,
    pub ess: f64,
    pub method: Method,
    pub low_confidence: bool,
}

impl MomentEstimate {
    pub fn exact(value: f64, bound: f64, method: Method) -> MomentEstimate {
        MomentEstimate {
            value,
            std_err: bound,
            n_samples: 0,
            ess: f64::INFINITY,
            method,
            low_confidence: false,
        }
    }
}

pub const LOW_ESS: f64 = 100.0;
const BATCHES_PER_CHAIN: usize = 32;
/// fewer batches make the standard error itself too noisy for 3σ checks
const MIN_BATCHES: usize = 128;

/// Means of several per-point series with the covariance of the means,
/// estimated from batch means within each chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointMeans {
    pub means: Vec<f64>,
    /// covariance matrix of the mean vector, row-major
    pub cov: Vec<f64>,
    pub n_samples: usize,
    /// per-series effective sample size
    pub ess: Vec<f64>,
}

impl JointMeans {
    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn std_err(&self, k: usize) -> f64 {
        self.cov[k * self.dim() + k].max(0.0).sqrt()
    }

    /// Value and standard error of `Σ g_k·mean_k` (first-order delta method
    /// when `g` is a gradient).
    pub fn linear(&self, g: &[f64]) -> (f64, f64) {
        let k = self.dim();
        let v: f64 = g.iter().zip(&self.means).map(|(a, b)| a * b).sum();
        let mut var = 0.0;
        for i in 0..k {
            for j in 0..k {
                var += g[i] * g[j] * self.cov[i * k + j];
            }
        }
        (v, var.max(0.0).sqrt())
    }

    pub fn estimate(&self, k: usize) -> MomentEstimate {
        MomentEstimate {
            value: self.means[k],
            std_err: self.std_err(k),
            n_samples: self.n_samples,
            ess: self.ess[k],
            method: Method::Mc,
            low_confidence: self.ess[k] < LOW_ESS,
        }
    }
}

/// Joint batch-means estimate for the series `values[k][i]`, where the
/// points are laid out chain after chain with the given lengths.
pub fn joint_means(values: &[Vec<f64>], chain_lengths: &[usize]) -> JointMeans {
    let k = values.len();
    let n: usize = chain_lengths.iter().sum();
    let means: Vec<f64> = values
        .iter()
        .map(|v| v.iter().sum::<f64>() / n as f64)
        .collect();
    let mut batches: Vec<Vec<f64>> = Vec::new();
    let mut start = 0;
    let live = chain_lengths.iter().filter(|l| **l > 0).count().max(1);
    let per_chain = BATCHES_PER_CHAIN.max(MIN_BATCHES.div_ceil(live));
    for &len in chain_lengths {
        let nb = per_chain.min(len);
        if nb == 0 {
            continue;
        }
        let size = len / nb;
        for b in 0..nb {
            let lo = start + b * size;
            batches.push(
                values
                    .iter()
                    .map(|v| v[lo..lo + size].iter().sum::<f64>() / size as f64)
                    .collect(),
            );
        }
        start += len;
    }
    let nb = batches.len();
    let mut cov = vec![0.0; k * k];
    if nb > 1 {
        let bm: Vec<f64> = (0..k)
            .map(|j| batches.iter().map(|b| b[j]).sum::<f64>() / nb as f64)
            .collect();
        for b in &batches {
            for i in 0..k {
                for j in 0..k {
                    cov[i * k + j] += (b[i] - bm[i]) * (b[j] - bm[j]);
                }
            }
        }
        // covariance of the overall mean: batch-mean covariance / #batches
        for c in cov.iter_mut() {
            *c /= ((nb - 1) * nb) as f64;
        }
    }
    let ess = (0..k)
        .map(|j| {
            let m = means[j];
            let var = values[j].iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n.max(2) - 1) as f64;
            let se2 = cov[j * k + j];
            if se2 > 0.0 {
                (var / se2).min(n as f64)
            } else if var == 0.0 {
                n as f64
            } else {
                0.0
            }
        })
        .collect();
    JointMeans {
        means,
        cov,
        n_samples: n,
        ess,
    }
}

/// Joint estimate of several functionals on the same draws.
pub fn estimate_joint(batch: &SampleBatch, fs: &[Functional]) -> JointMeans {
    let values: Vec<Vec<f64>> = fs.iter().map(|f| batch.map_values(|x| f.eval(x))).collect();
    joint_means(&values, &batch.chain_lengths)
}

/// `M_p(F)/M_p(1)` from a gas sample.
pub fn estimate_moment(batch: &SampleBatch, f: &Functional) -> MomentEstimate {
    if *f == Functional::One {
        return MomentEstimate {
            value: 1.0,
            std_err: 0.0,
            n_samples: batch.len(),
            ess: batch.len() as f64,
            method: Method::Mc,
            low_confidence: false,
        };
    }
    estimate_joint(batch, std::slice::from_ref(f)).estimate(0)
}
