//! Exact samplers for the Gaussian weight (`p = 2`) from tridiagonal
//! β-Hermite and bidiagonal β-Laguerre models.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::tridiag::tridiagonal_eigenvalues;
use super::{stream_rng, Diagnostics, SampleBatch};
use crate::error::{Error, Result};
use crate::types::EnsembleParams;

fn chi<R: Rng>(k: f64, rng: &mut R) -> f64 {
    ChiSquared::new(k).expect("positive degrees").sample(rng).sqrt()
}

/// Eigenvalues of the β-Hermite model, density `∏|λ_i − λ_j|^β e^{−Σλ²/2}`.
fn hermite<R: Rng>(n: usize, beta: f64, rng: &mut R) -> Result<Vec<f64>> {
    // (1/√2)·tridiag with N(0,2) diagonal and χ off-diagonal
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let diag: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let off: Vec<f64> = (1..n).map(|k| s * chi(beta * (n - k) as f64, rng)).collect();
    tridiagonal_eigenvalues(&diag, &off)
}

/// Eigenvalues of `B Bᵀ` for the β-Laguerre bidiagonal `B`, density
/// `∏|λ_i − λ_j|^β ∏ λ_i^{(c−1)/2} e^{−Σλ/2}`.
fn laguerre<R: Rng>(n: usize, beta: f64, c: f64, rng: &mut R) -> Result<Vec<f64>> {
    // diagonal χ_{c+1+β(n−1−i)}, sub-diagonal χ_{β(n−1−i)}
    let dg: Vec<f64> = (0..n)
        .map(|i| chi(c + 1.0 + beta * (n - 1 - i) as f64, rng))
        .collect();
    let sub: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| chi(beta * (n - 1 - i) as f64, rng))
        .collect();
    let diag: Vec<f64> = (0..n)
        .map(|i| dg[i] * dg[i] + if i > 0 { sub[i - 1] * sub[i - 1] } else { 0.0 })
        .collect();
    let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| dg[i] * sub[i]).collect();
    let mut ev = tridiagonal_eigenvalues(&diag, &off)?;
    for v in ev.iter_mut() {
        *v = v.max(0.0);
    }
    Ok(ev)
}

/// Independent draws from `f_{a,b,c,2}`.
///
/// `a = 1` (needs `c = 0`): `x = λ/√2` for β-Hermite eigenvalues with β = b.
/// `a = 2` (any `b`, `c`): `x_i = ±√(λ_i/2)` with independent signs for
/// β-Laguerre eigenvalues with β = b, since `y = x²` turns the target into
/// `∏|y_i − y_j|^b ∏ y_i^{(c−1)/2} e^{−Σy}`.
pub fn exact_p2_sample(params: &EnsembleParams, n_samples: usize, seed: u64) -> Result<SampleBatch> {
    let n = params.n;
    let beta = params.b as f64;
    let mut rng = stream_rng(seed, 0);
    let mut coords = Vec::with_capacity(n_samples * n);
    match (params.a, params.c) {
        (1, 0) => {
            for _ in 0..n_samples {
                let ev = hermite(n, beta, &mut rng)?;
                coords.extend(ev.iter().map(|l| l * std::f64::consts::FRAC_1_SQRT_2));
            }
        }
        (2, c) => {
            for _ in 0..n_samples {
                let ev = laguerre(n, beta, c as f64, &mut rng)?;
                for l in ev {
                    let x = (0.5 * l).sqrt();
                    coords.push(if rng.random::<bool>() { x } else { -x });
                }
            }
        }
        _ => {
            return Err(Error::NotAvailable(format!(
                "no exact p = 2 sampler for {params}"
            )))
        }
    }
    Ok(SampleBatch {
        n,
        coords,
        chain_lengths: vec![n_samples],
        diagnostics: Diagnostics {
            method: "exact_p2".into(),
            chains: 1,
            burn_in: 0,
            thinning: 1,
            acceptance: Vec::new(),
        },
    })
}
