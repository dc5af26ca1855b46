//! Hit-and-run walk on `K_{p,E}` in real coordinates of the subspace `E`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{stream_rng, Budget, Diagnostics};
use crate::error::{Error, Result};
use crate::matrix::{schatten_norm, MatrixSample};
use crate::quaternion::Quaternion;
use crate::types::{Exponent, Field, SchattenSpec, Subspace};

const BISECTION_STEPS: usize = 60;

/// Linear coordinates on a matrix subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceBasis {
    pub field: Field,
    pub subspace: Subspace,
    pub n: usize,
}

fn scalar(field: Field, c: &[f64]) -> Quaternion {
    match field {
        Field::R => Quaternion::real(c[0]),
        Field::C => Quaternion::complex(c[0], c[1]),
        Field::H => Quaternion::new(c[0], c[1], c[2], c[3]),
    }
}

impl SubspaceBasis {
    pub fn new(spec: &SchattenSpec) -> Result<SubspaceBasis> {
        spec.validate()?;
        Ok(SubspaceBasis {
            field: spec.field,
            subspace: spec.subspace,
            n: spec.n,
        })
    }

    pub fn dim(&self) -> usize {
        SchattenSpec {
            field: self.field,
            subspace: self.subspace,
            n: self.n,
            p: Exponent::Infinity,
        }
        .real_dim()
    }

    pub fn to_matrix(&self, v: &[f64]) -> MatrixSample {
        debug_assert_eq!(v.len(), self.dim());
        let n = self.n;
        let f = self.field;
        let beta = f.beta() as usize;
        let mut m = MatrixSample::zeros(f, n);
        match self.subspace {
            Subspace::Full => {
                for (k, q) in m.entries.iter_mut().enumerate() {
                    *q = scalar(f, &v[k * beta..(k + 1) * beta]);
                }
            }
            Subspace::SelfAdjoint => {
                for i in 0..n {
                    m.set(i, i, Quaternion::real(v[i]));
                }
                let mut k = n;
                for i in 0..n {
                    for j in (i + 1)..n {
                        let q = scalar(f, &v[k..k + beta]);
                        m.set(i, j, q);
                        m.set(j, i, q.conj());
                        k += beta;
                    }
                }
            }
            Subspace::ComplexSymmetric => {
                let mut k = 0;
                for i in 0..n {
                    for j in i..n {
                        let q = Quaternion::complex(v[k], v[k + 1]);
                        m.set(i, j, q);
                        m.set(j, i, q);
                        k += 2;
                    }
                }
            }
            Subspace::AntiSymHermitian => {
                let mut k = 0;
                for i in 0..n {
                    for j in (i + 1)..n {
                        m.set(i, j, Quaternion::complex(0.0, v[k]));
                        m.set(j, i, Quaternion::complex(0.0, -v[k]));
                        k += 1;
                    }
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixBatch {
    pub samples: Vec<MatrixSample>,
    pub chain_lengths: Vec<usize>,
    pub diagnostics: Diagnostics,
}

fn norm_at(basis: &SubspaceBasis, p: Exponent, v: &[f64]) -> Result<f64> {
    schatten_norm(&basis.to_matrix(v), p)
}

/// Largest `t ∈ [0, hi]` found with `‖x + t·dir‖ ≤ 1`, given `‖x + hi·dir‖ ≥ 1`.
fn chord_end(
    basis: &SubspaceBasis,
    p: Exponent,
    x: &[f64],
    dir: &[f64],
    sign: f64,
    hi: f64,
    buf: &mut [f64],
) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        for ((b, xv), dv) in buf.iter_mut().zip(x).zip(dir) {
            *b = xv + sign * mid * dv;
        }
        if norm_at(basis, p, buf)? <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn run_chain(
    basis: &SubspaceBasis,
    p: Exponent,
    budget: &Budget,
    seed: u64,
    chain: usize,
) -> Result<Vec<MatrixSample>> {
    let mut rng = stream_rng(seed, chain as u64);
    let dim = basis.dim();
    let mut x = vec![0.0; dim];
    let mut norm_x = 0.0;
    let mut dir = vec![0.0; dim];
    let mut buf = vec![0.0; dim];
    let mut out = Vec::with_capacity(budget.samples);
    let total = budget.burn_in + budget.samples * budget.thinning;
    for step in 0..total {
        for d in dir.iter_mut() {
            *d = rng.sample(StandardNormal);
        }
        let dn = norm_at(basis, p, &dir)?;
        if dn == 0.0 {
            continue;
        }
        // ‖x + t·dir‖ ≥ t‖dir‖ − ‖x‖, so this t is on or outside the boundary
        let hi = (1.0 + norm_x) / dn;
        let tp = chord_end(basis, p, &x, &dir, 1.0, hi, &mut buf)?;
        let tm = chord_end(basis, p, &x, &dir, -1.0, hi, &mut buf)?;
        let t = -tm + (tp + tm) * rng.random::<f64>();
        for (xv, dv) in x.iter_mut().zip(&dir) {
            *xv += t * dv;
        }
        norm_x = norm_at(basis, p, &x)?;
        if norm_x > 1.0 + 1e-9 {
            return Err(Error::Numerical(format!("hit-and-run left the ball: {norm_x}")));
        }
        if step >= budget.burn_in && (step - budget.burn_in + 1).is_multiple_of(budget.thinning) {
            out.push(basis.to_matrix(&x));
        }
    }
    Ok(out)
}

/// Hit-and-run on the Schatten ball `K_{p,E}` of `spec`, started at 0.
pub fn matrix_hit_and_run(spec: &SchattenSpec, budget: &Budget, seed: u64) -> Result<MatrixBatch> {
    let basis = SubspaceBasis::new(spec)?;
    if spec.n > 12 {
        return Err(Error::Domain("hit-and-run is limited to n <= 12".into()));
    }
    let chains: Vec<Result<Vec<MatrixSample>>> = (0..budget.chains)
        .into_par_iter()
        .map(|k| run_chain(&basis, spec.p, budget, seed, k))
        .collect();
    let mut samples = Vec::with_capacity(budget.total());
    let mut chain_lengths = Vec::with_capacity(budget.chains);
    for c in chains {
        let c = c?;
        chain_lengths.push(c.len());
        samples.extend(c);
    }
    Ok(MatrixBatch {
        samples,
        chain_lengths,
        diagnostics: Diagnostics {
            method: "hit_and_run".into(),
            chains: budget.chains,
            burn_in: budget.burn_in,
            thinning: budget.thinning,
            acceptance: Vec::new(),
        },
    })
}
