//! Square matrices over R, C and H, their singular values, and the entry
//! identities and symmetries used by the entry-level checks.

mod identities;
mod svd;
mod transforms;

pub use identities::{entry_identity_terms, EntryIdentityTerms};
pub use svd::{jacobi_singular_values, svd, JacobiScalar, SvdResult};
pub use transforms::{symmetry_transform, Transform};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::quaternion::Quaternion;
use crate::types::{Exponent, Field};

/// An `n × n` matrix, row-major. Entries are stored as quaternions whatever
/// the field; components outside the field are kept at zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSample {
    pub n: usize,
    pub field: Field,
    pub entries: Vec<Quaternion>,
}

impl MatrixSample {
    pub fn zeros(field: Field, n: usize) -> MatrixSample {
        MatrixSample {
            n,
            field,
            entries: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(field: Field, n: usize) -> MatrixSample {
        let mut m = MatrixSample::zeros(field, n);
        for i in 0..n {
            m.entries[i * n + i] = Quaternion::ONE;
        }
        m
    }

    pub fn diag(field: Field, d: &[f64]) -> MatrixSample {
        let n = d.len();
        let mut m = MatrixSample::zeros(field, n);
        for (i, v) in d.iter().enumerate() {
            m.entries[i * n + i] = Quaternion::real(*v);
        }
        m
    }

    pub fn from_real(n: usize, vals: &[f64]) -> MatrixSample {
        assert_eq!(vals.len(), n * n);
        MatrixSample {
            n,
            field: Field::R,
            entries: vals.iter().map(|v| Quaternion::real(*v)).collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.entries[i * self.n + j] = q;
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|q| q.w.is_finite() && q.x.is_finite() && q.y.is_finite() && q.z.is_finite())
    }

    /// Frobenius norm squared, `Σ |a_ij|²`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sqr()).sum()
    }

    pub fn mul(&self, other: &MatrixSample) -> MatrixSample {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let field = wider(self.field, other.field);
        let mut out = MatrixSample::zeros(field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.entries[idx] = out.entries[idx] + a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> MatrixSample {
        let n = self.n;
        let mut out = MatrixSample::zeros(self.field, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> MatrixSample {
        let n = self.n;
        let mut out = MatrixSample::zeros(self.field, n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// A matrix with independent standard normal real components in every
    /// entry (β components per entry).
    pub fn gaussian<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> MatrixSample {
        let mut m = MatrixSample::zeros(field, n);
        for q in m.entries.iter_mut() {
            *q = random_scalar(field, rng);
        }
        m
    }
}

fn wider(a: Field, b: Field) -> Field {
    a.max(b)
}

pub(crate) fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Quaternion {
    let mut g = || -> f64 { rng.sample(StandardNormal) };
    match field {
        Field::R => Quaternion::real(g()),
        Field::C => Quaternion::complex(g(), g()),
        Field::H => Quaternion::new(g(), g(), g(), g()),
    }
}

/// `‖s‖_p` for a vector of singular values.
pub fn schatten_from_singular(s: &[f64], p: Exponent) -> f64 {
    p.norm(s)
}

/// Schatten `p`-norm.
pub fn schatten_norm(t: &MatrixSample, p: Exponent) -> crate::error::Result<f64> {
    Ok(schatten_from_singular(&svd(t)?.singular_values, p))
}
