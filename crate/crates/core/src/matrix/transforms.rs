//! Norm-preserving maps of the full matrix spaces.

use serde::{Deserialize, Serialize};

use super::MatrixSample;
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Transform {
    /// Swap rows `i` and `j`.
    LeftPermutation(usize, usize),
    /// Swap columns `i` and `j`.
    RightPermutation(usize, usize),
    /// Left multiplication by the planar rotation
    /// `[[cos θ, sin θ], [−sin θ, cos θ]] ⊕ Id` acting on the first two coordinates.
    LeftRotation(f64),
    RightRotation(f64),
    ConjugateTranspose,
    Transpose,
    /// Left multiplication by `u·Id` for a unit scalar `u` of the field.
    LeftUnit(Quaternion),
    RightUnit(Quaternion),
    /// Multiply row `i` by −1.
    RowSign(usize),
}

fn rotation(field: crate::types::Field, n: usize, theta: f64) -> MatrixSample {
    let mut u = MatrixSample::identity(field, n);
    let (s, c) = theta.sin_cos();
    u.set(0, 0, Quaternion::real(c));
    u.set(0, 1, Quaternion::real(s));
    u.set(1, 0, Quaternion::real(-s));
    u.set(1, 1, Quaternion::real(c));
    u
}

fn scalar_identity(field: crate::types::Field, n: usize, q: Quaternion) -> MatrixSample {
    let mut u = MatrixSample::zeros(field, n);
    for i in 0..n {
        u.set(i, i, q);
    }
    u
}

pub fn symmetry_transform(t: &MatrixSample, tr: Transform) -> MatrixSample {
    let n = t.n;
    match tr {
        Transform::LeftPermutation(i, j) => {
            let mut out = t.clone();
            for k in 0..n {
                out.set(i, k, t.get(j, k));
                out.set(j, k, t.get(i, k));
            }
            out
        }
        Transform::RightPermutation(i, j) => {
            let mut out = t.clone();
            for k in 0..n {
                out.set(k, i, t.get(k, j));
                out.set(k, j, t.get(k, i));
            }
            out
        }
        Transform::LeftRotation(theta) => rotation(t.field, n, theta).mul(t),
        Transform::RightRotation(theta) => t.mul(&rotation(t.field, n, theta)),
        Transform::ConjugateTranspose => t.conj_transpose(),
        Transform::Transpose => t.transpose(),
        Transform::LeftUnit(q) => scalar_identity(t.field, n, q).mul(t),
        Transform::RightUnit(q) => t.mul(&scalar_identity(t.field, n, q)),
        Transform::RowSign(i) => {
            let mut out = t.clone();
            for k in 0..n {
                out.set(i, k, -t.get(i, k));
            }
            out
        }
    }
}
