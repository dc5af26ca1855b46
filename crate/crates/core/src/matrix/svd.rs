//! Singular values by one-sided (Hestenes) Jacobi.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::MatrixSample;
use crate::error::{Error, Result};
use crate::types::Field;

// a few ulps: the small singular values keep high relative accuracy
const TOL: f64 = 4.0 * f64::EPSILON;
const MAX_SWEEPS: usize = 64;

/// Scalar types the Jacobi sweep can rotate.
pub trait JacobiScalar: Copy + Send + Sync {
    fn zero() -> Self;
    fn abs_sqr(self) -> f64;
    /// `conj(self) * other`
    fn conj_mul(self, other: Self) -> Self;
    fn abs(self) -> f64;
    /// `self / |self|`, or one for zero.
    fn phase(self) -> Self;
    /// `conj(self) * v`
    fn conj_scale(self, v: Self) -> Self;
    fn mul_real(self, r: f64) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
}

impl JacobiScalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn conj_mul(self, o: f64) -> f64 {
        self * o
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn phase(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
    fn conj_scale(self, v: f64) -> f64 {
        self * v
    }
    fn mul_real(self, r: f64) -> f64 {
        self * r
    }
    fn add(self, o: f64) -> f64 {
        self + o
    }
    fn sub(self, o: f64) -> f64 {
        self - o
    }
}

impl JacobiScalar for Complex64 {
    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn conj_mul(self, o: Complex64) -> Complex64 {
        self.conj() * o
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn phase(self) -> Complex64 {
        let r = self.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            self / r
        }
    }
    fn conj_scale(self, v: Complex64) -> Complex64 {
        self.conj() * v
    }
    fn mul_real(self, r: f64) -> Complex64 {
        self * r
    }
    fn add(self, o: Complex64) -> Complex64 {
        self + o
    }
    fn sub(self, o: Complex64) -> Complex64 {
        self - o
    }
}

/// Singular values of the matrix whose columns are `cols` (all of equal
/// length), in non-increasing order. The columns are overwritten.
pub fn jacobi_singular_values<T: JacobiScalar>(cols: &mut [Vec<T>]) -> Result<Vec<f64>> {
    let k = cols.len();
    for sweep in 0..=MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (left, right) = cols.split_at_mut(q);
                let cp = &mut left[p];
                let cq = &mut right[0];
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = T::zero();
                for (u, v) in cp.iter().zip(cq.iter()) {
                    alpha += u.abs_sqr();
                    beta += v.abs_sqr();
                    gamma = gamma.add(u.conj_mul(*v));
                }
                let g = gamma.abs();
                if g == 0.0 || g <= TOL * (alpha * beta).sqrt() {
                    continue;
                }
                if sweep == MAX_SWEEPS {
                    return Err(Error::Numerical(format!(
                        "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
                    )));
                }
                rotated = true;
                // rotate (cp, ph^* cq), whose inner product is the real |gamma|
                let ph = gamma.phase();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (u, v) in cp.iter_mut().zip(cq.iter_mut()) {
                    let w = ph.conj_scale(*v);
                    let nu = u.mul_real(c).sub(w.mul_real(s));
                    let nv = u.mul_real(s).add(w.mul_real(c));
                    *u = nu;
                    *v = nv;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|v| v.abs_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvdResult {
    /// Non-increasing.
    pub singular_values: Vec<f64>,
}

/// Singular values of `t`. Quaternion matrices go through the complex
/// adjoint `[[A1, A2], [-conj(A2), conj(A1)]]` of `T = A1 + A2 j`, whose
/// singular values repeat in pairs.
pub fn svd(t: &MatrixSample) -> Result<SvdResult> {
    if !t.is_finite() {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let n = t.n;
    let s = match t.field {
        Field::R => {
            let mut cols: Vec<Vec<f64>> = (0..n)
                .map(|j| (0..n).map(|i| t.get(i, j).w).collect())
                .collect();
            jacobi_singular_values(&mut cols)?
        }
        Field::C => {
            let mut cols: Vec<Vec<Complex64>> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|i| {
                            let q = t.get(i, j);
                            Complex64::new(q.w, q.x)
                        })
                        .collect()
                })
                .collect();
            jacobi_singular_values(&mut cols)?
        }
        Field::H => {
            let m = 2 * n;
            let mut cols = vec![vec![Complex64::new(0.0, 0.0); m]; m];
            for i in 0..n {
                for j in 0..n {
                    let ((w, x), (y, z)) = t.get(i, j).symplectic_parts();
                    let a1 = Complex64::new(w, x);
                    let a2 = Complex64::new(y, z);
                    cols[j][i] = a1;
                    cols[n + j][i] = a2;
                    cols[j][n + i] = -a2.conj();
                    cols[n + j][n + i] = a1.conj();
                }
            }
            let s2 = jacobi_singular_values(&mut cols)?;
            s2.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
        }
    };
    Ok(SvdResult { singular_values: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;
    use crate::types::Exponent;

    #[test]
    fn small_examples() {
        let s = svd(&MatrixSample::diag(Field::R, &[1.0, 2.0])).unwrap();
        assert_eq!(s.singular_values, vec![2.0, 1.0]);
        let s = svd(&MatrixSample::from_real(2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-15);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-15);
        let mut q = MatrixSample::zeros(Field::H, 1);
        q.set(0, 0, Quaternion::I);
        assert!((svd(&q).unwrap().singular_values[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn schatten_examples() {
        let id = MatrixSample::identity(Field::R, 3);
        assert!((super::super::schatten_norm(&id, Exponent::Finite(1.0)).unwrap() - 3.0).abs() < 1e-14);
        assert!((super::super::schatten_norm(&id, Exponent::Infinity).unwrap() - 1.0).abs() < 1e-14);
        let d = MatrixSample::diag(Field::R, &[3.0, 4.0]);
        assert!((super::super::schatten_norm(&d, Exponent::Finite(2.0)).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_complex() {
        // u v^* with |u| = |v| = 1 has one singular value 1
        let n = 3;
        let u = [Quaternion::complex(0.6, 0.0), Quaternion::complex(0.0, 0.8), Quaternion::ZERO];
        let v = [Quaternion::complex(0.0, 1.0), Quaternion::ZERO, Quaternion::ZERO];
        let mut m = MatrixSample::zeros(Field::C, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, u[i] * v[j].conj());
            }
        }
        let s = svd(&m).unwrap().singular_values;
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14 && s[2].abs() < 1e-14);
    }
}
