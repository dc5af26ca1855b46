//! Both sides of the identities linking fourth moments of singular values
//! to sums over entries.

use serde::{Deserialize, Serialize};

use super::{svd, MatrixSample};
use crate::error::Result;
use crate::quaternion::Quaternion;
use crate::types::Field;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryIdentityTerms {
    /// `Σ s_i⁴`
    pub sum_s4: f64,
    /// `Σ |a_ij|⁴`
    pub sum_abs4: f64,
    /// `Σ_i Σ_{j≠l} (|a_ij|²|a_il|² + |a_ji|²|a_li|²)`
    pub row_col_cross: f64,
    /// real part of `Σ_{i≠l} Σ_{j≠k} a_ij conj(a_lj) a_lk conj(a_ik)`, multiplied in that order
    pub quartic_cross: f64,
    /// size of the imaginary part of the same sum
    pub quartic_cross_imag: f64,
    /// `Σ_{i≠j} s_i² s_j²`
    pub sum_s2s2: f64,
    /// `Σ_{i≠l} Σ_{j≠k} |a_ij|²|a_lk|²`
    pub pair_cross: f64,
    /// `2 Σ_{i<l} Σ_{j<k} |a_ij a_lk − a_ik a_lj|²`, commutative fields only
    pub minors: Option<f64>,
}

impl EntryIdentityTerms {
    pub fn fourth_power_rhs(&self) -> f64 {
        self.sum_abs4 + self.row_col_cross + self.quartic_cross
    }

    pub fn pair_rhs(&self) -> f64 {
        self.pair_cross - self.quartic_cross
    }
}

pub fn entry_identity_terms(t: &MatrixSample) -> Result<EntryIdentityTerms> {
    let n = t.n;
    let s = svd(t)?.singular_values;
    let s2: Vec<f64> = s.iter().map(|v| v * v).collect();
    let sum_s4: f64 = s2.iter().map(|v| v * v).sum();
    // pairwise, not (Σs²)² − Σs⁴, which cancels when one value dominates
    let mut sum_s2s2 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum_s2s2 += 2.0 * s2[i] * s2[j];
        }
    }

    let abs2: Vec<f64> = t.entries.iter().map(|q| q.norm_sqr()).collect();
    let a2 = |i: usize, j: usize| abs2[i * n + j];
    let sum_abs4: f64 = abs2.iter().map(|v| v * v).sum();

    let mut row_col_cross = 0.0;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if j != l {
                    row_col_cross += a2(i, j) * a2(i, l) + a2(j, i) * a2(l, i);
                }
            }
        }
    }

    let mut quartic = Quaternion::ZERO;
    let mut pair_cross = 0.0;
    for i in 0..n {
        for l in 0..n {
            if i == l {
                continue;
            }
            for j in 0..n {
                let left = t.get(i, j) * t.get(l, j).conj();
                for k in 0..n {
                    if j == k {
                        continue;
                    }
                    quartic = quartic + left * t.get(l, k) * t.get(i, k).conj();
                    pair_cross += a2(i, j) * a2(l, k);
                }
            }
        }
    }
    let im = quartic.imag();
    let quartic_cross_imag = (im[0] * im[0] + im[1] * im[1] + im[2] * im[2]).sqrt();

    let minors = if t.field == Field::H {
        None
    } else {
        let mut acc = 0.0;
        for i in 0..n {
            for l in (i + 1)..n {
                for j in 0..n {
                    for k in (j + 1)..n {
                        let m = t.get(i, j) * t.get(l, k) - t.get(i, k) * t.get(l, j);
                        acc += m.norm_sqr();
                    }
                }
            }
        }
        Some(2.0 * acc)
    };

    Ok(EntryIdentityTerms {
        sum_s4,
        sum_abs4,
        row_col_cross,
        quartic_cross: quartic.w,
        quartic_cross_imag,
        sum_s2s2,
        pair_cross,
        minors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let e = entry_identity_terms(&MatrixSample::diag(Field::R, &[1.0, 2.0])).unwrap();
        assert!((e.sum_s4 - 17.0).abs() < 1e-12);
        assert_eq!(e.sum_abs4, 17.0);
        assert_eq!(e.row_col_cross, 0.0);
        assert_eq!(e.quartic_cross, 0.0);
    }

    #[test]
    fn all_ones() {
        let e = entry_identity_terms(&MatrixSample::from_real(2, &[1.0; 4])).unwrap();
        assert!((e.sum_s4 - 16.0).abs() < 1e-12);
        assert_eq!(e.sum_abs4, 4.0);
        assert_eq!(e.row_col_cross, 8.0);
        assert_eq!(e.quartic_cross, 4.0);
        assert!(e.sum_s2s2.abs() < 1e-12);
        assert_eq!(e.minors, Some(0.0));
    }
}
