//! The gas densities `f_{a,b,c}` and `f_{a,b,c,p}`, in log domain.

use crate::error::{Error, Result};
use crate::types::{EnsembleParams, Exponent};

/// `|u^a − v^a|`, factored so that nearby points keep relative accuracy.
#[inline]
pub fn pair_gap(u: f64, v: f64, a: u32) -> f64 {
    match a {
        1 => (u - v).abs(),
        2 => ((u - v) * (u + v)).abs(),
        _ => {
            // u^a - v^a = (u - v) Σ_k u^k v^{a-1-k}
            let mut s = 0.0;
            let mut uk = 1.0;
            for k in 0..a {
                s += uk * v.powi((a - 1 - k) as i32);
                uk *= u;
            }
            ((u - v) * s).abs()
        }
    }
}

/// Unchecked `log f_{a,b,c}(x)`.
pub fn log_f_raw(params: &EnsembleParams, x: &[f64]) -> f64 {
    let b = params.b as f64;
    let c = params.c as f64;
    let mut pair = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            pair += pair_gap(x[i], x[j], params.a).ln();
        }
    }
    let mut single = 0.0;
    if params.c > 0 {
        for v in x {
            single += v.abs().ln();
        }
    }
    let v = b * pair + c * single;
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

fn check_dim(params: &EnsembleParams, x: &[f64]) -> Result<()> {
    if x.len() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            got: x.len(),
        });
    }
    Ok(())
}

/// `log f_{a,b,c}(x)`; `−∞` on coincidences and, when `c > 0`, at zero coordinates.
pub fn log_f(params: &EnsembleParams, x: &[f64]) -> Result<f64> {
    check_dim(params, x)?;
    Ok(log_f_raw(params, x))
}

/// Unchecked `log f_{a,b,c,p}(x)`.
pub fn log_f_p_raw(params: &EnsembleParams, p: Exponent, x: &[f64]) -> f64 {
    match p {
        Exponent::Finite(q) => log_f_raw(params, x) - crate::types::lp_pow(x, q),
        Exponent::Infinity => {
            if x.iter().any(|v| v.abs() > 1.0) {
                f64::NEG_INFINITY
            } else {
                log_f_raw(params, x)
            }
        }
    }
}

/// `log f_{a,b,c}(x) − ‖x‖_p^p`, or the cube-restricted density at `p = ∞`.
pub fn log_f_p(params: &EnsembleParams, p: Exponent, x: &[f64]) -> Result<f64> {
    check_dim(params, x)?;
    Ok(log_f_p_raw(params, p, x))
}

/// Degree of positive homogeneity of `f_{a,b,c}`, i.e. `d − n`.
pub fn homogeneity_degree(params: &EnsembleParams) -> usize {
    params.d() - params.n
}

/// Change in `log f_{a,b,c}` when coordinate `i` moves from `x[i]` to `new`.
/// Costs `O(n)`.
pub fn log_f_coordinate_delta(params: &EnsembleParams, x: &[f64], i: usize, new: f64) -> f64 {
    let old = x[i];
    let a = params.a;
    // accumulate ratios as a product; fall back to logs when it leaves range
    let mut prod = 1.0f64;
    let mut logs = 0.0f64;
    for (j, &xj) in x.iter().enumerate() {
        if j == i {
            continue;
        }
        let num = pair_gap(new, xj, a);
        let den = pair_gap(old, xj, a);
        prod *= num / den;
        if !(1e-150..=1e150).contains(&prod) {
            logs += prod.ln();
            prod = 1.0;
        }
    }
    let mut delta = params.b as f64 * (logs + prod.ln());
    if params.c > 0 {
        delta += params.c as f64 * (new.abs() / old.abs()).ln();
    }
    if delta.is_nan() {
        f64::NEG_INFINITY
    } else {
        delta
    }
}

/// `(|u|^ξ u^a − |v|^ξ v^a) / (u^a − v^a)`, the pair kernel of the
/// integration-by-parts identity.
pub fn pair_kernel(u: f64, v: f64, a: u32, xi: f64) -> f64 {
    let ua = u.powi(a as i32);
    let va = v.powi(a as i32);
    (u.abs().powf(xi) * ua - v.abs().powf(xi) * va) / (ua - va)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(a: u32, b: u32, c: u32, n: usize) -> EnsembleParams {
        EnsembleParams::new(a, b, c, n).unwrap()
    }

    #[test]
    fn examples() {
        let v = log_f(&ep(2, 1, 0, 2), &[1.0, 2.0]).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_f(&ep(2, 1, 0, 2), &[1.5, 1.5]).unwrap(), f64::NEG_INFINITY);
        let v = log_f(&ep(1, 2, 0, 3), &[0.0, 1.0, 2.0]).unwrap();
        assert!((v - 4f64.ln()).abs() < 1e-15);
        let v = log_f_p(&ep(2, 1, 0, 2), Exponent::Finite(2.0), &[1.0, 2.0]).unwrap();
        assert!((v - (3f64.ln() - 5.0)).abs() < 1e-14);
        let v = log_f_p(&ep(2, 3, 1, 3), Exponent::Infinity, &[2.0, 0.0, 0.1]).unwrap();
        assert_eq!(v, f64::NEG_INFINITY);
        let v = log_f_p(&ep(1, 1, 2, 1), Exponent::Finite(1.0), &[3.0]).unwrap();
        assert!((v - (2.0 * 3f64.ln() - 3.0)).abs() < 1e-14);
        assert!(log_f(&ep(2, 1, 0, 2), &[1.0]).is_err());
    }

    #[test]
    fn degrees() {
        assert_eq!(ep(2, 2, 1, 2).d(), 8);
        assert_eq!(homogeneity_degree(&ep(2, 2, 1, 2)), 6);
        assert_eq!(homogeneity_degree(&ep(1, 1, 0, 2)), 1);
    }

    #[test]
    fn zero_coordinate_with_c_positive() {
        assert_eq!(log_f(&ep(2, 1, 1, 2), &[0.0, 1.0]).unwrap(), f64::NEG_INFINITY);
        assert!(log_f(&ep(2, 1, 0, 2), &[0.0, 1.0]).unwrap().is_finite());
    }

    #[test]
    fn coordinate_delta_matches_full_evaluation() {
        let p = ep(2, 2, 1, 5);
        let x = [0.3, -1.2, 0.7, 2.1, -0.05];
        let base = log_f_raw(&p, &x);
        for i in 0..5 {
            let mut y = x;
            y[i] = 0.9 - i as f64 * 0.31;
            let want = log_f_raw(&p, &y) - base;
            assert!((log_f_coordinate_delta(&p, &x, i, y[i]) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_at_xi_equal_a() {
        let k = pair_kernel(1.3, -0.4, 2, 2.0);
        assert!((k - (1.3f64.powi(2) + 0.4f64.powi(2))).abs() < 1e-12);
    }
}
