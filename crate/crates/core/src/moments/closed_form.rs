//! Closed-form moment ratios.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma_diff;
use crate::types::EnsembleParams;

/// `M_p(‖x‖_p^l f)/M_p(f) = Γ((d+l+s)/p)/Γ((d+s)/p)` for `f` positively
/// homogeneous of degree `s`.
pub fn closed_form_moment(d: f64, s: f64, l: f64, p: f64) -> Result<f64> {
    if !(d + s > 0.0) || !(d + l + s > 0.0) || !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "closed_form_moment needs d+s > 0, d+l+s > 0, finite p >= 1; got d={d} s={s} l={l} p={p}"
        )));
    }
    Ok(ln_gamma_diff((d + s) / p, l / p).exp())
}

/// The same ratio on the cube (`p = ∞`, norm `‖x‖_∞`): `(d+s)/(d+s+l)`.
pub fn closed_form_moment_inf(d: f64, s: f64, l: f64) -> Result<f64> {
    if !(d + s > 0.0) || !(d + l + s > 0.0) {
        return Err(Error::Domain(format!(
            "closed_form_moment_inf needs d+s > 0, d+l+s > 0; got d={d} s={s} l={l}"
        )));
    }
    Ok((d + s) / (d + s + l))
}

/// Exact low moments of the cube gas (`a = 2`, `p = ∞`), obtained by solving
/// the integration-by-parts relations with boundary terms on the cube.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeMoments {
    /// `M(x_1²)/M(1)`
    pub m2: f64,
    /// `M(x_1⁴)/M(1)`
    pub m4: f64,
    /// `M(x_1² x_2²)/M(1)` (zero for `n = 1`)
    pub x22: f64,
    /// `Var(‖x‖_2²)`
    pub var: f64,
}

pub fn cube_moments(params: &EnsembleParams) -> Result<CubeMoments> {
    if params.a != 2 {
        return Err(Error::NotAvailable("cube closed forms need a = 2".into()));
    }
    let n = params.n as f64;
    let b = params.b as f64;
    let c = params.c as f64;
    let d = params.d() as f64;
    let e1 = 2.0 * d + (1.0 - c) * n;
    let e2 = 2.0 * d + (1.0 - b - c) * n;
    let e3 = 2.0 * d + (3.0 - c) * n;
    let m2 = d / e1;
    let core = n * d - 2.0 * d + (1.0 + c) * n;
    let (x22, m4) = if params.n == 1 {
        (0.0, d / e3)
    } else {
        (
            d * core / ((n - 1.0) * e1 * e2),
            d / e3 - b * n * d * core / (e1 * e2 * e3),
        )
    };
    let var = n * m4 + n * (n - 1.0) * x22 - n * n * m2 * m2;
    Ok(CubeMoments { m2, m4, x22, var })
}
