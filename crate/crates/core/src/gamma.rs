//! Log-Gamma by Stirling's series and the Gamma ratios built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..9
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
];

const SHIFT: f64 = 10.0;

fn stirling_tail(x: f64) -> f64 {
    let r = 1.0 / (x * x);
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * r + c;
    }
    acc / x
}

fn ln_gamma_large(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
}

/// `ln Γ(x)` for `x > 0`; NaN outside the domain.
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return f64::NAN;
    }
    if x >= SHIFT {
        return ln_gamma_large(x);
    }
    // near the zeros at 1 and 2 the shifted form cancels; difference it instead
    if (0.5..1.5).contains(&x) {
        return ln_gamma_diff(1.0, x - 1.0);
    }
    if (1.5..2.5).contains(&x) {
        return ln_gamma_diff(2.0, x - 2.0);
    }
    // raise the argument: Γ(x) = Γ(x+k) / (x (x+1) ... (x+k-1))
    let k = (SHIFT - x).ceil() as usize;
    let mut prod = 1.0;
    for j in 0..k {
        prod *= x + j as f64;
    }
    ln_gamma_large(x + k as f64) - prod.ln()
}

/// Checked `ln Γ(x)`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

/// `ln Γ(x+h) − ln Γ(x)` without forming either term when both are large.
pub fn ln_gamma_diff(x: f64, h: f64) -> f64 {
    if !(x > 0.0) || !(x + h > 0.0) {
        return f64::NAN;
    }
    if h == 0.0 {
        return 0.0;
    }
    let lo = x.min(x + h);
    if lo >= SHIFT {
        let y = x + h;
        return (x - 0.5) * (h / x).ln_1p() + h * y.ln() - h + (stirling_tail(y) - stirling_tail(x));
    }
    let k = (SHIFT - lo).ceil() as usize;
    let mut corr = 0.0;
    for j in 0..k {
        corr += (h / (x + j as f64)).ln_1p();
    }
    ln_gamma_diff(x + k as f64, h) - corr
}

/// `ln [Γ(1+d/p) / Γ(1+(d+q)/p)]`.
pub fn ln_gamma_ratio(d: f64, p: f64, q: f64) -> f64 {
    -ln_gamma_diff(1.0 + d / p, q / p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaRatio {
    pub d: f64,
    pub p: f64,
    pub q: f64,
    /// `Γ(1+d/p) / Γ(1+(d+q)/p)`
    pub value: f64,
    /// `((d+p+q)/p)^{-q/p}`
    pub approximant: f64,
    /// `value / approximant`
    pub discrepancy: f64,
}

pub fn gamma_ratio(d: f64, p: f64, q: f64) -> Result<GammaRatio> {
    if !(d > 0.0) || !(p >= 1.0) || !(q >= 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_ratio needs d > 0, 1 <= p < inf, q >= 0; got d={d} p={p} q={q}"
        )));
    }
    let ln_value = ln_gamma_ratio(d, p, q);
    let ln_approx = -(q / p) * ((d + p + q) / p).ln();
    Ok(GammaRatio {
        d,
        p,
        q,
        value: ln_value.exp(),
        approximant: ln_approx.exp(),
        discrepancy: (ln_value - ln_approx).exp(),
    })
}

/// `1 − R_4 / R_2²` where `R_q = Γ(1+d/p)/Γ(1+(d+q)/p)`.
pub fn gamma_gap_relative(d: f64, p: f64) -> f64 {
    let l2 = ln_gamma_ratio(d, p, 2.0);
    let l4 = ln_gamma_ratio(d, p, 4.0);
    -(l4 - 2.0 * l2).exp_m1()
}

/// `R_2² − R_4`, the larger term factored out.
pub fn gamma_gap(d: f64, p: f64) -> Result<f64> {
    if !(d > 0.0) || !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_gap needs d > 0, 1 <= p < inf; got d={d} p={p}"
        )));
    }
    let l2 = ln_gamma_ratio(d, p, 2.0);
    Ok((2.0 * l2).exp() * gamma_gap_relative(d, p))
}
