//! Pointwise inequalities checked on random inputs.

use rand::Rng;

use super::{CheckReport, Method, Reference, Relation};
use crate::density::pair_kernel;
use crate::error::{Error, Result};
use crate::samplers::stream_rng;
use crate::types::lp_pow;

const ROUNDING: f64 = 1e-12;

/// `(ζ_1, ζ_2)` bounding `(|u|^ξ u^a − |v|^ξ v^a)/(u^a − v^a)` by multiples of
/// `|u|^ξ + |v|^ξ`.
pub fn zeta_bounds(a: u32, xi: f64) -> (f64, f64) {
    let mid = (a as f64 + xi) / (2.0 * a as f64);
    let cap: f64 = if a % 2 == 1 { 0.5 } else { 1.0 };
    (cap.min(mid), 1.0f64.max(mid))
}

/// Magnitudes spread over several decades, random signs.
fn random_coord<R: Rng>(rng: &mut R) -> f64 {
    let mag = 10f64.powf(rng.random_range(-3.0..3.0));
    if rng.random::<bool>() {
        mag
    } else {
        -mag
    }
}

/// `(|u|^ξ u^a − |v|^ξ v^a)/((u^a − v^a)(|u|^ξ + |v|^ξ))` in terms of
/// `r = |v/u|`, so nearly coincident pairs do not cancel.
fn kernel_ratio(u: f64, v: f64, a: u32, xi: f64) -> f64 {
    let (u, v) = if u.abs() >= v.abs() { (u, v) } else { (v, u) };
    let ln_r = (v / u).abs().ln();
    let a_f = a as f64;
    let r_xi = (xi * ln_r).exp();
    let same = a.is_multiple_of(2) || u.signum() == v.signum();
    if same {
        // (1 − r^{ξ+a}) / ((1 − r^a)(1 + r^ξ))
        ((xi + a_f) * ln_r).exp_m1() / ((a_f * ln_r).exp_m1() * (1.0 + r_xi))
    } else {
        (1.0 + ((xi + a_f) * ln_r).exp()) / ((1.0 + (a_f * ln_r).exp()) * (1.0 + r_xi))
    }
}

pub fn check_zeta_bounds(a: u32, xi: f64, trials: usize, seed: u64) -> Result<CheckReport> {
    if a == 0 || xi < 0.0 {
        return Err(Error::Domain(format!("need a >= 1, xi >= 0; got a={a} xi={xi}")));
    }
    let (z1, z2) = zeta_bounds(a, xi);
    let mut rng = stream_rng(seed, 0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut mismatch = 0.0f64;
    let mut done = 0;
    while done < trials {
        let u = random_coord(&mut rng);
        // every tenth pair is nearly coincident in absolute value
        let v = if done % 10 == 0 {
            u.abs() * (1.0 + 1e-3 * rng.random::<f64>()) * if rng.random::<bool>() { 1.0 } else { -1.0 }
        } else {
            random_coord(&mut rng)
        };
        let ua = u.powi(a as i32);
        let va = v.powi(a as i32);
        if ua == va {
            continue;
        }
        let ratio = kernel_ratio(u, v, a, xi);
        // the density's kernel, where its difference quotient is well conditioned
        if (u.abs() - v.abs()).abs() > 0.1 * u.abs().max(v.abs()) {
            let direct = pair_kernel(u, v, a, xi) / (u.abs().powf(xi) + v.abs().powf(xi));
            mismatch = mismatch.max((direct - ratio).abs() / ratio.abs());
        }
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        done += 1;
    }
    let band_hi = z2 * (1.0 + ROUNDING);
    Ok(CheckReport::new(
        "pair_kernel.zeta_bounds",
        "zeta1 (|u|^xi+|v|^xi) <= (|u|^xi u^a - |v|^xi v^a)/(u^a-v^a) <= zeta2 (|u|^xi+|v|^xi)",
        format!("a={a} xi={xi} trials={trials}"),
        lo,
        z1,
        0.0,
        ROUNDING,
        Relation::Band { lo: z1 * (1.0 - ROUNDING), hi: band_hi },
        Method::Pointwise,
        Reference::Inequality,
    )
    .detail("zeta1", z1)
    .detail("zeta2", z2)
    .detail("min_ratio", lo)
    .detail("max_ratio", hi)
    .detail("kernel_mismatch", mismatch)
    .require(hi <= band_hi, "upper bound violated")
    .require(mismatch <= 1e-10, "density kernel disagrees"))
}

/// `‖x‖_p^{p+2} ≥ ‖x‖_{p+2}^{p+2} ≥ ‖x‖_p^{p+2} n^{−2/p}`.
pub fn check_holder_band(p: f64, n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    if !(p >= 1.0) || !p.is_finite() || n == 0 {
        return Err(Error::Domain(format!("need finite p >= 1 and n >= 1, got p={p} n={n}")));
    }
    let mut rng = stream_rng(seed, 0);
    let floor = (n as f64).powf(-2.0 / p);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut x = vec![0.0; n];
    for t in 0..trials {
        match t % 4 {
            // extreme points of the band: a basis vector and a constant vector
            0 if t == 0 => {
                x.fill(0.0);
                x[0] = 1.0;
            }
            0 if t == 4 => x.fill(1.0),
            // sparse vectors
            1 => {
                x.fill(0.0);
                let k = rng.random_range(1..=n);
                for v in x.iter_mut().take(k) {
                    *v = random_coord(&mut rng);
                }
            }
            _ => x.iter_mut().for_each(|v| *v = random_coord(&mut rng)),
        }
        let ratio = lp_pow(&x, p + 2.0) / lp_pow(&x, p).powf((p + 2.0) / p);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    let top = 1.0 + ROUNDING;
    Ok(CheckReport::new(
        "holder.norm_band",
        "|x|_p^{p+2} >= |x|_{p+2}^{p+2} >= |x|_p^{p+2} n^{-2/p}",
        format!("p={p} n={n} trials={trials}"),
        lo,
        floor,
        0.0,
        ROUNDING,
        Relation::Band { lo: floor * (1.0 - ROUNDING), hi: top },
        Method::Pointwise,
        Reference::Inequality,
    )
    .detail("min_ratio", lo)
    .detail("max_ratio", hi)
    .detail("lower_envelope", floor)
    .require(hi <= top, "upper inequality violated"))
}
