//! Deterministic moment ratios for `n ≤ 3` by tensor Gauss–Legendre
//! quadrature.
//!
//! For homogeneous `F` of degree `s` the radial variable `r = ‖x‖_∞`
//! integrates in closed form:
//!
//! `M_p(F) = Γ((d+s)/p)/p · ∫_{∂B_∞} F f ‖θ‖_p^{−(d+s)} dσ(θ)`,
//! and `M_∞(F) = (d+s)^{−1} ∫_{∂B_∞} F f dσ`.
//!
//! The face integral is taken over ordered sectors `0 ≤ y_1 ≤ … ≤ y_m = 1`
//! mapped to the unit cube by `y_j = y_{j+1} t_j`, so coincidences and zeros
//! sit on cube faces and the integrand is smooth inside. Panels are graded
//! towards both ends of every axis and doubled until two successive levels
//! agree.

use serde::{Deserialize, Serialize};

use super::estimate::{Method, MomentEstimate};
use super::functional::Functional;
use crate::density::log_f_raw;
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::types::{lp_pow, EnsembleParams, Exponent};

const GL_ORDER: usize = 10;
const GRADING: u32 = 4;
const MAX_POINTS: f64 = 4.0e7;
const ROUNDOFF: f64 = 1e-12;

/// Nodes and weights of the `q`-point Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre(q: usize) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; q];
    let mut w = vec![0.0; q];
    for i in 0..q {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..q {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = q as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        t[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    (t, w)
}

struct Rule {
    t: Vec<f64>,
    w: Vec<f64>,
}

fn composite_rule(level: u32) -> Rule {
    let mut bp = vec![0.0];
    for g in (1..=GRADING).rev() {
        bp.push(0.5f64.powi(g as i32));
    }
    for g in 2..=GRADING {
        bp.push(1.0 - 0.5f64.powi(g as i32));
    }
    bp.push(1.0);
    let (gt, gw) = gauss_legendre(GL_ORDER);
    let split = 1usize << level;
    let mut t = Vec::new();
    let mut w = Vec::new();
    for pair in bp.windows(2) {
        let h = (pair[1] - pair[0]) / split as f64;
        for s in 0..split {
            let a = pair[0] + s as f64 * h;
            for (x, v) in gt.iter().zip(&gw) {
                t.push(a + h * x);
                w.push(h * v);
            }
        }
    }
    Rule { t, w }
}

#[derive(Clone, Copy)]
struct Block {
    size: usize,
    sign: f64,
    /// top coordinate fixed at 1
    pinned: bool,
}

/// Ordered sectors covering `∂B_∞`, each weighted equally by symmetry.
fn regions(params: &EnsembleParams) -> Vec<Vec<Block>> {
    let n = params.n;
    if params.a.is_multiple_of(2) {
        return vec![vec![Block { size: n, sign: 1.0, pinned: true }]];
    }
    // signed gas: k negative coordinates, ordered; one block's top sits on
    // the face
    let mut out = Vec::new();
    for k in 0..=n {
        let neg = Block { size: k, sign: -1.0, pinned: false };
        let pos = Block { size: n - k, sign: 1.0, pinned: false };
        if n - k >= 1 {
            out.push(vec![neg, Block { pinned: true, ..pos }]);
        }
        if k >= 1 {
            out.push(vec![Block { pinned: true, ..neg }, pos]);
        }
    }
    out
}

fn free_dims(blocks: &[Block]) -> usize {
    blocks.iter().map(|b| b.size - b.pinned as usize).sum()
}

/// `Σ weight·f(θ)·F_k(θ)·‖θ‖_p^{−(d+s_k)}` over the tensor grid of one region.
fn region_sums(
    params: &EnsembleParams,
    p: Exponent,
    blocks: &[Block],
    rule: &Rule,
    fs: &[Functional],
    sums: &mut [f64],
) {
    let dims = free_dims(blocks);
    let m = rule.t.len();
    let n = params.n;
    let d = params.d() as f64;
    let powers: Vec<f64> = match p {
        Exponent::Finite(q) => fs.iter().map(|f| -(d + f.degree()) / q).collect(),
        Exponent::Infinity => vec![0.0; fs.len()],
    };
    let mut idx = vec![0usize; dims];
    let mut x = vec![0.0; n];
    let mut ys = vec![0.0; n];
    loop {
        let mut wprod = 1.0;
        let mut pos = 0;
        let mut out = 0;
        for b in blocks {
            if b.size == 0 {
                continue;
            }
            let top = b.size - 1;
            ys[top] = if b.pinned {
                1.0
            } else {
                let k = idx[pos];
                pos += 1;
                wprod *= rule.w[k];
                rule.t[k]
            };
            for j in (0..top).rev() {
                let k = idx[pos];
                pos += 1;
                wprod *= rule.w[k] * ys[j + 1];
                ys[j] = ys[j + 1] * rule.t[k];
            }
            for j in 0..b.size {
                x[out] = b.sign * ys[j];
                out += 1;
            }
        }
        let lf = log_f_raw(params, &x);
        if lf.is_finite() {
            let v = wprod * lf.exp();
            let g = match p {
                Exponent::Finite(q) => lp_pow(&x, q),
                Exponent::Infinity => 1.0,
            };
            for ((s, f), e) in sums.iter_mut().zip(fs).zip(&powers) {
                let w = if *e == 0.0 { 1.0 } else { g.powf(*e) };
                *s += v * w * f.eval(&x);
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == dims {
                return;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn face_sums(params: &EnsembleParams, p: Exponent, fs: &[Functional], level: u32) -> Vec<f64> {
    let rule = composite_rule(level);
    let mut sums = vec![0.0; fs.len()];
    for blocks in regions(params) {
        region_sums(params, p, &blocks, &rule, fs, &mut sums);
    }
    sums
}

/// `ln` of the radial factor turning a face integral into `M_p(F)`, up to a
/// constant common to all `F`.
fn ln_radial(d: f64, s: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Finite(q) => ln_gamma((d + s) / q),
        Exponent::Infinity => -(d + s).ln(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub estimates: Vec<MomentEstimate>,
    /// refinement level at which successive values agreed
    pub level: u32,
}

fn points_at(params: &EnsembleParams, level: u32) -> f64 {
    let m = composite_rule(level).t.len() as f64;
    regions(params)
        .iter()
        .map(|b| m.powi(free_dims(b) as i32))
        .sum()
}

fn refine<F>(
    params: &EnsembleParams,
    fs: &[Functional],
    abs_tol: f64,
    mut ratios_at: F,
) -> Result<(Vec<f64>, Vec<f64>, u32)>
where
    F: FnMut(u32) -> Vec<f64>,
{
    let mut prev = ratios_at(0);
    let mut level = 1;
    loop {
        if points_at(params, level) > MAX_POINTS {
            return Err(Error::OracleFailure(format!(
                "quadrature for {params} did not reach {abs_tol:e} (functionals {})",
                fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        let cur = ratios_at(level);
        let diffs: Vec<f64> = cur.iter().zip(&prev).map(|(a, b)| (a - b).abs()).collect();
        // tolerances below double-precision resolution of the value cannot
        // be met by any refinement
        let ok = diffs
            .iter()
            .zip(&cur)
            .all(|(d, v)| *d <= abs_tol.max(ROUNDOFF * v.abs()));
        if cur.iter().all(|v| v.is_finite()) && ok {
            return Ok((cur, diffs, level));
        }
        prev = cur;
        level += 1;
    }
}

fn check_n(params: &EnsembleParams) -> Result<()> {
    if params.n > 3 {
        return Err(Error::Domain(format!(
            "quadrature oracle supports n <= 3, got n = {}",
            params.n
        )));
    }
    Ok(())
}

/// `M_p(F)/M_p(1)` for each `F`, to absolute accuracy `abs_tol` (or
/// `1e-12` relative, whichever is larger).
pub fn quadrature_moments(
    params: &EnsembleParams,
    p: Exponent,
    fs: &[Functional],
    abs_tol: f64,
) -> Result<QuadratureReport> {
    check_n(params)?;
    let d = params.d() as f64;
    let mut all = vec![Functional::One];
    all.extend_from_slice(fs);
    let scale: Vec<f64> = fs
        .iter()
        .map(|f| (ln_radial(d, f.degree(), p) - ln_radial(d, 0.0, p)).exp())
        .collect();
    let (vals, diffs, level) = refine(params, fs, abs_tol, |lvl| {
        let s = face_sums(params, p, &all, lvl);
        s[1..].iter().zip(&scale).map(|(v, c)| c * v / s[0]).collect()
    })?;
    let estimates = vals
        .iter()
        .zip(&diffs)
        .map(|(v, e)| MomentEstimate::exact(*v, *e, Method::Quadrature))
        .collect();
    Ok(QuadratureReport { estimates, level })
}

pub fn quadrature_moment(
    params: &EnsembleParams,
    p: Exponent,
    f: &Functional,
    abs_tol: f64,
) -> Result<MomentEstimate> {
    Ok(quadrature_moments(params, p, std::slice::from_ref(f), abs_tol)?
        .estimates
        .remove(0))
}

/// `ln M_p(1)` up to an additive constant that depends on the ensemble but
/// not on `p`, so differences across `p` are exact.
pub fn quadrature_log_mass(params: &EnsembleParams, p: Exponent, rel_tol: f64) -> Result<f64> {
    check_n(params)?;
    let d = params.d() as f64;
    let one = [Functional::One];
    let mut prev = face_sums(params, p, &one, 0)[0].ln();
    let mut level = 1;
    let ln_face = loop {
        if points_at(params, level) > MAX_POINTS {
            return Err(Error::OracleFailure(format!(
                "mass of {params} at p={p} did not reach {rel_tol:e}"
            )));
        }
        let cur = face_sums(params, p, &one, level)[0].ln();
        if (cur - prev).abs() <= rel_tol.max(ROUNDOFF) {
            break cur;
        }
        prev = cur;
        level += 1;
    };
    // M_p(1) = Γ(1 + d/p)/d · face, M_∞(1) = face/d
    let radial = match p {
        Exponent::Finite(q) => ln_gamma(1.0 + d / q),
        Exponent::Infinity => 0.0,
    };
    Ok(radial - d.ln() + ln_face)
}

/// Boundary terms on the cube at `p = ∞`: for each `F`,
/// `Σ_i ∫_{|x_i| = 1} F f dσ / ∫_{cube} f`.
///
/// This is the limit of `p·M_p(Σ_i |x_i|^{p+ξ} F)/M_p(1)` as `p → ∞`.
pub fn quadrature_face_moments(
    params: &EnsembleParams,
    fs: &[Functional],
    abs_tol: f64,
) -> Result<QuadratureReport> {
    check_n(params)?;
    let d = params.d() as f64;
    let mut all = vec![Functional::One];
    all.extend_from_slice(fs);
    // ∫_cube f = face(1)/d
    let (vals, diffs, level) = refine(params, fs, abs_tol, |lvl| {
        let s = face_sums(params, Exponent::Infinity, &all, lvl);
        s[1..].iter().map(|v| d * v / s[0]).collect()
    })?;
    let estimates = vals
        .iter()
        .zip(&diffs)
        .map(|(v, e)| MomentEstimate::exact(*v, *e, Method::Quadrature))
        .collect();
    Ok(QuadratureReport { estimates, level })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (t, w) = gauss_legendre(10);
        for k in 0..20 {
            let s: f64 = t.iter().zip(&w).map(|(x, v)| v * x.powi(k)).sum();
            assert!((s - 1.0 / (k + 1) as f64).abs() < 1e-14, "k={k}");
        }
    }

    fn ep(a: u32, b: u32, c: u32, n: usize) -> EnsembleParams {
        EnsembleParams::new(a, b, c, n).unwrap()
    }

    #[test]
    fn one_dimensional_gamma_ratio() {
        let v = quadrature_moment(&ep(2, 1, 0, 1), Exponent::Finite(2.0), &Functional::Coord(2.0), 1e-12)
            .unwrap();
        assert!((v.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cube_normalization_and_second_moment() {
        let e = ep(2, 1, 0, 2);
        let r = quadrature_moments(&e, Exponent::Infinity, &[Functional::One, Functional::Euclid(2.0)], 1e-12)
            .unwrap();
        assert!((r.estimates[0].value - 1.0).abs() < 1e-12);
        // ∫∫ |x²−y²|(x²+y²) / ∫∫ |x²−y²| over [0,1]² is 4/5
        assert!((r.estimates[1].value - 0.8).abs() < 1e-10);
    }
}
