//! Gamma-ratio estimates on a log-spaced grid.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CheckReport, Method, Reference, Relation};
use crate::error::Result;
use crate::gamma::{gamma_gap, gamma_ratio, ln_gamma_ratio};
use crate::samplers::stream_rng;

/// Empirical constants measured on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaGridSummary {
    /// `min gap / R_2² · p(p+d)`
    pub alpha: f64,
    /// `max gap / R_2² · p d`
    pub gamma: f64,
    /// `max |disc^{1/q} − 1| · d/q` over `d ≥ 4`, `q ∈ {2, 4}`
    pub discrepancy_constant: f64,
    pub min_gap: f64,
    pub points: usize,
}

fn log_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|k| lo * (hi / lo).powf(k as f64 / steps as f64))
        .collect()
}

/// Integer `d` values spread over `[1, 10⁴]`.
fn d_grid(steps: usize) -> Vec<f64> {
    let mut v: Vec<f64> = log_grid(1.0, 1e4, steps).iter().map(|x| x.round()).collect();
    v.dedup();
    v
}

/// Gap positivity, the two-sided envelope of the gap, monotone decay in `d`,
/// and the discrepancy band of the ratio approximant.
pub fn check_gamma_grid(steps: usize) -> Result<(Vec<CheckReport>, GammaGridSummary)> {
    let ds = d_grid(steps);
    let ps = log_grid(1.0, 1e4, steps);
    let mut s = GammaGridSummary {
        alpha: f64::INFINITY,
        gamma: 0.0,
        discrepancy_constant: 0.0,
        min_gap: f64::INFINITY,
        points: 0,
    };
    let mut monotone = true;
    for &p in &ps {
        let mut prev = f64::INFINITY;
        for &d in &ds {
            let gap = gamma_gap(d, p)?;
            let r2 = (2.0 * ln_gamma_ratio(d, p, 2.0)).exp();
            let norm = gap / r2;
            s.alpha = s.alpha.min(norm * p * (p + d));
            s.gamma = s.gamma.max(norm * p * d);
            s.min_gap = s.min_gap.min(gap);
            monotone &= gap < prev;
            prev = gap;
            s.points += 1;
            if d >= 4.0 {
                for q in [2.0, 4.0] {
                    let g = gamma_ratio(d, p, q)?;
                    let dev = (g.discrepancy.ln() / q).exp_m1().abs();
                    s.discrepancy_constant = s.discrepancy_constant.max(dev * d / q);
                }
            }
        }
    }
    let grid = format!("d,p in [1,1e4], {} x {} log-spaced", ds.len(), ps.len());
    let reports = vec![
        CheckReport::new(
            "gamma.gap_positive",
            "(G(1+d/p)/G(1+(d+2)/p))^2 - G(1+d/p)/G(1+(d+4)/p) > 0",
            grid.clone(),
            s.min_gap,
            0.0,
            0.0,
            f64::MIN_POSITIVE,
            Relation::Greater,
            Method::ClosedForm,
            Reference::Inequality,
        ),
        CheckReport::new(
            "gamma.gap_envelope",
            "gap / R_2^2 between alpha/(p(p+d)) and gamma/(pd), alpha and gamma in [0.02, 50]",
            grid.clone(),
            s.alpha,
            s.gamma,
            0.0,
            0.0,
            Relation::Band { lo: 0.02, hi: 50.0 },
            Method::ClosedForm,
            Reference::Inequality,
        )
        .detail("alpha", s.alpha)
        .detail("gamma", s.gamma)
        .require((0.02..=50.0).contains(&s.gamma), "upper envelope constant outside [0.02, 50]"),
        CheckReport::new(
            "gamma.gap_decreasing_in_d",
            "gap decreases along the d grid at every fixed p",
            grid.clone(),
            monotone as u8 as f64,
            1.0,
            0.0,
            0.0,
            Relation::Equal,
            Method::ClosedForm,
            Reference::Asymptotic,
        ),
        CheckReport::new(
            "gamma.ratio_approximant_band",
            "|(ratio/((d+p+q)/p)^{-q/p})^{1/q} - 1| <= C q/d with C <= 5",
            format!("{grid}, d >= 4, q in {{2,4}}"),
            s.discrepancy_constant,
            5.0,
            0.0,
            0.0,
            Relation::Band { lo: 0.0, hi: 5.0 },
            Method::ClosedForm,
            Reference::Inequality,
        ),
    ];
    Ok((reports, s))
}

/// `R(d, p, q_1+q_2) = R(d, p, q_1) R(d+q_1, p, q_2)` on random triples.
pub fn check_gamma_functional_equation(trials: usize, seed: u64) -> Result<CheckReport> {
    let mut rng = stream_rng(seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let d = 10f64.powf(rng.random_range(0.0..4.0));
        let p = 10f64.powf(rng.random_range(0.0..4.0));
        let q1 = rng.random_range(0.0..8.0);
        let q2 = rng.random_range(0.0..8.0);
        let whole = gamma_ratio(d, p, q1 + q2)?.value;
        let parts = gamma_ratio(d, p, q1)?.value * gamma_ratio(d + q1, p, q2)?.value;
        worst = worst.max((whole - parts).abs() / whole);
    }
    Ok(CheckReport::new(
        "gamma.ratio_functional_equation",
        "R(d,p,q1+q2) = R(d,p,q1) R(d+q1,p,q2)",
        format!("trials={trials}"),
        worst,
        0.0,
        0.0,
        1e-12,
        Relation::Equal,
        Method::ClosedForm,
        Reference::ExactIdentity,
    ))
}
