//! Named groups of checks, run concurrently and reported in a fixed order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::*;
use crate::error::{Error, Result};
use crate::samplers::Budget;
use crate::types::{EnsembleParams, Exponent, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Identities,
    Gamma,
    Entries,
    Thinshell,
    Negcorr,
    HermitianSplit,
}

impl Suite {
    const NAMES: [(&'static str, Suite); 7] = [
        ("all", Suite::All),
        ("identities", Suite::Identities),
        ("gamma", Suite::Gamma),
        ("entries", Suite::Entries),
        ("thinshell", Suite::Thinshell),
        ("negcorr", Suite::Negcorr),
        ("hermitian-split", Suite::HermitianSplit),
    ];
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        Suite::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| Error::IllegalSpec(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Suite::NAMES.iter().find(|(_, s)| s == self).map_or("?", |(n, _)| *n);
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub p: Exponent,
    /// `(a, b, c)`; `None` runs every family where the check applies
    pub ensemble: Option<(u32, u32, u32)>,
    pub seed: u64,
    /// multiplies the default Monte Carlo sample counts
    pub budget_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            n: 2,
            p: Exponent::Finite(2.0),
            ensemble: None,
            seed: 1,
            budget_scale: 1.0,
        }
    }
}

/// Families covered by the identity checks when no ensemble is given.
const FAMILIES: [(u32, u32, u32); 7] = [(2, 1, 0), (2, 2, 1), (2, 4, 3), (2, 1, 1), (2, 2, 0), (2, 2, 2), (1, 2, 0)];

const QUADRATURE_TOL: f64 = 1e-5;

impl SuiteConfig {
    fn scaled(&self, samples: usize) -> usize {
        ((samples as f64 * self.budget_scale).round() as usize).max(64)
    }

    /// Gas Markov chains.
    pub fn gas_budget(&self) -> Budget {
        Budget::new(4, self.scaled(20_000), 2_000, 1)
    }

    /// Matrix hit-and-run chains.
    pub fn matrix_budget(&self) -> Budget {
        Budget::new(4, self.scaled(2_000), 200, 1)
    }

    fn families(&self) -> Result<Vec<EnsembleParams>> {
        match self.ensemble {
            Some((a, b, c)) => Ok(vec![EnsembleParams::new(a, b, c, self.n)?]),
            None => FAMILIES.iter().map(|&(a, b, c)| EnsembleParams::new(a, b, c, self.n)).collect(),
        }
    }

    fn field(&self) -> Field {
        match self.ensemble {
            Some((2, b, c)) if c + 1 == b => Field::from_beta(b).unwrap_or(Field::R),
            _ => Field::R,
        }
    }

    fn full_params(&self) -> Result<EnsembleParams> {
        let b = self.field().beta();
        EnsembleParams::new(2, b, b - 1, self.n)
    }
}

type Job = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync>;

fn one(f: impl Fn() -> Result<CheckReport> + Send + Sync + 'static) -> Job {
    Box::new(move || f().map(|r| vec![r]))
}

fn jobs(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let c = *cfg;
    let (n, p, seed) = (c.n, c.p, c.seed);
    let mut out: Vec<Job> = Vec::new();
    match suite {
        Suite::All => {
            for s in &Suite::NAMES[1..] {
                out.extend(jobs(s.1, cfg)?);
            }
        }
        Suite::Identities => {
            for e in c.families()? {
                if e.a == 2 {
                    for id in Identity::ALL {
                        out.push(one(move || check_identity(id, &e, p, QUADRATURE_TOL)));
                    }
                }
                if !p.is_infinite() {
                    for g in [TestFunction::One, TestFunction::Norm2Sq] {
                        out.push(one(move || check_int_by_parts(&e, p, 2.0, g, QUADRATURE_TOL)));
                    }
                }
                if e.a == 2 || !p.is_infinite() {
                    out.push(one(move || check_homogeneous_moment(&e, p, 2.0, QUADRATURE_TOL)));
                }
            }
            for a in [1, 2] {
                for xi in [2.0, 4.0] {
                    out.push(one(move || check_zeta_bounds(a, xi, 100_000, seed)));
                }
            }
            if let Exponent::Finite(q) = p {
                out.push(one(move || check_holder_band(q, n.max(2), 10_000, seed)));
            }
        }
        Suite::Gamma => {
            out.push(Box::new(|| check_gamma_grid(40).map(|(r, _)| r)));
            out.push(one(move || check_gamma_functional_equation(10_000, seed)));
        }
        Suite::Entries => {
            let field = c.field();
            out.push(Box::new(move || check_entry_identities(field, &[n.max(2)], 1000, seed)));
            out.push(one(move || check_antisym_structure(n.max(2), 200, seed)));
            let hb = c.matrix_budget();
            out.push(Box::new(move || check_entry_correlations(field, n.clamp(2, 8), p, &hb, seed)));
            if n >= 2 {
                let gb = c.gas_budget();
                out.push(one(move || {
                    check_antisym_normalization(n, p, &hb, seed).or_else(|e| match e {
                        // the gas oracle falls back to MC, which takes the gas budget
                        Error::OracleFailure(_) => check_antisym_normalization(n, p, &gb, seed),
                        e => Err(e),
                    })
                }));
            }
        }
        Suite::Thinshell => {
            let e = c.full_params()?;
            let gb = c.gas_budget();
            out.push(Box::new(move || {
                let g = grid_moments(&e, p, &gb, seed)?;
                let mut r = check_orders_of_magnitude(&g);
                r.push(check_variance_band(&g));
                Ok(r)
            }));
            if p.is_infinite() && n <= 8 {
                let field = c.field();
                let hb = c.matrix_budget();
                out.push(one(move || check_sigma_band(field, n, &hb, seed)));
            }
            if n <= 3 && c.field() != Field::H {
                let field = c.field();
                out.push(one(move || check_volume_normalized_moment(field, n, p)));
            }
        }
        Suite::Negcorr => {
            let e = c.full_params()?;
            let gb = c.gas_budget();
            if p.is_infinite() && n >= 2 {
                out.push(Box::new(move || check_neg_correlation_threshold(&e, &gb, seed)));
            }
            if p == Exponent::Finite(1.0) || p == Exponent::Finite(2.0) {
                out.push(Box::new(move || check_ratio_reference(&e, p, &gb, seed)));
            }
        }
        Suite::HermitianSplit => {
            if (2..=3).contains(&n) {
                for xi in [2.0, 4.0] {
                    out.push(one(move || check_hermitian_split(n, p, xi, 1e-4)));
                }
            }
        }
    }
    Ok(out)
}

/// Run every check of a suite; checks that do not apply at the configured
/// parameters are skipped. Reports are ordered by claim id, then config.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let js = jobs(suite, cfg)?;
    let results: Vec<Result<Vec<CheckReport>>> = js.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for r in results {
        match r {
            Ok(v) => out.extend(v),
            Err(Error::NotAvailable(_)) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by(|a, b| (&a.claim_id, &a.config).cmp(&(&b.claim_id, &b.config)));
    Ok(out)
}
