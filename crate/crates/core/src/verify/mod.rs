//! One checker per identity or inequality; each returns a [`CheckReport`].

mod entries;
mod gamma_checks;
mod identities;
mod pointwise;
mod suites;
mod thinshell;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use crate::moments::Method;
pub use entries::{
    check_antisym_normalization, check_antisym_structure, check_entry_correlations,
    check_entry_identities, measure_isotropy, orthonormal_coords, EntryMoments, IsotropyMeasurement,
};
pub use gamma_checks::{check_gamma_functional_equation, check_gamma_grid, GammaGridSummary};
pub use identities::{
    check_hermitian_split, check_homogeneous_moment, check_identity, check_identity_mc,
    check_int_by_parts, Identity, TestFunction,
};
pub use pointwise::{check_holder_band, check_zeta_bounds, zeta_bounds};
pub use suites::{run_suite, Suite, SuiteConfig};
pub use thinshell::{
    check_cube_var_trend, check_isotropic_constant_limit, check_neg_correlation_threshold,
    check_orders_of_magnitude, check_ratio_reference, check_sigma_band, check_variance_band,
    check_volume_normalized_moment, grid_moments, isotropic_constant, saint_raymond_volume_radius,
    GridMoments, ISOTROPIC_LIMIT,
};

/// Where the reference side of a comparison comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// both sides of an exact identity are measured
    ExactIdentity,
    ClosedForm,
    /// a constant quoted from the literature and consumed as input
    QuotedConstant,
    /// a second, independent estimator of the same quantity
    IndependentEstimate,
    /// an asymptotic statement tested at finite size with explicit slack
    Asymptotic,
    Inequality,
}

/// The relation a check asserts between `lhs` and `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Relation {
    /// `|lhs − rhs| ≤ tolerance`
    Equal,
    /// `rhs − lhs ≥ tolerance` (a one-sided margin, typically 3σ)
    Less,
    /// `lhs − rhs ≥ tolerance`
    Greater,
    /// `lo ≤ lhs ≤ hi`; `rhs` carries a nominal target
    Band { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub claim_id: String,
    pub description: String,
    /// compact description of the parameters the check ran at
    pub config: String,
    pub lhs: f64,
    pub rhs: f64,
    /// standard error of `lhs − rhs` (zero for deterministic checks)
    pub sigma: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub method: Method,
    pub reference: Reference,
    pub pass: bool,
    pub details: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

impl CheckReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        claim_id: &str,
        description: &str,
        config: String,
        lhs: f64,
        rhs: f64,
        sigma: f64,
        tolerance: f64,
        relation: Relation,
        method: Method,
        reference: Reference,
    ) -> CheckReport {
        let pass = match relation {
            Relation::Equal => (lhs - rhs).abs() <= tolerance,
            Relation::Less => rhs - lhs >= tolerance,
            Relation::Greater => lhs - rhs >= tolerance,
            Relation::Band { lo, hi } => lo <= lhs && lhs <= hi,
        };
        CheckReport {
            claim_id: claim_id.into(),
            description: description.into(),
            config,
            lhs,
            rhs,
            sigma,
            tolerance,
            relation,
            method,
            reference,
            pass: pass && lhs.is_finite() && rhs.is_finite(),
            details: BTreeMap::new(),
            note: String::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: f64) -> CheckReport {
        self.details.insert(key.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckReport {
        self.note = note.into();
        self
    }

    /// Fail the report on top of its own criterion (for hypotheses that must
    /// also hold).
    pub fn require(mut self, ok: bool, why: &str) -> CheckReport {
        if !ok {
            self.pass = false;
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(why);
        }
        self
    }

    /// Standard errors separating `lhs` from `rhs`.
    pub fn significance(&self) -> f64 {
        if self.sigma > 0.0 {
            (self.rhs - self.lhs).abs() / self.sigma
        } else {
            f64::INFINITY
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let rel = match self.relation {
            Relation::Equal => format!("|lhs-rhs|<={:.3e}", self.tolerance),
            Relation::Less => format!("rhs-lhs>={:.3e}", self.tolerance),
            Relation::Greater => format!("lhs-rhs>={:.3e}", self.tolerance),
            Relation::Band { lo, hi } => format!("lhs in [{lo}, {hi}]"),
        };
        write!(
            f,
            "{verdict} {} [{}] lhs={:.10e} rhs={:.10e} sigma={:.3e} {rel} ({:?})",
            self.claim_id, self.config, self.lhs, self.rhs, self.sigma, self.method
        )?;
        if !self.note.is_empty() {
            write!(f, " -- {}", self.note)?;
        }
        Ok(())
    }
}

/// Number of standard errors used by every Monte Carlo comparison.
pub const SIGMAS: f64 = 3.0;
