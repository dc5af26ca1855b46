//! Exact integration-by-parts identities, the homogeneous-moment formula and
//! the Hermitian splitting, checked by quadrature (or shared-draw Monte Carlo).

use serde::{Deserialize, Serialize};

use super::{CheckReport, Method, Reference, Relation, SIGMAS};
use crate::error::{Error, Result};
use crate::moments::{
    closed_form_moment, closed_form_moment_inf, joint_means, quadrature_face_moments,
    quadrature_moments, Functional,
};
use crate::samplers::SampleBatch;
use crate::types::{EnsembleParams, Exponent};

/// The three `a = 2` identities obtained from integration by parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `ξ = 2`, test function 1
    SecondMoment,
    /// `ξ = 2`, test function `‖x‖_2²`
    FourthMoment,
    /// `ξ = 4`, test function 1, with the pair term
    QuarticSum,
}

impl Identity {
    pub const ALL: [Identity; 3] = [Identity::SecondMoment, Identity::FourthMoment, Identity::QuarticSum];

    pub fn claim_id(&self) -> &'static str {
        match self {
            Identity::SecondMoment => "ibp.identity_xi2_f1",
            Identity::FourthMoment => "ibp.identity_xi2_fnorm2",
            Identity::QuarticSum => "ibp.identity_xi4_f1",
        }
    }
}

/// Test function multiplying the integration-by-parts identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    One,
    /// `‖x‖_2²`
    Norm2Sq,
}

impl TestFunction {
    fn functional(&self) -> Functional {
        match self {
            TestFunction::One => Functional::One,
            TestFunction::Norm2Sq => Functional::Euclid(2.0),
        }
    }

    fn times(&self, f: Functional) -> Functional {
        match self {
            TestFunction::One => f,
            TestFunction::Norm2Sq => Functional::product(f, Functional::Euclid(2.0)),
        }
    }
}

/// A linear combination of moment ratios, plus (at `p = ∞`) boundary terms
/// on the faces of the cube.
#[derive(Debug, Clone, Default)]
struct Side {
    terms: Vec<(f64, Functional)>,
    face: Vec<(f64, Functional)>,
}

impl Side {
    fn weight(&self) -> f64 {
        self.terms.iter().chain(&self.face).map(|(c, _)| c.abs()).sum::<f64>().max(1.0)
    }
}

/// `p·M_p(‖x‖_{ξ+p}^{ξ+p} g)`, or its cube limit `Σ_i ∫_{|x_i|=1} g f dσ`.
fn boundary(side: &mut Side, p: Exponent, xi: f64, g: TestFunction) {
    match p {
        Exponent::Finite(q) => side.terms.push((q, g.times(Functional::PowerSum(xi + q)))),
        Exponent::Infinity => side.face.push((1.0, g.functional())),
    }
}

fn identity_sides(id: Identity, e: &EnsembleParams, p: Exponent) -> (Side, Side) {
    let n = e.n as f64;
    let c = e.c as f64;
    let d = e.d() as f64;
    let mut lhs = Side::default();
    let mut rhs = Side::default();
    match id {
        Identity::SecondMoment => {
            lhs.terms.push(((2.0 * d + (1.0 - c) * n) / n, Functional::Euclid(2.0)));
            boundary(&mut rhs, p, 2.0, TestFunction::One);
        }
        Identity::FourthMoment => {
            lhs.terms.push(((2.0 * d + (1.0 - c) * n) / n, Functional::Euclid(4.0)));
            boundary(&mut rhs, p, 2.0, TestFunction::Norm2Sq);
            rhs.terms.push((-2.0, Functional::PowerSum(4.0)));
        }
        Identity::QuarticSum => {
            lhs.terms.push(((2.0 * d + (3.0 - c) * n) / n, Functional::PowerSum(4.0)));
            boundary(&mut rhs, p, 4.0, TestFunction::One);
            rhs.terms.push((-(d - (c + 1.0) * n), Functional::Pair(2.0)));
        }
    }
    (lhs, rhs)
}

fn ibp_sides(e: &EnsembleParams, p: Exponent, xi: f64, g: TestFunction) -> (Side, Side) {
    let c = e.c as f64;
    let ab = (e.a * e.b) as f64;
    let mut lhs = Side::default();
    let mut rhs = Side::default();
    lhs.terms.push((xi + c + 1.0, g.times(Functional::PowerSum(xi))));
    boundary(&mut rhs, p, xi, g);
    if g == TestFunction::Norm2Sq {
        // Σ |x_i|^ξ x_i ∂_i ‖x‖² = 2‖x‖_{ξ+2}^{ξ+2}
        rhs.terms.push((-2.0, Functional::PowerSum(xi + 2.0)));
    }
    if e.n > 1 {
        rhs.terms.push((-ab, g.times(Functional::PairKernel { a: e.a, xi })));
    }
    (lhs, rhs)
}

/// Evaluate both sides by quadrature; returns values and error bounds.
fn quadrature_sides(
    e: &EnsembleParams,
    p: Exponent,
    sides: &[&Side],
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let weight: f64 = sides.iter().map(|s| s.weight()).sum();
    let qtol = 1e-2 * tol / weight;
    let terms: Vec<Functional> = sides.iter().flat_map(|s| s.terms.iter().map(|t| t.1.clone())).collect();
    let faces: Vec<Functional> = sides.iter().flat_map(|s| s.face.iter().map(|t| t.1.clone())).collect();
    let tv = quadrature_moments(e, p, &terms, qtol)?.estimates;
    let fv = if faces.is_empty() {
        Vec::new()
    } else {
        quadrature_face_moments(e, &faces, qtol)?.estimates
    };
    let (mut ti, mut fi) = (0, 0);
    let mut vals = Vec::new();
    let mut errs = Vec::new();
    for s in sides {
        let (mut v, mut err) = (0.0, 0.0);
        for (c, _) in &s.terms {
            v += c * tv[ti].value;
            err += c.abs() * tv[ti].std_err;
            ti += 1;
        }
        for (c, _) in &s.face {
            v += c * fv[fi].value;
            err += c.abs() * fv[fi].std_err;
            fi += 1;
        }
        vals.push(v);
        errs.push(err);
    }
    Ok((vals, errs))
}

fn config(e: &EnsembleParams, p: Exponent) -> String {
    format!("{e} p={p}")
}

fn quadrature_report(
    claim: &str,
    description: &str,
    e: &EnsembleParams,
    p: Exponent,
    lhs: &Side,
    rhs: &Side,
    tol: f64,
) -> Result<CheckReport> {
    let (v, err) = quadrature_sides(e, p, &[lhs, rhs], tol)?;
    let mut r = CheckReport::new(
        claim,
        description,
        config(e, p),
        v[0],
        v[1],
        0.0,
        tol,
        Relation::Equal,
        Method::Quadrature,
        Reference::ExactIdentity,
    )
    .detail("quadrature_error_bound", err[0] + err[1]);
    if p.is_infinite() {
        r = r.with_note("boundary term taken as the cube-face integral");
    }
    Ok(r)
}

fn need_a2(e: &EnsembleParams) -> Result<()> {
    if e.a != 2 {
        return Err(Error::Domain(format!("identity needs a = 2, got {e}")));
    }
    Ok(())
}

fn identity_description(id: Identity) -> &'static str {
    match id {
        Identity::SecondMoment => {
            "((2d+(1-c)n)/n) M(|x|_2^2) = p M(|x|_{p+2}^{p+2})"
        }
        Identity::FourthMoment => {
            "((2d+(1-c)n)/n) M(|x|_2^4) = p M(|x|_2^2 |x|_{p+2}^{p+2}) - 2 M(|x|_4^4)"
        }
        Identity::QuarticSum => {
            "((2d+(3-c)n)/n) M(|x|_4^4) = p M(|x|_{p+4}^{p+4}) - (d-(c+1)n) M(x1^2 x2^2)"
        }
    }
}

/// One of the three `a = 2` identities by quadrature (`n ≤ 3`).
pub fn check_identity(id: Identity, e: &EnsembleParams, p: Exponent, tol: f64) -> Result<CheckReport> {
    need_a2(e)?;
    let (lhs, rhs) = identity_sides(id, e, p);
    quadrature_report(id.claim_id(), identity_description(id), e, p, &lhs, &rhs, tol)
}

/// One of the three identities on shared Monte Carlo draws (finite `p`).
/// The reported σ is that of the difference of the two sides.
pub fn check_identity_mc(id: Identity, e: &EnsembleParams, p: Exponent, batch: &SampleBatch) -> Result<CheckReport> {
    need_a2(e)?;
    if p.is_infinite() {
        return Err(Error::NotAvailable(
            "cube boundary terms have no Monte Carlo estimator".into(),
        ));
    }
    let (lhs, rhs) = identity_sides(id, e, p);
    let eval = |s: &Side, x: &[f64]| s.terms.iter().map(|(c, f)| c * f.eval(x)).sum::<f64>();
    let l = batch.map_values(|x| eval(&lhs, x));
    let r = batch.map_values(|x| eval(&rhs, x));
    let j = joint_means(&[l, r], &batch.chain_lengths);
    let (diff, sigma) = j.linear(&[1.0, -1.0]);
    Ok(CheckReport::new(
        id.claim_id(),
        identity_description(id),
        config(e, p),
        j.means[0],
        j.means[1],
        sigma,
        SIGMAS * sigma,
        Relation::Equal,
        Method::Mc,
        Reference::ExactIdentity,
    )
    .detail("difference", diff)
    .detail("samples", j.n_samples as f64)
    .detail("ess_min", j.ess.iter().cloned().fold(f64::INFINITY, f64::min)))
}

/// The general integration-by-parts identity for any `(a, b, c)`:
/// `(ξ+c+1) M(g‖x‖_ξ^ξ) = p M(‖x‖_{ξ+p}^{ξ+p} g) − M(Σ|x_i|^ξ x_i ∂_i g)
///  − ab M(g Σ_i Σ_{j≠i} |x_i|^ξ x_i^a/(x_i^a − x_j^a))`.
pub fn check_int_by_parts(
    e: &EnsembleParams,
    p: Exponent,
    xi: f64,
    g: TestFunction,
    tol: f64,
) -> Result<CheckReport> {
    let (lhs, rhs) = ibp_sides(e, p, xi, g);
    let claim = match g {
        TestFunction::One => "ibp.general_f1",
        TestFunction::Norm2Sq => "ibp.general_fnorm2",
    };
    Ok(quadrature_report(
        claim,
        "(xi+c+1) M(g|x|_xi^xi) = p M(|x|_{xi+p}^{xi+p} g) - M(sum |x_i|^xi x_i d_i g) - ab M(g sum_{i!=j} |x_i|^xi x_i^a/(x_i^a-x_j^a))",
        e,
        p,
        &lhs,
        &rhs,
        tol,
    )?
    .detail("xi", xi))
}

/// `M_p(‖x‖_p^l f)/M_p(f) = Γ((d+l+s)/p)/Γ((d+s)/p)` with `f = x_1²` (`s = 2`);
/// at `p = ∞` the norm is `‖x‖_∞` and the ratio is `(d+s)/(d+s+l)`.
pub fn check_homogeneous_moment(e: &EnsembleParams, p: Exponent, l: f64, tol: f64) -> Result<CheckReport> {
    let f = Functional::Coord(2.0);
    let s = f.degree();
    let d = e.d() as f64;
    let (g, want) = match p {
        Exponent::Finite(q) => (
            Functional::product(Functional::NormPow { q, l }, f.clone()),
            closed_form_moment(d, s, l, q)?,
        ),
        Exponent::Infinity => (
            Functional::product(Functional::MaxPow(l), f.clone()),
            closed_form_moment_inf(d, s, l)?,
        ),
    };
    let est = quadrature_moments(e, p, &[f, g], 1e-3 * tol)?.estimates;
    let ratio = est[1].value / est[0].value;
    let err = (est[1].std_err + ratio * est[0].std_err) / est[0].value;
    Ok(CheckReport::new(
        "homogeneous_moment.gamma_ratio",
        "M(|x|_p^l x1^2)/M(x1^2) = Gamma((d+l+2)/p)/Gamma((d+2)/p)",
        format!("{} l={l}", config(e, p)),
        ratio,
        want,
        0.0,
        tol,
        Relation::Equal,
        Method::Quadrature,
        Reference::ClosedForm,
    )
    .detail("quadrature_error_bound", err))
}

/// Absolute values of the `(1,2,0)` gas split into independent `(2,2,0)` and
/// `(2,2,2)` gases on `⌈n/2⌉` and `⌊n/2⌋` coordinates.
pub fn check_hermitian_split(n: usize, p: Exponent, xi: f64, tol: f64) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::Domain("splitting needs n >= 2".into()));
    }
    let herm = EnsembleParams::new(1, 2, 0, n)?;
    let first = EnsembleParams::new(2, 2, 0, n.div_ceil(2))?;
    let second = EnsembleParams::new(2, 2, 2, n / 2)?;
    let qtol = 1e-2 * tol;
    let fs = [Functional::PowerSum(xi), Functional::Euclid(2.0), Functional::Euclid(4.0)];
    let h = quadrature_moments(&herm, p, &fs, qtol)?.estimates;
    let a = quadrature_moments(&first, p, &fs, qtol)?.estimates;
    let b = quadrature_moments(&second, p, &fs, qtol)?.estimates;
    let rhs = a[0].value + b[0].value;
    // the fourth Euclidean moment splits with a cross term
    let fourth = a[2].value + b[2].value + 2.0 * a[1].value * b[1].value;
    let fourth_ok = (h[2].value - fourth).abs() <= tol * fourth.abs().max(1.0);
    Ok(CheckReport::new(
        "hermitian_split.power_sum",
        "M_{1,2,0}(|x|_xi^xi) = N_{(2,2,0),ceil(n/2)}(|x|_xi^xi) + N_{(2,2,2),floor(n/2)}(|x|_xi^xi)",
        format!("n={n} p={p} xi={xi}"),
        h[0].value,
        rhs,
        0.0,
        tol,
        Relation::Equal,
        Method::Quadrature,
        Reference::ExactIdentity,
    )
    .detail("fourth_moment_lhs", h[2].value)
    .detail("fourth_moment_rhs", fourth)
    .require(fourth_ok, "fourth Euclidean moment does not split"))
}
