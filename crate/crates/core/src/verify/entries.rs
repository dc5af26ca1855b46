//! Matrix-entry statistics: exact entry/singular-value identities on random
//! matrices, the anti-symmetric reduction, and entry correlations under the
//! uniform measure on a Schatten ball.

use rand_distr::{Distribution, StandardNormal};

use super::{CheckReport, Method, Reference, Relation, SIGMAS};
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::matrix::{entry_identity_terms, svd, MatrixSample};
use crate::moments::{
    cube_moments, estimate_joint, joint_means, quadrature_moments, Functional, JointMeans,
};
use crate::samplers::{matrix_hit_and_run, mcmc_sample, stream_rng, Budget, MatrixBatch, SubspaceBasis};
use crate::types::{ensemble_of, Exponent, Field, SchattenSpec, Subspace};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Both sides of the fourth-power and pair identities (and the minor form
/// for commutative fields) on `count` Gaussian matrices per size.
pub fn check_entry_identities(field: Field, sizes: &[usize], count: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut worst = [0.0f64; 4];
    let mut rng = stream_rng(seed, field.beta() as u64);
    for &n in sizes {
        for _ in 0..count {
            let t = MatrixSample::gaussian(field, n, &mut rng);
            let e = entry_identity_terms(&t)?;
            worst[0] = worst[0].max(rel(e.sum_s4, e.fourth_power_rhs()));
            worst[1] = worst[1].max(rel(e.sum_s2s2, e.pair_rhs()));
            if let Some(m) = e.minors {
                worst[2] = worst[2].max(rel(e.sum_s2s2, m));
            }
            let scale = e.pair_cross.max(e.quartic_cross.abs()).max(f64::MIN_POSITIVE);
            worst[3] = worst[3].max(e.quartic_cross_imag / scale);
        }
    }
    let cfg = format!("field={field} n={sizes:?} count={count}");
    let tol = 1e-9;
    let mk = |id: &str, desc: &str, v: f64| {
        CheckReport::new(id, desc, cfg.clone(), v, 0.0, 0.0, tol, Relation::Equal, Method::Pointwise, Reference::ExactIdentity)
    };
    let mut out = vec![
        mk(
            "entries.fourth_power_sum",
            "sum s_i^4 = sum|a_ij|^4 + row/column cross terms + quartic cross sum (max relative error)",
            worst[0],
        ),
        mk(
            "entries.pair_sum",
            "sum_{i!=j} s_i^2 s_j^2 = sum_{i!=l,j!=k} |a_ij|^2|a_lk|^2 - quartic cross sum (max relative error)",
            worst[1],
        ),
        mk(
            "entries.quartic_cross_real",
            "imaginary part of the quartic cross sum vanishes (max relative size)",
            worst[3],
        ),
    ];
    if field != Field::H {
        out.push(mk(
            "entries.pair_sum_minors",
            "sum_{i!=j} s_i^2 s_j^2 = 2 sum_{i<l,j<k} |a_ij a_lk - a_ik a_lj|^2 (max relative error)",
            worst[2],
        ));
    }
    Ok(out)
}

/// Singular values of random anti-symmetric Hermitian matrices come in equal
/// pairs (plus a zero for odd `n`), and `‖T‖_{S_p}^p = 2‖θ‖_p^p`.
pub fn check_antisym_structure(n: usize, trials: usize, seed: u64) -> Result<CheckReport> {
    let spec = SchattenSpec::new(Field::C, Subspace::AntiSymHermitian, n, Exponent::Infinity)?;
    let basis = SubspaceBasis::new(&spec)?;
    let mut rng = stream_rng(seed, n as u64);
    let (mut pair_err, mut zero_err, mut norm_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let v: Vec<f64> = (0..basis.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let t = basis.to_matrix(&v);
        let s = svd(&t)?.singular_values;
        let top = s[0].max(f64::MIN_POSITIVE);
        let theta: Vec<f64> = s.chunks(2).filter(|c| c.len() == 2).map(|c| c[0]).collect();
        for c in s.chunks(2) {
            if c.len() == 2 {
                pair_err = pair_err.max((c[0] - c[1]).abs() / top);
            }
        }
        if n % 2 == 1 {
            zero_err = zero_err.max(s[n - 1] / top);
        }
        for p in [1.0, 3.0, 7.5] {
            let lhs: f64 = s.iter().map(|x| x.powf(p)).sum();
            let rhs: f64 = 2.0 * theta.iter().map(|x| x.powf(p)).sum::<f64>();
            norm_err = norm_err.max(rel(lhs, rhs));
        }
    }
    let worst = pair_err.max(zero_err);
    Ok(CheckReport::new(
        "antisym.singular_value_pairs",
        "singular values of anti-symmetric Hermitian T pair up (one extra zero for odd n); |T|_p^p = 2|theta|_p^p",
        format!("n={n} trials={trials}"),
        worst,
        0.0,
        0.0,
        1e-10,
        Relation::Equal,
        Method::Pointwise,
        Reference::ExactIdentity,
    )
    .detail("pair_error", pair_err)
    .detail("zero_error", zero_err)
    .detail("norm_identity_error", norm_err)
    .require(norm_err <= 1e-10, "norm identity fails"))
}

/// `E_K ‖θ‖_2²` from hit-and-run on anti-symmetric Hermitian matrices against
/// `2^{−2/p} Γ(1+D/p)/Γ(1+(D+2)/p) · M_p(‖x‖_2²)/M_p(1)` on the gas, with
/// `D` the total degree of the gas (equal to the real dimension of the
/// subspace).
pub fn check_antisym_normalization(n: usize, p: Exponent, budget: &Budget, seed: u64) -> Result<CheckReport> {
    let spec = SchattenSpec::new(Field::C, Subspace::AntiSymHermitian, n, p)?;
    let ens = ensemble_of(&spec)?;
    let gas = ens.params;
    let hr = matrix_hit_and_run(&spec, budget, seed)?;
    // ‖T‖_2² = 2‖θ‖_2²
    let vals: Vec<f64> = hr.samples.iter().map(|t| 0.5 * t.frobenius_sq()).collect();
    let m = joint_means(&[vals], &hr.chain_lengths);
    let f = Functional::Euclid(2.0);
    let (gas_moment, gas_err, gas_method) = if gas.n <= 3 {
        let q = quadrature_moments(&gas, p, std::slice::from_ref(&f), 1e-10)?;
        (q.estimates[0].value, q.estimates[0].std_err, "quadrature")
    } else {
        let b = mcmc_sample(&gas, p, budget, seed ^ 0x5851_f42d_4c95_7f2d)?;
        let j = estimate_joint(&b, std::slice::from_ref(&f));
        (j.means[0], j.std_err(0), "mc")
    };
    let factor = |dim: f64| match p {
        Exponent::Finite(q) => (-(2.0 / q) * 2f64.ln() + ln_gamma(1.0 + dim / q) - ln_gamma(1.0 + (dim + 2.0) / q)).exp(),
        Exponent::Infinity => 1.0,
    };
    let d = gas.d() as f64;
    let rhs = factor(d) * gas_moment;
    let sigma = (m.std_err(0).powi(2) + (factor(d) * gas_err).powi(2)).sqrt();
    let alt = factor((n * n) as f64) * gas_moment;
    Ok(CheckReport::new(
        "antisym.moment_normalization",
        "E_K |theta|_2^2 = 2^{-2/p} G(1+D/p)/G(1+(D+2)/p) M_p(|x|_2^2)/M_p(1), D = dim E",
        format!("n={n} p={p} gas={gas} gas_route={gas_method}"),
        m.means[0],
        rhs,
        sigma,
        SIGMAS * sigma,
        Relation::Equal,
        Method::Mc,
        Reference::IndependentEstimate,
    )
    .detail("dimension_used", d)
    .detail("rhs_with_dimension_n_squared", alt)
    .detail("deviation_sigmas_with_n_squared", (m.means[0] - alt).abs() / sigma)
    .detail("samples", m.n_samples as f64))
}

/// Per-matrix symmetrized entry statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryMoments {
    /// mean of `|a_ij|²`
    pub x: f64,
    /// mean of `|a_ij|²|a_ik|²`, `j ≠ k` (row pairs)
    pub row_pair: f64,
    /// mean of `|a_ji|²|a_ki|²`, `j ≠ k` (column pairs)
    pub col_pair: f64,
    /// mean of `|a_ij|²|a_lk|²`, `i ≠ l`, `j ≠ k`
    pub disjoint_pair: f64,
    /// mean of `Re a_ij conj(a_lj) a_lk conj(a_ik)`, `i ≠ l`, `j ≠ k`
    pub quartic: f64,
    /// mean of `|a_ii|²`
    pub diag: f64,
    /// mean of `|a_ij|²`, `i ≠ j`
    pub offdiag: f64,
    /// mean of `Re a_ii a_ll`, `i ≠ l`
    pub diag_product: f64,
    /// `‖T‖_2²`
    pub norm_sq: f64,
}

impl EntryMoments {
    pub fn of(t: &MatrixSample) -> EntryMoments {
        let n = t.n;
        let nf = n as f64;
        let a2: Vec<f64> = t.entries.iter().map(|q| q.norm_sqr()).collect();
        let at = |i: usize, j: usize| a2[i * n + j];
        let norm_sq: f64 = a2.iter().sum();
        let (mut row, mut col) = (0.0, 0.0);
        for i in 0..n {
            let rs: f64 = (0..n).map(|j| at(i, j)).sum();
            let rs2: f64 = (0..n).map(|j| at(i, j).powi(2)).sum();
            let cs: f64 = (0..n).map(|j| at(j, i)).sum();
            let cs2: f64 = (0..n).map(|j| at(j, i).powi(2)).sum();
            row += rs * rs - rs2;
            col += cs * cs - cs2;
        }
        let (mut disjoint, mut quartic) = (0.0, 0.0);
        for i in 0..n {
            for l in 0..n {
                if i == l {
                    continue;
                }
                for j in 0..n {
                    let aij = t.get(i, j);
                    let alj = t.get(l, j).conj();
                    let left = aij * alj;
                    for k in 0..n {
                        if j == k {
                            continue;
                        }
                        disjoint += at(i, j) * at(l, k);
                        quartic += (left * t.get(l, k) * t.get(i, k).conj()).w;
                    }
                }
            }
        }
        let diag: f64 = (0..n).map(|i| at(i, i)).sum();
        let mut diag_product = 0.0;
        for i in 0..n {
            for l in 0..n {
                if i != l {
                    diag_product += (t.get(i, i) * t.get(l, l)).w;
                }
            }
        }
        let pairs = nf * nf * (nf - 1.0);
        let quads = (nf * (nf - 1.0)).powi(2);
        EntryMoments {
            x: norm_sq / (nf * nf),
            row_pair: row / pairs,
            col_pair: col / pairs,
            disjoint_pair: disjoint / quads,
            quartic: quartic / quads,
            diag: diag / nf,
            offdiag: (norm_sq - diag) / (nf * (nf - 1.0)),
            diag_product: diag_product / (nf * (nf - 1.0)),
            norm_sq,
        }
    }
}

fn entry_means(batch: &MatrixBatch) -> JointMeans {
    let ms: Vec<EntryMoments> = batch.samples.iter().map(EntryMoments::of).collect();
    let col = |f: fn(&EntryMoments) -> f64| ms.iter().map(f).collect::<Vec<f64>>();
    joint_means(
        &[
            col(|m| m.x),
            col(|m| m.row_pair),
            col(|m| m.col_pair),
            col(|m| m.disjoint_pair),
            col(|m| m.quartic),
            col(|m| m.diag),
            col(|m| m.offdiag),
            col(|m| m.diag_product),
            col(|m| m.norm_sq),
            col(|m| m.norm_sq * m.norm_sq),
        ],
        &batch.chain_lengths,
    )
}

const X: usize = 0;
const ROW: usize = 1;
const COL: usize = 2;
const DISJOINT: usize = 3;
const QUARTIC: usize = 4;
const DIAG: usize = 5;
const OFFDIAG: usize = 6;
const DIAG_PRODUCT: usize = 7;
const NORM: usize = 8;
const NORM2: usize = 9;
const STATS: usize = 10;

fn basis_vec(pairs: &[(usize, f64)]) -> Vec<f64> {
    let mut g = vec![0.0; STATS];
    for &(k, v) in pairs {
        g[k] = v;
    }
    g
}

fn zero_mean(id: &str, desc: &str, cfg: &str, j: &JointMeans, g: &[f64]) -> CheckReport {
    let (v, se) = j.linear(g);
    CheckReport::new(id, desc, cfg.to_string(), v, 0.0, se, SIGMAS * se, Relation::Equal, Method::Mc, Reference::ExactIdentity)
}

/// Entry-level cross moments under the uniform measure on `K_{p,M_n(F)}`.
///
/// Always checked: the cross-moment relation
/// `E|a11|²|a12|² = E|a11|²|a22|² + (2/β) E a11 conj(a21) a22 conj(a12)`,
/// the symmetry equalities between entry positions, and `E a11 a22 = 0`.
/// At `p = ∞`: `E|a11|²|a12|² < (E|a11|²)²` with `3σ`, after checking the
/// hypotheses (gas ratio `c4 < 2`, measured `σ² < n`). At `p = 2`: the row
/// and disjoint cross terms agree and the quartic term vanishes.
pub fn check_entry_correlations(field: Field, n: usize, p: Exponent, budget: &Budget, seed: u64) -> Result<Vec<CheckReport>> {
    if !(2..=8).contains(&n) {
        return Err(Error::Domain(format!("entry correlations need 2 <= n <= 8, got {n}")));
    }
    let spec = SchattenSpec::new(field, Subspace::Full, n, p)?;
    let hr = matrix_hit_and_run(&spec, budget, seed)?;
    let j = entry_means(&hr);
    let beta = field.beta() as f64;
    let cfg = format!("field={field} n={n} p={p} samples={}", j.n_samples);
    let mut out = Vec::new();

    let pair = |k: usize| basis_vec(&[(ROW, 0.5), (COL, 0.5), (k, 0.0)]);
    let mut g = pair(0);
    g[DISJOINT] -= 1.0;
    g[QUARTIC] -= 2.0 / beta;
    out.push(
        zero_mean(
            "entries.cross_moment_relation",
            "E|a11|^2|a12|^2 - E|a11|^2|a22|^2 - (2/beta) E Re a11 conj(a21) a22 conj(a12) = 0",
            &cfg,
            &j,
            &g,
        )
        .detail("row_pair", 0.5 * (j.means[ROW] + j.means[COL]))
        .detail("disjoint_pair", j.means[DISJOINT])
        .detail("quartic", j.means[QUARTIC]),
    );
    out.push(zero_mean(
        "entries.symmetry_diag_offdiag",
        "E|a11|^2 = E|a12|^2",
        &cfg,
        &j,
        &basis_vec(&[(DIAG, 1.0), (OFFDIAG, -1.0)]),
    ));
    out.push(zero_mean(
        "entries.symmetry_row_col_pairs",
        "E|a11|^2|a12|^2 = E|a11|^2|a21|^2",
        &cfg,
        &j,
        &basis_vec(&[(ROW, 1.0), (COL, -1.0)]),
    ));
    out.push(zero_mean(
        "entries.diagonal_product_mean_zero",
        "E Re a11 a22 = 0",
        &cfg,
        &j,
        &basis_vec(&[(DIAG_PRODUCT, 1.0)]),
    ));

    match p {
        Exponent::Infinity => {
            let ex = j.means[X];
            let a = 0.5 * (j.means[ROW] + j.means[COL]);
            let (_, se) = j.linear(&basis_vec(&[(ROW, 0.5), (COL, 0.5), (X, -2.0 * ex)]));
            // hypotheses: c4 of the gas below 2 and a thin shell σ² < n
            let gas = ensemble_of(&spec)?.params;
            let cube = cube_moments(&gas)?;
            let c4 = cube.m4 / (cube.m2 * cube.m2);
            let (m1, m2) = (j.means[NORM], j.means[NORM2]);
            let d = spec.real_dim() as f64;
            let sigma_sq = d * (m2 - m1 * m1) / (m1 * m1);
            let (_, sigma_sq_err) = j.linear(&basis_vec(&[
                (NORM, -2.0 * d * m2 / (m1 * m1 * m1)),
                (NORM2, d / (m1 * m1)),
            ]));
            out.push(
                CheckReport::new(
                    "entries.negative_correlation",
                    "E|a11|^2|a12|^2 < (E|a11|^2)^2 at p = inf, given c4 < 2 and sigma^2 < n",
                    cfg.clone(),
                    a,
                    ex * ex,
                    se,
                    SIGMAS * se,
                    Relation::Less,
                    Method::Mc,
                    Reference::Inequality,
                )
                .detail("c4_gas", c4)
                .detail("sigma_sq", sigma_sq)
                .detail("sigma_sq_err", sigma_sq_err)
                .detail("significance", (ex * ex - a) / se)
                .require(c4 < 2.0, "hypothesis c4 < 2 fails")
                .require(sigma_sq + SIGMAS * sigma_sq_err < n as f64, "hypothesis sigma^2 < n fails"),
            );
        }
        Exponent::Finite(q) if q == 2.0 => {
            out.push(zero_mean(
                "entries.cross_terms_equal_p2",
                "E|a11|^2|a12|^2 = E|a11|^2|a22|^2 at p = 2",
                &cfg,
                &j,
                &basis_vec(&[(ROW, 0.5), (COL, 0.5), (DISJOINT, -1.0)]),
            ));
            out.push(zero_mean(
                "entries.quartic_term_zero_p2",
                "E Re a11 conj(a21) a22 conj(a12) = 0 at p = 2",
                &cfg,
                &j,
                &basis_vec(&[(QUARTIC, 1.0)]),
            ));
        }
        _ => {}
    }
    Ok(out)
}

/// Coordinates of `t ∈ E` in a Hilbert–Schmidt orthonormal basis of `E`
/// (off-diagonal pairs carry a factor `√2` in the structured subspaces).
pub fn orthonormal_coords(subspace: Subspace, t: &MatrixSample) -> Vec<f64> {
    let n = t.n;
    let beta = t.field.beta() as usize;
    let parts = |i: usize, j: usize| {
        let q = t.get(i, j);
        [q.w, q.x, q.y, q.z]
    };
    let r2 = std::f64::consts::SQRT_2;
    let mut out = Vec::new();
    match subspace {
        Subspace::Full => {
            for i in 0..n {
                for j in 0..n {
                    out.extend_from_slice(&parts(i, j)[..beta]);
                }
            }
        }
        Subspace::SelfAdjoint => {
            out.extend((0..n).map(|i| t.get(i, i).w));
            for i in 0..n {
                for j in (i + 1)..n {
                    out.extend(parts(i, j)[..beta].iter().map(|v| r2 * v));
                }
            }
        }
        Subspace::ComplexSymmetric => {
            for i in 0..n {
                for j in i..n {
                    let s = if i == j { 1.0 } else { r2 };
                    out.extend(parts(i, j)[..2].iter().map(|v| s * v));
                }
            }
        }
        Subspace::AntiSymHermitian => {
            for i in 0..n {
                for j in (i + 1)..n {
                    out.push(r2 * t.get(i, j).x);
                }
            }
        }
    }
    out
}

/// Covariance of the uniform measure on `K_{p,E}` in orthonormal
/// coordinates, summarized by its deviation from a multiple of the
/// identity. A measurement only: nothing is asserted.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IsotropyMeasurement {
    pub spec: SchattenSpec,
    /// mean diagonal entry of the covariance
    pub mean_variance: f64,
    /// `(max − min)` of the diagonal over its mean
    pub diagonal_spread: f64,
    /// largest off-diagonal entry in absolute value over the mean diagonal
    pub max_off_diagonal: f64,
    /// sampling noise on a single relative covariance entry, about `√(2/ESS)`
    pub noise_scale: f64,
    pub n_samples: usize,
    pub ess: f64,
}

pub fn measure_isotropy(spec: &SchattenSpec, budget: &Budget, seed: u64) -> Result<IsotropyMeasurement> {
    let hr = matrix_hit_and_run(spec, budget, seed)?;
    let coords: Vec<Vec<f64>> = hr.samples.iter().map(|t| orthonormal_coords(spec.subspace, t)).collect();
    let m = coords.first().map_or(0, |c| c.len());
    let count = coords.len() as f64;
    let mean: Vec<f64> = (0..m).map(|k| coords.iter().map(|c| c[k]).sum::<f64>() / count).collect();
    let mut cov = vec![0.0; m * m];
    for c in &coords {
        for i in 0..m {
            for j in i..m {
                cov[i * m + j] += (c[i] - mean[i]) * (c[j] - mean[j]);
            }
        }
    }
    let diag: Vec<f64> = (0..m).map(|i| cov[i * m + i] / count).collect();
    let mean_var = diag.iter().sum::<f64>() / m as f64;
    let spread = (diag.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - diag.iter().cloned().fold(f64::INFINITY, f64::min))
        / mean_var;
    let mut off = 0.0f64;
    for i in 0..m {
        for j in (i + 1)..m {
            off = off.max((cov[i * m + j] / count).abs() / mean_var);
        }
    }
    // ESS of the squared norm stands in for the per-entry ESS
    let norms: Vec<f64> = coords.iter().map(|c| c.iter().map(|v| v * v).sum()).collect();
    let ess = joint_means(&[norms], &hr.chain_lengths).ess[0];
    Ok(IsotropyMeasurement {
        spec: *spec,
        mean_variance: mean_var,
        diagonal_spread: spread,
        max_off_diagonal: off,
        noise_scale: (2.0 / ess).sqrt(),
        n_samples: coords.len(),
        ess,
    })
}
