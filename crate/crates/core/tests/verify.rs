use proptest::prelude::*;
use schatten_core::gamma::ln_gamma;
use schatten_core::samplers::{mcmc_sample, Budget};
use schatten_core::verify::*;
use schatten_core::{EnsembleParams, Exponent, Field};

fn e(a: u32, b: u32, c: u32, n: usize) -> EnsembleParams {
    EnsembleParams::new(a, b, c, n).unwrap()
}

fn fin(p: f64) -> Exponent {
    Exponent::Finite(p)
}

fn assert_pass(r: &CheckReport) {
    assert!(r.pass, "{r}");
}

#[test]
fn identity_examples() {
    let cases = [
        (Identity::SecondMoment, e(2, 1, 0, 2), 2.0, 1e-6),
        (Identity::SecondMoment, e(2, 2, 1, 2), 1.0, 1e-6),
        (Identity::FourthMoment, e(2, 1, 0, 2), 2.0, 1e-6),
        (Identity::FourthMoment, e(2, 1, 1, 2), 2.0, 1e-6),
        (Identity::FourthMoment, e(2, 2, 1, 3), 1.0, 1e-5),
        (Identity::QuarticSum, e(2, 1, 0, 2), 2.0, 1e-6),
        (Identity::QuarticSum, e(2, 2, 1, 2), 4.0, 1e-6),
        (Identity::QuarticSum, e(2, 4, 3, 2), 2.0, 1e-6),
    ];
    for (id, params, p, tol) in cases {
        let r = check_identity(id, &params, fin(p), tol).unwrap();
        assert_eq!(r.claim_id, id.claim_id());
        assert_pass(&r);
    }
}

#[test]
fn identity_second_moment_coefficient() {
    // (2,1,0) at n = 2: d = 4, coefficient (2d + (1 − c)n)/n = 5, and the
    // left side is 5·M(‖x‖²) with M(‖x‖²) = d/2 at p = 2
    let r = check_identity(Identity::SecondMoment, &e(2, 1, 0, 2), fin(2.0), 1e-6).unwrap();
    assert!((r.lhs - 10.0).abs() < 1e-6, "{r}");
}

#[test]
fn identities_at_infinity() {
    for t in [(2, 1, 0), (2, 2, 1), (2, 2, 2)] {
        for id in Identity::ALL {
            assert_pass(&check_identity(id, &e(t.0, t.1, t.2, 2), Exponent::Infinity, 1e-6).unwrap());
        }
    }
}

#[test]
fn identity_monte_carlo() {
    let params = e(2, 1, 0, 8);
    let batch = mcmc_sample(&params, fin(4.0), &Budget::new(4, 250_000, 5_000, 1), 3).unwrap();
    for id in Identity::ALL {
        let r = check_identity_mc(id, &params, fin(4.0), &batch).unwrap();
        assert_eq!(r.method, Method::Mc);
        assert!(r.sigma > 0.0);
        assert_pass(&r);
    }
    assert!(check_identity_mc(Identity::SecondMoment, &params, Exponent::Infinity, &batch).is_err());
}

#[test]
fn identities_need_a2() {
    assert!(check_identity(Identity::SecondMoment, &e(1, 2, 0, 2), fin(2.0), 1e-6).is_err());
}

#[test]
fn int_by_parts_examples() {
    assert_pass(&check_int_by_parts(&e(2, 1, 0, 2), fin(2.0), 2.0, TestFunction::One, 1e-5).unwrap());
    assert_pass(&check_int_by_parts(&e(1, 2, 0, 2), fin(2.0), 2.0, TestFunction::One, 1e-5).unwrap());
    assert_pass(&check_int_by_parts(&e(1, 2, 0, 3), fin(3.0), 3.0, TestFunction::Norm2Sq, 1e-5).unwrap());
    // one coordinate: the Gamma recurrence
    for p in [1.0, 2.5, 6.0] {
        let r = check_int_by_parts(&e(2, 1, 3, 1), fin(p), 2.0, TestFunction::One, 1e-9).unwrap();
        assert_pass(&r);
    }
}

#[test]
fn homogeneous_moment() {
    for p in [fin(1.0), fin(3.0), Exponent::Infinity] {
        assert_pass(&check_homogeneous_moment(&e(2, 2, 1, 2), p, 2.0, 1e-6).unwrap());
    }
}

#[test]
fn hermitian_split_examples() {
    assert_pass(&check_hermitian_split(2, fin(2.0), 2.0, 1e-5).unwrap());
    assert_pass(&check_hermitian_split(3, fin(2.0), 2.0, 1e-4).unwrap());
    assert_pass(&check_hermitian_split(2, Exponent::Infinity, 4.0, 1e-5).unwrap());
    assert!(check_hermitian_split(1, fin(2.0), 2.0, 1e-5).is_err());
}

#[test]
fn zeta_examples() {
    assert_eq!(zeta_bounds(2, 2.0), (1.0, 1.0));
    assert_eq!(zeta_bounds(2, 4.0), (1.0, 1.5));
    assert_eq!(zeta_bounds(1, 2.0).0, 0.5);
    for (a, xi) in [(2, 2.0), (2, 4.0), (1, 2.0), (3, 1.0)] {
        assert_pass(&check_zeta_bounds(a, xi, 1_000_000, 9).unwrap());
    }
}

#[test]
fn holder_examples() {
    assert_pass(&check_holder_band(3.0, 10, 10_000, 4).unwrap());
    assert_pass(&check_holder_band(1.0, 5, 10_000, 4).unwrap());
}

#[test]
fn gamma_grid() {
    let (reports, summary) = check_gamma_grid(30).unwrap();
    for r in &reports {
        assert_pass(r);
    }
    assert!(summary.min_gap > 0.0);
    assert!(summary.points > 100);
    assert_pass(&check_gamma_functional_equation(10_000, 1).unwrap());
}

#[test]
fn entry_identities_all_fields() {
    for field in [Field::R, Field::C, Field::H] {
        let r = check_entry_identities(field, &[2, 3, 4, 5, 6, 7, 8], 200, 5).unwrap();
        assert_eq!(r.len(), if field == Field::H { 3 } else { 4 });
        r.iter().for_each(assert_pass);
    }
}

#[test]
fn antisym_structure_examples() {
    for n in [4, 5] {
        let r = check_antisym_structure(n, 100, 2).unwrap();
        assert_pass(&r);
    }
}

#[test]
fn antisym_normalization_example() {
    let r = check_antisym_normalization(4, fin(3.0), &Budget::new(4, 5_000, 500, 1), 1).unwrap();
    assert_pass(&r);
    // the alternative dimension n² is rejected by the same samples
    assert!(r.details["deviation_sigmas_with_n_squared"] > 10.0);
}

#[test]
fn entry_correlations_p2() {
    let r = check_entry_correlations(Field::C, 3, fin(2.0), &Budget::new(4, 4_000, 400, 1), 2).unwrap();
    assert!(r.iter().any(|c| c.claim_id == "entries.quartic_term_zero_p2"));
    r.iter().for_each(assert_pass);
}

#[test]
fn entry_correlations_inf() {
    let r = check_entry_correlations(Field::R, 4, Exponent::Infinity, &Budget::new(4, 10_000, 500, 1), 8).unwrap();
    let neg = r.iter().find(|c| c.claim_id == "entries.negative_correlation").unwrap();
    assert!(neg.details["c4_gas"] < 2.0);
    assert!(neg.details["sigma_sq"] < 4.0);
    r.iter().for_each(assert_pass);
}

#[test]
fn negative_correlation_gas() {
    let b = Budget::new(4, 50_000, 2_000, 1);
    for t in [(2, 1, 0), (2, 2, 1)] {
        for r in check_neg_correlation_threshold(&e(t.0, t.1, t.2, 4), &b, 3).unwrap() {
            assert_pass(&r);
        }
    }
}

#[test]
fn ratio_reference_p2() {
    let r = check_ratio_reference(&e(2, 1, 0, 16), fin(2.0), &Budget::new(1, 100_000, 0, 1), 5).unwrap();
    assert_eq!(r.len(), 1);
    assert_pass(&r[0]);
    assert!(check_ratio_reference(&e(2, 1, 0, 4), fin(3.0), &Budget::new(1, 10, 0, 1), 5).is_err());
}

#[test]
fn cube_variance_trend() {
    for r in check_cube_var_trend(1, (8, 16), &Budget::new(4, 50_000, 2_000, 1), 6).unwrap() {
        assert_pass(&r);
        if let Some(exact) = r.details.get("closed_form") {
            assert!((r.lhs - exact).abs() < 4.0 * r.sigma, "{r}");
        }
    }
}

#[test]
fn sigma_band_small() {
    assert_pass(&check_sigma_band(Field::R, 3, &Budget::new(4, 500, 100, 1), 1).unwrap());
    assert!(check_sigma_band(Field::R, 9, &Budget::new(1, 10, 0, 1), 1).is_err());
}

#[test]
fn orders_and_variance_band() {
    let g = grid_moments(&e(2, 1, 0, 4), fin(8.0), &Budget::new(4, 10_000, 1_000, 1), 2).unwrap();
    check_orders_of_magnitude(&g).iter().for_each(assert_pass);
    assert_pass(&check_variance_band(&g));
}

#[test]
fn isotropic_limit_constant() {
    let limit = 1.0 / (std::f64::consts::PI * 1.5f64.exp()).sqrt();
    assert!((ISOTROPIC_LIMIT - limit).abs() < 1e-15);
    // volume radius at n = 1 over R is (1/2)√(2πe^{3/2})
    let vr = saint_raymond_volume_radius(Field::R, 1).unwrap();
    assert!((vr - 0.5 * (2.0 * std::f64::consts::PI * 1.5f64.exp()).sqrt()).abs() < 1e-15);
    assert!((isotropic_constant(4.0, 4, 2.0) - 0.5).abs() < 1e-15);
    for field in [Field::R, Field::C] {
        let r = check_isotropic_constant_limit(field, 16, &Budget::new(4, 20_000, 2_000, 1), 4).unwrap();
        assert_pass(&r);
    }
}

#[test]
fn euclidean_ball_volume_normalization() {
    // at p = 2 the ball is Euclidean of dimension d = 9: E|x|²/d on the
    // unit-volume ball is ω_9^{-2/9}/11
    let r = check_volume_normalized_moment(Field::R, 3, fin(2.0)).unwrap();
    let ln_omega = 4.5 * std::f64::consts::PI.ln() - ln_gamma(5.5);
    let want = (-2.0 * ln_omega / 9.0).exp() / 11.0;
    assert!((r.lhs - want).abs() < 1e-8 * want, "{r} vs {want}");
}

#[test]
fn volume_normalized_moment_band() {
    for field in [Field::R, Field::C] {
        for n in [2, 3] {
            for p in [fin(1.0), fin(2.0), fin(8.0), Exponent::Infinity] {
                assert_pass(&check_volume_normalized_moment(field, n, p).unwrap());
            }
        }
    }
}

#[test]
fn suite_names_round_trip() {
    for name in ["all", "identities", "gamma", "entries", "thinshell", "negcorr", "hermitian-split"] {
        let s: Suite = name.parse().unwrap();
        assert_eq!(s.to_string(), name);
    }
    assert!("bogus".parse::<Suite>().is_err());
}

#[test]
fn suite_runs_and_is_deterministic() {
    let cfg = SuiteConfig { n: 2, p: fin(2.0), ensemble: Some((2, 1, 0)), seed: 3, budget_scale: 0.1 };
    let a = run_suite(Suite::Identities, &cfg).unwrap();
    assert!(!a.is_empty());
    a.iter().for_each(assert_pass);
    let ids: Vec<&str> = a.iter().map(|r| r.claim_id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let json = |v: &[CheckReport]| serde_json::to_string(v).unwrap();
    let b = run_suite(Suite::Entries, &cfg).unwrap();
    assert_eq!(json(&b), json(&run_suite(Suite::Entries, &cfg).unwrap()));
}

#[test]
fn report_relations() {
    let mk = |lhs, rhs, tol, rel| {
        CheckReport::new("x", "", String::new(), lhs, rhs, 1.0, tol, rel, Method::Mc, Reference::Inequality)
    };
    assert!(mk(1.0, 4.0, 3.0, Relation::Less).pass);
    assert!(!mk(1.0, 3.9, 3.0, Relation::Less).pass);
    assert!(mk(4.0, 1.0, 3.0, Relation::Greater).pass);
    assert!(mk(1.0, 1.5, 0.5, Relation::Equal).pass);
    assert!(!mk(f64::NAN, 1.0, 1.0, Relation::Equal).pass);
    assert!(mk(0.2, 1.0, 0.0, Relation::Band { lo: 0.1, hi: 10.0 }).pass);
    let r = mk(1.0, 4.0, 3.0, Relation::Less).require(false, "hypothesis");
    assert!(!r.pass && r.note.contains("hypothesis"));
    assert!(r.to_string().starts_with("FAIL x"));
    let back: CheckReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

proptest! {
    #[test]
    fn zeta_sandwich(u in -5.0f64..5.0, v in -5.0f64..5.0, a in 1u32..5, xi in 0.5f64..6.0) {
        prop_assume!((u.powi(a as i32) - v.powi(a as i32)).abs() > 1e-6);
        let (lo, hi) = zeta_bounds(a, xi);
        let f = |x: f64| x.abs().powf(xi) * x.powi(a as i32);
        let mid = (f(u) - f(v)) / (u.powi(a as i32) - v.powi(a as i32));
        let base = u.abs().powf(xi) + v.abs().powf(xi);
        prop_assert!(mid >= lo * base * (1.0 - 1e-9) - 1e-12);
        prop_assert!(mid <= hi * base * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn gamma_recurrence(x in 0.01f64..200.0) {
        let d = ln_gamma(x + 1.0) - ln_gamma(x);
        prop_assert!((d - x.ln()).abs() <= 1e-12 * x.ln().abs().max(1.0));
    }
}

#[test]
fn orthonormal_coords_preserve_norm() {
    use schatten_core::matrix::MatrixSample;
    use schatten_core::{SchattenSpec, Subspace};
    for (field, sub) in [
        (Field::R, Subspace::SelfAdjoint),
        (Field::C, Subspace::SelfAdjoint),
        (Field::C, Subspace::ComplexSymmetric),
        (Field::C, Subspace::AntiSymHermitian),
        (Field::H, Subspace::Full),
    ] {
        let spec = SchattenSpec::new(field, sub, 4, fin(2.0)).unwrap();
        let hr = schatten_core::samplers::matrix_hit_and_run(&spec, &Budget::new(1, 20, 0, 1), 3).unwrap();
        for t in &hr.samples {
            let u = orthonormal_coords(sub, t);
            let hs: f64 = u.iter().map(|v| v * v).sum();
            assert!((hs - MatrixSample::frobenius_sq(t)).abs() < 1e-12, "{field:?} {sub:?}");
        }
    }
}

#[test]
fn isotropy_of_euclidean_subspace_ball() {
    // at p = 2 the ball in any subspace is Euclidean, so the covariance is
    // a multiple of the identity up to noise
    use schatten_core::{SchattenSpec, Subspace};
    let spec = SchattenSpec::new(Field::C, Subspace::ComplexSymmetric, 3, fin(2.0)).unwrap();
    let m = measure_isotropy(&spec, &Budget::new(4, 20_000, 2_000, 1), 5).unwrap();
    assert!(m.max_off_diagonal < 6.0 * m.noise_scale, "{m:?}");
    assert!(m.diagonal_spread < 12.0 * m.noise_scale, "{m:?}");
}
