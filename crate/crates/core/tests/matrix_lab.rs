use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schatten_core::matrix::{
    entry_identity_terms, schatten_norm, svd, symmetry_transform, MatrixSample, Transform,
};
use schatten_core::{Exponent, Field, Quaternion};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn frobenius_consistency_and_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for field in [Field::R, Field::C, Field::H] {
        for n in 1..=9 {
            let t = MatrixSample::gaussian(field, n, &mut rng);
            let s = svd(&t).unwrap().singular_values;
            assert_eq!(s.len(), n);
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
            assert!(s.iter().all(|v| *v >= 0.0));
            let f: f64 = s.iter().map(|v| v * v).sum();
            assert!(rel(f, t.frobenius_sq()) < 1e-10, "{field} {n}");
        }
    }
}

#[test]
fn quaternion_pairs_are_equal() {
    // each singular value of the complex adjoint appears twice
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = MatrixSample::gaussian(Field::H, 4, &mut rng);
    let s = svd(&t).unwrap().singular_values;
    let f: f64 = s.iter().map(|v| v * v).sum();
    assert!(rel(f, t.frobenius_sq()) < 1e-12);
}

#[test]
fn entry_identities_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for field in [Field::R, Field::C, Field::H] {
        for n in 2..=6 {
            for _ in 0..20 {
                let t = MatrixSample::gaussian(field, n, &mut rng);
                let e = entry_identity_terms(&t).unwrap();
                assert!(rel(e.sum_s4, e.fourth_power_rhs()) < 1e-9, "{field} {n}");
                assert!(rel(e.sum_s2s2, e.pair_rhs()) < 1e-9, "{field} {n}");
                assert!(e.quartic_cross_imag <= 1e-9 * e.pair_cross);
                if let Some(m) = e.minors {
                    assert!(rel(e.sum_s2s2, m) < 1e-9);
                }
            }
        }
    }
}

#[test]
fn transforms_preserve_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let units = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    for field in [Field::R, Field::C, Field::H] {
        let t = MatrixSample::gaussian(field, 4, &mut rng);
        let mut trs = vec![
            Transform::LeftPermutation(0, 2),
            Transform::RightPermutation(1, 3),
            Transform::LeftRotation(0.7),
            Transform::RightRotation(-1.3),
            Transform::ConjugateTranspose,
            Transform::RowSign(1),
        ];
        if field != Field::H {
            trs.push(Transform::Transpose);
        }
        for u in units.iter().take(field.beta() as usize) {
            trs.push(Transform::LeftUnit(*u));
            trs.push(Transform::RightUnit(*u));
        }
        for p in [Exponent::Finite(1.0), Exponent::Finite(3.0), Exponent::Infinity] {
            let base = schatten_norm(&t, p).unwrap();
            for tr in &trs {
                let v = schatten_norm(&symmetry_transform(&t, *tr), p).unwrap();
                assert!(rel(base, v) < 1e-12, "{field} {tr:?} {p}");
            }
        }
    }
}

#[test]
fn quaternion_transpose_changes_singular_values() {
    // transpose is not an anti-automorphism over H
    let mut t = MatrixSample::zeros(Field::H, 2);
    t.set(0, 0, Quaternion::ONE);
    t.set(0, 1, Quaternion::I);
    t.set(1, 0, Quaternion::J);
    t.set(1, 1, Quaternion::K);
    let a = svd(&t).unwrap().singular_values;
    let b = svd(&t.transpose()).unwrap().singular_values;
    println!("{a:?} {b:?}");
    assert!((a[0] - b[0]).abs() > 1e-3);
}
