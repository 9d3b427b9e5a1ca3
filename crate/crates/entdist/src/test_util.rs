//! Shared helpers for unit tests.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matcore::ComplexMatrix;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "expected {expected}, got {actual} (tol {tol})"
    );
}

pub fn assert_matrix_close(actual: &ComplexMatrix, expected: &ComplexMatrix, tol: f64) {
    assert_eq!(actual.dim(), expected.dim(), "matrix dimensions differ");
    for i in 0..actual.dim() {
        for j in 0..actual.dim() {
            let d = (actual.get(i, j) - expected.get(i, j)).norm();
            assert!(
                d <= tol,
                "entry ({i}, {j}): expected {}, got {} (|diff| = {d:.3e}, tol {tol})",
                expected.get(i, j),
                actual.get(i, j)
            );
        }
    }
}

pub fn assert_vec_close(actual: &[f64], expected: &[f64], tol: f64) {
    assert_eq!(actual.len(), expected.len(), "vector lengths differ");
    for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
        assert!(
            (a - e).abs() <= tol,
            "element {i}: expected {e}, got {a} (tol {tol})"
        );
    }
}
