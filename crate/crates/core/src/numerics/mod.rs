//! Dense complex linear algebra used by every other module.
//!
//! Matrices are small (N up to a few hundred) and dense, so everything here is
//! plain row-major storage with in-house decompositions. Each row of a
//! [`DenseOperator`] remembers the column range holding its nonzeros, which
//! keeps orbit iteration over banded and block-diagonal operators cheap
//! without a separate sparse type.

mod eigen;
mod lu;
mod matrix;
mod svd;

pub use eigen::{eigenvalues, eigenvalues_with, EigenConfig};
pub use lu::{invert, invert_with, InvertConfig};
pub use matrix::{DenseOperator, StateVector};
pub use svd::{singular_values, svd, Svd};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Scalar = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix dimension must be positive")]
    EmptyDimension,
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("operator is numerically singular: {reason}")]
    SingularOperator { reason: String },
    #[error("{routine} failed to converge after {iterations} iterations")]
    ConvergenceFailure { routine: &'static str, iterations: usize },
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    TooLarge { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, NumericsError>;

/// Conjugate transpose.
pub fn adjoint(t: &DenseOperator) -> DenseOperator {
    t.adjoint()
}

pub fn apply(t: &DenseOperator, x: &StateVector) -> Result<StateVector> {
    t.apply(x)
}

/// Largest singular value (the ℓ² operator norm).
pub fn operator_norm(t: &DenseOperator) -> f64 {
    // Jacobi SVD converges for every finite input in practice; if it ever
    // stalls, fall back to the Frobenius bound rather than failing.
    singular_values(t)
        .ok()
        .and_then(|s| s.first().copied())
        .unwrap_or_else(|| t.frobenius_norm())
}

/// Euclidean norm of a complex slice with scaling, so entries near the
/// overflow threshold do not turn the sum of squares into infinity.
pub(crate) fn scaled_norm(values: &[Scalar]) -> f64 {
    let mut scale = 0.0_f64;
    let mut ssq = 1.0_f64;
    for v in values {
        for part in [v.re, v.im] {
            if part != 0.0 {
                let a = part.abs();
                if scale < a {
                    ssq = 1.0 + ssq * (scale / a) * (scale / a);
                    scale = a;
                } else {
                    ssq += (a / scale) * (a / scale);
                }
            }
        }
    }
    scale * ssq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn adjoint_of_nilpotent_is_transpose() {
        let t = DenseOperator::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let expected = DenseOperator::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&t), expected);
    }

    #[test]
    fn adjoint_conjugates() {
        let t = DenseOperator::from_rows(&[vec![c(0.0, 1.0), c(0.0, 0.0)], vec![c(0.0, 0.0); 2]])
            .unwrap();
        assert_eq!(adjoint(&t).get(0, 0), c(0.0, -1.0));
        assert_eq!(adjoint(&DenseOperator::identity(3)), DenseOperator::identity(3));
    }

    #[test]
    fn operator_norm_examples() {
        assert!((operator_norm(&DenseOperator::identity(5)) - 1.0).abs() < 1e-14);
        assert!((operator_norm(&DenseOperator::identity(3).scale(c(2.0, 0.0))) - 2.0).abs() < 1e-14);
        let eps = 0.3;
        let t = DenseOperator::from_real_rows(&[vec![0.0, 2.0 * eps], vec![0.0, 0.0]]).unwrap();
        assert!((operator_norm(&t) - 0.6).abs() < 1e-14);
    }

    #[test]
    fn apply_examples() {
        let eps = 0.1;
        let t = DenseOperator::from_real_rows(&[vec![0.0, 2.0 * eps], vec![0.0, 0.0]]).unwrap();
        let y = apply(&t, &StateVector::from_real(&[1.0, 1.0]).unwrap()).unwrap();
        assert!((y[0] - c(0.2, 0.0)).norm() < 1e-15);
        assert_eq!(y[1], c(0.0, 0.0));

        let bad = StateVector::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            apply(&t, &bad),
            Err(NumericsError::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn scaled_norm_survives_huge_entries() {
        let v = vec![c(1e200, 0.0), c(0.0, 1e200)];
        let n = scaled_norm(&v);
        assert!(n.is_finite());
        assert!((n / 1e200 - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(scaled_norm(&[]), 0.0);
    }
}
