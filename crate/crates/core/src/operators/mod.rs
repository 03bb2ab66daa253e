//! Constructors for the concrete operator families: weighted backward
//! shifts, block perturbations `λI + K_ε`, truncated Hardy-space
//! multiplication operators and the discretized Lebesgue operator.

mod block;
mod lebesgue;
mod rules;
mod star;

pub use block::{block_inverse_closed_form, make_block_perturbation, BlockPerturbationSpec, DEFAULT_DIM_CAP};
pub use lebesgue::{make_lebesgue_operator, LebesgueDiscretizationSpec, LebesgueOperator};
pub use rules::{BlockSizeRule, SequenceRule};
pub use star::{star_number, StarNumber};

use num_complex::Complex64;
use thiserror::Error;

use crate::hardy::AnalyticPolynomial;
use crate::numerics::{DenseOperator, NumericsError, Scalar, StateVector};

const ZERO: Scalar = Complex64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid block perturbation: {0}")]
    InvalidBlocks(String),
    #[error("total dimension {total} exceeds cap {cap}")]
    DimensionCap { total: usize, cap: usize },
    #[error("block is singular: lambda equals epsilon")]
    SingularBlock,
    #[error("symbol degree {degree} must be below truncation dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error("point {0} is outside the open unit disk")]
    OutsideDisk(Scalar),
    #[error("grid size {0} must be even and positive")]
    OddGrid(usize),
    #[error("invalid interval [{a}, {b}]: need 0 < a < 1 < b and a·b = 1")]
    InvalidInterval { a: f64, b: f64 },
    #[error("unrecognized rule {0:?}")]
    InvalidRule(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Backward shift `S_ω e_n = ω_n e_{n−1}` truncated to `dim` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedShiftSpec {
    pub dim: usize,
    /// `ω_1 … ω_{dim−1}`.
    pub weights: Vec<Scalar>,
}

impl WeightedShiftSpec {
    pub fn new(dim: usize, weights: Vec<Scalar>) -> Self {
        Self { dim, weights }
    }

    pub fn from_rule(dim: usize, rule: SequenceRule) -> Self {
        let weights = (1..dim).map(|n| Scalar::new(rule.value(n), 0.0)).collect();
        Self { dim, weights }
    }

    pub fn unweighted(dim: usize) -> Self {
        Self::from_rule(dim, SequenceRule::Const(1.0))
    }

    fn validate(&self) -> Result<(), OperatorError> {
        if self.dim == 0 {
            return Err(OperatorError::Numerics(NumericsError::EmptyDimension));
        }
        if self.weights.len() + 1 != self.dim {
            return Err(OperatorError::InvalidWeights(format!(
                "expected {} weights for dimension {}, got {}",
                self.dim - 1,
                self.dim,
                self.weights.len()
            )));
        }
        if let Some(n) = self
            .weights
            .iter()
            .position(|w| w.norm() == 0.0 || !w.norm().is_finite())
        {
            return Err(OperatorError::InvalidWeights(format!(
                "weight ω_{} = {} must be nonzero and finite",
                n + 1,
                self.weights[n]
            )));
        }
        Ok(())
    }
}

/// Superdiagonal matrix with `M[n−1][n] = ω_n`.
pub fn make_weighted_backward_shift(spec: &WeightedShiftSpec) -> Result<DenseOperator, OperatorError> {
    spec.validate()?;
    let n = spec.dim;
    let mut data = vec![ZERO; n * n];
    for (k, w) in spec.weights.iter().enumerate() {
        data[k * n + k + 1] = *w;
    }
    Ok(DenseOperator::from_row_major(n, data)?)
}

/// `λI + T`.
pub fn scalar_perturb(lambda: Scalar, t: &DenseOperator) -> DenseOperator {
    t.shift_diagonal(lambda)
}

/// Truncation of `M_φ g = φg` to `span{1, z, …, z^{N−1}}`: lower-triangular
/// Toeplitz with `M[i][j] = a_{i−j}`. Its adjoint is the truncated `M_φ*`.
pub fn make_multiplication_truncation(phi: &AnalyticPolynomial, dim: usize) -> Result<DenseOperator, OperatorError> {
    if dim == 0 {
        return Err(OperatorError::Numerics(NumericsError::EmptyDimension));
    }
    if phi.degree() >= dim {
        return Err(OperatorError::DegreeTooLarge {
            degree: phi.degree(),
            dim,
        });
    }
    Ok(DenseOperator::from_fn(dim, |i, j| if i >= j { phi.coeff(i - j) } else { ZERO })?)
}

/// Truncated reproducing kernel `f_z(s) = 1/(1 − z̄s)`: coefficients `z̄^k`.
pub fn reproducing_kernel_vector(z: Scalar, dim: usize) -> Result<StateVector, OperatorError> {
    if z.norm() >= 1.0 {
        return Err(OperatorError::OutsideDisk(z));
    }
    let zc = z.conj();
    let mut entries = Vec::with_capacity(dim);
    let mut p = Scalar::new(1.0, 0.0);
    for _ in 0..dim {
        entries.push(p);
        p *= zc;
    }
    Ok(StateVector::new(entries)?)
}
