use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{BlockSizeRule, OperatorError, SequenceRule, ZERO};
use crate::numerics::{DenseOperator, Scalar, StateVector};

/// Default cap on the total dimension of a block perturbation.
pub const DEFAULT_DIM_CAP: usize = 2048;

/// Finite truncation of `λI + K_ε = ⊕_j ((λ − ε_j) I_j + S_j)` where `S_j`
/// carries `2ε_j` on its superdiagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPerturbationSpec {
    pub lambda: Scalar,
    pub block_count: usize,
    pub size_rule: BlockSizeRule,
    pub eps_rule: SequenceRule,
    /// Multiplier applied to every `ε_j`.
    pub eps_scale: f64,
    pub dim_cap: usize,
}

impl BlockPerturbationSpec {
    /// The family used throughout: block `j` has size `j` and
    /// `ε_j = j^{−1/2}`.
    pub fn standard(lambda: Scalar, block_count: usize) -> Self {
        Self {
            lambda,
            block_count,
            size_rule: BlockSizeRule::Index,
            eps_rule: SequenceRule::Pow(-0.5),
            eps_scale: 1.0,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn with_eps(mut self, rule: SequenceRule, scale: f64) -> Self {
        self.eps_rule = rule;
        self.eps_scale = scale;
        self
    }

    pub fn with_sizes(mut self, rule: BlockSizeRule) -> Self {
        self.size_rule = rule;
        self
    }

    pub fn sizes(&self) -> Vec<usize> {
        (1..=self.block_count).map(|j| self.size_rule.size(j)).collect()
    }

    /// `ε_1 … ε_J`.
    pub fn epsilons(&self) -> Vec<f64> {
        (1..=self.block_count)
            .map(|j| self.eps_scale * self.eps_rule.value(j))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.sizes().iter().sum()
    }

    /// Coordinate range of block `j` (1-based).
    pub fn block_range(&self, j: usize) -> Range<usize> {
        assert!(j >= 1 && j <= self.block_count, "block index out of range");
        let start: usize = (1..j).map(|k| self.size_rule.size(k)).sum();
        start..start + self.size_rule.size(j)
    }

    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        (1..=self.block_count).map(|j| self.block_range(j)).collect()
    }

    /// `f_j = (1/√n_j)(1, …, 1)` supported on block `j`.
    pub fn uniform_block_vector(&self, j: usize) -> StateVector {
        let range = self.block_range(j);
        let mut entries = vec![ZERO; self.total_dim()];
        let v = Scalar::new(1.0 / (range.len() as f64).sqrt(), 0.0);
        for e in &mut entries[range] {
            *e = v;
        }
        StateVector::new(entries).expect("finite")
    }

    /// The single block `(λ − ε_j) I + S_j` (1-based `j`).
    pub fn block(&self, j: usize) -> Result<DenseOperator, OperatorError> {
        let eps = self.eps_scale * self.eps_rule.value(j);
        Ok(single_block(self.size_rule.size(j), eps, self.lambda)?)
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        if self.block_count == 0 {
            return Err(OperatorError::InvalidBlocks("block count must be positive".into()));
        }
        if !(self.eps_scale.is_finite() && self.eps_scale > 0.0) {
            return Err(OperatorError::InvalidBlocks(format!(
                "eps scale {} must be positive",
                self.eps_scale
            )));
        }
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return Err(OperatorError::InvalidBlocks("lambda must be finite".into()));
        }
        let eps = self.epsilons();
        if let Some(j) = eps.iter().position(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(OperatorError::InvalidBlocks(format!(
                "ε_{} = {} must be positive",
                j + 1,
                eps[j]
            )));
        }
        if let Some(j) = eps.windows(2).position(|w| w[1] > w[0]) {
            return Err(OperatorError::InvalidBlocks(format!(
                "ε must be nonincreasing, but ε_{} < ε_{}",
                j + 1,
                j + 2
            )));
        }
        let total = self.total_dim();
        if total > self.dim_cap {
            return Err(OperatorError::DimensionCap {
                total,
                cap: self.dim_cap,
            });
        }
        Ok(())
    }
}

fn single_block(size: usize, eps: f64, lambda: Scalar) -> crate::numerics::Result<DenseOperator> {
    let diag = lambda - eps;
    let sup = Scalar::new(2.0 * eps, 0.0);
    DenseOperator::from_fn(size, |i, k| {
        if i == k {
            diag
        } else if k == i + 1 {
            sup
        } else {
            ZERO
        }
    })
}

/// Block-diagonal `⊕_j ((λ − ε_j) I + S_j)`.
pub fn make_block_perturbation(spec: &BlockPerturbationSpec) -> Result<DenseOperator, OperatorError> {
    spec.validate()?;
    let n = spec.total_dim();
    let mut data = vec![ZERO; n * n];
    for (range, eps) in spec.block_ranges().into_iter().zip(spec.epsilons()) {
        let diag = spec.lambda - eps;
        for i in range.clone() {
            data[i * n + i] = diag;
            if i + 1 < range.end {
                data[i * n + i + 1] = Scalar::new(2.0 * eps, 0.0);
            }
        }
    }
    Ok(DenseOperator::from_row_major(n, data)?)
}

/// Exact inverse of `(λ − ε) I + S` of the given size via the terminating
/// Neumann series: entry `(i, i + k)` is `(λ − ε)^{−1} (−2ε/(λ − ε))^k`.
pub fn block_inverse_closed_form(size: usize, eps: f64, lambda: Scalar) -> Result<DenseOperator, OperatorError> {
    let d = lambda - eps;
    if d.norm() == 0.0 {
        return Err(OperatorError::SingularBlock);
    }
    let inv_d = d.inv();
    let ratio = -2.0 * eps * inv_d;
    let mut powers = Vec::with_capacity(size);
    let mut p = inv_d;
    for _ in 0..size {
        powers.push(p);
        p *= ratio;
    }
    Ok(DenseOperator::from_fn(size, |i, k| if k >= i { powers[k - i] } else { ZERO })?)
}
