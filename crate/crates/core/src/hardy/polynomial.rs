use num_complex::Complex64;

use super::HardyError;
use crate::numerics::{eigenvalues, DenseOperator, Scalar};

const ZERO: Scalar = Complex64::new(0.0, 0.0);

/// Largest supported degree.
pub const MAX_DEGREE: usize = 64;

/// Polynomial symbol `a_0 + a_1 z + ... + a_d z^d`.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically constant.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPolynomial {
    coeffs: Vec<Scalar>,
}

impl AnalyticPolynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Result<Self, HardyError> {
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(HardyError::NonFiniteCoefficient);
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        if coeffs.len() - 1 > MAX_DEGREE {
            return Err(HardyError::DegreeTooLarge {
                degree: coeffs.len() - 1,
                max: MAX_DEGREE,
            });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, HardyError> {
        Self::new(coeffs.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c]).expect("finite constant")
    }

    /// The identity symbol `z`.
    pub fn z() -> Self {
        Self::from_real(&[0.0, 1.0]).expect("valid")
    }

    /// `c + z`, the symbol of the adjoint of `conj(c)·I + backward shift`.
    pub fn shifted_identity(c: Scalar) -> Self {
        Self::new(vec![c, Scalar::new(1.0, 0.0)]).expect("finite")
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Taylor coefficient `a_k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(ZERO, |acc, a| acc * z + a)
    }

    pub fn derivative_eval(&self, z: Scalar) -> Scalar {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(ZERO, |acc, (k, a)| acc * z + a * k as f64)
    }

    /// `self - c`.
    pub fn sub_constant(&self, c: Scalar) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] -= c;
        Self::new(coeffs).expect("finite")
    }

    pub fn add_constant(&self, c: Scalar) -> Self {
        self.sub_constant(-c)
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect()).expect("finite")
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HardyError> {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Monic polynomial with the given roots, scaled by `lead`.
    pub fn from_roots(lead: Scalar, roots: &[Scalar]) -> Result<Self, HardyError> {
        let mut coeffs = vec![lead];
        for r in roots {
            let mut next = vec![ZERO; coeffs.len() + 1];
            for (k, a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    /// All `degree()` roots via companion-matrix eigenvalues followed by a
    /// few Newton polishing steps.
    pub fn roots(&self) -> Result<Vec<Scalar>, HardyError> {
        if self.is_constant() {
            return Err(HardyError::ConstantPolynomial);
        }
        let d = self.degree();
        let lead = self.coeffs[d];
        let companion = DenseOperator::from_fn(d, |i, j| {
            if i == 0 {
                -self.coeffs[d - 1 - j] / lead
            } else if j + 1 == i {
                Scalar::new(1.0, 0.0)
            } else {
                ZERO
            }
        })?;
        let mut roots = eigenvalues(&companion)?;
        for r in roots.iter_mut() {
            *r = self.polish(*r);
        }
        Ok(roots)
    }

    fn polish(&self, mut z: Scalar) -> Scalar {
        let mut residual = self.eval(z).norm();
        for _ in 0..4 {
            let dp = self.derivative_eval(z);
            if dp == ZERO {
                break;
            }
            let candidate = z - self.eval(z) / dp;
            let r = self.eval(candidate).norm();
            if r < residual {
                z = candidate;
                residual = r;
            } else {
                break;
            }
        }
        z
    }
}
