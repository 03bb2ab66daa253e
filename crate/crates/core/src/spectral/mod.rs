//! Polar decomposition, singular-value reciprocity between `T` and `T⁻¹`,
//! spectral-radius estimates, and the density identities behind the
//! orbit transfer between `T` and `T*⁻¹`.

mod density;
mod quadrature;

pub use density::{
    base_density, check_density_reciprocal_identity, check_theorem6_integral_identity,
    check_theorem6_integral_identity_refined, density_fn, DensityFamily, IntegralIdentityReport, RefinementConfig,
};
pub use quadrature::{gauss_legendre, QuadratureGrid, QuadratureScheme};

use thiserror::Error;

use crate::numerics::{eigenvalues, invert, operator_norm, singular_values, svd, DenseOperator, NumericsError, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("density argument must be positive, got {0}")]
    NonpositiveArgument(f64),
    #[error("both integrals vanish")]
    DegenerateIntegral,
    #[error("invalid density family a={a}, b={b}, n={n}")]
    InvalidFamily { a: f64, b: f64, n: u32 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Largest admissible `σ_max/σ_min` for [`polar_decompose`].
pub const MAX_CONDITION: f64 = 1e12;

/// `T = U P` with `U` unitary and `P = (T*T)^{1/2}`.
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub u: DenseOperator,
    pub p: DenseOperator,
}

/// From one SVD `T = W Σ V*`: `U = W V*`, `P = V Σ V*`.
pub fn polar_decompose(t: &DenseOperator) -> Result<PolarDecomposition, SpectralError> {
    let s = svd(t)?;
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let smin = s.sigma.last().copied().unwrap_or(0.0);
    if smin == 0.0 || smax / smin > MAX_CONDITION {
        return Err(NumericsError::SingularOperator {
            reason: format!("singular values span [{smin:e}, {smax:e}]"),
        }
        .into());
    }
    let vstar = s.v.adjoint();
    let u = s.u.matmul(&vstar)?;
    let sig: Vec<Scalar> = s.sigma.iter().map(|&x| Scalar::new(x, 0.0)).collect();
    let p = s.v.matmul(&DenseOperator::diagonal(&sig)?)?.matmul(&vstar)?;
    Ok(PolarDecomposition { u, p })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReciprocityReport {
    pub holds: bool,
    pub max_relative_defect: f64,
    /// Singular values of `T`, descending.
    pub sigma: Vec<f64>,
    /// Singular values of `T⁻¹`, descending.
    pub sigma_inverse: Vec<f64>,
}

/// Compares the singular values of `T⁻¹` with the reciprocals of those of
/// `T` taken in reverse order.
pub fn check_singular_reciprocity(t: &DenseOperator, tol: f64) -> Result<ReciprocityReport, SpectralError> {
    let inv = invert(t)?;
    let sigma = singular_values(t)?;
    let sigma_inverse = singular_values(&inv)?;
    let max_relative_defect = sigma
        .iter()
        .rev()
        .zip(&sigma_inverse)
        .map(|(s, si)| {
            let r = 1.0 / s;
            (si - r).abs() / r
        })
        .fold(0.0, f64::max);
    Ok(ReciprocityReport {
        holds: max_relative_defect <= tol,
        max_relative_defect,
        sigma,
        sigma_inverse,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMode {
    /// Largest eigenvalue modulus.
    Eigen,
    /// `‖T^n‖^{1/n}`.
    Gelfand(u32),
}

pub fn spectral_radius_estimate(t: &DenseOperator, mode: RadiusMode) -> Result<f64, SpectralError> {
    match mode {
        RadiusMode::Eigen => Ok(eigenvalues(t)?.iter().map(|z| z.norm()).fold(0.0, f64::max)),
        RadiusMode::Gelfand(n) => Ok(gelfand(t, n.max(1))),
    }
}

/// `‖T^n‖^{1/n}` by binary powering with rescaling so large powers neither
/// overflow nor underflow.
fn gelfand(t: &DenseOperator, n: u32) -> f64 {
    let rescale = |m: DenseOperator, log: &mut f64| -> DenseOperator {
        let s = m.max_abs();
        if s == 0.0 || !s.is_finite() {
            return m;
        }
        *log += s.ln();
        m.scale(Scalar::new(1.0 / s, 0.0))
    };
    let mut result_log = 0.0;
    let mut base_log = 0.0;
    let mut result = DenseOperator::identity(t.dim());
    let mut base = rescale(t.clone(), &mut base_log);
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            result = result.matmul(&base).expect("same dimension");
            result_log += base_log;
            result = rescale(result, &mut result_log);
        }
        k >>= 1;
        if k > 0 {
            base = base.matmul(&base).expect("same dimension");
            base_log *= 2.0;
            base = rescale(base, &mut base_log);
        }
    }
    let norm = operator_norm(&result);
    if norm == 0.0 {
        return 0.0;
    }
    ((norm.ln() + result_log) / n as f64).exp()
}
