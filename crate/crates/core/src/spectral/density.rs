use super::quadrature::{QuadratureGrid, DEFAULT_ORDER};
use super::SpectralError;
use crate::hardy::AnalyticPolynomial;
use crate::numerics::Scalar;

/// `f(x) = |ln x| / x` for `x > 0`.
pub fn base_density(x: f64) -> f64 {
    x.ln().abs() / x
}

/// Push-forward of `f(x) dx` on `[a, b]` under `x ↦ xⁿ`:
/// `f_n(t) = (1/n) f(t^{1/n}) t^{1/n − 1}` on `[aⁿ, bⁿ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityFamily {
    pub a: f64,
    pub b: f64,
    pub n: u32,
}

impl DensityFamily {
    pub fn new(a: f64, b: f64, n: u32) -> Result<Self, SpectralError> {
        if !(0.0 < a && a < 1.0 && 1.0 < b && b.is_finite() && (a * b - 1.0).abs() <= 1e-12) || n == 0 {
            return Err(SpectralError::InvalidFamily { a, b, n });
        }
        Ok(Self { a, b, n })
    }

    /// `[aⁿ, bⁿ]`.
    pub fn support(&self) -> (f64, f64) {
        (self.a.powi(self.n as i32), self.b.powi(self.n as i32))
    }

    /// `count` log-spaced points strictly inside the support.
    pub fn interior_log_grid(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.support();
        let (llo, lhi) = (lo.ln(), hi.ln());
        (1..=count)
            .map(|k| (llo + (lhi - llo) * k as f64 / (count + 1) as f64).exp())
            .collect()
    }
}

pub fn density_fn(t: f64, family: &DensityFamily) -> Result<f64, SpectralError> {
    if !(t > 0.0) {
        return Err(SpectralError::NonpositiveArgument(t));
    }
    let (lo, hi) = family.support();
    if t < lo || t > hi {
        return Ok(0.0);
    }
    let inv_n = 1.0 / family.n as f64;
    let root = t.powf(inv_n);
    Ok(inv_n * base_density(root) * t.powf(inv_n - 1.0))
}

/// Largest `|t² f_n(t) − f_n(1/t)|` over the given points.
pub fn check_density_reciprocal_identity(family: &DensityFamily, points: &[f64]) -> Result<f64, SpectralError> {
    points.iter().try_fold(0.0_f64, |worst, &t| {
        let lhs = t * t * density_fn(t, family)?;
        let rhs = density_fn(1.0 / t, family)?;
        Ok(worst.max((lhs - rhs).abs()))
    })
}

/// The two sides of the orbit-norm transfer identity and their defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralIdentityReport {
    /// `∫ x² |g(x)|² f_n(x) dx`
    pub forward: f64,
    /// `∫ x^{−2} |g(1/x)|² f_n(x) dx`
    pub reciprocal: f64,
    pub relative_defect: f64,
    pub panels: usize,
}

/// Evaluates both integrals over `[aⁿ, bⁿ]` on a fixed grid.
pub fn check_theorem6_integral_identity(
    g: &AnalyticPolynomial,
    family: &DensityFamily,
    grid: &QuadratureGrid,
) -> Result<IntegralIdentityReport, SpectralError> {
    let dens = |x: f64| density_fn(x, family).unwrap_or(0.0);
    let gx = |x: f64| g.eval(Scalar::new(x, 0.0)).norm_sqr();
    let forward = grid.integrate(|x| x * x * gx(x) * dens(x));
    let reciprocal = grid.integrate(|x| gx(1.0 / x) * dens(x) / (x * x));
    let scale = forward.max(reciprocal);
    if scale < 1e-300 {
        return Err(SpectralError::DegenerateIntegral);
    }
    Ok(IntegralIdentityReport {
        forward,
        reciprocal,
        relative_defect: (forward - reciprocal).abs() / scale,
        panels: grid.panels,
    })
}

/// Panel doubling for [`check_theorem6_integral_identity_refined`].
#[derive(Debug, Clone, Copy)]
pub struct RefinementConfig {
    pub initial_panels: usize,
    pub max_panels: usize,
    pub order: usize,
    /// Stop once two successive defects agree to this relative tolerance.
    pub agreement: f64,
    /// Defect differences below this count as agreement (roundoff floor).
    pub absolute_floor: f64,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        Self {
            initial_panels: 16,
            max_panels: 1 << 14,
            order: DEFAULT_ORDER,
            agreement: 1e-2,
            absolute_floor: 1e-14,
        }
    }
}

/// Composite Gauss-Legendre with the support split at `x = 1` (the kink of
/// `|ln x|`), doubling panels until successive defects agree.
pub fn check_theorem6_integral_identity_refined(
    g: &AnalyticPolynomial,
    family: &DensityFamily,
    config: &RefinementConfig,
) -> Result<IntegralIdentityReport, SpectralError> {
    let (lo, hi) = family.support();
    let breaks = [1.0];
    let mut grid = QuadratureGrid::composite_gauss_legendre(lo, hi, config.initial_panels, config.order, &breaks);
    let mut previous = check_theorem6_integral_identity(g, family, &grid)?;
    while grid.panels < config.max_panels {
        grid = grid.refined(&breaks);
        let current = check_theorem6_integral_identity(g, family, &grid)?;
        let diff = (current.relative_defect - previous.relative_defect).abs();
        let settled = diff <= config.agreement * current.relative_defect.abs() || diff <= config.absolute_floor;
        previous = current;
        if settled {
            break;
        }
    }
    Ok(previous)
}
