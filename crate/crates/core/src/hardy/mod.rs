//! Polynomial symbols on the unit disk: root censuses, Cowen-Douglas
//! probing of `M_φ*`, and chaos classification of adjoint multipliers and
//! of scalar perturbations `λI + T`.

mod map;
mod polynomial;

pub use map::{chaos_parameter_map, ChaosMap, FamilyKind, LambdaGrid, MapFamily, MapVerdict};
pub use polynomial::{AnalyticPolynomial, MAX_DEGREE};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::DiagnosticsError;
use crate::numerics::{NumericsError, Scalar};
use crate::operators::{make_multiplication_truncation, reproducing_kernel_vector, OperatorError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    #[error("symbol is constant")]
    ConstantPolynomial,
    #[error("coefficient is not finite")]
    NonFiniteCoefficient,
    #[error("degree {degree} exceeds {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("point {0} is outside the open unit disk")]
    OutsideDisk(Scalar),
    #[error("a root lies within {tol:e} of the unit circle")]
    RootOnCircle { tol: f64 },
    #[error("symbol is not verified Cowen-Douglas")]
    NotCowenDouglas,
    #[error("range endpoint {endpoint} is within tolerance of 1")]
    BoundaryUncertain { endpoint: f64 },
    #[error("unknown operator family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Default distance to `|z| = 1` treated as "on the circle".
pub const CIRCLE_TOL: f64 = 1e-8;
/// Range endpoints this close to 1 are treated as exact tangency.
pub const TANGENCY_TOL: f64 = 1e-12;
/// Probe rings for the m-folder test.
pub const PROBE_RADII: [f64; 3] = [0.3, 0.6, 0.85];
pub const DEFAULT_PROBE_ANGLES: usize = 16;
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct RootCensus {
    pub inside_count: usize,
    pub on_circle_count: usize,
    pub outside_count: usize,
    pub roots: Vec<Scalar>,
}

/// Classifies every root by `|r| < radius − tol`, `||r| − radius| ≤ tol`,
/// or outside.
pub fn roots_in_disk(p: &AnalyticPolynomial, radius: f64, tol: f64) -> Result<RootCensus, HardyError> {
    let roots = p.roots()?;
    let mut census = RootCensus {
        inside_count: 0,
        on_circle_count: 0,
        outside_count: 0,
        roots,
    };
    for r in &census.roots {
        let m = r.norm();
        if (m - radius).abs() <= tol {
            census.on_circle_count += 1;
        } else if m < radius {
            census.inside_count += 1;
        } else {
            census.outside_count += 1;
        }
    }
    Ok(census)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdStatus {
    Yes,
    No,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdFailure {
    RootCountVaries,
    RootOnCircle,
    RoterNotOuter,
    ConstantSymbol,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CowenDouglasReport {
    pub is_cd: CdStatus,
    pub folder_m: Option<usize>,
    pub failure_reason: Option<CdFailure>,
    pub probes: usize,
}

/// Probe points: `z₀ = 0` and `angles` points on each ring of
/// [`PROBE_RADII`].
pub fn probe_points(angles: usize) -> Vec<Scalar> {
    let mut pts = vec![Scalar::new(0.0, 0.0)];
    for r in PROBE_RADII {
        for k in 0..angles {
            pts.push(Scalar::from_polar(r, 2.0 * PI * k as f64 / angles as f64));
        }
    }
    pts
}

/// For each probe `z₀`, factors `φ − φ(z₀)` into its roots inside the disk
/// and a cofactor holding the rest. Reports `yes` with `m` when the inside
/// count is constant and every cofactor is zero-free on the closed disk.
///
/// A `no` only means the sufficient condition was not verified.
pub fn is_cowen_douglas(phi: &AnalyticPolynomial, probe_angles: usize, tol: f64) -> Result<CowenDouglasReport, HardyError> {
    if phi.is_constant() {
        return Err(HardyError::ConstantPolynomial);
    }
    let probes = probe_points(probe_angles.max(1));
    let report = |is_cd, folder_m, failure_reason| CowenDouglasReport {
        is_cd,
        folder_m,
        failure_reason,
        probes: probes.len(),
    };
    let mut m: Option<usize> = None;
    let mut varies = false;
    for &z0 in &probes {
        let census = roots_in_disk(&phi.sub_constant(phi.eval(z0)), 1.0, tol)?;
        if census.on_circle_count > 0 {
            return Ok(report(CdStatus::Undetermined, None, Some(CdFailure::RootOnCircle)));
        }
        // Cofactor of the outside roots must not vanish on the closed disk.
        let outer_ok = census
            .roots
            .iter()
            .filter(|r| r.norm() > 1.0)
            .all(|r| r.norm() > 1.0 + tol);
        if !outer_ok {
            return Ok(report(CdStatus::No, None, Some(CdFailure::RoterNotOuter)));
        }
        match m {
            None => m = Some(census.inside_count),
            Some(prev) if prev != census.inside_count => varies = true,
            _ => {}
        }
    }
    if varies {
        return Ok(report(CdStatus::No, None, Some(CdFailure::RootCountVaries)));
    }
    match m {
        Some(m) if m >= 1 => Ok(report(CdStatus::Yes, Some(m), None)),
        _ => Ok(report(CdStatus::No, None, Some(CdFailure::RootCountVaries))),
    }
}

/// Number of roots of `φ − λ` strictly inside the disk, which is
/// `dim ker(M_φ* − λ̄)`.
pub fn kernel_dimension(phi: &AnalyticPolynomial, lambda: Scalar, tol: f64) -> Result<usize, HardyError> {
    if phi.is_constant() {
        return Err(HardyError::ConstantPolynomial);
    }
    let census = roots_in_disk(&phi.sub_constant(lambda), 1.0, tol)?;
    if census.on_circle_count > 0 {
        return Err(HardyError::RootOnCircle { tol });
    }
    Ok(census.inside_count)
}

/// `(inf, sup)` of `|φ|` over the open disk from boundary samples, with the
/// best samples refined by golden-section search in the angle.
///
/// `inf` is 0 when `φ` has a root strictly inside.
pub fn modulus_range_on_disk(phi: &AnalyticPolynomial, boundary_samples: usize) -> (f64, f64) {
    if phi.is_constant() {
        let c = phi.coeff(0).norm();
        return (c, c);
    }
    let n = boundary_samples.max(256);
    let modulus = |theta: f64| phi.eval(Scalar::from_polar(1.0, theta)).norm();
    let values: Vec<f64> = (0..n).map(|k| modulus(2.0 * PI * k as f64 / n as f64)).collect();
    let step = 2.0 * PI / n as f64;
    let local = |k: usize, better: fn(f64, f64) -> bool| {
        let prev = values[(k + n - 1) % n];
        let next = values[(k + 1) % n];
        !better(prev, values[k]) && !better(next, values[k])
    };
    let mut sup = values.iter().copied().fold(0.0, f64::max);
    let mut boundary_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    for k in 0..n {
        let theta = step * k as f64;
        if local(k, |a, b| a > b) {
            sup = sup.max(-golden_min(|t| -modulus(t), theta - step, theta + step));
        }
        if local(k, |a, b| a < b) {
            boundary_min = boundary_min.min(golden_min(modulus, theta - step, theta + step));
        }
    }
    let root_inside = phi
        .roots()
        .map(|rs| rs.iter().any(|r| r.norm() < 1.0))
        .unwrap_or(false);
    (if root_inside { 0.0 } else { boundary_min }, sup)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    fc.min(fd)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierChaosVerdict {
    pub chaotic_all_senses: bool,
    pub meets_circle: bool,
    pub inf_mod: f64,
    pub sup_mod: f64,
}

/// Signed distance of the range endpoints from the circle:
/// positive when `inf < 1 < sup`.
pub fn circle_margin(inf_mod: f64, sup_mod: f64) -> f64 {
    (1.0 - inf_mod).min(sup_mod - 1.0)
}

/// Whether `φ(𝔻)` meets the unit circle. The range is open, so an endpoint
/// equal to 1 (within [`TANGENCY_TOL`]) means no intersection. Endpoints
/// farther than that but within `tol` of 1 are refused.
pub fn classify_multiplier(phi: &AnalyticPolynomial, tol: f64) -> Result<MultiplierChaosVerdict, HardyError> {
    let cd = is_cowen_douglas(phi, DEFAULT_PROBE_ANGLES, CIRCLE_TOL)?;
    if cd.is_cd != CdStatus::Yes {
        return Err(HardyError::NotCowenDouglas);
    }
    let (inf_mod, sup_mod) = modulus_range_on_disk(phi, DEFAULT_BOUNDARY_SAMPLES);
    let meets_circle = range_meets_circle(inf_mod, sup_mod, tol)?;
    Ok(MultiplierChaosVerdict {
        chaotic_all_senses: meets_circle,
        meets_circle,
        inf_mod,
        sup_mod,
    })
}

pub(crate) fn range_meets_circle(inf_mod: f64, sup_mod: f64, tol: f64) -> Result<bool, HardyError> {
    if inf_mod > 1.0 + tol || sup_mod < 1.0 - tol {
        return Ok(false);
    }
    if (inf_mod - 1.0).abs() <= TANGENCY_TOL || (sup_mod - 1.0).abs() <= TANGENCY_TOL {
        return Ok(false);
    }
    for endpoint in [inf_mod, sup_mod] {
        if (endpoint - 1.0).abs() <= tol {
            return Err(HardyError::BoundaryUncertain { endpoint });
        }
    }
    Ok(inf_mod < 1.0 && sup_mod > 1.0)
}

/// `‖M_φ*^{(N)} f_z − conj(φ(z)) f_z‖ / ‖f_z‖` for the truncated kernel
/// vector `f_z`.
pub fn adjoint_eigen_residual(phi: &AnalyticPolynomial, z: Scalar, dim: usize) -> Result<f64, HardyError> {
    if z.norm() >= 1.0 {
        return Err(HardyError::OutsideDisk(z));
    }
    let adj = make_multiplication_truncation(phi, dim)?.adjoint();
    let f = reproducing_kernel_vector(z, dim)?;
    let lhs = adj.apply(&f)?;
    let rhs = f.scale(phi.eval(z).conj());
    Ok(lhs.sub(&rhs)?.norm() / f.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{make_weighted_backward_shift, scalar_perturb, WeightedShiftSpec};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> AnalyticPolynomial {
        AnalyticPolynomial::from_real(coeffs).unwrap()
    }

    #[test]
    fn root_census_examples() {
        let r = roots_in_disk(&poly(&[-0.25, 0.0, 1.0]), 1.0, CIRCLE_TOL).unwrap();
        assert_eq!((r.inside_count, r.on_circle_count), (2, 0));
        assert_eq!(roots_in_disk(&poly(&[-2.0, 1.0]), 1.0, CIRCLE_TOL).unwrap().inside_count, 0);
        assert_eq!(roots_in_disk(&poly(&[-1.0, 0.0, 1.0]), 1.0, CIRCLE_TOL).unwrap().on_circle_count, 2);
        assert!(matches!(roots_in_disk(&poly(&[3.0]), 1.0, 1e-8), Err(HardyError::ConstantPolynomial)));
    }

    #[test]
    fn cowen_douglas_examples() {
        let r = is_cowen_douglas(&poly(&[0.5, 1.0]), 16, CIRCLE_TOL).unwrap();
        assert_eq!((r.is_cd, r.folder_m), (CdStatus::Yes, Some(1)));
        assert_eq!(r.probes, 49);
        let r = is_cowen_douglas(&poly(&[0.0, 0.0, 1.0]), 16, CIRCLE_TOL).unwrap();
        assert_eq!((r.is_cd, r.folder_m), (CdStatus::Yes, Some(2)));
        assert!(matches!(is_cowen_douglas(&poly(&[3.0]), 16, 1e-8), Err(HardyError::ConstantPolynomial)));
    }

    #[test]
    fn cowen_douglas_rejects_varying_count() {
        // z(z − 0.9)²: near z₀ = 0 one root is inside, the pair near 0.9
        // enters and leaves as z₀ moves.
        let p = AnalyticPolynomial::from_roots(c(1.0, 0.0), &[c(0.0, 0.0), c(0.9, 0.0), c(0.9, 0.0)]).unwrap();
        let r = is_cowen_douglas(&p, 16, CIRCLE_TOL).unwrap();
        assert_ne!(r.is_cd, CdStatus::Yes);
        // z + 2z² has a critical point inside, so counts change.
        let r = is_cowen_douglas(&poly(&[0.0, 1.0, 2.0]), 16, CIRCLE_TOL).unwrap();
        assert_eq!(r.is_cd, CdStatus::No);
        assert_eq!(r.failure_reason, Some(CdFailure::RootCountVaries));
    }

    #[test]
    fn kernel_dimension_examples() {
        let z2 = poly(&[0.0, 0.0, 1.0]);
        assert_eq!(kernel_dimension(&z2, c(0.25, 0.0), CIRCLE_TOL).unwrap(), 2);
        assert_eq!(kernel_dimension(&z2, c(4.0, 0.0), CIRCLE_TOL).unwrap(), 0);
        assert_eq!(kernel_dimension(&poly(&[0.5, 1.0]), c(0.5, 0.0), CIRCLE_TOL).unwrap(), 1);
        assert!(matches!(
            kernel_dimension(&z2, c(1.0, 0.0), CIRCLE_TOL),
            Err(HardyError::RootOnCircle { .. })
        ));
    }

    #[test]
    fn modulus_range_examples() {
        let (lo, hi) = modulus_range_on_disk(&poly(&[0.5, 1.0]), 256);
        assert_eq!(lo, 0.0);
        assert!((hi - 1.5).abs() < 1e-14);
        let (lo, hi) = modulus_range_on_disk(&poly(&[3.0, 1.0]), 256);
        assert!((lo - 2.0).abs() < 1e-14 && (hi - 4.0).abs() < 1e-14);
        let (lo, hi) = modulus_range_on_disk(&AnalyticPolynomial::z(), 256);
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0).abs() < 1e-15);
    }

    #[test]
    fn modulus_range_refines_off_grid_extremes() {
        // Extremes at an angle no sample hits.
        let phi = AnalyticPolynomial::shifted_identity(Scalar::from_polar(2.0, 0.123_456_7));
        let (lo, hi) = modulus_range_on_disk(&phi, 256);
        assert!((lo - 1.0).abs() < 1e-14, "{lo}");
        assert!((hi - 3.0).abs() < 1e-14, "{hi}");
    }

    #[test]
    fn classify_examples() {
        let v = classify_multiplier(&poly(&[0.5, 1.0]), CIRCLE_TOL).unwrap();
        assert!(v.chaotic_all_senses && v.meets_circle);
        let v = classify_multiplier(&AnalyticPolynomial::z(), CIRCLE_TOL).unwrap();
        assert!(!v.chaotic_all_senses);
        let v = classify_multiplier(&poly(&[3.0, 1.0]), CIRCLE_TOL).unwrap();
        assert!(!v.chaotic_all_senses);
        assert!(matches!(
            classify_multiplier(&poly(&[0.0, 1.0, 2.0]), CIRCLE_TOL),
            Err(HardyError::NotCowenDouglas)
        ));
        assert!(matches!(
            classify_multiplier(&poly(&[2.0 + 1e-9, 1.0]), CIRCLE_TOL),
            Err(HardyError::BoundaryUncertain { .. })
        ));
    }

    #[test]
    fn eigen_residual_examples() {
        assert_eq!(adjoint_eigen_residual(&poly(&[0.3, 1.0]), c(0.0, 0.0), 8).unwrap(), 0.0);
        let phi = poly(&[0.5, 0.0, 1.0]);
        let z = c(0.4, 0.2);
        let r64 = adjoint_eigen_residual(&phi, z, 64).unwrap();
        let r32 = adjoint_eigen_residual(&phi, z, 32).unwrap();
        assert!(r64 <= 1e-10 && r32 > r64);
        assert!(matches!(adjoint_eigen_residual(&phi, c(1.0, 0.0), 8), Err(HardyError::OutsideDisk(_))));
    }

    #[test]
    fn adjoint_multiplier_is_perturbed_shift() {
        let lambda = c(0.3, -0.7);
        let s = make_weighted_backward_shift(&WeightedShiftSpec::unweighted(12)).unwrap();
        let m = make_multiplication_truncation(&AnalyticPolynomial::shifted_identity(lambda.conj()), 12).unwrap();
        assert_eq!(m.adjoint(), scalar_perturb(lambda, &s));
    }

    proptest! {
        #[test]
        fn kernel_dimension_matches_folder(re in -0.6f64..0.6, im in -0.6f64..0.6, deg in 1usize..4) {
            let mut coeffs = vec![Scalar::new(0.0, 0.0); deg + 1];
            coeffs[0] = c(re, im);
            coeffs[deg] = c(1.0, 0.0);
            let phi = AnalyticPolynomial::new(coeffs).unwrap();
            let report = is_cowen_douglas(&phi, 16, CIRCLE_TOL).unwrap();
            prop_assert_eq!(report.folder_m, Some(deg));
            for z0 in probe_points(16) {
                prop_assert_eq!(kernel_dimension(&phi, phi.eval(z0), CIRCLE_TOL).unwrap(), deg);
            }
        }

        #[test]
        fn inf_zero_iff_root_inside(a in -2.0f64..2.0, b in -2.0f64..2.0, k in 0.2f64..2.0) {
            let phi = AnalyticPolynomial::new(vec![c(a, b), c(k, 0.0), c(0.3, 0.1)]).unwrap();
            let census = roots_in_disk(&phi, 1.0, 0.0).unwrap();
            let (lo, _) = modulus_range_on_disk(&phi, 256);
            prop_assert_eq!(lo == 0.0, census.inside_count >= 1);
        }

        #[test]
        fn residual_nonincreasing_in_dimension(r in 0.0f64..0.9, t in 0.0f64..6.28, a in -1.0f64..1.0) {
            let phi = AnalyticPolynomial::new(vec![c(a, 0.0), c(0.0, 0.5), c(1.0, 0.0)]).unwrap();
            let z = Scalar::from_polar(r, t);
            let mut prev = f64::INFINITY;
            for n in [4usize, 8, 16, 32] {
                let res = adjoint_eigen_residual(&phi, z, n).unwrap();
                prop_assert!(res <= prev * (1.0 + 1e-9) + 1e-15);
                prev = res;
            }
        }
    }
}
