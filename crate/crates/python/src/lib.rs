//! Python bindings: operators, orbit diagnostics, spectral checks, Hardy
//! space multipliers and the scenario runner.

use chaoskit_cli::{parse_operator_spec, run_scenario as run_cli_scenario, ScenarioConfig};
use chaoskit_core::diagnostics::{
    classify_dc, criterion_search as core_criterion_search, distributional_profile as core_profile,
    li_yorke_evidence as core_li_yorke, orbit_norms as core_orbit_norms, DcClass, VerdictKind,
};
use chaoskit_core::hardy::{
    adjoint_eigen_residual as core_residual, classify_multiplier as core_classify, is_cowen_douglas as core_cd,
    kernel_dimension as core_kernel, AnalyticPolynomial, CdStatus, CIRCLE_TOL, DEFAULT_PROBE_ANGLES,
};
use chaoskit_core::numerics::{eigenvalues, operator_norm, singular_values, DenseOperator, Scalar, StateVector};
use chaoskit_core::spectral::{
    check_density_reciprocal_identity as core_density_identity, check_singular_reciprocity,
    check_theorem6_integral_identity_refined, density_fn as core_density_fn, polar_decompose as core_polar,
    DensityFamily, RefinementConfig,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vector(x: Vec<Scalar>) -> PyResult<StateVector> {
    StateVector::new(x).map_err(err)
}

fn polynomial(coeffs: Vec<Scalar>) -> PyResult<AnalyticPolynomial> {
    AnalyticPolynomial::new(coeffs).map_err(err)
}

fn kind_name(k: VerdictKind) -> &'static str {
    match k {
        VerdictKind::LiYorkeEvidence => "li_yorke_evidence",
        VerdictKind::NoEvidence => "no_evidence",
        VerdictKind::Inconclusive => "inconclusive",
    }
}

/// Dense complex square matrix.
#[pyclass(name = "Operator", frozen)]
struct PyOperator {
    inner: DenseOperator,
}

#[pymethods]
impl PyOperator {
    /// Square matrix from nested rows of complex numbers.
    #[new]
    fn new(rows: Vec<Vec<Scalar>>) -> PyResult<Self> {
        Ok(Self {
            inner: DenseOperator::from_rows(&rows).map_err(err)?,
        })
    }

    /// Build from an operator-spec JSON string.
    #[staticmethod]
    fn from_spec(json: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_operator_spec(json).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        Self {
            inner: DenseOperator::identity(dim),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn to_list(&self) -> Vec<Vec<Scalar>> {
        self.inner.to_rows()
    }

    fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    /// `λI + T`.
    fn shift(&self, lam: Scalar) -> Self {
        Self {
            inner: self.inner.shift_diagonal(lam),
        }
    }

    fn matmul(&self, other: &PyOperator) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.matmul(&other.inner).map_err(err)?,
        })
    }

    fn apply(&self, x: Vec<Scalar>) -> PyResult<Vec<Scalar>> {
        Ok(self.inner.apply(&vector(x)?).map_err(err)?.into_inner())
    }

    fn eigenvalues(&self) -> PyResult<Vec<Scalar>> {
        eigenvalues(&self.inner).map_err(err)
    }

    fn singular_values(&self) -> PyResult<Vec<f64>> {
        singular_values(&self.inner).map_err(err)
    }

    fn norm(&self) -> f64 {
        operator_norm(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Operator(dim={})", self.inner.dim())
    }
}

/// `‖Tⁿx‖` for `n = 0..=horizon`, stopping at overflow.
#[pyfunction]
fn orbit_norms(op: &PyOperator, x: Vec<Scalar>, horizon: usize) -> PyResult<Vec<f64>> {
    Ok(core_orbit_norms(&op.inner, &vector(x)?, horizon).map_err(err)?.norms)
}

#[pyfunction]
fn li_yorke_evidence<'py>(
    py: Python<'py>,
    op: &PyOperator,
    x: Vec<Scalar>,
    horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rec = core_orbit_norms(&op.inner, &vector(x)?, horizon).map_err(err)?;
    let v = core_li_yorke(&rec);
    let d = PyDict::new(py);
    d.set_item("kind", kind_name(v.kind))?;
    d.set_item("liminf_est", v.liminf_est)?;
    d.set_item("limsup_est", v.limsup_est)?;
    Ok(d)
}

#[pyfunction]
fn criterion_search<'py>(
    py: Python<'py>,
    op: &PyOperator,
    candidates: Vec<Vec<Scalar>>,
    bound: f64,
    horizon: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cands = candidates.into_iter().map(vector).collect::<PyResult<Vec<_>>>()?;
    let e = core_criterion_search(&op.inner, &cands, bound, horizon).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("witnessed", e.witnessed)?;
    d.set_item("ladder_top", e.ladder_top())?;
    d.set_item("vanishing_set", e.vanishing_set)?;
    d.set_item("rise_then_decay", e.rise_then_decay)?;
    Ok(d)
}

/// `(f_lower, f_upper, dc_class)` on an absolute τ grid.
#[pyfunction]
fn distributional_profile(
    op: &PyOperator,
    x: Vec<Scalar>,
    horizon: usize,
    tau: Vec<f64>,
) -> PyResult<(Vec<f64>, Vec<f64>, String)> {
    let p = core_profile(&op.inner, &vector(x)?, horizon, &tau).map_err(err)?;
    let class = classify_dc(&p).class;
    let name = match class {
        DcClass::DcI => "DC-I",
        DcClass::DcII => "DC-II",
        DcClass::DcIII => "DC-III",
        DcClass::None => "None",
    };
    Ok((p.f_lower, p.f_upper, name.to_string()))
}

/// `(U, P)` with `T = UP`.
#[pyfunction]
fn polar_decompose(op: &PyOperator) -> PyResult<(PyOperator, PyOperator)> {
    let pd = core_polar(&op.inner).map_err(err)?;
    Ok((PyOperator { inner: pd.u }, PyOperator { inner: pd.p }))
}

/// Largest relative defect between `σ(T⁻¹)` and the reversed `1/σ(T)`.
#[pyfunction]
fn singular_reciprocity_defect(op: &PyOperator) -> PyResult<f64> {
    Ok(check_singular_reciprocity(&op.inner, 1e-10).map_err(err)?.max_relative_defect)
}

#[pyfunction]
#[pyo3(signature = (t, n, a = 0.5, b = 2.0))]
fn density_fn(t: f64, n: u32, a: f64, b: f64) -> PyResult<f64> {
    let fam = DensityFamily::new(a, b, n).map_err(err)?;
    core_density_fn(t, &fam).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, points, a = 0.5, b = 2.0))]
fn density_reciprocal_defect(n: u32, points: Vec<f64>, a: f64, b: f64) -> PyResult<f64> {
    let fam = DensityFamily::new(a, b, n).map_err(err)?;
    core_density_identity(&fam, &points).map_err(err)
}

/// Relative defect of the orbit-norm transfer integrals for the polynomial
/// with coefficients `g` (constant term first).
#[pyfunction]
#[pyo3(signature = (g, n, a = 0.5, b = 2.0))]
fn integral_identity_defect(g: Vec<Scalar>, n: u32, a: f64, b: f64) -> PyResult<f64> {
    let fam = DensityFamily::new(a, b, n).map_err(err)?;
    let r = check_theorem6_integral_identity_refined(&polynomial(g)?, &fam, &RefinementConfig::default()).map_err(err)?;
    Ok(r.relative_defect)
}

#[pyfunction]
fn kernel_dimension(phi: Vec<Scalar>, lam: Scalar) -> PyResult<usize> {
    core_kernel(&polynomial(phi)?, lam, CIRCLE_TOL).map_err(err)
}

/// `(status, m)` with status one of `yes`, `no`, `undetermined`.
#[pyfunction]
fn is_cowen_douglas(phi: Vec<Scalar>) -> PyResult<(String, Option<usize>)> {
    let r = core_cd(&polynomial(phi)?, DEFAULT_PROBE_ANGLES, CIRCLE_TOL).map_err(err)?;
    let s = match r.is_cd {
        CdStatus::Yes => "yes",
        CdStatus::No => "no",
        CdStatus::Undetermined => "undetermined",
    };
    Ok((s.to_string(), r.folder_m))
}

/// `(chaotic, inf |φ|, sup |φ|)` over the disk.
#[pyfunction]
#[pyo3(signature = (phi, tol = CIRCLE_TOL))]
fn classify_multiplier(phi: Vec<Scalar>, tol: f64) -> PyResult<(bool, f64, f64)> {
    let v = core_classify(&polynomial(phi)?, tol).map_err(err)?;
    Ok((v.chaotic_all_senses, v.inf_mod, v.sup_mod))
}

#[pyfunction]
fn adjoint_eigen_residual(phi: Vec<Scalar>, z: Scalar, dim: usize) -> PyResult<f64> {
    core_residual(&polynomial(phi)?, z, dim).map_err(err)
}

/// Runs a scenario from a config JSON string; returns
/// `(all_pass, verdicts_json)`.
#[pyfunction]
fn run_scenario(config_json: &str) -> PyResult<(bool, String)> {
    let cfg = ScenarioConfig::from_json(config_json).map_err(err)?;
    let b = run_cli_scenario(&cfg).map_err(err)?;
    Ok((b.all_pass(), b.verdicts_json()))
}

#[pymodule]
fn chaoskit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_function(wrap_pyfunction!(orbit_norms, m)?)?;
    m.add_function(wrap_pyfunction!(li_yorke_evidence, m)?)?;
    m.add_function(wrap_pyfunction!(criterion_search, m)?)?;
    m.add_function(wrap_pyfunction!(distributional_profile, m)?)?;
    m.add_function(wrap_pyfunction!(polar_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(singular_reciprocity_defect, m)?)?;
    m.add_function(wrap_pyfunction!(density_fn, m)?)?;
    m.add_function(wrap_pyfunction!(density_reciprocal_defect, m)?)?;
    m.add_function(wrap_pyfunction!(integral_identity_defect, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(is_cowen_douglas, m)?)?;
    m.add_function(wrap_pyfunction!(classify_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(adjoint_eigen_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
