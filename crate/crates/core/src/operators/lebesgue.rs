use super::{OperatorError, ZERO};
use crate::numerics::{DenseOperator, Scalar};
use crate::spectral::base_density;

/// Uniform midpoint discretization of `L²([a, b])` with `a·b = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueDiscretizationSpec {
    pub a: f64,
    pub b: f64,
    pub grid_size: usize,
}

impl LebesgueDiscretizationSpec {
    pub fn new(a: f64, b: f64, grid_size: usize) -> Self {
        Self { a, b, grid_size }
    }

    /// `[1/2, 2]` with the given number of cells.
    pub fn default_interval(grid_size: usize) -> Self {
        Self::new(0.5, 2.0, grid_size)
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        let (a, b) = (self.a, self.b);
        if !(a.is_finite() && b.is_finite() && 0.0 < a && a < 1.0 && 1.0 < b && (a * b - 1.0).abs() <= 1e-12) {
            return Err(OperatorError::InvalidInterval { a, b });
        }
        if self.grid_size == 0 || self.grid_size % 2 != 0 {
            return Err(OperatorError::OddGrid(self.grid_size));
        }
        Ok(())
    }

    pub fn cell_width(&self) -> f64 {
        (self.b - self.a) / self.grid_size as f64
    }

    /// Cell midpoints, ascending.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.cell_width();
        (0..self.grid_size).map(|k| self.a + (k as f64 + 0.5) * h).collect()
    }
}

/// `T = U_Φ M_x` on cell coefficients, where `Φ` swaps the halves
/// `[a, (a+b)/2]` and `[(a+b)/2, b]` by translation.
///
/// `matrix` is the representation in the plain ℓ² cell basis, where the
/// swap is a permutation matrix. `weights` are the cell masses `f(x_k)·Δx`
/// of `dμ = f dx` with `f(x) = |ln x|/x`.
#[derive(Debug, Clone)]
pub struct LebesgueOperator {
    pub spec: LebesgueDiscretizationSpec,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: DenseOperator,
}

impl LebesgueOperator {
    /// Cell index that cell `k` is sent to by the half swap.
    pub fn swap_index(&self, k: usize) -> usize {
        let half = self.spec.grid_size / 2;
        (k + half) % self.spec.grid_size
    }

    pub fn multiplication_part(&self) -> DenseOperator {
        let diag: Vec<Scalar> = self.nodes.iter().map(|&x| Scalar::new(x, 0.0)).collect();
        DenseOperator::diagonal(&diag).expect("finite nodes")
    }

    pub fn swap_part(&self) -> DenseOperator {
        let n = self.spec.grid_size;
        DenseOperator::from_fn(n, |i, j| {
            if j == self.swap_index(i) {
                Scalar::new(1.0, 0.0)
            } else {
                ZERO
            }
        })
        .expect("finite")
    }

    /// The operator transported to `L²(dμ)` by the unitary
    /// `h ↦ h / √f`: `W^{−1/2} T W^{1/2}` with `W = diag(weights)`.
    pub fn weighted_representation(&self) -> DenseOperator {
        let n = self.spec.grid_size;
        let root: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        DenseOperator::from_fn(n, |i, j| self.matrix.get(i, j) * (root[j] / root[i])).expect("finite")
    }

    /// Adjoint with respect to `⟨u, v⟩_W = Σ_k w_k conj(u_k) v_k`:
    /// `W^{−1} A* W`.
    pub fn weighted_adjoint(&self, a: &DenseOperator) -> DenseOperator {
        let n = a.dim();
        DenseOperator::from_fn(n, |i, j| a.get(j, i).conj() * (self.weights[j] / self.weights[i])).expect("finite")
    }

    /// `T'^# T'` for the weighted representation `T'`; similar to `M_x²`.
    pub fn weighted_gram(&self) -> DenseOperator {
        let t = self.weighted_representation();
        self.weighted_adjoint(&t).matmul(&t).expect("same dimension")
    }
}

pub fn make_lebesgue_operator(spec: &LebesgueDiscretizationSpec) -> Result<LebesgueOperator, OperatorError> {
    spec.validate()?;
    let nodes = spec.nodes();
    let h = spec.cell_width();
    let weights: Vec<f64> = nodes.iter().map(|&x| base_density(x) * h).collect();
    if weights.iter().any(|w| *w <= 0.0) {
        // A midpoint landed exactly on x = 1, where the density vanishes.
        return Err(OperatorError::InvalidInterval { a: spec.a, b: spec.b });
    }
    let n = spec.grid_size;
    let half = n / 2;
    let matrix = DenseOperator::from_fn(n, |i, j| {
        if j == (i + half) % n {
            Scalar::new(nodes[j], 0.0)
        } else {
            ZERO
        }
    })?;
    Ok(LebesgueOperator {
        spec: *spec,
        nodes,
        weights,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigenvalues;

    #[test]
    fn two_cell_operator() {
        let op = make_lebesgue_operator(&LebesgueDiscretizationSpec::default_interval(2)).unwrap();
        let (x1, x2) = (op.nodes[0], op.nodes[1]);
        assert!((x1 - 0.875).abs() < 1e-15 && (x2 - 1.625).abs() < 1e-15);
        let expected = DenseOperator::from_real_rows(&[vec![0.0, x2], vec![x1, 0.0]]).unwrap();
        assert_eq!(op.matrix, expected);
        assert_eq!(op.swap_part().matmul(&op.multiplication_part()).unwrap(), op.matrix);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            make_lebesgue_operator(&LebesgueDiscretizationSpec::default_interval(3)),
            Err(OperatorError::OddGrid(3))
        ));
        assert!(matches!(
            make_lebesgue_operator(&LebesgueDiscretizationSpec::new(0.5, 3.0, 4)),
            Err(OperatorError::InvalidInterval { .. })
        ));
        assert!(make_lebesgue_operator(&LebesgueDiscretizationSpec::new(1.5, 1.0 / 1.5, 4)).is_err());
    }

    #[test]
    fn multiplication_part_is_weighted_self_adjoint() {
        let op = make_lebesgue_operator(&LebesgueDiscretizationSpec::default_interval(16)).unwrap();
        let d = op.multiplication_part();
        assert_eq!(op.weighted_adjoint(&d), d);
    }

    #[test]
    fn weighted_gram_has_squared_node_spectrum() {
        let op = make_lebesgue_operator(&LebesgueDiscretizationSpec::default_interval(24)).unwrap();
        let mut eig: Vec<f64> = eigenvalues(&op.weighted_gram()).unwrap().iter().map(|z| z.re).collect();
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want: Vec<f64> = op.nodes.iter().map(|x| x * x).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, w) in eig.iter().zip(&want) {
            assert!((e - w).abs() < 1e-12, "{e} vs {w}");
        }
    }

    #[test]
    fn operator_is_not_normal() {
        let op = make_lebesgue_operator(&LebesgueDiscretizationSpec::default_interval(8)).unwrap();
        let t = &op.matrix;
        let tts = t.matmul(&t.adjoint()).unwrap();
        let tst = t.adjoint().matmul(t).unwrap();
        assert!(tts.sub(&tst).unwrap().frobenius_norm() > 0.1);
        // T*T = M_x² exactly in the ℓ² cell basis.
        assert_eq!(tst, op.multiplication_part().matmul(&op.multiplication_part()).unwrap());
    }
}
