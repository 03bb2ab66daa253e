use super::{DenseOperator, NumericsError, Result, Scalar};

/// Thresholds for [`invert_with`].
#[derive(Debug, Clone, Copy)]
pub struct InvertConfig {
    /// Reject when the 1-norm condition estimate exceeds this.
    pub max_condition: f64,
}

impl Default for InvertConfig {
    fn default() -> Self {
        Self { max_condition: 1e12 }
    }
}

pub fn invert(t: &DenseOperator) -> Result<DenseOperator> {
    invert_with(t, &InvertConfig::default())
}

/// Gauss-Jordan elimination with partial pivoting.
pub fn invert_with(t: &DenseOperator, config: &InvertConfig) -> Result<DenseOperator> {
    let n = t.dim();
    let scale = t.max_abs();
    if scale == 0.0 {
        return Err(NumericsError::SingularOperator {
            reason: "zero matrix".into(),
        });
    }
    let pivot_tol = n as f64 * f64::EPSILON * scale;

    let mut a: Vec<Scalar> = t.as_slice().to_vec();
    let mut inv: Vec<Scalar> = DenseOperator::identity(n).as_slice().to_vec();

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, a[r * n + col].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_mag <= pivot_tol {
            return Err(NumericsError::SingularOperator {
                reason: format!("pivot {pivot_mag:e} in column {col} below {pivot_tol:e}"),
            });
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
                inv.swap(col * n + j, pivot_row * n + j);
            }
        }
        let p = a[col * n + col].inv();
        for j in 0..n {
            a[col * n + j] *= p;
            inv[col * n + j] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col];
            if factor == Scalar::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let (pa, pi) = (a[col * n + j], inv[col * n + j]);
                a[r * n + j] -= factor * pa;
                inv[r * n + j] -= factor * pi;
            }
        }
    }

    let result = DenseOperator::from_row_major(n, inv).map_err(|_| NumericsError::SingularOperator {
        reason: "inverse has non-finite entries".into(),
    })?;
    let condition = t.one_norm() * result.one_norm();
    if condition > config.max_condition {
        return Err(NumericsError::SingularOperator {
            reason: format!("condition estimate {condition:e} exceeds {:e}", config.max_condition),
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[Vec<f64>]) -> DenseOperator {
        DenseOperator::from_real_rows(rows).unwrap()
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(invert(&DenseOperator::identity(4)).unwrap(), DenseOperator::identity(4));
        let d = invert(&real(&[vec![2.0, 0.0], vec![0.0, 4.0]])).unwrap();
        assert_eq!(d, real(&[vec![0.5, 0.0], vec![0.0, 0.25]]));
    }

    #[test]
    fn two_by_two_block_by_hand() {
        // (1-ε)I + S with ε = 1/4: inverse is (1/0.75)[[1, -0.5/0.75], [0, 1]].
        let eps = 0.25;
        let t = real(&[vec![1.0 - eps, 2.0 * eps], vec![0.0, 1.0 - eps]]);
        let inv = invert(&t).unwrap();
        let expected = [[1.0 / 0.75, -(0.5 / 0.75) / 0.75], [0.0, 1.0 / 0.75]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv.get(i, j).re - expected[i][j]).abs() < 1e-15);
                assert_eq!(inv.get(i, j).im, 0.0);
            }
        }
    }

    #[test]
    fn singular_rejected() {
        let t = real(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(invert(&t), Err(NumericsError::SingularOperator { .. })));
        assert!(invert(&DenseOperator::zeros(3)).is_err());
        let ill = real(&[vec![1.0, 0.0], vec![0.0, 1e-13]]);
        assert!(matches!(invert(&ill), Err(NumericsError::SingularOperator { .. })));
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let t = real(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(invert(&t).unwrap(), t);
    }
}
