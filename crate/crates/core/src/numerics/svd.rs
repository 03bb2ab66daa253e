use num_complex::Complex64;

use super::{scaled_norm, DenseOperator, NumericsError, Result, Scalar};

const ZERO: Scalar = Complex64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 80;

/// `T = U · diag(sigma) · V*` with `sigma` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DenseOperator,
    pub sigma: Vec<f64>,
    pub v: DenseOperator,
}

/// Singular values, descending.
pub fn singular_values(t: &DenseOperator) -> Result<Vec<f64>> {
    let (cols, _) = jacobi(t, false)?;
    let mut s: Vec<f64> = cols.iter().map(|c| scaled_norm(c)).collect();
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
    Ok(s)
}

pub fn svd(t: &DenseOperator) -> Result<Svd> {
    let n = t.dim();
    let (cols, vcols) = jacobi(t, true)?;
    let vcols = vcols.expect("accumulated");
    let norms: Vec<f64> = cols.iter().map(|c| scaled_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).expect("finite"));

    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let tiny = n as f64 * f64::EPSILON * sigma.first().copied().unwrap_or(0.0);
    let mut ucols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for &k in &order {
        if norms[k] > tiny && norms[k] > 0.0 {
            ucols.push(cols[k].iter().map(|z| z / norms[k]).collect());
        } else {
            ucols.push(Vec::new());
        }
    }
    complete_orthonormal(&mut ucols, n);

    let u = from_columns(&ucols, n);
    let vsorted: Vec<Vec<Scalar>> = order.iter().map(|&k| vcols[k].clone()).collect();
    let v = from_columns(&vsorted, n);
    Ok(Svd { u, sigma, v })
}

/// One-sided (Hestenes) Jacobi on the columns of `t`. Returns the rotated
/// columns (mutually orthogonal, norms are the singular values) and, when
/// requested, the accumulated right rotation's columns.
fn jacobi(t: &DenseOperator, want_v: bool) -> Result<(Vec<Vec<Scalar>>, Option<Vec<Vec<Scalar>>>)> {
    let n = t.dim();
    let mut a: Vec<Vec<Scalar>> = (0..n).map(|j| (0..n).map(|i| t.get(i, j)).collect()).collect();
    let mut v: Option<Vec<Vec<Scalar>>> = want_v.then(|| {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { Scalar::new(1.0, 0.0) } else { ZERO }).collect())
            .collect()
    });
    let tol = f64::EPSILON * n as f64;

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Scalar = a[p].iter().zip(&a[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, p, q, c, s, phase);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, c, s, phase);
                }
            }
        }
        if !rotated {
            return Ok((a, v));
        }
    }
    Err(NumericsError::ConvergenceFailure {
        routine: "one_sided_jacobi",
        iterations: MAX_SWEEPS,
    })
}

fn rotate(cols: &mut [Vec<Scalar>], p: usize, q: usize, c: f64, s: f64, phase: Scalar) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Fills empty columns with unit vectors orthogonal to the others.
fn complete_orthonormal(cols: &mut [Vec<Scalar>], n: usize) {
    for k in 0..cols.len() {
        if !cols[k].is_empty() {
            continue;
        }
        for e in 0..n {
            let mut cand: Vec<Scalar> = (0..n).map(|i| if i == e { Scalar::new(1.0, 0.0) } else { ZERO }).collect();
            for _ in 0..2 {
                for other in cols.iter().filter(|c| !c.is_empty()) {
                    let proj: Scalar = other.iter().zip(&cand).map(|(o, x)| o.conj() * x).sum();
                    for (x, o) in cand.iter_mut().zip(other) {
                        *x -= proj * o;
                    }
                }
            }
            let norm = scaled_norm(&cand);
            if norm > 0.5 {
                cols[k] = cand.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

fn from_columns(cols: &[Vec<Scalar>], n: usize) -> DenseOperator {
    let mut data = vec![ZERO; n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            data[i * n + j] = *z;
        }
    }
    DenseOperator::from_trusted(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(singular_values(&DenseOperator::identity(3)).unwrap(), vec![1.0; 3]);
        let d = DenseOperator::diagonal(&[c(3.0, 0.0), c(0.0, -4.0)]).unwrap();
        let s = singular_values(&d).unwrap();
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
        let n = DenseOperator::from_real_rows(&[vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&n).unwrap(), vec![2.0, 0.0]);
    }

    #[test]
    fn reconstructs_complex_matrix() {
        let n = 7;
        let t = DenseOperator::from_fn(n, |i, j| {
            c(((i * 5 + j * 3) % 11) as f64 / 11.0 - 0.5, ((2 * i + j) % 7) as f64 / 7.0 - 0.3)
        })
        .unwrap();
        let Svd { u, sigma, v } = svd(&t).unwrap();
        let sig = DenseOperator::diagonal(&sigma.iter().map(|&s| c(s, 0.0)).collect::<Vec<_>>()).unwrap();
        let rebuilt = u.matmul(&sig).unwrap().matmul(&v.adjoint()).unwrap();
        assert!(rebuilt.sub(&t).unwrap().frobenius_norm() < 1e-13 * t.frobenius_norm());
        let utu = u.adjoint().matmul(&u).unwrap();
        assert!(utu.sub(&DenseOperator::identity(n)).unwrap().frobenius_norm() < 1e-13);
        assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rank_deficient_gets_completed_u() {
        let t = DenseOperator::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let Svd { u, sigma, .. } = svd(&t).unwrap();
        assert!((sigma[0] - 2.0).abs() < 1e-14 && sigma[1] < 1e-15);
        let utu = u.adjoint().matmul(&u).unwrap();
        assert!(utu.sub(&DenseOperator::identity(2)).unwrap().frobenius_norm() < 1e-14);
    }
}
