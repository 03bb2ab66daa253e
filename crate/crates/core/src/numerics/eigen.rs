use num_complex::Complex64;

use super::{DenseOperator, NumericsError, Result, Scalar};

const ZERO: Scalar = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy)]
pub struct EigenConfig {
    pub max_dim: usize,
    /// QR sweeps allowed per deflated eigenvalue.
    pub iterations_per_eigenvalue: usize,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            max_dim: 256,
            iterations_per_eigenvalue: 60,
        }
    }
}

pub fn eigenvalues(t: &DenseOperator) -> Result<Vec<Scalar>> {
    eigenvalues_with(t, &EigenConfig::default())
}

/// All N eigenvalues with multiplicity, in no particular order.
///
/// Triangular inputs return their diagonal directly. Everything else goes
/// through Householder reduction to upper Hessenberg form followed by
/// single-shift complex QR with Wilkinson shifts.
pub fn eigenvalues_with(t: &DenseOperator, config: &EigenConfig) -> Result<Vec<Scalar>> {
    let n = t.dim();
    if t.is_upper_triangular() || t.is_lower_triangular() {
        return Ok(t.diag());
    }
    // The cap bounds the O(N³) QR path only.
    if n > config.max_dim {
        return Err(NumericsError::TooLarge {
            dim: n,
            cap: config.max_dim,
        });
    }
    let mut h: Vec<Scalar> = t.as_slice().to_vec();
    reduce_to_hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n, config)
}

fn reduce_to_hessenberg(h: &mut [Scalar], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Scalar> = (k + 1..n).map(|i| h[i * n + k]).collect();
        let xnorm = super::scaled_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO { Scalar::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = super::scaled_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for vi in v.iter_mut() {
            *vi /= vnorm;
        }
        // Left: rows k+1..n.
        for j in 0..n {
            let dot: Scalar = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r) * n + j])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r) * n + j] -= 2.0 * vr * dot;
            }
        }
        // Right: columns k+1..n.
        for i in 0..n {
            let dot: Scalar = v
                .iter()
                .enumerate()
                .map(|(c, vc)| h[i * n + k + 1 + c] * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                h[i * n + k + 1 + c] -= 2.0 * dot * vc.conj();
            }
        }
        for i in k + 2..n {
            h[i * n + k] = ZERO;
        }
    }
}

fn hessenberg_qr(h: &mut [Scalar], n: usize, config: &EigenConfig) -> Result<Vec<Scalar>> {
    let mut eig = vec![ZERO; n];
    let frob = super::scaled_norm(h);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = config.iterations_per_eigenvalue * n.max(1);

    while hi >= 0 {
        let hiu = hi as usize;
        // Find the start of the unreduced active block.
        let mut lo = hiu;
        while lo > 0 {
            let sub = h[lo * n + lo - 1].norm();
            let mut diag = h[(lo - 1) * n + lo - 1].norm() + h[lo * n + lo].norm();
            if diag == 0.0 {
                diag = frob;
            }
            if sub <= f64::EPSILON * diag {
                h[lo * n + lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hiu {
            eig[hiu] = h[hiu * n + hiu];
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > budget {
            return Err(NumericsError::ConvergenceFailure {
                routine: "hessenberg_qr",
                iterations: total,
            });
        }

        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[hiu * n + hiu] + Scalar::new(0.75 * h[hiu * n + hiu - 1].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hiu - 1) * n + hiu - 1],
                h[(hiu - 1) * n + hiu],
                h[hiu * n + hiu - 1],
                h[hiu * n + hiu],
            )
        };

        for k in lo..=hiu {
            h[k * n + k] -= mu;
        }
        let mut rotations = Vec::with_capacity(hiu - lo);
        for k in lo..hiu {
            let x = h[k * n + k];
            let y = h[(k + 1) * n + k];
            let r = x.norm().hypot(y.norm());
            let (c, s) = if r == 0.0 {
                (Scalar::new(1.0, 0.0), ZERO)
            } else {
                (x / r, y / r)
            };
            for j in k..=hiu {
                let a = h[k * n + j];
                let b = h[(k + 1) * n + j];
                h[k * n + j] = c.conj() * a + s.conj() * b;
                h[(k + 1) * n + j] = -s * a + c * b;
            }
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            let last = (k + 2).min(hiu);
            for i in lo..=last {
                let a = h[i * n + k];
                let b = h[i * n + k + 1];
                h[i * n + k] = a * c + b * s;
                h[i * n + k + 1] = -a * s.conj() + b * c.conj();
            }
        }
        for k in lo..=hiu {
            h[k * n + k] += mu;
        }
    }
    Ok(eig)
}

fn wilkinson_shift(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Scalar {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
