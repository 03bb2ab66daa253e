//! Seeded sampling. PCG-XSH-RR 64/32 (`rand_pcg::Pcg32`) seeded through
//! `SeedableRng::seed_from_u64`; uniforms come from `Rng::random::<f64>()`
//! (53 high bits) and normals from the Box-Muller transform, so the streams
//! are reproducible from the algorithm description alone.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg32;

use crate::numerics::{DenseOperator, Scalar, StateVector};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone)]
pub struct ChaosRng {
    inner: Pcg32,
    spare: Option<f64>,
}

impl ChaosRng {
    pub fn seed(seed: u64) -> Self {
        Self {
            inner: Pcg32::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    /// Standard normal.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    /// Real and imaginary parts independent standard normals.
    pub fn complex_normal(&mut self) -> Scalar {
        let re = self.normal();
        let im = self.normal();
        Scalar::new(re, im)
    }

    pub fn complex_vector(&mut self, dim: usize) -> StateVector {
        StateVector::new((0..dim).map(|_| self.complex_normal()).collect()).expect("finite samples")
    }

    /// Row-major Gaussian matrix.
    pub fn complex_matrix(&mut self, dim: usize) -> DenseOperator {
        DenseOperator::from_row_major(dim, (0..dim * dim).map(|_| self.complex_normal()).collect())
            .expect("finite samples")
    }
}
