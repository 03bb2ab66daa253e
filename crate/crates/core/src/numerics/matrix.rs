use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{scaled_norm, NumericsError, Result, Scalar};

const ZERO: Scalar = Complex64::new(0.0, 0.0);
const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major, with every entry finite.
///
/// `spans[i]` is the half-open column range that contains all nonzero
/// entries of row `i` (empty rows store `(0, 0)`).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Scalar>,
    spans: Vec<(usize, usize)>,
}

impl DenseOperator {
    /// Builds from row-major entries, rejecting non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<Scalar>) -> Result<Self> {
        if dim == 0 {
            return Err(NumericsError::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(NumericsError::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self::from_trusted(dim, data))
    }

    /// Internal constructor for data already known to be finite and square.
    pub(crate) fn from_trusted(dim: usize, data: Vec<Scalar>) -> Self {
        let spans = (0..dim)
            .map(|i| {
                let row = &data[i * dim..(i + 1) * dim];
                match row.iter().position(|z| *z != ZERO) {
                    None => (0, 0),
                    Some(lo) => {
                        let hi = row.iter().rposition(|z| *z != ZERO).unwrap() + 1;
                        (lo, hi)
                    }
                }
            })
            .collect();
        Self { dim, data, spans }
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(NumericsError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self::from_trusted(dim, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![ONE; dim]).expect("identity is finite")
    }

    pub fn diagonal(diag: &[Scalar]) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, d) in diag.iter().enumerate() {
            data[i * dim + i] = *d;
        }
        Self::from_row_major(dim, data)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[DenseOperator]) -> Result<Self> {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut data = vec![ZERO; dim * dim];
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    data[(offset + i) * dim + offset + j] = b.get(i, j);
                }
            }
            offset += b.dim;
        }
        Self::from_row_major(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> DenseOperator {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self::from_trusted(n, data)
    }

    pub fn scale(&self, alpha: Scalar) -> DenseOperator {
        Self::from_trusted(self.dim, self.data.iter().map(|z| z * alpha).collect())
    }

    /// `alpha·I + self`.
    pub fn shift_diagonal(&self, alpha: Scalar) -> DenseOperator {
        let mut data = self.data.clone();
        for i in 0..self.dim {
            data[i * self.dim + i] += alpha;
        }
        Self::from_trusted(self.dim, data)
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same_dim(other)?;
        Ok(Self::from_trusted(
            self.dim,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same_dim(other)?;
        Ok(Self::from_trusted(
            self.dim,
            self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Matrix product `self · other`, skipping structurally zero row ranges.
    pub fn matmul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            let (lo, hi) = self.spans[i];
            let out = &mut data[i * n..(i + 1) * n];
            for k in lo..hi {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let (blo, bhi) = other.spans[k];
                let brow = &other.data[k * n..(k + 1) * n];
                for j in blo..bhi {
                    out[j] += a * brow[j];
                }
            }
        }
        Ok(Self::from_trusted(n, data))
    }

    /// `self^power` by repeated squaring; `power = 0` gives the identity.
    pub fn pow(&self, mut power: u32) -> DenseOperator {
        let mut result = DenseOperator::identity(self.dim);
        let mut base = self.clone();
        while power > 0 {
            if power & 1 == 1 {
                result = result.matmul(&base).expect("same dimension");
            }
            power >>= 1;
            if power > 0 {
                base = base.matmul(&base).expect("same dimension");
            }
        }
        result
    }

    pub fn apply(&self, x: &StateVector) -> Result<StateVector> {
        if x.dim() != self.dim {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        Ok(StateVector(self.apply_slice(x.as_slice())))
    }

    /// Matrix-vector product on a raw slice of matching length. Entries may
    /// be infinite (orbit iteration past overflow); the caller checks.
    pub(crate) fn apply_slice(&self, x: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let (lo, hi) = self.spans[i];
                self.data[i * n + lo..i * n + hi]
                    .iter()
                    .zip(&x[lo..hi])
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        scaled_norm(&self.data)
    }

    /// Max absolute column sum.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.spans
            .iter()
            .enumerate()
            .all(|(i, &(lo, hi))| hi == 0 || lo >= i)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.spans.iter().enumerate().all(|(i, &(_, hi))| hi <= i + 1)
    }

    fn check_same_dim(&self, other: &DenseOperator) -> Result<()> {
        if self.dim != other.dim {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseOperator {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.dim + j]
    }
}

/// Complex N-vector with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector(Vec<Scalar>);

impl StateVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(NumericsError::EmptyDimension);
        }
        if let Some(index) = entries
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(NumericsError::NonFinite { index });
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self(vec![ZERO; dim])
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        scaled_norm(&self.0)
    }

    pub fn scale(&self, alpha: Scalar) -> StateVector {
        StateVector(self.0.iter().map(|z| z * alpha).collect())
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        if self.dim() != other.dim() {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(StateVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector> {
        self.add(&other.scale(Scalar::new(-1.0, 0.0)))
    }
}

impl Index<usize> for StateVector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}
