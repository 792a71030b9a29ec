//! Small dense square matrices. Lattice dimensions here are tiny (d + n ≤ 4 in practice),
//! so plain Gaussian elimination with partial pivoting is all that is needed.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    /// Row-major entries.
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Option<Self> {
        (dim > 0 && data.len() == dim * dim).then_some(Self { dim, data })
    }

    pub fn from_columns(columns: &[Vec<T>]) -> Option<Self> {
        let dim = columns.len();
        if dim == 0 || columns.iter().any(|c| c.len() != dim) {
            return None;
        }
        let mut data = vec![T::zero(); dim * dim];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                data[i * dim + j] = v;
            }
        }
        Some(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = T::one();
        }
        Self { dim, data }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::identity(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim + col]
    }

    pub fn row_major(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Self { dim: n, data }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Multiplies by an integer coefficient vector.
    pub fn mul_coeffs(&self, c: &[i64]) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * T::of_i64(c[j])).sum())
            .collect()
    }

    pub fn determinant(&self) -> T {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = T::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&r, &s| a[r * n + k].abs().partial_cmp(&a[s * n + k].abs()).unwrap())
                .unwrap();
            if a[pivot * n + k] == T::zero() {
                return T::zero();
            }
            if pivot != k {
                for j in 0..n {
                    a.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[k * n + k];
            det = det * p;
            for r in k + 1..n {
                let f = a[r * n + k] / p;
                for j in k..n {
                    a[r * n + j] = a[r * n + j] - f * a[k * n + j];
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when a pivot vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&r, &s| a[r * n + k].abs().partial_cmp(&a[s * n + k].abs()).unwrap())
                .unwrap();
            if a[pivot * n + k] == T::zero() {
                return None;
            }
            for j in 0..n {
                a.swap(k * n + j, pivot * n + j);
                inv.swap(k * n + j, pivot * n + j);
            }
            let p = a[k * n + k];
            for j in 0..n {
                a[k * n + j] = a[k * n + j] / p;
                inv[k * n + j] = inv[k * n + j] / p;
            }
            for r in 0..n {
                if r == k {
                    continue;
                }
                let f = a[r * n + k];
                if f == T::zero() {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = a[r * n + j] - f * a[k * n + j];
                    inv[r * n + j] = inv[r * n + j] - f * inv[k * n + j];
                }
            }
        }
        Some(Self { dim: n, data: inv })
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_of_known_matrices() {
        let m = Matrix::from_row_major(3, vec![2.0f64, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 1.0]).unwrap();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(m.determinant().abs() < 1e-15);
        let m = Matrix::from_row_major(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(m.determinant(), -1.0);
    }

    #[test]
    fn inverse_round_trips() {
        let m = Matrix::from_row_major(3, vec![4.0f64, 1.0, 0.5, -2.0, 3.0, 1.0, 0.0, 1.0, 5.0]).unwrap();
        let inv = m.inverse().unwrap();
        let back = inv.inverse().unwrap();
        assert!(m.max_abs_diff(&back) < 1e-12);
        let e = inv.mul_vec(&m.mul_vec(&[1.0, 2.0, 3.0]));
        for (a, b) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Matrix::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(m.inverse().is_none());
    }
}
