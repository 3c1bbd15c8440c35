use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Build from row-major entries; panics unless `data.len()` is a square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data length");
        Self { dim, data }
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Self {
        Self::from_vec(dim, data.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(psi: &[Complex64]) -> Self {
        let n = psi.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = psi[i] * psi[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn kron(&self, o: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, o.dim);
        let d = n * m;
        let mut out = CMatrix::zeros(d);
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.data[(i * m + k) * d + (j * m + l)] = a * o.data[k * m + l];
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `Tr[self · o]` without forming the product.
    pub fn trace_product(&self, o: &CMatrix) -> Complex64 {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * o.data[k * n + i];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        assert_eq!(self.dim, o.dim);
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim);
        CMatrix { dim: self.dim, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, o: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Pauli matrices.
pub mod pauli {
    use super::*;

    pub fn x() -> CMatrix {
        CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_vec(2, vec![ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
    }
}
