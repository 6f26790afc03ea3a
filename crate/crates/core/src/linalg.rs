//! Small dense complex matrices.
//!
//! Everything here is sized for d <= 16; there is no blocking or pivoting
//! beyond what the Jacobi eigenvalue sweep needs.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k * dim + k] = ONE;
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadEntryCount {
                dim,
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(CMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadEntryCount {
                    dim,
                    expected: dim * dim,
                    actual: rows.iter().map(Vec::len).sum(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(CMatrix { dim, data })
    }

    /// Outer product |v><v|.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for j in 0..dim {
            for k in 0..dim {
                m.data[j * dim + k] = v[j] * v[k].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.data[k * self.dim + j] = self.data[j * self.dim + k].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(self.dim, v.len());
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// <v|M|v> without normalization.
    pub fn sandwich(&self, v: &[C64]) -> C64 {
        inner(v, &self.apply(v))
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Largest |M_jk - conj(M_kj)| with its position.
    pub fn hermitian_defect(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for j in 0..self.dim {
            for k in j..self.dim {
                let d = (self.get(j, k) - self.get(k, j).conj()).norm();
                if d > worst.2 {
                    worst = (j, k, d);
                }
            }
        }
        worst
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// Closed form for d = 2; otherwise the Hermitian matrix H = X + iY is
    /// embedded as the real symmetric [[X, -Y], [Y, X]], whose spectrum is
    /// that of H with every eigenvalue doubled, and diagonalized by cyclic
    /// Jacobi rotations.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        if self.dim == 2 {
            let a = self.get(0, 0).re;
            let d = self.get(1, 1).re;
            let b = self.get(0, 1);
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            return vec![mean - radius, mean + radius];
        }
        let n = self.dim;
        let m = 2 * n;
        let mut s = vec![0.0; m * m];
        for j in 0..n {
            for k in 0..n {
                let z = self.get(j, k);
                s[j * m + k] = z.re;
                s[(j + n) * m + (k + n)] = z.re;
                s[j * m + (k + n)] = -z.im;
                s[(j + n) * m + k] = z.im;
            }
        }
        let mut all = jacobi_symmetric(&mut s, m);
        all.sort_by(f64::total_cmp);
        all.into_iter().step_by(2).collect()
    }
}

/// <a|b> with the first argument conjugated.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(C64::norm_sqr).sum()
}

fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|k| a[k * n + k]).collect()
}
