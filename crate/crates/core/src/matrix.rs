//! Dense complex matrices and their JSON persistence.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Normalised trace `tr(A)/N`, so that `Tr_N(1) = 1`.
pub fn trace_n(a: &CMatrix) -> Complex64 {
    a.trace() / a.nrows() as f64
}

/// `Tr_N(A^† B)`.
pub fn inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    check_same(a, b)?;
    let sum: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(sum / a.nrows() as f64)
}

pub fn check_same(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            rows: b.nrows(),
            cols: b.ncols(),
        });
    }
    Ok(())
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Normalised Hilbert-Schmidt norm `sqrt(Tr_N(A^† A))`.
pub fn hs_norm(a: &CMatrix) -> f64 {
    (a.iter().map(|z| z.norm_sqr()).sum::<f64>() / a.nrows().max(1) as f64).sqrt()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// On-disk matrix: row-major real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub eps: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix, eps: f64) -> Self {
        let n = m.nrows();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                re.push(m[(r, c)].re);
                im.push(m[(r, c)].im);
            }
        }
        MatrixJson { n, eps, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let len = self.n * self.n;
        if self.re.len() != len || self.im.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                rows: self.re.len(),
                cols: self.im.len(),
            });
        }
        Ok(CMatrix::from_fn(self.n, self.n, |r, c| {
            let k = r * self.n + c;
            Complex64::new(self.re[k], self.im[k])
        }))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
