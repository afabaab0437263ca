use std::f64::consts::PI;

use num_complex::Complex64;

use crate::matrix::CMatrix;
use crate::{Error, Result};

/// Clock and shift matrices with `U V = e^{i eps} V U`, `eps = 2 pi / N`.
#[derive(Clone, Debug)]
pub struct FuzzyTorus {
    pub dim: usize,
    pub eps: f64,
    pub u: CMatrix,
    pub v: CMatrix,
}

pub fn fuzzy_torus(dim: usize) -> Result<FuzzyTorus> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let eps = 2.0 * PI / dim as f64;
    let u = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c { Complex64::from_polar(1.0, r as f64 * eps) } else { Complex64::default() }
    });
    // V|r> = |r+1 mod N>
    let v = CMatrix::from_fn(dim, dim, |r, c| {
        if r == (c + 1) % dim { Complex64::new(1.0, 0.0) } else { Complex64::default() }
    });
    Ok(FuzzyTorus { dim, eps, u, v })
}

impl FuzzyTorus {
    /// `U^r V^s` for any integers, using `U^{-1} = U^†`.
    pub fn monomial(&self, r: i64, s: i64) -> CMatrix {
        let n = self.dim as i64;
        let shift = s.rem_euclid(n);
        CMatrix::from_fn(self.dim, self.dim, |a, b| {
            if a as i64 == (b as i64 + shift) % n {
                Complex64::from_polar(1.0, (r * a as i64).rem_euclid(n) as f64 * self.eps)
            } else {
                Complex64::default()
            }
        })
    }
}

/// `Tr_N(U^r V^s)`.
pub fn torus_trace(t: &FuzzyTorus, r: i64, s: i64) -> Complex64 {
    crate::matrix::trace_n(&t.monomial(r, s))
}
