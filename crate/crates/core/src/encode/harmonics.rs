use num_complex::Complex64;

use crate::{Error, Result};

/// Index of `(n, m)`, `0 <= m <= n`, in a triangular Legendre table.
pub fn tri(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// Legendre functions `Λ^m_n(cos θ)` for `0 <= m <= n <= lmax`, normalised
/// so that `ψ^m_n = Λ^m_n e^{imφ}` has unit mean square over the sphere.
/// Includes the Condon-Shortley sign.
pub fn legendre_table(lmax: usize, x: f64, s: f64) -> Vec<f64> {
    let mut out = vec![0.0; tri(lmax + 1, 0)];
    let mut pmm = 1.0;
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        out[tri(m, m)] = pmm;
        if m < lmax {
            out[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for n in m + 2..=lmax {
            let (nf, mf) = (n as f64, m as f64);
            let d = nf * nf - mf * mf;
            let a = ((4.0 * nf * nf - 1.0) / d).sqrt();
            let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) * (2.0 * nf + 1.0) / ((2.0 * nf - 3.0) * d)).sqrt();
            out[tri(n, m)] = a * x * out[tri(n - 1, m)] - b * out[tri(n - 2, m)];
        }
    }
    out
}

/// `∂Λ^m_n/∂θ` from a table built with the same `lmax`; `s = sin θ` must be
/// non-zero when `m > 0`.
pub fn legendre_dtheta(table: &[f64], lmax: usize, x: f64, s: f64) -> Vec<f64> {
    let mut out = vec![0.0; table.len()];
    for n in 0..=lmax {
        for m in 0..=n {
            let mut d = 0.0;
            if m > 0 {
                d += m as f64 * x / s * table[tri(n, m)];
            }
            if m < n {
                d += (((n - m) * (n + m + 1)) as f64).sqrt() * table[tri(n, m + 1)];
            }
            out[tri(n, m)] = d;
        }
    }
    out
}

/// `ψ^m_n(θ, φ)` with `(1/4π)∫|ψ|² = 1` and `ψ^{-m} = (-1)^m conj(ψ^m)`.
pub fn ylm_eval(n: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() as usize > n {
        return Err(Error::InvalidHarmonic { n: n as i64, m });
    }
    let table = legendre_table(n, theta.cos(), theta.sin());
    let mu = m.unsigned_abs() as usize;
    let lam = table[tri(n, mu)];
    let val = Complex64::from_polar(lam, mu as f64 * phi);
    Ok(if m >= 0 {
        val
    } else if mu % 2 == 0 {
        val.conj()
    } else {
        -val.conj()
    })
}
