use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::harmonics::{legendre_dtheta, legendre_table, tri};
use crate::geometry::grid::{GridFunction, SphereGrid};
use crate::{Error, Result};

/// Band-limited field `Σ_{n<=L} c_nm ψ^m_n` on the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    band_limit: usize,
    coeffs: Vec<Complex64>,
}

/// Flat index of `(n, m)`: `n^2 + n + m`.
fn slot(n: usize, m: i64) -> usize {
    ((n * n + n) as i64 + m) as usize
}

impl ScalarField {
    pub fn zero(band_limit: usize) -> Self {
        ScalarField { band_limit, coeffs: vec![Complex64::default(); (band_limit + 1) * (band_limit + 1)] }
    }

    pub fn constant(c: f64) -> Self {
        let mut f = Self::zero(0);
        f.coeffs[0] = Complex64::new(c, 0.0);
        f
    }

    /// The single harmonic `ψ^m_n`.
    pub fn harmonic(n: usize, m: i64) -> Result<Self> {
        let mut f = Self::zero(n);
        f.set(n, m, Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    /// Highest degree carrying a non-zero coefficient.
    pub fn degree(&self) -> usize {
        self.iter().filter(|t| t.2 != Complex64::default()).map(|t| t.0).max().unwrap_or(0)
    }

    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        if n > self.band_limit || m.unsigned_abs() as usize > n {
            return Complex64::default();
        }
        self.coeffs[slot(n, m)]
    }

    pub fn set(&mut self, n: usize, m: i64, c: Complex64) -> Result<()> {
        if m.unsigned_abs() as usize > n {
            return Err(Error::InvalidHarmonic { n: n as i64, m });
        }
        if n > self.band_limit {
            *self = self.with_band_limit(n);
        }
        self.coeffs[slot(n, m)] = c;
        Ok(())
    }

    /// `(n, m, c_nm)` for every mode up to the band limit.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (0..=self.band_limit).flat_map(move |n| {
            (-(n as i64)..=n as i64).map(move |m| (n, m, self.coeffs[slot(n, m)]))
        })
    }

    /// Copy with a different band limit, dropping modes above it.
    pub fn with_band_limit(&self, band_limit: usize) -> Self {
        let mut out = Self::zero(band_limit);
        for (n, m, c) in self.iter() {
            if n <= band_limit {
                out.coeffs[slot(n, m)] = c;
            }
        }
        out
    }

    /// Modes with `n < cutoff`.
    pub fn truncated(&self, cutoff: usize) -> Self {
        let mut out = self.clone();
        for (n, m, _) in self.iter() {
            if n >= cutoff {
                out.coeffs[slot(n, m)] = Complex64::default();
            }
        }
        out
    }

    /// `sqrt((1/4π) ∫ |f|^2)`, i.e. the coefficient 2-norm.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficients of `conj(f)`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.band_limit);
        for (n, m, c) in self.iter() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            out.coeffs[slot(n, -m)] = c.conj() * sign;
        }
        out
    }

    pub fn is_real(&self, tol: f64) -> bool {
        let c = self.conj();
        self.coeffs.iter().zip(&c.coeffs).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ScalarField { band_limit: self.band_limit, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn add(&self, other: &ScalarField) -> Self {
        let l = self.band_limit.max(other.band_limit);
        let mut out = self.with_band_limit(l);
        for (n, m, c) in other.iter() {
            out.coeffs[slot(n, m)] += c;
        }
        out
    }

    pub fn sub(&self, other: &ScalarField) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn eval(&self, theta: f64, phi: f64) -> Complex64 {
        self.jet(theta, phi).value
    }

    /// Value and first derivatives in `p = cos θ`, `q = φ` at a point.
    pub fn jet(&self, theta: f64, phi: f64) -> Jet {
        let l = self.band_limit;
        let (x, s) = (theta.cos(), theta.sin());
        let table = legendre_table(l, x, s);
        let dtable = if s.abs() > 0.0 { legendre_dtheta(&table, l, x, s) } else { vec![0.0; table.len()] };
        let mut jet = Jet::default();
        for (n, m, c) in self.iter() {
            if c == Complex64::default() {
                continue;
            }
            let mu = m.unsigned_abs() as usize;
            let sign = if m < 0 && mu % 2 == 1 { -1.0 } else { 1.0 };
            let e = Complex64::from_polar(1.0, m as f64 * phi);
            let lam = sign * table[tri(n, mu)];
            let dlam = sign * dtable[tri(n, mu)];
            jet.value += c * lam * e;
            jet.dq += c * lam * e * Complex64::new(0.0, m as f64);
            jet.dp += c * (-dlam / s) * e;
        }
        jet
    }

    fn check_grid(&self, grid: &SphereGrid) -> Result<()> {
        if self.band_limit > grid.lmax {
            return Err(Error::Aliasing { requested: self.band_limit, capacity: grid.lmax });
        }
        Ok(())
    }

    /// Synthesis on a grid, plus optionally `∂/∂p` and `∂/∂q` there.
    fn synthesize(&self, grid: &SphereGrid, with_derivs: bool) -> [Vec<Complex64>; 3] {
        let l = self.band_limit as i64;
        let mut out = [
            vec![Complex64::default(); grid.len()],
            vec![Complex64::default(); if with_derivs { grid.len() } else { 0 }],
            vec![Complex64::default(); if with_derivs { grid.len() } else { 0 }],
        ];
        let phases: Vec<Vec<Complex64>> = grid
            .phi
            .iter()
            .map(|&p| (-l..=l).map(|m| Complex64::from_polar(1.0, m as f64 * p)).collect())
            .collect();
        for j in 0..grid.n_theta {
            let mut g = vec![Complex64::default(); (2 * l + 1) as usize];
            let mut dg = g.clone();
            for (n, m, c) in self.iter() {
                if c == Complex64::default() {
                    continue;
                }
                let mu = m.unsigned_abs() as usize;
                let sign = if m < 0 && mu % 2 == 1 { -1.0 } else { 1.0 };
                let k = (m + l) as usize;
                g[k] += c * (sign * grid.lam(j, n, mu));
                if with_derivs {
                    dg[k] += c * (sign * grid.dlam(j, n, mu));
                }
            }
            for (kphi, ph) in phases.iter().enumerate() {
                let i = grid.index(j, kphi);
                let mut v = Complex64::default();
                let mut dth = Complex64::default();
                let mut dq = Complex64::default();
                for (k, e) in ph.iter().enumerate() {
                    v += g[k] * e;
                    if with_derivs {
                        let m = k as i64 - l;
                        dth += dg[k] * e;
                        dq += g[k] * e * Complex64::new(0.0, m as f64);
                    }
                }
                out[0][i] = v;
                if with_derivs {
                    out[1][i] = -dth / grid.sin[j];
                    out[2][i] = dq;
                }
            }
        }
        out
    }

    pub fn on_grid(&self, grid: &Arc<SphereGrid>) -> Result<GridFunction> {
        self.check_grid(grid)?;
        let [values, _, _] = self.synthesize(grid, false);
        Ok(GridFunction { grid: grid.clone(), values })
    }

    /// `(f, ∂f/∂p, ∂f/∂q)` sampled on a grid.
    pub fn jets_on_grid(&self, grid: &Arc<SphereGrid>) -> Result<[GridFunction; 3]> {
        self.check_grid(grid)?;
        let [v, dp, dq] = self.synthesize(grid, true);
        let wrap = |values| GridFunction { grid: grid.clone(), values };
        Ok([wrap(v), wrap(dp), wrap(dq)])
    }

    pub fn to_json(&self) -> Result<String> {
        let coeffs = self
            .iter()
            .filter(|t| t.2 != Complex64::default())
            .map(|(n, m, c)| CoeffJson { n, m, re: c.re, im: c.im })
            .collect();
        Ok(serde_json::to_string(&FieldJson { band_limit: self.band_limit, coeffs })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: FieldJson = serde_json::from_str(s)?;
        let mut f = Self::zero(j.band_limit);
        for c in j.coeffs {
            if c.n > j.band_limit {
                return Err(Error::Parse(format!("mode n = {} above L = {}", c.n, j.band_limit)));
            }
            f.set(c.n, c.m, Complex64::new(c.re, c.im))?;
        }
        Ok(f)
    }
}

/// Value and `(∂/∂p, ∂/∂q)` derivatives at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub dp: Complex64,
    pub dq: Complex64,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: usize,
    m: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    #[serde(rename = "L")]
    band_limit: usize,
    coeffs: Vec<CoeffJson>,
}

/// Coefficients `c_nm = (1/4π) ∫ conj(ψ^m_n) f dΩ` for `n <= band_limit`.
pub fn project(f: &GridFunction, band_limit: usize) -> Result<ScalarField> {
    let grid = &f.grid;
    if band_limit > grid.max_band() {
        return Err(Error::Aliasing { requested: band_limit, capacity: grid.max_band() });
    }
    let l = band_limit as i64;
    let mut out = ScalarField::zero(band_limit);
    let nphi = grid.n_phi as f64;
    for j in 0..grid.n_theta {
        // F_m = (1/n_phi) Σ_k f e^{-imφ_k}
        let row = &f.values[grid.index(j, 0)..grid.index(j, 0) + grid.n_phi];
        for m in -l..=l {
            let fm: Complex64 = row
                .iter()
                .zip(&grid.phi)
                .map(|(v, &p)| v * Complex64::from_polar(1.0, -(m as f64) * p))
                .sum::<Complex64>()
                / nphi;
            let mu = m.unsigned_abs() as usize;
            let sign = if m < 0 && mu % 2 == 1 { -1.0 } else { 1.0 };
            for n in mu..=band_limit {
                let c = 0.5 * grid.w[j] * sign * grid.lam(j, n, mu);
                let s = slot(n, m);
                out.coeffs[s] += fm * c;
            }
        }
    }
    Ok(out)
}
