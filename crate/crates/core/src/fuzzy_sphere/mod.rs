//! The su(2) fuzzy sphere.
//!
//! `X0, X±` act on `C^N` as the spin `(N-1)/2` representation scaled by
//! `eps = 2R/sqrt(N^2-1)`, so that `X0^2 + (X+X- + X-X+)/2 = R^2`.
//! Harmonics `P^m_n` are built from `X+^n` by repeated `ad X-`; each one only
//! has entries on the diagonal `row - col = m`, and we store just that.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::angmom::{self, HalfInt};
use crate::matrix::{self, CMatrix};
use crate::{Error, Result};

/// Label of a harmonic, `0 <= n`, `|m| <= n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HarmonicLabel {
    pub n: usize,
    pub m: i64,
}

impl HarmonicLabel {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > n {
            return Err(Error::InvalidHarmonic { n: n as i64, m });
        }
        Ok(HarmonicLabel { n, m })
    }
}

/// Non-zero diagonal of a harmonic: entry `k` sits at `(k + m, k)` when
/// `m >= 0` and at `(k, k - m)` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl Band {
    pub fn position(&self, k: usize) -> (usize, usize) {
        if self.offset >= 0 {
            (k + self.offset as usize, k)
        } else {
            (k, k + self.offset.unsigned_abs() as usize)
        }
    }

    pub fn to_matrix(&self, dim: usize) -> CMatrix {
        let mut out = CMatrix::zeros(dim, dim);
        for (k, &v) in self.values.iter().enumerate() {
            out[self.position(k)] = Complex64::new(v, 0.0);
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Band {
        Band { offset: self.offset, values: self.values.iter().map(|v| v * s).collect() }
    }
}

#[derive(Clone, Debug)]
pub struct FuzzyHarmonic {
    pub label: HarmonicLabel,
    pub mat: CMatrix,
    pub norm_sq: f64,
}

/// Harmonic expansion `Σ c_nm P^m_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicDecomposition {
    pub coeffs: BTreeMap<HarmonicLabel, Complex64>,
}

impl HarmonicDecomposition {
    pub fn get(&self, n: usize, m: i64) -> Complex64 {
        self.coeffs
            .get(&HarmonicLabel { n, m })
            .copied()
            .unwrap_or_default()
    }

    pub fn reconstruct(&self, rep: &FuzzySphereRep) -> CMatrix {
        let dim = rep.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for (label, &c) in &self.coeffs {
            if label.n >= dim || c == Complex64::default() {
                continue;
            }
            let band = rep.band(label.n, label.m);
            for (k, &v) in band.values.iter().enumerate() {
                out[band.position(k)] += c * v;
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FuzzySphereRep {
    dim: usize,
    radius: f64,
    eps: f64,
    pub x0: CMatrix,
    pub xp: CMatrix,
    pub xm: CMatrix,
    /// Bands per degree in units where eps = 1, indexed by `m + n`.
    unit_bands: Vec<OnceLock<Vec<Band>>>,
}

/// `2R / sqrt(N^2 - 1)`.
pub fn eps_for(dim: usize, radius: f64) -> f64 {
    2.0 * radius / ((dim * dim) as f64 - 1.0).sqrt()
}

pub fn build_rep(dim: usize, radius: f64) -> Result<FuzzySphereRep> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidLabel(format!("radius must be positive, got {radius}")));
    }
    let eps = eps_for(dim, radius);
    let centre = (dim as f64 - 1.0) / 2.0;
    let x0 = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(eps * (r as f64 - centre), 0.0)
        } else {
            Complex64::default()
        }
    });
    let mut xp = CMatrix::zeros(dim, dim);
    for m in 0..dim - 1 {
        xp[(m + 1, m)] = Complex64::new(eps * ladder_unit(dim, m), 0.0);
    }
    let xm = xp.adjoint();
    Ok(FuzzySphereRep {
        dim,
        radius,
        eps,
        x0,
        xp,
        xm,
        unit_bands: (0..dim).map(|_| OnceLock::new()).collect(),
    })
}

/// `sqrt((N-m-1)(m+1))`, the `X+` entry at `(m+1, m)` when eps = 1.
fn ladder_unit(dim: usize, m: usize) -> f64 {
    (((dim - m - 1) * (m + 1)) as f64).sqrt()
}

impl FuzzySphereRep {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn generators(&self) -> [&CMatrix; 3] {
        [&self.x0, &self.xp, &self.xm]
    }

    /// Hermitian generators `X1 = (X+ + X-)/2`, `X2 = (X+ - X-)/2i`, `X3 = X0`.
    pub fn cartesian(&self) -> [CMatrix; 3] {
        let x1 = (&self.xp + &self.xm) * Complex64::new(0.5, 0.0);
        let x2 = (&self.xp - &self.xm) * Complex64::new(0.0, -0.5);
        [x1, x2, self.x0.clone()]
    }

    fn unit_degree(&self, n: usize) -> &[Band] {
        self.unit_bands[n].get_or_init(|| unit_harmonics(self.dim, n))
    }

    /// Band of `P^m_n` in physical units. Zero for `n >= N`.
    pub fn band(&self, n: usize, m: i64) -> Band {
        if n >= self.dim {
            return Band { offset: m, values: Vec::new() };
        }
        let unit = &self.unit_degree(n)[(m + n as i64) as usize];
        unit.scaled(self.eps.powi(n as i32))
    }

    pub fn harmonic(&self, n: usize, m: i64) -> Result<FuzzyHarmonic> {
        let label = HarmonicLabel::new(n, m)?;
        Ok(FuzzyHarmonic {
            label,
            mat: self.band(n, m).to_matrix(self.dim),
            norm_sq: norm_sq_formula(n, self.radius, self.eps),
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = HarmonicLabel> {
        (0..self.dim).flat_map(|n| (-(n as i64)..=n as i64).map(move |m| HarmonicLabel { n, m }))
    }
}

/// All `2n+1` harmonics of degree `n` with eps = 1.
///
/// On the diagonal `row - col = m` the harmonic is `X±^|m| f(X0)` with `f` of
/// degree `n - |m|`, and harmonics of different degree are orthogonal there.
/// So each band is the `(n - |m|)`-th vector of a Lanczos sequence started
/// from the `X±^|m|` diagonal, rescaled to the known norm. The leading sign
/// is `(-1)^(n - max(m, 0))`, which is what lowering `X+^n` by `ad X-` gives.
fn unit_harmonics(dim: usize, n: usize) -> Vec<Band> {
    let a: Vec<f64> = (0..dim - 1).map(|m| ladder_unit(dim, m)).collect();
    let centre = (dim as f64 - 1.0) / 2.0;
    let half_width = ((dim * dim - 1) as f64).sqrt() / 2.0;
    let scale = (dim as f64 * norm_sq_formula(n, half_width, 1.0)).sqrt();
    (-(n as i64)..=n as i64)
        .map(|m| {
            let mu = m.unsigned_abs() as usize;
            let offset = Band { offset: m, values: Vec::new() };
            let len = dim - mu;
            // column of entry k, and the X±^|m| entry there
            let col = |k: usize| offset.position(k).1;
            let start: Vec<f64> = (0..len)
                .map(|k| {
                    let lo = if m >= 0 { col(k) } else { col(k) - mu };
                    a[lo..lo + mu].iter().product()
                })
                .collect();
            let x: Vec<f64> = (0..len).map(|k| col(k) as f64 - centre).collect();
            let q = lanczos(start, &x, n - mu);
            let sign = if (n as i64 - m.max(0)) % 2 == 0 { 1.0 } else { -1.0 };
            Band { offset: m, values: q.into_iter().map(|v| sign * scale * v).collect() }
        })
        .collect()
}

/// `steps`-th unit vector of the Krylov sequence `v, x v, x^2 v, ...`,
/// orthonormalised with full reorthogonalisation; positive leading term.
fn lanczos(start: Vec<f64>, x: &[f64], steps: usize) -> Vec<f64> {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let normalise = |mut v: Vec<f64>| {
        let nrm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|e| *e /= nrm);
        v
    };
    let mut basis = vec![normalise(start)];
    for _ in 0..steps {
        let last = basis.last().unwrap();
        let mut next: Vec<f64> = last.iter().zip(x).map(|(v, x)| v * x).collect();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&next, b);
                next.iter_mut().zip(b).for_each(|(e, b)| *e -= c * b);
            }
        }
        basis.push(normalise(next));
    }
    basis.pop().unwrap()
}

/// Closed form `(n!)^2/(2n+1)! Π_{r=1..n} (4R^2 + eps^2 (1 - r^2))`.
pub fn norm_sq_formula(n: usize, radius: f64, eps: f64) -> f64 {
    (1..=n)
        .map(|r| {
            let r = r as f64;
            r * r / (2.0 * r * (2.0 * r + 1.0)) * (4.0 * radius * radius + eps * eps * (1.0 - r * r))
        })
        .product()
}

/// `Tr_N(A^† B)`.
pub fn trace_inner(_rep: &FuzzySphereRep, a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    matrix::inner(a, b)
}

fn check_dim(rep: &FuzzySphereRep, a: &CMatrix) -> Result<()> {
    if a.nrows() != rep.dim || a.ncols() != rep.dim {
        return Err(Error::DimensionMismatch { expected: rep.dim, rows: a.nrows(), cols: a.ncols() });
    }
    Ok(())
}

/// Orthogonal projection onto the `N^2` harmonics.
pub fn decompose(rep: &FuzzySphereRep, a: &CMatrix) -> Result<HarmonicDecomposition> {
    check_dim(rep, a)?;
    let mut coeffs = BTreeMap::new();
    for label in rep.labels() {
        let band = rep.band(label.n, label.m);
        let dot: Complex64 = band
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| a[band.position(k)] * v)
            .sum();
        let norm = norm_sq_formula(label.n, rep.radius, rep.eps);
        coeffs.insert(label, dot / (rep.dim as f64 * norm));
    }
    Ok(HarmonicDecomposition { coeffs })
}

/// `ad(X0)^2 + (ad X+ ad X- + ad X- ad X+)/2`.
pub fn laplacian(rep: &FuzzySphereRep, a: &CMatrix) -> Result<CMatrix> {
    check_dim(rep, a)?;
    let ad = |x: &CMatrix, y: &CMatrix| matrix::commutator(x, y);
    let zz = ad(&rep.x0, &ad(&rep.x0, a));
    let pm = ad(&rep.xp, &ad(&rep.xm, a));
    let mp = ad(&rep.xm, &ad(&rep.xp, a));
    Ok(zz + (pm + mp) * Complex64::new(0.5, 0.0))
}

/// Which generator acts by `ad`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ladder {
    Raise,
    Lower,
    Diagonal,
}

/// `ad(X) P^m_n = coeff · P^{m'}_n`; returns `(coeff, m')`. Off the end of
/// the ladder the coefficient is zero.
pub fn ladder_apply(rep: &FuzzySphereRep, label: HarmonicLabel, dir: Ladder) -> (f64, HarmonicLabel) {
    let (n, m) = (label.n as i64, label.m);
    let (coeff, m2) = match dir {
        Ladder::Raise => (rep.eps * (((n - m) * (n + m + 1)) as f64).sqrt(), m + 1),
        Ladder::Lower => (rep.eps * (((n + m) * (n - m + 1)) as f64).sqrt(), m - 1),
        Ladder::Diagonal => (rep.eps * m as f64, m),
    };
    let coeff = if m2.abs() > n { 0.0 } else { coeff };
    (coeff, HarmonicLabel { n: label.n, m: m2 })
}

static SIX_J: Lazy<RwLock<HashMap<[i64; 6], f64>>> = Lazy::new(|| RwLock::new(HashMap::new()));

fn six_j_cached(twice: [i64; 6]) -> Result<f64> {
    if let Some(&v) = SIX_J.read().get(&twice) {
        return Ok(v);
    }
    let h = twice.map(HalfInt::from_twice);
    let v = angmom::wigner_6j(h[0], h[1], h[2], h[3], h[4], h[5])?.float_view();
    SIX_J.write().insert(twice, v);
    Ok(v)
}

/// Reduced matrix element in `P_{n1} P_{n2} = Σ_n CG · RM(n1, n2, n) P_n`.
pub fn reduced_matrix_element(rep: &FuzzySphereRep, n1: usize, n2: usize, n: usize) -> Result<f64> {
    let dim = rep.dim;
    if n1 >= dim || n2 >= dim || n >= dim {
        return Err(Error::InvalidHarmonic { n: n1.max(n2).max(n) as i64, m: 0 });
    }
    if n < n1.abs_diff(n2) || n > n1 + n2 {
        return Ok(0.0);
    }
    let k = dim as i64 - 1;
    let (a, b, c) = (2 * n1 as i64, 2 * n2 as i64, 2 * n as i64);
    let six = six_j_cached([k, a, k, b, k, c])?;
    let norm = |l| norm_sq_formula(l, rep.radius, rep.eps).sqrt();
    let sign = if (dim + 1 + n1 + n2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * norm(n1) * norm(n2) / norm(n)
        * (dim as f64).sqrt()
        * ((2 * n1 + 1) as f64).sqrt()
        * ((2 * n2 + 1) as f64).sqrt()
        * six)
}

/// Scale taking the unit-normalised classical harmonic of degree `n` on a
/// sphere of radius `R` to `P_n`: `(-1)^n sqrt((2n+1)!)/(n! (2R)^n)`.
pub fn omega_s2_scale(n: usize, radius: f64) -> f64 {
    let mag: f64 = (1..=n)
        .map(|k| {
            let k = k as f64;
            (2.0 * k * (2.0 * k + 1.0)).sqrt() / (k * 2.0 * radius)
        })
        .product();
    if n % 2 == 0 { mag } else { -mag }
}
