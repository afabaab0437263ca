use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::encode::harmonics::{legendre_dtheta, legendre_table, tri};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes in decreasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let step = p1 / dp;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Product grid: Gauss-Legendre in `cos θ` times uniform `φ`.
///
/// Carries Legendre tables up to `lmax` at every `θ` node.
#[derive(Debug)]
pub struct SphereGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub lmax: usize,
    /// `cos θ` nodes.
    pub x: Vec<f64>,
    pub sin: Vec<f64>,
    pub theta: Vec<f64>,
    /// Weights in `cos θ`, summing to 2.
    pub w: Vec<f64>,
    pub phi: Vec<f64>,
    legendre: Vec<Vec<f64>>,
    dlegendre: Vec<Vec<f64>>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize, lmax: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let sin: Vec<f64> = x.iter().map(|&c| (1.0 - c * c).sqrt()).collect();
        let theta = x.iter().map(|c| c.acos()).collect();
        let phi = (0..n_phi).map(|k| 2.0 * PI * k as f64 / n_phi as f64).collect();
        let legendre: Vec<Vec<f64>> =
            x.iter().zip(&sin).map(|(&c, &s)| legendre_table(lmax, c, s)).collect();
        let dlegendre = legendre
            .iter()
            .zip(x.iter().zip(&sin))
            .map(|(t, (&c, &s))| legendre_dtheta(t, lmax, c, s))
            .collect();
        SphereGrid { n_theta, n_phi, lmax, x, sin, theta, w, phi, legendre, dlegendre }
    }

    /// Grid that integrates products of total degree `2d` exactly and can
    /// analyse fields up to degree `d`.
    pub fn for_degree(d: usize) -> Self {
        Self::new(d + 1, 2 * d + 2, d)
    }

    /// Shared instance of [`SphereGrid::for_degree`].
    pub fn shared(d: usize) -> Arc<SphereGrid> {
        static CACHE: Lazy<RwLock<HashMap<usize, Arc<SphereGrid>>>> = Lazy::new(Default::default);
        if let Some(g) = CACHE.read().get(&d) {
            return g.clone();
        }
        let g = Arc::new(SphereGrid::for_degree(d));
        CACHE.write().entry(d).or_insert(g).clone()
    }

    /// Largest band limit `L` for which projection of a degree-`L` field is
    /// exact on this grid.
    pub fn max_band(&self) -> usize {
        let by_theta = self.n_theta.saturating_sub(1);
        let by_phi = self.n_phi.saturating_sub(1) / 2;
        by_theta.min(by_phi).min(self.lmax)
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node `(j, k)` as a flat index.
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.n_phi + k
    }

    /// `(θ, φ)` of a flat index.
    pub fn node(&self, idx: usize) -> (f64, f64) {
        (self.theta[idx / self.n_phi], self.phi[idx % self.n_phi])
    }

    /// Quadrature weight for the normalised measure `dΩ/4π`.
    pub fn mean_weight(&self, idx: usize) -> f64 {
        self.w[idx / self.n_phi] / (2.0 * self.n_phi as f64)
    }

    pub(crate) fn lam(&self, j: usize, n: usize, m: usize) -> f64 {
        self.legendre[j][tri(n, m)]
    }

    pub(crate) fn dlam(&self, j: usize, n: usize, m: usize) -> f64 {
        self.dlegendre[j][tri(n, m)]
    }

    /// Values of `f(θ, φ)` at every node.
    pub fn sample(self: &Arc<Self>, f: impl Fn(f64, f64) -> Complex64) -> GridFunction {
        let values = (0..self.len()).map(|i| {
            let (t, p) = self.node(i);
            f(t, p)
        });
        GridFunction { grid: self.clone(), values: values.collect() }
    }

    pub fn sample_real(self: &Arc<Self>, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        self.sample(|t, p| Complex64::new(f(t, p), 0.0))
    }

    /// `(1/4π) ∫ f dΩ` by quadrature.
    pub fn mean(&self, values: &[Complex64]) -> Complex64 {
        values.iter().enumerate().map(|(i, v)| v * self.mean_weight(i)).sum()
    }
}

/// Samples of a function at the nodes of a grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: Arc<SphereGrid>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn mean(&self) -> Complex64 {
        self.grid.mean(&self.values)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> GridFunction {
        assert!(Arc::ptr_eq(&self.grid, &other.grid) || self.grid.len() == other.grid.len());
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}
