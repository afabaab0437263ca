//! Classical Poisson calculus on the sphere and its matrix counterpart.
//!
//! Conjugate coordinates are `p = cos θ`, `q = φ` with
//! `{u, v} = ∂u/∂p ∂v/∂q - ∂u/∂q ∂v/∂p`, so `{x1, x2} = -x3` on the unit
//! sphere. With `[X1, X2] = i eps X3` this makes the fuzzy bracket
//! `(1/i eps)[A, B]` the image of `-(1/R){u, v}`.

pub mod grid;
mod phase_space;

use std::sync::Arc;

use num_complex::Complex64;

use crate::encode::{phi_n, project, upsilon_n, ScalarField};
use crate::fuzzy_sphere::FuzzySphereRep;
use crate::matrix::{self, CMatrix};
use crate::{Error, Result};
pub use grid::{gauss_legendre, GridFunction, SphereGrid};
pub use phase_space::{
    bracket_residual, phase_space_brackets, printed_bracket_table, verify_phase_space, PhasePoint,
    PhaseSpaceReport,
};

/// Nodes with `sin^2 θ` below this are treated as poles.
pub const POLE_TOL: f64 = 1e-10;
/// Conformal factors below this make the metric singular.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Poisson bracket of two band-limited fields, exact up to rounding.
pub fn poisson_bracket(u: &ScalarField, v: &ScalarField) -> Result<ScalarField> {
    let (lu, lv) = (u.degree(), v.degree());
    if lu == 0 || lv == 0 {
        return Ok(ScalarField::zero(0));
    }
    let grid = SphereGrid::shared(lu + lv);
    poisson_bracket_on(&grid, u, v, lu + lv - 1)
}

/// Pseudo-spectral bracket on a given grid, projected to `band_out`.
pub fn poisson_bracket_on(
    grid: &Arc<SphereGrid>,
    u: &ScalarField,
    v: &ScalarField,
    band_out: usize,
) -> Result<ScalarField> {
    let (lu, lv) = (u.degree(), v.degree());
    let content = (lu + lv).saturating_sub(1);
    // quadrature must be exact for degree content + band_out
    let need = content + band_out;
    if 2 * grid.n_theta < need + 1 || grid.n_phi <= need || band_out > grid.lmax {
        return Err(Error::Aliasing { requested: content.max(band_out), capacity: grid.max_band() });
    }
    let [_, up, uq] = u.with_band_limit(lu).jets_on_grid(grid)?;
    let [_, vp, vq] = v.with_band_limit(lv).jets_on_grid(grid)?;
    let values = (0..grid.len())
        .map(|i| up.values[i] * vq.values[i] - uq.values[i] * vp.values[i])
        .collect();
    project(&GridFunction { grid: grid.clone(), values }, band_out)
}

/// Coordinates of an immersion, pulled back to the sphere.
#[derive(Clone, Debug)]
pub struct EmbeddingFields {
    pub coords: Vec<ScalarField>,
}

impl EmbeddingFields {
    /// `R (sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn round_sphere(radius: f64) -> Self {
        let grid = SphereGrid::shared(2);
        let coords = [
            |t: f64, p: f64| t.sin() * p.cos(),
            |t: f64, p: f64| t.sin() * p.sin(),
            |t: f64, _p: f64| t.cos(),
        ]
        .iter()
        .map(|f| project(&grid.sample_real(|t, p| radius * f(t, p)), 1).expect("degree-1 grid"))
        .collect();
        EmbeddingFields { coords }
    }

    pub fn degree(&self) -> usize {
        self.coords.iter().map(ScalarField::degree).max().unwrap_or(0)
    }
}

/// Which closed form of the conformal factor to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConformalForm {
    /// `p, q` form.
    Canonical,
    /// `J0, J1, J2` form, undefined at the poles.
    Spherical,
}

/// Per-node values on a grid; `NaN` at excluded (pole) nodes.
#[derive(Clone, Debug)]
pub struct NodeValues {
    pub grid: Arc<SphereGrid>,
    pub values: Vec<f64>,
    pub excluded: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
struct RealJet {
    v: f64,
    dp: f64,
    dq: f64,
}

fn bracket(a: RealJet, b: RealJet) -> f64 {
    a.dp * b.dq - a.dq * b.dp
}

/// Jets of every field at every node.
fn grid_jets(fields: &[ScalarField], grid: &Arc<SphereGrid>) -> Result<Vec<Vec<RealJet>>> {
    fields
        .iter()
        .map(|f| {
            let [v, dp, dq] = f.with_band_limit(f.degree()).jets_on_grid(grid)?;
            Ok((0..grid.len())
                .map(|i| RealJet { v: v.values[i].re, dp: dp.values[i].re, dq: dq.values[i].re })
                .collect())
        })
        .collect()
}

fn point_jets(fields: &[ScalarField], theta: f64, phi: f64) -> Vec<RealJet> {
    fields
        .iter()
        .map(|f| {
            let j = f.jet(theta, phi);
            RealJet { v: j.value.re, dp: j.dp.re, dq: j.dq.re }
        })
        .collect()
}

fn unit_j_fields() -> Vec<ScalarField> {
    // J0 = cos θ, J1 = sin θ cos φ, J2 = sin θ sin φ
    let s = EmbeddingFields::round_sphere(1.0).coords;
    vec![s[2].clone(), s[0].clone(), s[1].clone()]
}

/// `C = det g` from brackets alone.
///
/// Canonical: `Σ_ij {p,x_i}{q,x_j}{x_i,x_j}`.
/// Spherical: `-(1/(1-J0^2)) Σ_ij {x_j,x_i}{J0,x_i}(J1{J2,x_j} - J2{J1,x_j})`.
fn conformal_from_jets(form: ConformalForm, x: &[RealJet], j: &[RealJet], cos_t: f64) -> Option<f64> {
    match form {
        ConformalForm::Canonical => {
            let p = RealJet { v: cos_t, dp: 1.0, dq: 0.0 };
            let q = RealJet { v: 0.0, dp: 0.0, dq: 1.0 };
            let mut c = 0.0;
            for xi in x {
                for xj in x {
                    c += bracket(p, *xi) * bracket(q, *xj) * bracket(*xi, *xj);
                }
            }
            Some(c)
        }
        ConformalForm::Spherical => {
            let sin2 = 1.0 - j[0].v * j[0].v;
            if sin2 < POLE_TOL {
                return None;
            }
            let mut c = 0.0;
            for xi in x {
                for xj in x {
                    let rot = j[1].v * bracket(j[2], *xj) - j[2].v * bracket(j[1], *xj);
                    c += bracket(*xj, *xi) * bracket(j[0], *xi) * rot;
                }
            }
            Some(-c / sin2)
        }
    }
}

pub fn conformal_factor_at(e: &EmbeddingFields, form: ConformalForm, theta: f64, phi: f64) -> Result<f64> {
    if theta.sin().powi(2) < POLE_TOL {
        return Err(Error::PolePoint(theta));
    }
    let x = point_jets(&e.coords, theta, phi);
    let j = point_jets(&unit_j_fields(), theta, phi);
    conformal_from_jets(form, &x, &j, theta.cos()).ok_or(Error::PolePoint(theta))
}

/// Conformal factor at every node of `grid`; pole nodes are excluded.
pub fn conformal_factor(e: &EmbeddingFields, grid: &Arc<SphereGrid>, form: ConformalForm) -> Result<NodeValues> {
    let xs = grid_jets(&e.coords, grid)?;
    let js = grid_jets(&unit_j_fields(), grid)?;
    let mut values = vec![f64::NAN; grid.len()];
    let mut excluded = Vec::new();
    for (i, value) in values.iter_mut().enumerate() {
        let j = i / grid.n_phi;
        let x: Vec<RealJet> = xs.iter().map(|f| f[i]).collect();
        let jj: Vec<RealJet> = js.iter().map(|f| f[i]).collect();
        match (grid.sin[j].powi(2) >= POLE_TOL).then(|| conformal_from_jets(form, &x, &jj, grid.x[j])).flatten() {
            Some(c) => *value = c,
            None => excluded.push(i),
        }
    }
    Ok(NodeValues { grid: grid.clone(), values, excluded })
}

fn pairing_from_jets(x: &[RealJet], u: RealJet, v: RealJet, cos_t: f64) -> Option<f64> {
    let c = conformal_from_jets(ConformalForm::Canonical, x, &[], cos_t)?;
    if c.abs() < SINGULAR_TOL {
        return None;
    }
    let s: f64 = x.iter().map(|xi| bracket(*xi, u) * bracket(*xi, v)).sum();
    Some(s / c)
}

/// `g(du#, dv#) = (1/C) Σ_i {x_i,u}{x_i,v}` at a point.
pub fn metric_pairing_at(e: &EmbeddingFields, u: &ScalarField, v: &ScalarField, theta: f64, phi: f64) -> Result<f64> {
    if theta.sin().powi(2) < POLE_TOL {
        return Err(Error::PolePoint(theta));
    }
    let x = point_jets(&e.coords, theta, phi);
    let uv = point_jets(&[u.clone(), v.clone()], theta, phi);
    pairing_from_jets(&x, uv[0], uv[1], theta.cos()).ok_or(Error::SingularMetric { count: 1, nodes: vec![0] })
}

/// Metric pairing at every node; fails listing the nodes where `C` vanishes.
pub fn metric_pairing(e: &EmbeddingFields, u: &ScalarField, v: &ScalarField, grid: &Arc<SphereGrid>) -> Result<NodeValues> {
    let xs = grid_jets(&e.coords, grid)?;
    let uv = grid_jets(&[u.clone(), v.clone()], grid)?;
    let mut values = vec![f64::NAN; grid.len()];
    let mut excluded = Vec::new();
    let mut singular = Vec::new();
    for (i, value) in values.iter_mut().enumerate() {
        let j = i / grid.n_phi;
        if grid.sin[j].powi(2) < POLE_TOL {
            excluded.push(i);
            continue;
        }
        let x: Vec<RealJet> = xs.iter().map(|f| f[i]).collect();
        match pairing_from_jets(&x, uv[0][i], uv[1][i], grid.x[j]) {
            Some(g) => *value = g,
            None => singular.push(i),
        }
    }
    if !singular.is_empty() {
        return Err(Error::SingularMetric { count: singular.len(), nodes: singular });
    }
    Ok(NodeValues { grid: grid.clone(), values, excluded })
}

/// `(1/(i eps)) [A, B]`.
pub fn fuzzy_bracket(rep: &FuzzySphereRep, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    matrix::check_same(a, b)?;
    if a.nrows() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), rows: a.nrows(), cols: a.ncols() });
    }
    Ok(matrix::commutator(a, b) * Complex64::new(0.0, -1.0 / rep.eps()))
}

/// A matrix trace set against the matching surface average.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceIntegral {
    pub trace: Complex64,
    pub integral: Complex64,
    pub error: f64,
}

/// `Tr_N(Φ_N(u))` against `(1/4π) ∫ u`.
pub fn trace_integral_compare(rep: &FuzzySphereRep, u: &ScalarField) -> Result<TraceIntegral> {
    trace_integral_product(rep, std::slice::from_ref(u))
}

/// `Tr_N(Φ(u1) Φ(u2) ...)` against `(1/4π) ∫ u1 u2 ...`.
pub fn trace_integral_product(rep: &FuzzySphereRep, fields: &[ScalarField]) -> Result<TraceIntegral> {
    let dim = rep.dim();
    let mut prod = CMatrix::identity(dim, dim);
    for f in fields {
        prod *= phi_n(rep, f);
    }
    let trace = matrix::trace_n(&prod);
    let degree: usize = fields.iter().map(ScalarField::degree).sum();
    let grid = SphereGrid::shared(degree.max(1));
    let mut values = vec![Complex64::new(1.0, 0.0); grid.len()];
    for f in fields {
        let g = f.with_band_limit(f.degree()).on_grid(&grid)?;
        for (v, w) in values.iter_mut().zip(&g.values) {
            *v *= w;
        }
    }
    let integral = grid.mean(&values);
    Ok(TraceIntegral { trace, integral, error: (trace - integral).norm() })
}

/// `‖Υ_N((1/i eps)[Φu, Φv]) + (1/R) {u, v}‖` restricted to modes `n < N`.
pub fn bracket_discrepancy(rep: &FuzzySphereRep, u: &ScalarField, v: &ScalarField) -> Result<f64> {
    let fb = fuzzy_bracket(rep, &phi_n(rep, u), &phi_n(rep, v))?;
    let fuzzy = upsilon_n(rep, &fb)?;
    let classical = poisson_bracket(u, v)?
        .scale(Complex64::new(-1.0 / rep.radius(), 0.0))
        .truncated(rep.dim());
    Ok(fuzzy.sub(&classical).norm())
}
