//! Band-limited fields on the sphere and the maps between fields and
//! `N x N` matrices.
//!
//! Harmonics are normalised so that `(1/4π) ∫ |ψ^m_n|^2 = 1`. The encoder is
//! `Φ_N(f) = Σ_{n<N} c_nm s_n P^m_n` with `s_n` from
//! [`omega_s2_scale`](crate::fuzzy_sphere::omega_s2_scale); with this choice
//! `Φ_N(1) = I` and `Φ_N(R x_i) = X_i`.

mod field;
pub mod harmonics;

use std::collections::BTreeMap;

use num_complex::Complex64;

pub use field::{project, Jet, ScalarField};
pub use harmonics::ylm_eval;

use crate::fuzzy_sphere::{decompose, omega_s2_scale, FuzzySphereRep};
use crate::geometry::{self, GridFunction};
use crate::matrix::CMatrix;
use crate::Result;

/// `Φ_N(f)`; modes with `n >= N` are dropped.
pub fn phi_n(rep: &FuzzySphereRep, f: &ScalarField) -> CMatrix {
    let dim = rep.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for (n, m, c) in f.iter() {
        if n >= dim || c == Complex64::default() {
            continue;
        }
        let band = rep.band(n, m);
        let k = c * omega_s2_scale(n, rep.radius());
        for (idx, &v) in band.values.iter().enumerate() {
            out[band.position(idx)] += k * v;
        }
    }
    out
}

/// One-sided inverse `Υ_N`, band limit `N - 1`.
pub fn upsilon_n(rep: &FuzzySphereRep, a: &CMatrix) -> Result<ScalarField> {
    let d = decompose(rep, a)?;
    let mut out = ScalarField::zero(rep.dim() - 1);
    for (label, c) in d.coeffs {
        out.set(label.n, label.m, c / omega_s2_scale(label.n, rep.radius()))?;
    }
    Ok(out)
}

/// Norm of the modes `n >= N` that `Υ_N ∘ Φ_N` discards.
pub fn truncation_error(f: &ScalarField, dim: usize) -> f64 {
    f.sub(&f.truncated(dim)).norm()
}

/// How much the matrix side depends on the order of products.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderingReport {
    /// `‖Υ((ΦuΦv)Φw) - Υ(Φu(ΦvΦw))‖`.
    pub association: f64,
    /// `‖Υ(ΦuΦv) - Υ(ΦvΦu)‖`.
    pub commutator: f64,
}

pub fn ordering_sensitivity(
    rep: &FuzzySphereRep,
    u: &ScalarField,
    v: &ScalarField,
    w: &ScalarField,
) -> Result<OrderingReport> {
    let (a, b, c) = (phi_n(rep, u), phi_n(rep, v), phi_n(rep, w));
    let left = upsilon_n(rep, &(&(&a * &b) * &c))?;
    let right = upsilon_n(rep, &(&a * &(&b * &c)))?;
    let uv = upsilon_n(rep, &(&a * &b))?;
    let vu = upsilon_n(rep, &(&b * &a))?;
    Ok(OrderingReport { association: left.sub(&right).norm(), commutator: uv.sub(&vu).norm() })
}

/// Matrices encoding a genus-0 surface.
#[derive(Clone, Debug)]
pub struct EncodedSurface {
    pub rep: FuzzySphereRep,
    pub x: [CMatrix; 3],
    pub extras: BTreeMap<String, CMatrix>,
}

/// One matrix-side against classical-side comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub quantity: String,
    pub matrix: f64,
    pub classical: f64,
    pub abs_err: f64,
}

impl ReportRow {
    fn new(quantity: String, matrix: f64, classical: f64) -> Self {
        ReportRow { quantity, matrix, classical, abs_err: (matrix - classical).abs() }
    }
}

/// Projects the coordinate and extra fields, encodes them with `Φ_N` and
/// compares averages, second moments and brackets on both sides.
pub fn analyze_surface(
    rep: FuzzySphereRep,
    coords: &[GridFunction; 3],
    extras: &[(String, GridFunction)],
) -> Result<(EncodedSurface, Vec<ReportRow>)> {
    let band = coords[0].grid.max_band();
    let xf: Vec<ScalarField> = coords.iter().map(|g| project(g, band)).collect::<Result<_>>()?;
    let mut extra_fields = Vec::new();
    for (name, g) in extras {
        extra_fields.push((name.clone(), project(g, g.grid.max_band())?));
    }
    let x = [phi_n(&rep, &xf[0]), phi_n(&rep, &xf[1]), phi_n(&rep, &xf[2])];
    let mut rows = Vec::new();
    let named = ["x1", "x2", "x3"]
        .iter()
        .map(|s| s.to_string())
        .zip(xf.iter().cloned())
        .chain(extra_fields.iter().cloned());
    for (name, f) in named {
        let first = geometry::trace_integral_compare(&rep, &f)?;
        rows.push(ReportRow::new(format!("mean({name})"), first.trace.re, first.integral.re));
        let second = geometry::trace_integral_product(&rep, &[f.clone(), f.clone()])?;
        rows.push(ReportRow::new(format!("mean({name}^2)"), second.trace.re, second.integral.re));
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let d = geometry::bracket_discrepancy(&rep, &xf[i], &xf[j])?;
        let scale = geometry::poisson_bracket(&xf[i], &xf[j])?.norm() / rep.radius();
        rows.push(ReportRow::new(format!("bracket(x{},x{})", i + 1, j + 1), d, 0.0));
        rows.push(ReportRow::new(format!("|bracket(x{},x{})|", i + 1, j + 1), scale, scale));
    }
    let extras = extra_fields.iter().map(|(n, f)| (n.clone(), phi_n(&rep, f))).collect();
    Ok((EncodedSurface { rep, x, extras }, rows))
}

#[cfg(test)]
mod tests;
