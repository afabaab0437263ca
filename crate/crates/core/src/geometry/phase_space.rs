//! Analytic checks for the eight-function embedding of `T*S^2`.

use super::POLE_TOL;
use crate::{Error, Result};

/// A point `(θ, φ, p_θ, p_φ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub phi: f64,
    pub p_theta: f64,
    pub p_phi: f64,
}

/// Values of `x1..x8` and their gradients in `(θ, φ, p_θ, p_φ)`.
fn embedding(pt: &PhasePoint) -> ([f64; 8], [[f64; 4]; 8]) {
    let (st, ct) = pt.theta.sin_cos();
    let (sp, cp) = pt.phi.sin_cos();
    let x = [st * cp, st * sp, ct, ct * cp, ct * sp, st, pt.p_theta, pt.p_phi];
    let grad = [
        [ct * cp, -st * sp, 0.0, 0.0],
        [ct * sp, st * cp, 0.0, 0.0],
        [-st, 0.0, 0.0, 0.0],
        [-st * cp, -ct * sp, 0.0, 0.0],
        [-st * sp, ct * cp, 0.0, 0.0],
        [ct, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    (x, grad)
}

/// Canonical brackets `{x_i, x_j}` with `{p_θ, θ} = {p_φ, φ} = 1`.
pub fn phase_space_brackets(pt: &PhasePoint) -> [[f64; 8]; 8] {
    let (_, g) = embedding(pt);
    let mut out = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            // Σ_a ∂f/∂p_a ∂g/∂q_a - ∂f/∂q_a ∂g/∂p_a with (q, p) = (θ, p_θ), (φ, p_φ)
            out[i][j] = g[i][2] * g[j][0] - g[i][0] * g[j][2] + g[i][3] * g[j][1] - g[i][1] * g[j][3];
        }
    }
    out
}

/// `(i, j, sign, k)`: `{x_i, x_j} = sign x_k` (1-based labels).
type Entry = (usize, usize, f64, usize);

const TABLE: [Entry; 10] = [
    (7, 1, 1.0, 4),
    (7, 4, -1.0, 1),
    (7, 2, 1.0, 5),
    (7, 5, -1.0, 2),
    (7, 3, -1.0, 6),
    (7, 6, 1.0, 3),
    (8, 1, -1.0, 2),
    (8, 2, 1.0, 1),
    (8, 4, -1.0, 5),
    (8, 5, 1.0, 4),
];

/// The table as usually quoted, with `{x8,x4} = x5` and `{x8,x5} = -x4`.
pub fn printed_bracket_table() -> Vec<(usize, usize, f64, usize)> {
    TABLE
        .iter()
        .map(|&(i, j, s, k)| if i == 8 && (j == 4 || j == 5) { (i, j, -s, k) } else { (i, j, s, k) })
        .collect()
}

fn expected(table: &[Entry], x: &[f64; 8]) -> [[f64; 8]; 8] {
    let mut out = [[0.0; 8]; 8];
    for &(i, j, s, k) in table {
        out[i - 1][j - 1] = s * x[k - 1];
        out[j - 1][i - 1] = -s * x[k - 1];
    }
    out
}

/// Largest `|{x_i,x_j} - table|` at a point for a given structure table.
pub fn bracket_residual(pt: &PhasePoint, table: &[Entry]) -> f64 {
    let (x, _) = embedding(pt);
    let b = phase_space_brackets(pt);
    let e = expected(table, &x);
    (0..8)
        .flat_map(|i| (0..8).map(move |j| (i, j)))
        .map(|(i, j)| (b[i][j] - e[i][j]).abs())
        .fold(0.0, f64::max)
}

fn immersion_residual(pt: &PhasePoint) -> f64 {
    let (x, _) = embedding(pt);
    [
        x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0,
        x[0] * x[0] + x[1] * x[1] - x[5] * x[5],
        x[0] * x[2] - x[3] * x[5],
        x[1] * x[2] - x[4] * x[5],
    ]
    .iter()
    .map(|r| r.abs())
    .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseSpaceReport {
    pub points: usize,
    pub bracket_residual: f64,
    pub immersion_residual: f64,
}

impl PhaseSpaceReport {
    pub fn max_residual(&self) -> f64 {
        self.bracket_residual.max(self.immersion_residual)
    }
}

pub fn verify_phase_space(points: &[PhasePoint]) -> Result<PhaseSpaceReport> {
    let mut rep = PhaseSpaceReport { points: points.len(), ..Default::default() };
    for pt in points {
        if pt.theta.sin().powi(2) < POLE_TOL {
            return Err(Error::PolePoint(pt.theta));
        }
        rep.bracket_residual = rep.bracket_residual.max(bracket_residual(pt, &TABLE));
        rep.immersion_residual = rep.immersion_residual.max(immersion_residual(pt));
    }
    Ok(rep)
}
