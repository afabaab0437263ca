use num_complex::Complex64;

use super::profile::{solve_eps, RhoPoly};
use crate::matrix::{commutator, max_abs_diff, CMatrix};
use crate::{Error, Result};

/// `X0` (diagonal), `X+`, `X-` as matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators {
    pub x0: CMatrix,
    pub xp: CMatrix,
    pub xm: CMatrix,
}

impl Generators {
    pub fn dim(&self) -> usize {
        self.x0.nrows()
    }

    /// Diagonal of `X0`; fails if `X0` is not diagonal with real entries.
    pub fn x0_spectrum(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let scale = 1.0 + self.x0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for r in 0..n {
            for c in 0..n {
                let z = self.x0[(r, c)];
                if (r != c && z.norm() > 1e-12 * scale) || (r == c && z.im.abs() > 1e-12 * scale) {
                    return Err(Error::Representation("X0 is not real diagonal".into()));
                }
            }
        }
        Ok((0..n).map(|k| self.x0[(k, k)].re).collect())
    }

    pub fn max_diff(&self, other: &Generators) -> f64 {
        max_abs_diff(&self.x0, &other.x0)
            .max(max_abs_diff(&self.xp, &other.xp))
            .max(max_abs_diff(&self.xm, &other.xm))
    }
}

/// Diagonal matrix `f(X0)` from the spectrum of `X0`.
pub fn diag_fn(spec: &[f64], f: impl Fn(f64) -> f64) -> CMatrix {
    let n = spec.len();
    CMatrix::from_fn(n, n, |r, c| if r == c { Complex64::new(f(spec[r]), 0.0) } else { Complex64::default() })
}

#[derive(Clone, Debug)]
pub struct SurfaceRotRep {
    pub rho: RhoPoly,
    pub eps: f64,
    pub z_lo: f64,
    pub z_hi: f64,
    pub gens: Generators,
}

impl SurfaceRotRep {
    pub fn dim(&self) -> usize {
        self.gens.dim()
    }
}

/// Largest `|rho|` over the interval, used to scale tolerances.
fn rho_scale(rho: &RhoPoly, eps: f64, lo: f64, hi: f64) -> f64 {
    (0..=64)
        .map(|k| rho.eval(lo + (hi - lo) * k as f64 / 64.0, eps).abs())
        .fold(1e-300, f64::max)
}

pub fn build_rotation_rep(rho: &RhoPoly, dim: usize) -> Result<SurfaceRotRep> {
    let sol = solve_eps(rho, dim)?;
    let (eps, z_lo) = (sol.eps, sol.z_lo);
    let tol = 1e-10 * rho_scale(rho, eps, sol.z_lo, sol.z_hi);
    let mut xp = CMatrix::zeros(dim, dim);
    for r in 0..dim.saturating_sub(1) {
        let z = z_lo + (r + 1) as f64 * eps;
        let v = rho.eval(z, eps);
        if v < -tol {
            return Err(Error::Representation(format!("rho({z}) = {v} < 0 at a lattice point")));
        }
        xp[(r + 1, r)] = Complex64::new(v.max(0.0).sqrt(), 0.0);
    }
    let x0 = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new(z_lo + (r as f64 + 0.5) * eps, 0.0)
        } else {
            Complex64::default()
        }
    });
    let xm = xp.adjoint();
    Ok(SurfaceRotRep { rho: rho.clone(), eps, z_lo, z_hi: sol.z_hi, gens: Generators { x0, xp, xm } })
}

/// Residuals of the three quotient relations for profile `rho` at `eps`:
/// `[X0,X+] - eps X+`, `[X+,X-] - (rho(X0-eps/2) - rho(X0+eps/2))`,
/// `X+X- + X-X+ - (rho(X0-eps/2) + rho(X0+eps/2))`.
pub fn quotient_residuals(rho: &RhoPoly, eps: f64, g: &Generators) -> Result<[f64; 3]> {
    let spec = g.x0_spectrum()?;
    let below = diag_fn(&spec, |z| rho.eval(z - eps / 2.0, eps));
    let above = diag_fn(&spec, |z| rho.eval(z + eps / 2.0, eps));
    let e = Complex64::new(eps, 0.0);
    let r0 = max_abs_diff(&commutator(&g.x0, &g.xp), &(&g.xp * e))
        .max(max_abs_diff(&commutator(&g.x0, &g.xm), &(&g.xm * -e)));
    let r1 = max_abs_diff(&commutator(&g.xp, &g.xm), &(&below - &above));
    let r2 = max_abs_diff(&(&g.xp * &g.xm + &g.xm * &g.xp), &(&below + &above));
    Ok([r0, r1, r2])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    Normal,
    Central,
}

/// Ordered image of the classical monomial `x±^|r| f(x0)`; `r > 0` uses
/// `X+`, `r < 0` uses `X-`.
///
/// Central ordering puts `f` and the amplitude at the midpoint of the jump:
/// `X+^r [rho(X0 + r eps/2)^r / Π_{j=0}^{r-1} rho(X0 + (2j+1) eps/2)]^{1/2} f(X0 + r eps/2)`,
/// and the mirror image for `X-`. Only states not annihilated by `X±^r`
/// are evaluated.
pub fn apply_ordering(
    rep: &SurfaceRotRep,
    kind: OrderingKind,
    r: i64,
    f: impl Fn(f64) -> f64,
) -> Result<CMatrix> {
    let dim = rep.dim();
    let steps = r.unsigned_abs() as usize;
    if steps >= dim {
        return Err(Error::OrderingUndefined(format!("|r| = {steps} must be below N = {dim}")));
    }
    let spec = rep.gens.x0_spectrum()?;
    let shift = if r >= 0 { &rep.gens.xp } else { &rep.gens.xm };
    let mut power = CMatrix::identity(dim, dim);
    for _ in 0..steps {
        power = shift * power;
    }
    let dir = r.signum() as f64;
    let eps = rep.eps;
    let rho = |z: f64| rep.rho.eval(z, eps);
    let mut diag = vec![0.0; dim];
    for (s, &z) in spec.iter().enumerate() {
        let used = if r >= 0 { s + steps < dim } else { s >= steps };
        if !used {
            continue;
        }
        diag[s] = match kind {
            OrderingKind::Normal => f(z),
            OrderingKind::Central => {
                let mid = z + dir * steps as f64 * eps / 2.0;
                let num = rho(mid).powi(steps as i32);
                let den: f64 = (0..steps).map(|j| rho(z + dir * (2 * j + 1) as f64 * eps / 2.0)).product();
                if den <= 0.0 || num < 0.0 {
                    return Err(Error::OrderingUndefined(format!(
                        "radicand {num}/{den} at X0 = {z}"
                    )));
                }
                (num / den).sqrt() * f(mid)
            }
        };
    }
    Ok(power * diag_fn(&diag, |x| x))
}

/// The isomorphism between two eps-independent profiles with bounded
/// intervals, acting on the generators of the target algebra.
#[derive(Clone, Debug)]
pub struct IsoMap {
    pub rho1: RhoPoly,
    pub rho2: RhoPoly,
    /// Ratio of interval widths.
    pub k: f64,
    pub z1_lo: f64,
    pub z2_lo: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl IsoMap {
    pub fn new(rho1: &RhoPoly, rho2: &RhoPoly, dim: usize) -> Result<Self> {
        if !rho1.is_eps_independent() || !rho2.is_eps_independent() {
            return Err(Error::IsoUndefined("profiles must not depend on eps".into()));
        }
        let s1 = solve_eps(rho1, dim)?;
        let s2 = solve_eps(rho2, dim)?;
        Ok(IsoMap {
            rho1: rho1.clone(),
            rho2: rho2.clone(),
            k: (s1.z_hi - s1.z_lo) / (s2.z_hi - s2.z_lo),
            z1_lo: s1.z_lo,
            z2_lo: s2.z_lo,
            eps1: s1.eps,
            eps2: s2.eps,
        })
    }

    /// Images of `X0, X±` given generators `Y0, Y±` obeying the `rho2`
    /// relations. The half-step inside `rho1` is `K eps2 / 2 = eps1 / 2`.
    pub fn apply(&self, y: &Generators) -> Result<Generators> {
        let spec = y.x0_spectrum()?;
        let affine = |z: f64| self.k * (z - self.z2_lo) + self.z1_lo;
        let dim = spec.len();
        let mut amp = vec![0.0; dim];
        for (s, &z) in spec.iter().enumerate() {
            if s + 1 >= dim {
                continue;
            }
            let num = self.rho1.eval(affine(z) + 0.5 * self.k * self.eps2, 0.0);
            let den = self.rho2.eval(z + 0.5 * self.eps2, 0.0);
            if den <= 0.0 || num < 0.0 {
                return Err(Error::IsoUndefined(format!("radicand {num}/{den} at Y0 = {z}")));
            }
            amp[s] = (num / den).sqrt();
        }
        let xp = &y.xp * diag_fn(&amp, |x| x);
        let xm = xp.adjoint();
        Ok(Generators { x0: diag_fn(&spec, affine), xp, xm })
    }
}

/// Images of the `rho1` generators inside the `N`-dimensional `rho2` rep.
pub fn iso_map(rho1: &RhoPoly, rho2: &RhoPoly, dim: usize) -> Result<Generators> {
    let map = IsoMap::new(rho1, rho2, dim)?;
    let target = build_rotation_rep(rho2, dim)?;
    map.apply(&target.gens)
}
