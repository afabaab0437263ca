use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Profile `rho(z, eps) = Σ c_ab z^a eps^b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RhoPoly {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl RhoPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, z_pow: u32, eps_pow: u32, c: f64) -> Self {
        self.add(z_pow, eps_pow, c);
        self
    }

    pub fn add(&mut self, z_pow: u32, eps_pow: u32, c: f64) {
        let slot = self.coeffs.entry((z_pow, eps_pow)).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coeffs.remove(&(z_pow, eps_pow));
        }
    }

    /// From coefficients of `z^0, z^1, ...` with no eps dependence.
    pub fn from_z_coeffs(cs: &[f64]) -> Self {
        let mut p = Self::new();
        for (a, &c) in cs.iter().enumerate() {
            p.add(a as u32, 0, c);
        }
        p
    }

    /// `R^2 - z^2 + eps^2/4`, the round sphere.
    pub fn sphere(radius: f64) -> Self {
        Self::new().with(0, 0, radius * radius).with(2, 0, -1.0).with(0, 2, 0.25)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_eps_independent(&self) -> bool {
        self.coeffs.keys().all(|&(_, b)| b == 0)
    }

    pub fn eval(&self, z: f64, eps: f64) -> f64 {
        self.slice(eps).iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    /// Coefficients in `z` (lowest power first) at fixed `eps`, without
    /// trailing zeros.
    pub fn slice(&self, eps: f64) -> Vec<f64> {
        let deg = self.coeffs.keys().map(|&(a, _)| a).max().unwrap_or(0) as usize;
        let mut out = vec![0.0; deg + 1];
        for (&(a, b), &c) in &self.coeffs {
            out[a as usize] += c * eps.powi(b as i32);
        }
        while out.len() > 1 && *out.last().unwrap() == 0.0 {
            out.pop();
        }
        out
    }
}

impl fmt::Display for RhoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(a, b), c) in &self.coeffs {
            writeln!(f, "z^{a} eps^{b} : {c:?}")?;
        }
        Ok(())
    }
}

impl FromStr for RhoPoly {
    type Err = Error;

    /// Lines `z^a eps^b : coeff`; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = RhoPoly::new();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("bad profile line '{line}'"));
            let (lhs, rhs) = line.split_once(':').ok_or_else(bad)?;
            let c: f64 = rhs.trim().parse().map_err(|_| bad())?;
            let (mut a, mut b) = (None, None);
            for tok in lhs.split_whitespace() {
                let (name, pow) = tok.split_once('^').ok_or_else(bad)?;
                let pow: u32 = pow.parse().map_err(|_| bad())?;
                let slot = match name {
                    "z" => &mut a,
                    "eps" => &mut b,
                    _ => return Err(bad()),
                };
                if slot.replace(pow).is_some() {
                    return Err(bad());
                }
            }
            p.add(a.unwrap_or(0), b.unwrap_or(0), c);
        }
        Ok(p)
    }
}

/// Open interval; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn horner(cs: &[f64], z: f64) -> f64 {
    cs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Real roots of a polynomial (lowest power first), sorted and refined.
pub fn real_roots(cs: &[f64]) -> Vec<f64> {
    let deg = cs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = cs[deg];
    let companion = DMatrix::from_fn(deg, deg, |r, c| {
        if r == 0 {
            -cs[deg - 1 - c] / lead
        } else if c + 1 == r {
            1.0
        } else {
            0.0
        }
    });
    let scale = 1.0 + cs.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let mut roots: Vec<f64> = companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * scale)
        .map(|z| refine_root(cs, z.re))
        .collect();
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * (1.0 + b.abs()));
    roots
}

fn refine_root(cs: &[f64], guess: f64) -> f64 {
    let f = |z| horner(cs, z);
    let mut delta = 1e-6 * (1.0 + guess.abs());
    for _ in 0..8 {
        let (mut a, mut b) = (guess - delta, guess + delta);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            return a;
        }
        if fb == 0.0 {
            return b;
        }
        if fa.signum() != fb.signum() {
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    return mid;
                }
                if fm.signum() == fa.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return 0.5 * (a + b);
        }
        delta *= 4.0;
        if delta > 1e-3 * (1.0 + guess.abs()) {
            break;
        }
    }
    // Even-multiplicity root: polish with Newton on the derivative.
    let d: Vec<f64> = cs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    let mut z = guess;
    for _ in 0..50 {
        let dd: Vec<f64> = d.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let (g, gp) = (horner(&d, z), horner(&dd, z));
        if gp == 0.0 {
            break;
        }
        let step = g / gp;
        z -= step;
        if step.abs() <= 1e-15 * (1.0 + z.abs()) {
            break;
        }
    }
    z
}

/// Maximal open intervals on which `rho(·, eps0) > 0`.
pub fn rho_interval(rho: &RhoPoly, eps0: f64) -> Result<Vec<Interval>> {
    let cs = rho.slice(eps0);
    if cs.iter().all(|&c| c == 0.0) {
        return Err(Error::DegenerateProfile(eps0));
    }
    let roots = real_roots(&cs);
    let mut cuts = vec![f64::NEG_INFINITY];
    cuts.extend(&roots);
    cuts.push(f64::INFINITY);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let probe = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0 + lo.abs(),
            (false, true) => hi - 1.0 - hi.abs(),
            (false, false) => 0.0,
        };
        if horner(&cs, probe) > 0.0 {
            out.push(Interval { lo, hi });
        }
    }
    Ok(out)
}

/// Result of the self-consistency condition `N eps = z_hi(eps) - z_lo(eps)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsSolution {
    pub eps: f64,
    pub z_lo: f64,
    pub z_hi: f64,
}

/// The unique bounded component of `{rho(., eps) > 0}`. Unbounded components
/// carry no finite representation and are ignored.
fn single_bounded(rho: &RhoPoly, eps: f64) -> Result<Interval> {
    let ivs = rho_interval(rho, eps)?;
    let bounded: Vec<Interval> = ivs.iter().copied().filter(Interval::is_bounded).collect();
    match bounded.as_slice() {
        [iv] => Ok(*iv),
        [] if ivs.is_empty() => {
            Err(Error::NoMatrixRepresentation(format!("rho(., {eps}) is nowhere positive")))
        }
        [] => Err(Error::NoMatrixRepresentation(format!("only unbounded intervals at eps = {eps}"))),
        many => Err(Error::AmbiguousComponent(many.len())),
    }
}

pub fn solve_eps(rho: &RhoPoly, dim: usize) -> Result<EpsSolution> {
    if dim == 0 {
        return Err(Error::InvalidDimension(dim));
    }
    let n = dim as f64;
    let g = |eps: f64| -> Result<(f64, Interval)> {
        let iv = single_bounded(rho, eps)?;
        Ok((iv.width() - n * eps, iv))
    };
    let (g0, iv0) = g(0.0)?;
    if g0 <= 0.0 {
        return Err(Error::NoMatrixRepresentation("zero-width interval".into()));
    }
    let mut lo = 0.0;
    let mut hi = iv0.width() / n;
    let mut doublings = 0;
    loop {
        let (gh, _) = g(hi)?;
        if gh <= 0.0 {
            break;
        }
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoMatrixRepresentation("no sign change found".into()));
        }
    }
    let mut best = (hi, g(hi)?);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        let (gm, iv) = g(mid)?;
        best = (mid, (gm, iv));
        if gm.abs() <= 1e-14 * (1.0 + iv.width()) || mid <= lo || mid >= hi {
            break;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (eps, (res, iv)) = best;
    if res.abs() > 1e-12 {
        return Err(Error::NoMatrixRepresentation(format!("eps solver residual {res:e}")));
    }
    Ok(EpsSolution { eps, z_lo: iv.lo, z_hi: iv.hi })
}
