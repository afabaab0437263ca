use std::f64::consts::PI;

use anyhow::{Context, Result};
use clap::ValueEnum;
use ncgeom::encode::{phi_n, upsilon_n};
use ncgeom::fuzzy_sphere::{build_rep, laplacian, norm_sq_formula};
use ncgeom::geometry::{verify_phase_space, PhasePoint};
use ncgeom::matrix::{self, commutator, inner, max_abs, max_abs_diff, trace_n, CMatrix};
use ncgeom::surfaces::{build_rotation_rep, fuzzy_torus, quotient_residuals, torus_trace, RhoPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Geometry, Settings, ValidateArgs};
use crate::output::{num, pretty, write_atomic};

struct Check {
    name: &'static str,
    n: Option<usize>,
    residual: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual <= self.tol
    }

    fn to_json(&self) -> Value {
        json!({
            "check": self.name,
            "N": self.n,
            "residual": num(self.residual),
            "tolerance": num(self.tol),
            "pass": self.pass(),
        })
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn run(settings: &Settings, a: &ValidateArgs) -> Result<bool> {
    let plan = settings.validate(a)?;
    let checks: Vec<Check> = match plan.geometry {
        Geometry::Sphere => {
            let per_n: Vec<Result<Vec<Check>>> =
                plan.ns.par_iter().map(|&n| sphere(settings, n, plan.radius)).collect();
            per_n.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect()
        }
        Geometry::Torus => {
            let per_n: Vec<Result<Vec<Check>>> = plan.ns.par_iter().map(|&n| torus(settings, n)).collect();
            per_n.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect()
        }
        Geometry::Rotation => {
            let path = plan.profile.as_ref().context("--geometry rotation needs --profile")?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let rho: RhoPoly = text.parse().with_context(|| format!("parsing {}", path.display()))?;
            plan.ns.iter().map(|&n| rotation(settings, &rho, n)).collect::<Result<Vec<_>>>()?
        }
        Geometry::PhaseSpace => phase_space(settings, plan.points)?,
    };
    let all_pass = checks.iter().all(Check::pass);
    for ch in &checks {
        let n = ch.n.map(|n| format!(" N={n}")).unwrap_or_default();
        println!("{:<4} {}{n}: {:e}", if ch.pass() { "ok" } else { "FAIL" }, ch.name, ch.residual);
    }
    let report = json!({
        "geometry": geometry_name(plan.geometry),
        "R": num(plan.radius),
        "seed": settings.seed,
        "pass": all_pass,
        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
    });
    let name = format!("validate_{}.json", geometry_name(plan.geometry));
    write_atomic(&settings.out, &name, &pretty(&report))?;
    Ok(all_pass)
}

fn geometry_name(g: Geometry) -> String {
    g.to_possible_value().expect("named variant").get_name().to_string()
}

fn sphere(settings: &Settings, dim: usize, radius: f64) -> Result<Vec<Check>> {
    let rep = build_rep(dim, radius)?;
    let eps = rep.eps();
    let [x1, x2, x3] = rep.cartesian();
    let i_eps = Complex64::new(0.0, eps);
    let mut rel = max_abs_diff(&commutator(&rep.x0, &rep.xp), &(&rep.xp * c(eps)))
        .max(max_abs_diff(&commutator(&rep.xp, &rep.xm), &(&rep.x0 * c(2.0 * eps))));
    for (a, b, k) in [(&x1, &x2, &x3), (&x2, &x3, &x1), (&x3, &x1, &x2)] {
        rel = rel.max(max_abs_diff(&commutator(a, b), &(k * i_eps)));
    }
    let cas = &x1 * &x1 + &x2 * &x2 + &x3 * &x3;
    let cas = max_abs_diff(&cas, &(matrix::identity(dim) * c(radius * radius)));
    let tr = (trace_n(&(&rep.x0 * &rep.x0)) - c(radius * radius / 3.0)).norm();
    let (mut spec, mut norm) = (0.0f64, 0.0f64);
    for n in 0..dim {
        let lambda = eps * eps * (n * (n + 1)) as f64;
        let formula = norm_sq_formula(n, radius, eps);
        for m in -(n as i64)..=n as i64 {
            let p = rep.harmonic(n, m)?.mat;
            let lp = laplacian(&rep, &p)?;
            spec = spec.max(max_abs_diff(&lp, &(&p * c(lambda))) / (max_abs(&p) * lambda.max(eps * eps)));
            norm = norm.max((inner(&p, &p)?.re - formula).abs() / formula);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed ^ dim as u64);
    let a = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let inv = max_abs_diff(&phi_n(&rep, &upsilon_n(&rep, &a)?), &a);
    let n = Some(dim);
    Ok(vec![
        Check { name: "relations", n, residual: rel, tol: settings.tol("relations") },
        Check { name: "casimir", n, residual: cas, tol: settings.tol("casimir") },
        Check { name: "trace_x0_squared", n, residual: tr, tol: settings.tol("trace") },
        Check { name: "laplacian_spectrum", n, residual: spec, tol: settings.tol("spectrum") },
        Check { name: "norm_formula", n, residual: norm, tol: settings.tol("norm") },
        Check { name: "phi_upsilon_identity", n, residual: inv, tol: settings.tol("inverse") },
    ])
}

fn torus(settings: &Settings, dim: usize) -> Result<Vec<Check>> {
    let t = fuzzy_torus(dim)?;
    let id = matrix::identity(dim);
    let q = Complex64::from_polar(1.0, t.eps);
    let rel = max_abs_diff(&(&t.u * &t.v), &(&t.v * &t.u * q))
        .max(max_abs_diff(&(&t.u * t.u.adjoint()), &id))
        .max(max_abs_diff(&(&t.v * t.v.adjoint()), &id))
        .max(max_abs_diff(&t.monomial(dim as i64, 0), &id))
        .max(max_abs_diff(&t.monomial(0, dim as i64), &id));
    let n = dim as i64;
    let mut delta = 0.0f64;
    for r in -2 * n..=2 * n {
        for s in -2 * n..=2 * n {
            let want = if r.rem_euclid(n) == 0 && s.rem_euclid(n) == 0 { 1.0 } else { 0.0 };
            delta = delta.max((torus_trace(&t, r, s) - c(want)).norm());
        }
    }
    let tol = settings.tol("torus");
    Ok(vec![
        Check { name: "clock_shift_relations", n: Some(dim), residual: rel, tol },
        Check { name: "trace_delta", n: Some(dim), residual: delta, tol },
    ])
}

fn rotation(settings: &Settings, rho: &RhoPoly, dim: usize) -> Result<Check> {
    let rep = build_rotation_rep(rho, dim)?;
    let r = quotient_residuals(rho, rep.eps, &rep.gens)?;
    Ok(Check {
        name: "quotient_relations",
        n: Some(dim),
        residual: r.iter().cloned().fold(0.0, f64::max),
        tol: settings.tol("rotation"),
    })
}

fn phase_space(settings: &Settings, count: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let pts: Vec<PhasePoint> = (0..count)
        .map(|_| PhasePoint {
            theta: (1.0 - 2.0 * rng.gen::<f64>()).acos(),
            phi: rng.gen_range(0.0..2.0 * PI),
            p_theta: rng.gen_range(-5.0..5.0),
            p_phi: rng.gen_range(-5.0..5.0),
        })
        .collect();
    let r = verify_phase_space(&pts)?;
    let tol = settings.tol("phase");
    Ok(vec![
        Check { name: "bracket_table", n: None, residual: r.bracket_residual, tol },
        Check { name: "immersion", n: None, residual: r.immersion_residual, tol },
    ])
}
