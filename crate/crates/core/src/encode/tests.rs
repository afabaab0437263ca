use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fuzzy_sphere::build_rep;
use crate::geometry::{EmbeddingFields, SphereGrid};
use crate::matrix::{self, max_abs_diff};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_field(rng: &mut ChaCha8Rng, l: usize, real: bool) -> ScalarField {
    let mut f = ScalarField::zero(l);
    for n in 0..=l {
        for m in 0..=n as i64 {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if real {
                let z = if m == 0 { c(z.re) } else { z };
                f.set(n, m, z).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                f.set(n, -m, z.conj() * sign).unwrap();
            } else {
                f.set(n, m, z).unwrap();
                f.set(n, -m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .unwrap();
            }
        }
    }
    f
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

// Low-degree harmonics written out by hand.
#[test]
fn ylm_closed_forms() {
    let pts = [(0.3, 1.1), (1.7, -2.0), (2.9, 0.4)];
    for &(t, p) in &pts {
        let e = |m: f64| Complex64::from_polar(1.0, m * p);
        assert!((ylm_eval(0, 0, t, p).unwrap() - c(1.0)).norm() < 1e-14);
        assert!((ylm_eval(1, 0, t, p).unwrap() - c(3f64.sqrt() * t.cos())).norm() < 1e-14);
        let y11 = -(1.5f64).sqrt() * t.sin() * e(1.0);
        assert!((ylm_eval(1, 1, t, p).unwrap() - y11).norm() < 1e-14);
        assert!((ylm_eval(1, -1, t, p).unwrap() + y11.conj()).norm() < 1e-14);
        let y20 = 5f64.sqrt() * 0.5 * (3.0 * t.cos().powi(2) - 1.0);
        assert!((ylm_eval(2, 0, t, p).unwrap() - c(y20)).norm() < 1e-13);
        let y22 = (15.0f64 / 8.0).sqrt() * t.sin().powi(2) * e(2.0);
        assert!((ylm_eval(2, 2, t, p).unwrap() - y22).norm() < 1e-13);
    }
    assert!(ylm_eval(2, 3, 0.1, 0.1).is_err());
}

// Brute-force midpoint rule, independent of the Gauss grid.
#[test]
fn ylm_unit_mean_square() {
    let (nt, np) = (400, 64);
    for &(n, m) in &[(0usize, 0i64), (3, 2), (7, -5), (12, 12)] {
        let mut acc = 0.0;
        for j in 0..nt {
            let t = (j as f64 + 0.5) * PI / nt as f64;
            for k in 0..np {
                let p = 2.0 * PI * k as f64 / np as f64;
                acc += ylm_eval(n, m, t, p).unwrap().norm_sqr() * t.sin();
            }
        }
        let mean = acc * (PI / nt as f64) * (2.0 * PI / np as f64) / (4.0 * PI);
        assert!((mean - 1.0).abs() < 1e-4, "({n},{m}) {mean}");
    }
}

#[test]
fn ylm_stable_at_high_degree() {
    for &t in &[0.01, 0.7, 1.5, 3.1] {
        let v = ylm_eval(256, 130, t, 0.2).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        assert!(v.norm() < 30.0);
    }
}

#[test]
fn projection_examples() {
    let grid = SphereGrid::shared(6);
    let cos = project(&grid.sample_real(|t, _| t.cos()), 3).unwrap();
    for (n, m, z) in cos.iter() {
        let want = if (n, m) == (1, 0) { 1.0 / 3f64.sqrt() } else { 0.0 };
        assert!((z - c(want)).norm() < 1e-12, "({n},{m})");
    }
    let one = project(&grid.sample_real(|_, _| 1.0), 3).unwrap();
    assert!((one.get(0, 0) - c(1.0)).norm() < 1e-12);
    let y32 = project(&grid.sample(|t, p| ylm_eval(3, 2, t, p).unwrap()), 3).unwrap();
    assert!((y32.get(3, 2) - c(1.0)).norm() < 1e-12);
    assert!(y32.sub(&ScalarField::harmonic(3, 2).unwrap()).norm() < 1e-12);
}

#[test]
fn projection_rejects_aliasing() {
    let grid = SphereGrid::shared(4);
    let f = grid.sample_real(|t, _| t.cos());
    assert!(matches!(project(&f, grid.max_band() + 1), Err(crate::Error::Aliasing { .. })));
}

#[test]
fn grid_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_field(&mut rng, 9, false);
    let grid: Arc<SphereGrid> = SphereGrid::shared(18);
    let back = project(&f.on_grid(&grid).unwrap(), 9).unwrap();
    assert!(back.sub(&f).norm() < 1e-12);
}

#[test]
fn pointwise_eval_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = random_field(&mut rng, 5, false);
    let grid = SphereGrid::shared(5);
    let g = f.on_grid(&grid).unwrap();
    let [_, dp, dq] = f.jets_on_grid(&grid).unwrap();
    for idx in [0, 7, grid.len() - 1] {
        let (t, p) = grid.node(idx);
        let jet = f.jet(t, p);
        assert!((jet.value - g.values[idx]).norm() < 1e-12);
        assert!((jet.dp - dp.values[idx]).norm() < 1e-10);
        assert!((jet.dq - dq.values[idx]).norm() < 1e-12);
    }
}

// Central differences in p = cos θ and q = φ.
#[test]
fn jet_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_field(&mut rng, 4, false);
    let (t, p, h) = (1.1, 0.6, 1e-5);
    let jet = f.jet(t, p);
    let x = t.cos();
    let dp = (f.eval((x + h).acos(), p) - f.eval((x - h).acos(), p)) / (2.0 * h);
    let dq = (f.eval(t, p + h) - f.eval(t, p - h)) / (2.0 * h);
    assert!((jet.dp - dp).norm() < 1e-7);
    assert!((jet.dq - dq).norm() < 1e-7);
}

#[test]
fn phi_of_constant_and_coordinates() {
    for &(dim, radius) in &[(2, 1.0), (5, 1.0), (8, 2.5)] {
        let rep = build_rep(dim, radius).unwrap();
        assert!(max_abs_diff(&phi_n(&rep, &ScalarField::constant(1.0)), &matrix::identity(dim)) < 1e-12);
        let xs = EmbeddingFields::round_sphere(radius);
        for (x, want) in xs.coords.iter().zip(rep.cartesian()) {
            assert!(max_abs_diff(&phi_n(&rep, x), &want) < 1e-12);
        }
        assert!(max_abs_diff(&phi_n(&rep, &xs.coords[2].scale(c(1.0 / radius))), &(&rep.x0 * c(1.0 / radius))) < 1e-12);
    }
}

#[test]
fn phi_drops_high_modes() {
    let rep = build_rep(4, 1.0).unwrap();
    let f = ScalarField::harmonic(4, 1).unwrap();
    assert!(matrix::max_abs(&phi_n(&rep, &f)) == 0.0);
    assert!((truncation_error(&f, 4) - 1.0).abs() < 1e-15);
}

#[test]
fn upsilon_examples() {
    let rep = build_rep(6, 1.0).unwrap();
    let one = upsilon_n(&rep, &matrix::identity(6)).unwrap();
    assert!(one.sub(&ScalarField::constant(1.0)).norm() < 1e-12);
    let cos = upsilon_n(&rep, &rep.x0).unwrap();
    let mut want = ScalarField::zero(1);
    want.set(1, 0, c(1.0 / 3f64.sqrt())).unwrap();
    assert!(cos.sub(&want).norm() < 1e-12);
}

#[test]
fn phi_upsilon_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for dim in [2, 3, 7, 16, 32] {
        let rep = build_rep(dim, 1.3).unwrap();
        let a = random_matrix(&mut rng, dim);
        let back = phi_n(&rep, &upsilon_n(&rep, &a).unwrap());
        let err = max_abs_diff(&a, &back);
        assert!(err < 1e-10, "N = {dim}: {err:e}");
    }
}

#[test]
fn upsilon_phi_is_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_field(&mut rng, 9, false);
    for dim in [3, 6, 10, 14] {
        let rep = build_rep(dim, 1.0).unwrap();
        let back = upsilon_n(&rep, &phi_n(&rep, &f)).unwrap();
        assert!(back.sub(&f.truncated(dim)).norm() < 1e-10, "N = {dim}");
        let direct = f.sub(&back).norm();
        assert!((truncation_error(&f, dim) - direct).abs() < 1e-10);
    }
}

#[test]
fn truncation_error_of_decaying_spectrum() {
    let mut f = ScalarField::zero(20);
    for n in 0..=20usize {
        f.set(n, 0, c(1.0 / (1.0 + n as f64).powi(2))).unwrap();
    }
    let rep = build_rep(8, 1.0).unwrap();
    let direct = f.sub(&upsilon_n(&rep, &phi_n(&rep, &f)).unwrap()).norm();
    let tail: f64 = (8..=20).map(|n| (1.0 + n as f64).powi(-4)).sum::<f64>().sqrt();
    assert!((truncation_error(&f, 8) - direct).abs() < 1e-10);
    assert!((direct - tail).abs() < 1e-12);
    assert_eq!(truncation_error(&f.truncated(8), 8), 0.0);
}

#[test]
fn trace_is_mean_coefficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_field(&mut rng, 5, false);
    for dim in [6, 9, 20] {
        let rep = build_rep(dim, 1.0).unwrap();
        assert!((matrix::trace_n(&phi_n(&rep, &f)) - f.get(0, 0)).norm() < 1e-12);
    }
}

#[test]
fn ordering_examples() {
    let rep = build_rep(8, 1.0).unwrap();
    let xs = EmbeddingFields::round_sphere(1.0);
    let (u, v) = (&xs.coords[2], &xs.coords[0]);
    let same = ordering_sensitivity(&rep, u, u, v).unwrap();
    assert_eq!(same.commutator, 0.0);
    assert!(same.association < 1e-13);
    let r = ordering_sensitivity(&rep, u, v, u).unwrap();
    assert!(r.commutator > 0.0);
}

#[test]
fn analyze_round_sphere() {
    let radius = 1.0;
    let grid = SphereGrid::shared(4);
    let coords = [
        grid.sample_real(|t, p| radius * t.sin() * p.cos()),
        grid.sample_real(|t, p| radius * t.sin() * p.sin()),
        grid.sample_real(|t, _| radius * t.cos()),
    ];
    let extras = vec![("h".to_string(), grid.sample_real(|_, _| 1.0))];
    let rep = build_rep(10, radius).unwrap();
    let (enc, rows) = analyze_surface(rep.clone(), &coords, &extras).unwrap();
    for (x, want) in enc.x.iter().zip(rep.cartesian()) {
        assert!(max_abs_diff(x, &want) < 1e-12);
    }
    assert!((matrix::trace_n(&enc.extras["h"]) - c(1.0)).norm() < 1e-12);
    let x3sq = rows.iter().find(|r| r.quantity == "mean(x3^2)").unwrap();
    assert!((x3sq.matrix - 1.0 / 3.0).abs() < 1e-12);
    assert!((x3sq.classical - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn analyze_propagates_aliasing() {
    let fine = SphereGrid::shared(6);
    let coarse = SphereGrid::shared(2);
    let coords = [
        fine.sample_real(|t, _| t.cos()),
        coarse.sample_real(|t, p| t.sin() * p.cos()),
        fine.sample_real(|t, _| t.cos()),
    ];
    let rep = build_rep(4, 1.0).unwrap();
    assert!(matches!(analyze_surface(rep, &coords, &[]), Err(crate::Error::Aliasing { .. })));
}

#[test]
fn field_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_field(&mut rng, 4, false);
    let text = f.to_json().unwrap();
    assert!(text.contains("\"L\":4"));
    assert_eq!(ScalarField::from_json(&text).unwrap(), f);
    assert!(ScalarField::from_json(r#"{"L":1,"coeffs":[{"n":2,"m":0,"re":1,"im":0}]}"#).is_err());
    assert!(ScalarField::from_json(r#"{"L":2,"coeffs":[{"n":1,"m":2,"re":1,"im":0}]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn phi_is_linear_and_unitary(seed in any::<u64>(), dim in 2usize..9, a in -2.0..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = build_rep(dim, 1.0).unwrap();
        let f = random_field(&mut rng, 5, false);
        let g = random_field(&mut rng, 5, false);
        let lhs = phi_n(&rep, &f.add(&g.scale(c(a))));
        let rhs = phi_n(&rep, &f) + phi_n(&rep, &g) * c(a);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
        prop_assert!(max_abs_diff(&phi_n(&rep, &f.conj()), &phi_n(&rep, &f).adjoint()) < 1e-12);
        let h = random_field(&mut rng, 5, true);
        let m = phi_n(&rep, &h);
        prop_assert!(max_abs_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn upsilon_is_linear(seed in any::<u64>(), dim in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = build_rep(dim, 1.0).unwrap();
        let (a, b) = (random_matrix(&mut rng, dim), random_matrix(&mut rng, dim));
        let sum = upsilon_n(&rep, &(&a + &b)).unwrap();
        let parts = upsilon_n(&rep, &a).unwrap().add(&upsilon_n(&rep, &b).unwrap());
        prop_assert!(sum.sub(&parts).norm() < 1e-10);
    }

    #[test]
    fn real_fields_stay_real_on_grid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&mut rng, 6, true);
        prop_assert!(f.is_real(1e-12));
        let g = f.on_grid(&SphereGrid::shared(6)).unwrap();
        prop_assert!(g.values.iter().all(|v| v.im.abs() < 1e-12));
    }
}
