use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn surd(n: i64, d: i64, root_n: i64, root_d: i64) -> ExactCoupling {
    ExactCoupling::new(q(n, d), q(root_n, root_d))
}

/// Coupled basis built by ladder-operator lowering and Gram-Schmidt in the
/// product space of `j1 x j2`. Returns `(2J, 2M) -> amplitudes over (m1, m2)`
/// indexed by `(2m1, 2m2)`.
fn ladder_cg_table(tj1: i64, tj2: i64) -> HashMap<(i64, i64, i64, i64), f64> {
    let ms1: Vec<i64> = (0..=tj1).map(|k| tj1 - 2 * k).collect();
    let ms2: Vec<i64> = (0..=tj2).map(|k| tj2 - 2 * k).collect();
    let idx = |a: i64, b: i64| -> usize {
        let i = ((tj1 - a) / 2) as usize;
        let k = ((tj2 - b) / 2) as usize;
        i * ms2.len() + k
    };
    let dim = ms1.len() * ms2.len();
    let lower = |v: &Vec<f64>| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for &a in &ms1 {
            for &b in &ms2 {
                let amp = v[idx(a, b)];
                if amp == 0.0 {
                    continue;
                }
                if a > -tj1 {
                    let c = (((tj1 + a) * (tj1 - a + 2)) as f64 / 4.0).sqrt();
                    out[idx(a - 2, b)] += c * amp;
                }
                if b > -tj2 {
                    let c = (((tj2 + b) * (tj2 - b + 2)) as f64 / 4.0).sqrt();
                    out[idx(a, b - 2)] += c * amp;
                }
            }
        }
        out
    };
    let normalize = |v: &mut Vec<f64>| {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= n);
    };

    let mut states: HashMap<(i64, i64), Vec<f64>> = HashMap::new();
    let tj_max = tj1 + tj2;
    let tj_min = (tj1 - tj2).abs();
    let mut tj = tj_max;
    while tj >= tj_min {
        // top state |J, J>: orthogonal to the |J', J> with J' > J
        let mut top = None;
        for &a in &ms1 {
            let b = tj - a;
            if b.abs() > tj2 || (tj2 - b) % 2 != 0 {
                continue;
            }
            let mut v = vec![0.0; dim];
            v[idx(a, b)] = 1.0;
            let mut tjp = tj + 2;
            while tjp <= tj_max {
                let u = &states[&(tjp, tj)];
                let d: f64 = v.iter().zip(u).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
                tjp += 2;
            }
            let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-8 {
                normalize(&mut v);
                top = Some(v);
                break;
            }
        }
        let mut v = top.expect("top state");
        // Condon-Shortley: <j1 j1; j2 J-j1 | J J> > 0
        let lead = v[idx(tj1, tj - tj1)];
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let mut tm = tj;
        states.insert((tj, tm), v.clone());
        while tm > -tj {
            v = lower(&v);
            normalize(&mut v);
            tm -= 2;
            states.insert((tj, tm), v.clone());
        }
        tj -= 2;
    }

    let mut table = HashMap::new();
    for ((tj, tm), v) in &states {
        for &a in &ms1 {
            for &b in &ms2 {
                if a + b == *tm {
                    table.insert((a, b, *tj, *tm), v[idx(a, b)]);
                }
            }
        }
    }
    table
}

#[test]
fn cg_examples() {
    // coupling with spin zero
    for tj in 0..6 {
        for tm in (-tj..=tj).step_by(2) {
            let c = clebsch_gordan(h(tj), h(tm), h(0), h(0), h(tj), h(tm)).unwrap();
            assert_eq!(c, ExactCoupling::one());
        }
    }
    let c = clebsch_gordan(h(1), h(1), h(1), h(-1), h(2), h(0)).unwrap();
    assert_eq!(c, surd(1, 1, 1, 2));
    let c = clebsch_gordan(h(2), h(2), h(2), h(-2), h(0), h(0)).unwrap();
    assert_eq!(c, surd(1, 1, 1, 3));
}

#[test]
fn cg_examples_match_ladder_oracle() {
    let t = ladder_cg_table(1, 1);
    assert!((t[&(1, -1, 2, 0)] - 0.5f64.sqrt()).abs() < 1e-14);
    let t = ladder_cg_table(2, 2);
    assert!((t[&(2, -2, 0, 0)] - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
}

#[test]
fn cg_matches_ladder_oracle_everywhere() {
    for tj1 in 0..=7 {
        for tj2 in 0..=7 {
            let table = ladder_cg_table(tj1, tj2);
            for (&(a, b, tj, tm), &want) in &table {
                let got = clebsch_gordan(h(tj1), h(a), h(tj2), h(b), h(tj), h(tm))
                    .unwrap()
                    .float_view();
                assert!(
                    (got - want).abs() < 1e-12,
                    "<{tj1}/2 {a}/2 {tj2}/2 {b}/2|{tj}/2 {tm}/2>: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn cg_selection_rules() {
    assert!(clebsch_gordan(h(2), h(2), h(2), h(0), h(2), h(0)).unwrap().is_zero());
    assert!(clebsch_gordan(h(2), h(0), h(2), h(0), h(6), h(0)).unwrap().is_zero());
    assert!(clebsch_gordan(h(2), h(4), h(2), h(0), h(4), h(4)).unwrap().is_zero());
}

#[test]
fn label_range_rejected() {
    let err = clebsch_gordan(h(402), h(0), h(0), h(0), h(402), h(0)).unwrap_err();
    assert!(matches!(err, Error::LabelRange { .. }));
    assert!(clebsch_gordan(h(400), h(0), h(0), h(0), h(400), h(0)).is_ok());
}

#[test]
fn three_j_examples() {
    let c = wigner_3j(h(2), h(2), h(0), h(0), h(0), h(0)).unwrap();
    assert_eq!(c, surd(-1, 1, 1, 3));
    for tj in 0..8 {
        for tm in (-tj..=tj).step_by(2) {
            let c = wigner_3j(h(tj), h(tj), h(0), h(tm), h(-tm), h(0)).unwrap();
            let s = if ((tj - tm) / 2) % 2 == 0 { 1 } else { -1 };
            assert_eq!(c, surd(s, 1, 1, tj + 1));
        }
    }
    assert!(wigner_3j(h(2), h(2), h(2), h(2), h(0), h(0)).unwrap().is_zero());
}

/// `<(j1 j2) j12, j3; J | j1, (j2 j3) j23; J>` summed over magnetic labels.
fn recoupling_overlap(
    tj1: i64,
    tj2: i64,
    tj3: i64,
    tj12: i64,
    tj23: i64,
    tj: i64,
) -> SurdSum {
    let tm = tj;
    let mut s = SurdSum::new();
    for tm1 in (-tj1..=tj1).step_by(2) {
        for tm2 in (-tj2..=tj2).step_by(2) {
            let tm3 = tm - tm1 - tm2;
            if tm3.abs() > tj3 {
                continue;
            }
            let a = clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(tj12), h(tm1 + tm2)).unwrap();
            let b = clebsch_gordan(h(tj12), h(tm1 + tm2), h(tj3), h(tm3), h(tj), h(tm)).unwrap();
            let c = clebsch_gordan(h(tj2), h(tm2), h(tj3), h(tm3), h(tj23), h(tm2 + tm3)).unwrap();
            let d = clebsch_gordan(h(tj1), h(tm1), h(tj23), h(tm2 + tm3), h(tj), h(tm)).unwrap();
            s.add(&(&(&a * &b) * &(&c * &d)));
        }
    }
    s
}

/// 6j from the recoupling overlap:
/// overlap = (-1)^(j1+j2+j3+J) sqrt((2j12+1)(2j23+1)) {j1 j2 j12; j3 J j23}.
fn sixj_oracle(tj1: i64, tj2: i64, tj12: i64, tj3: i64, tj: i64, tj23: i64) -> ExactCoupling {
    let ov = recoupling_overlap(tj1, tj2, tj3, tj12, tj23, tj)
        .to_single()
        .expect("single surd");
    let s = if ((tj1 + tj2 + tj3 + tj) / 2) % 2 == 0 { 1 } else { -1 };
    let norm = ExactCoupling::new(q(s, 1), q(1, (tj12 + 1) * (tj23 + 1)));
    &ov * &norm
}

#[test]
fn six_j_examples() {
    let c = wigner_6j(h(2), h(2), h(2), h(2), h(2), h(2)).unwrap();
    assert_eq!(c, surd(1, 6, 1, 1));
    assert_eq!(sixj_oracle(2, 2, 2, 2, 2, 2), c);

    // {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
    for ta in 0..=4 {
        for tb in 0..=4 {
            for tc in 0..=4 {
                if !triangle(h(ta), h(tb), h(tc)) {
                    continue;
                }
                let got = wigner_6j(h(ta), h(tb), h(tc), h(0), h(tc), h(tb)).unwrap();
                let s = if ((ta + tb + tc) / 2) % 2 == 0 { 1 } else { -1 };
                let want = surd(s, 1, 1, (tb + 1) * (tc + 1));
                assert_eq!(got, want);
                assert_eq!(sixj_oracle(ta, tb, tc, 0, tc, tb), want);
            }
        }
    }
    assert!(wigner_6j(h(2), h(2), h(6), h(2), h(2), h(2)).unwrap().is_zero());
}

#[test]
fn six_j_recoupling_random_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 60 {
        let tj1 = rng.gen_range(0..=4);
        let tj2 = rng.gen_range(0..=4);
        let tj3 = rng.gen_range(0..=4);
        let tj12 = rng.gen_range(0..=8);
        let tj23 = rng.gen_range(0..=8);
        let tj = rng.gen_range(0..=10);
        if !triangle(h(tj1), h(tj2), h(tj12))
            || !triangle(h(tj12), h(tj3), h(tj))
            || !triangle(h(tj2), h(tj3), h(tj23))
            || !triangle(h(tj1), h(tj23), h(tj))
        {
            continue;
        }
        let racah = wigner_6j(h(tj1), h(tj2), h(tj12), h(tj3), h(tj), h(tj23)).unwrap();
        assert_eq!(racah, sixj_oracle(tj1, tj2, tj12, tj3, tj, tj23));
        checked += 1;
    }
}

#[test]
fn six_j_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let j: Vec<HalfInt> = (0..6).map(|_| h(rng.gen_range(0..=8))).collect();
        let base = wigner_6j(j[0], j[1], j[2], j[3], j[4], j[5]).unwrap();
        let cols = [(j[0], j[3]), (j[1], j[4]), (j[2], j[5])];
        let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        for p in perms {
            let c = [cols[p[0]], cols[p[1]], cols[p[2]]];
            let v = wigner_6j(c[0].0, c[1].0, c[2].0, c[0].1, c[1].1, c[2].1).unwrap();
            assert_eq!(v, base);
        }
        // swap upper/lower in two columns
        let v = wigner_6j(j[3], j[4], j[2], j[0], j[1], j[5]).unwrap();
        assert_eq!(v, base);
        let v = wigner_6j(j[0], j[4], j[5], j[3], j[1], j[2]).unwrap();
        assert_eq!(v, base);
    }
}

#[test]
fn cg_orthogonality_exact() {
    for tj1 in 0i64..=12 {
        for tj2 in 0i64..=12 {
            let tjs: Vec<i64> = ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2).collect();
            for tm in (-(tj1 + tj2)..=tj1 + tj2).step_by(2) {
                let rows: Vec<(i64, Vec<ExactCoupling>)> = tjs
                    .iter()
                    .filter(|&&tj| tm.abs() <= tj)
                    .map(|&tj| {
                        let col = (-tj1..=tj1)
                            .step_by(2)
                            .map(|tm1| {
                                clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm - tm1), h(tj), h(tm))
                                    .unwrap()
                            })
                            .collect();
                        (tj, col)
                    })
                    .collect();
                for (ta, va) in &rows {
                    for (tb, vb) in &rows {
                        let mut s = SurdSum::new();
                        for (x, y) in va.iter().zip(vb) {
                            s.add(&(x * y));
                        }
                        let want = if ta == tb {
                            ExactCoupling::one()
                        } else {
                            ExactCoupling::zero()
                        };
                        assert_eq!(s.to_single(), Some(want), "j1={tj1}/2 j2={tj2}/2 m={tm}/2");
                    }
                }
            }
        }
    }
}

/// Independent double-precision Racah evaluation with log-factorials.
struct LogFact(Vec<f64>);

impl LogFact {
    fn new(n: usize) -> Self {
        let mut v = vec![0.0; n + 1];
        for k in 1..=n {
            v[k] = v[k - 1] + (k as f64).ln();
        }
        LogFact(v)
    }
    fn lf(&self, k: i64) -> f64 {
        self.0[k as usize]
    }

    fn cg(&self, tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> (f64, f64) {
        let hh = |x: i64| x / 2;
        let pre = 0.5
            * (((tj + 1) as f64).ln() + self.lf(hh(tj1 + tj2 - tj)) + self.lf(hh(tj1 - tj2 + tj))
                + self.lf(hh(-tj1 + tj2 + tj))
                - self.lf(hh(tj1 + tj2 + tj) + 1)
                + self.lf(hh(tj + tm))
                + self.lf(hh(tj - tm))
                + self.lf(hh(tj1 - tm1))
                + self.lf(hh(tj1 + tm1))
                + self.lf(hh(tj2 - tm2))
                + self.lf(hh(tj2 + tm2)));
        let a = hh(tj1 + tj2 - tj);
        let b = hh(tj1 - tm1);
        let c = hh(tj2 + tm2);
        let d = hh(tj - tj2 + tm1);
        let e = hh(tj - tj1 - tm2);
        let lo = 0.max(-d).max(-e);
        let hi = a.min(b).min(c);
        let mut sum = 0.0;
        let mut bound = 0.0;
        for k in lo..=hi {
            let l = pre
                - self.lf(k)
                - self.lf(a - k)
                - self.lf(b - k)
                - self.lf(c - k)
                - self.lf(d + k)
                - self.lf(e + k);
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += s * l.exp();
            bound += rounding_bound(l);
        }
        (sum, bound)
    }

    fn sixj(&self, t: [i64; 6]) -> (f64, f64) {
        let hh = |x: i64| x / 2;
        let triads = [(t[0], t[1], t[2]), (t[0], t[4], t[5]), (t[3], t[1], t[5]), (t[3], t[4], t[2])];
        let mut pre = 0.0;
        for &(a, b, c) in &triads {
            pre += 0.5
                * (self.lf(hh(a + b - c)) + self.lf(hh(a - b + c)) + self.lf(hh(-a + b + c))
                    - self.lf(hh(a + b + c) + 1));
        }
        let alphas: Vec<i64> = triads.iter().map(|&(a, b, c)| hh(a + b + c)).collect();
        let betas = [
            hh(t[0] + t[1] + t[3] + t[4]),
            hh(t[1] + t[2] + t[4] + t[5]),
            hh(t[2] + t[0] + t[5] + t[3]),
        ];
        let lo = *alphas.iter().max().unwrap();
        let hi = *betas.iter().min().unwrap();
        let mut sum = 0.0;
        let mut bound = 0.0;
        for tt in lo..=hi {
            let mut l = pre + self.lf(tt + 1);
            for a in &alphas {
                l -= self.lf(tt - a);
            }
            for b in &betas {
                l -= self.lf(b - tt);
            }
            sum += if tt % 2 == 0 { l.exp() } else { -l.exp() };
            bound += rounding_bound(l);
        }
        (sum, bound)
    }
}

/// Rounding error of one summand `exp(l)` when `l` is a sum of ~20
/// log-factorials of magnitude up to `|l| + ln(terms)`.
fn rounding_bound(l: f64) -> f64 {
    let u = f64::EPSILON / 2.0;
    l.exp() * u * 64.0 * (1.0 + l.abs() + 800f64.ln() * 20.0)
}

/// Relative 1e-10 agreement, widened only by the oracle's own rounding
/// bound when its alternating sum cancels.
fn close(exact: f64, approx: (f64, f64), tol: f64) -> bool {
    (exact - approx.0).abs() <= (tol * exact.abs()).max(approx.1)
}

#[test]
fn float_view_matches_log_factorial_oracle() {
    let lf = LogFact::new(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut well_conditioned = 0;
    let mut n = 0;
    while n < 400 {
        let tj1 = rng.gen_range(0..=120);
        let tj2 = rng.gen_range(0..=120);
        let tj = rng.gen_range(0..=120);
        if !triangle(h(tj1), h(tj2), h(tj)) {
            continue;
        }
        let tm1 = tj1 - 2 * rng.gen_range(0..=tj1);
        let tm = tj - 2 * rng.gen_range(0..=tj);
        let tm2 = tm - tm1;
        if tm2.abs() > tj2 {
            continue;
        }
        let exact = clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(tj), h(tm)).unwrap();
        if exact.is_zero() {
            continue;
        }
        let approx = lf.cg(tj1, tm1, tj2, tm2, tj, tm);
        if approx.1 < 1e-12 * exact.float_view().abs() {
            let rel = (exact.float_view() - approx.0).abs() / exact.float_view().abs();
            worst = worst.max(rel);
            well_conditioned += 1;
        }
        assert!(
            close(exact.float_view(), approx, 1e-10),
            "CG {tj1} {tm1} {tj2} {tm2} {tj} {tm}: {} vs {approx:?}",
            exact.float_view()
        );
        n += 1;
    }
    let mut n = 0;
    while n < 200 {
        let t: [i64; 6] = std::array::from_fn(|_| rng.gen_range(0..=120));
        let labels: Vec<HalfInt> = t.iter().map(|&x| h(x)).collect();
        let exact = wigner_6j(labels[0], labels[1], labels[2], labels[3], labels[4], labels[5]).unwrap();
        if exact.is_zero() {
            continue;
        }
        let approx = lf.sixj(t);
        assert!(
            close(exact.float_view(), approx, 1e-10),
            "6j {t:?}: {} vs {approx:?}",
            exact.float_view()
        );
        n += 1;
    }
    assert!(worst < 1e-10);
    assert!(well_conditioned >= 30, "only {well_conditioned} well-conditioned samples");
}
