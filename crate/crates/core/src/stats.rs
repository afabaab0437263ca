//! Convergence rows and log-log slope fits.

use std::fmt::Write as _;

use crate::{Error, Result};

pub const CSV_HEADER: &str = "N,eps,value,reference,abs_err";

/// One measurement at matrix size `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub eps: f64,
    pub value: f64,
    pub reference: f64,
    pub abs_err: f64,
}

impl ConvergenceRow {
    pub fn new(n: usize, eps: f64, value: f64, reference: f64) -> Self {
        ConvergenceRow { n, eps, value, reference, abs_err: (value - reference).abs() }
    }
}

/// 17 significant digits, so values round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            fmt_f64(r.eps),
            fmt_f64(r.value),
            fmt_f64(r.reference),
            fmt_f64(r.abs_err)
        );
    }
    s
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidDimension(xs.len().min(ys.len())));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Parse("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Parse("log-log fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of `abs_err` against `N`.
pub fn rows_slope(rows: &[ConvergenceRow]) -> Result<f64> {
    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.abs_err).collect();
    loglog_slope(&xs, &ys)
}
