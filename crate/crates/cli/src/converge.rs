use anyhow::{bail, Result};
use ncgeom::encode::ordering_sensitivity;
use ncgeom::fuzzy_sphere::build_rep;
use ncgeom::geometry::{bracket_discrepancy, trace_integral_product};
use ncgeom::stats::{fmt_f64, rows_slope, to_csv, ConvergenceRow};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{ConvergeArgs, Settings, Study};
use crate::fields;
use crate::output::{num, pretty, write_atomic};

fn default_fields(study: Study) -> Vec<String> {
    let names: &[&str] = match study {
        Study::Trace => &["cos2"],
        Study::Bracket => &["demo1", "demo2"],
        Study::Ordering => &["x3", "x1"],
    };
    names.iter().map(|s| s.to_string()).collect()
}

pub fn run(settings: &Settings, a: &ConvergeArgs) -> Result<bool> {
    let plan = settings.converge(a)?;
    let specs = if plan.fields.is_empty() { default_fields(plan.study) } else { plan.fields.clone() };
    let fs = fields::load_all(&specs, plan.radius)?;
    match plan.study {
        Study::Trace if fs.is_empty() => bail!("trace study needs at least one field"),
        Study::Bracket | Study::Ordering if fs.len() != 2 => {
            bail!("{:?} study needs exactly two fields, got {}", plan.study, fs.len())
        }
        _ => {}
    }
    let rows: Vec<Result<ConvergenceRow>> = plan
        .ns
        .par_iter()
        .map(|&n| {
            let rep = build_rep(n, plan.radius)?;
            let eps = rep.eps();
            Ok(match plan.study {
                Study::Trace => {
                    let t = trace_integral_product(&rep, &fs)?;
                    ConvergenceRow { n, eps, value: t.trace.re, reference: t.integral.re, abs_err: t.error }
                }
                Study::Bracket => ConvergenceRow::new(n, eps, bracket_discrepancy(&rep, &fs[0], &fs[1])?, 0.0),
                Study::Ordering => {
                    let r = ordering_sensitivity(&rep, &fs[0], &fs[1], &fs[0])?;
                    ConvergenceRow::new(n, eps, r.commutator, 0.0)
                }
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;

    let slope = if rows.len() >= 2 { rows_slope(&rows).ok() } else { None };
    let exact = plan.study == Study::Trace && fs.len() == 1;
    let pass = if exact {
        rows.iter().all(|r| r.abs_err <= settings.tol("trace"))
    } else {
        match slope {
            Some(s) => s >= settings.tol("slope_min") && s <= settings.tol("slope_max"),
            None => rows.len() < 2,
        }
    };

    let study = format!("{:?}", plan.study).to_lowercase();
    let mut csv = to_csv(&rows);
    if let Some(s) = slope {
        csv.push_str(&format!("# slope,{}\n", fmt_f64(s)));
    }
    write_atomic(&settings.out, &format!("converge_{study}.csv"), &csv)?;
    let summary = json!({
        "study": study,
        "fields": specs,
        "R": num(plan.radius),
        "N": plan.ns,
        "slope": slope.map(num),
        "criterion": if exact { "abs_err <= trace tolerance" } else { "slope within [slope_min, slope_max]" },
        "pass": pass,
    });
    write_atomic(&settings.out, &format!("converge_{study}.json"), &pretty(&summary))?;
    print!("{csv}");
    Ok(pass)
}
