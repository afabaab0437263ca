use anyhow::Result;
use ncgeom::encode::{phi_n, truncation_error, upsilon_n, ScalarField};
use ncgeom::fuzzy_sphere::build_rep;
use ncgeom::geometry::EmbeddingFields;
use ncgeom::matrix::{max_abs_diff, trace_n, MatrixJson};
use serde_json::json;

use crate::config::{EncodeArgs, Settings};
use crate::fields;
use crate::output::{num, pretty, write_atomic};

pub fn run(settings: &Settings, a: &EncodeArgs) -> Result<bool> {
    let plan = settings.encode(a)?;
    let rep = build_rep(plan.n, plan.radius)?;
    let coords = if plan.coords.is_empty() {
        EmbeddingFields::round_sphere(plan.radius).coords
    } else {
        fields::load_all(&plan.coords, plan.radius)?
    };
    let mut named: Vec<(String, ScalarField)> =
        ["x1", "x2", "x3"].iter().map(|s| s.to_string()).zip(coords).collect();
    for (name, spec) in &plan.extras {
        named.push((name.clone(), fields::load(spec, plan.radius)?));
    }

    let generators = rep.cartesian();
    let mut entries = Vec::new();
    for (i, (name, f)) in named.iter().enumerate() {
        let m = phi_n(&rep, f);
        let file = format!("{name}.json");
        write_atomic(&settings.out, &file, &MatrixJson::from_matrix(&m, rep.eps()).to_json()?)?;
        let back = upsilon_n(&rep, &m)?;
        let mut entry = json!({
            "name": name,
            "file": file,
            "band_limit": f.band_limit(),
            "truncation_error": num(truncation_error(f, plan.n)),
            "round_trip_error": num(f.sub(&back).norm()),
            "trace": num(trace_n(&m).re),
        });
        if i < 3 {
            entry["deviation_from_generator"] = num(max_abs_diff(&m, &generators[i]));
        }
        entries.push(entry);
    }
    let report = json!({
        "N": plan.n,
        "R": num(plan.radius),
        "eps": num(rep.eps()),
        "matrices": entries,
    });
    let text = pretty(&report);
    write_atomic(&settings.out, "encode_report.json", &text)?;
    print!("{text}");
    Ok(true)
}
