use std::path::Path;

use anyhow::{bail, Context, Result};
use ncgeom::encode::{project, ScalarField};
use ncgeom::geometry::{EmbeddingFields, SphereGrid};

const BUILTINS: [&str; 7] = ["x1", "x2", "x3", "cos2", "demo1", "demo2", "demo3"];

fn sampled(f: impl Fn(f64, f64) -> f64, l: usize) -> ScalarField {
    project(&SphereGrid::shared(2 * l + 2).sample_real(f), l).expect("grid sized for band limit")
}

/// A built-in field on the sphere of radius `radius`, or a field JSON file.
pub fn load(spec: &str, radius: f64) -> Result<ScalarField> {
    let unit = EmbeddingFields::round_sphere(radius).coords;
    Ok(match spec {
        "x1" => unit[0].clone(),
        "x2" => unit[1].clone(),
        "x3" => unit[2].clone(),
        "cos2" => sampled(|t, _| t.cos().powi(2), 2),
        "demo1" => sampled(|t, p| t.cos().powi(2) * t.sin() * p.cos() + 0.3 * t.cos(), 4),
        "demo2" => sampled(|t, p| (t.sin() * p.sin()).powi(2) - 0.5 * t.sin() * p.cos() * t.cos(), 4),
        "demo3" => sampled(
            |t, p| t.sin() * p.sin() + 0.2 * t.cos().powi(3) - 0.4 * t.sin().powi(2) * p.sin() * p.cos(),
            4,
        ),
        path => {
            let p = Path::new(path);
            if !p.exists() {
                bail!("`{path}` is neither a file nor a built-in field ({})", BUILTINS.join(", "));
            }
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {path}"))?;
            ScalarField::from_json(&text).with_context(|| format!("parsing field {path}"))?
        }
    })
}

pub fn load_all(specs: &[String], radius: f64) -> Result<Vec<ScalarField>> {
    specs.iter().map(|s| load(s, radius)).collect()
}
