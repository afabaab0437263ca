use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(name = "ncgeom", version, about = "Matrix models of noncommutative surfaces")]
pub struct Cli {
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override a tolerance, e.g. `casimir=1e-10`. Repeatable.
    #[arg(long = "tol-override", global = true, value_name = "NAME=VAL")]
    pub tol_override: Vec<String>,
    /// Seed for randomised checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check representation identities and write a JSON report.
    Validate(ValidateArgs),
    /// Star product of two polynomials in p, q.
    Star(StarArgs),
    /// Sweep N and write a convergence CSV.
    Converge(ConvergeArgs),
    /// Encode surface fields as matrices.
    Encode(EncodeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Geometry {
    Sphere,
    Torus,
    Rotation,
    PhaseSpace,
}

#[derive(Args, Debug, Default)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub geometry: Option<Geometry>,
    /// Comma-separated matrix sizes.
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Profile file for `--geometry rotation`.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Sample points for `--geometry phase-space`.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StarKind {
    Vey,
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutBasis {
    Commutative,
    Normal,
    Wick,
}

#[derive(Args, Debug)]
pub struct StarArgs {
    #[arg(long, value_enum, default_value = "vey")]
    pub kind: StarKind,
    /// Print the result as an ordered algebra element instead.
    #[arg(long, value_enum, default_value = "commutative")]
    pub basis: OutBasis,
    pub u: String,
    pub v: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Study {
    Trace,
    Bracket,
    Ordering,
}

#[derive(Args, Debug, Default)]
pub struct ConvergeArgs {
    #[arg(long, value_enum)]
    pub study: Option<Study>,
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Field JSON file or built-in name (x1, x2, x3, cos2, demo1..demo3). Repeatable.
    #[arg(long = "field")]
    pub fields: Vec<String>,
}

#[derive(Args, Debug, Default)]
pub struct EncodeArgs {
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    /// Coordinate fields x1, x2, x3 (JSON files or built-ins); default is the round sphere.
    #[arg(long = "coord", num_args = 3, value_names = ["X1", "X2", "X3"])]
    pub coords: Vec<String>,
    /// Extra field as `name=FILE` or `name=builtin`. Repeatable.
    #[arg(long = "extra", value_name = "NAME=FIELD")]
    pub extras: Vec<String>,
}

/// Everything a `--config` file may set.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    out: Option<PathBuf>,
    seed: Option<u64>,
    #[serde(default)]
    tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    validate: FileValidate,
    #[serde(default)]
    converge: FileConverge,
    #[serde(default)]
    encode: FileEncode,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileValidate {
    geometry: Option<Geometry>,
    n: Option<Vec<usize>>,
    r: Option<f64>,
    profile: Option<PathBuf>,
    points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConverge {
    study: Option<Study>,
    n: Option<Vec<usize>>,
    r: Option<f64>,
    fields: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEncode {
    n: Option<usize>,
    r: Option<f64>,
    coords: Option<Vec<String>>,
    extras: Option<Vec<String>>,
}

pub const DEFAULT_SEED: u64 = 20240917;

const DEFAULT_TOLERANCES: [(&str, f64); 11] = [
    ("relations", 1e-12),
    ("casimir", 1e-12),
    ("trace", 1e-12),
    ("spectrum", 1e-10),
    ("norm", 1e-10),
    ("inverse", 1e-10),
    ("torus", 1e-12),
    ("rotation", 1e-10),
    ("phase", 1e-12),
    ("slope_min", -1.3),
    ("slope_max", -0.7),
];

/// Global settings after merging the config file and flags.
#[derive(Debug)]
pub struct Settings {
    pub out: PathBuf,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    file: FileConfig,
}

impl Settings {
    pub fn load(cli: &Cli) -> Result<Self> {
        let file: FileConfig = match &cli.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => FileConfig::default(),
        };
        let mut tolerances: BTreeMap<String, f64> =
            DEFAULT_TOLERANCES.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let overrides = file
            .tolerances
            .iter()
            .map(|(k, v)| Ok((k.clone(), *v)))
            .chain(cli.tol_override.iter().map(|s| parse_override(s)));
        for item in overrides {
            let (k, v) = item?;
            match tolerances.get_mut(&k) {
                Some(slot) => *slot = v,
                None => bail!("unknown tolerance `{k}`; known: {}", tolerances.keys().cloned().collect::<Vec<_>>().join(", ")),
            }
        }
        Ok(Settings {
            out: cli.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            seed: cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            tolerances,
            file,
        })
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    pub fn validate(&self, a: &ValidateArgs) -> Result<ValidatePlan> {
        let f = &self.file.validate;
        let geometry = a.geometry.or(f.geometry).context("missing --geometry")?;
        let ns = if geometry == Geometry::PhaseSpace { Vec::new() } else { pick_ns(&a.n, &f.n)? };
        Ok(ValidatePlan {
            geometry,
            ns,
            radius: positive_radius(a.r.or(f.r))?,
            profile: a.profile.clone().or_else(|| f.profile.clone()),
            points: a.points.or(f.points).unwrap_or(100),
        })
    }

    pub fn converge(&self, a: &ConvergeArgs) -> Result<ConvergePlan> {
        let f = &self.file.converge;
        let fields = if a.fields.is_empty() { f.fields.clone().unwrap_or_default() } else { a.fields.clone() };
        Ok(ConvergePlan {
            study: a.study.or(f.study).context("missing --study")?,
            ns: pick_ns(&a.n, &f.n)?,
            radius: positive_radius(a.r.or(f.r))?,
            fields,
        })
    }

    pub fn encode(&self, a: &EncodeArgs) -> Result<EncodePlan> {
        let f = &self.file.encode;
        let n = a.n.or(f.n).context("missing --N")?;
        check_n(n)?;
        let coords = if a.coords.is_empty() { f.coords.clone().unwrap_or_default() } else { a.coords.clone() };
        if !coords.is_empty() && coords.len() != 3 {
            bail!("need exactly three coordinate fields, got {}", coords.len());
        }
        let extras = if a.extras.is_empty() { f.extras.clone().unwrap_or_default() } else { a.extras.clone() };
        let extras = extras
            .iter()
            .map(|s| {
                let (name, field) = s.split_once('=').with_context(|| format!("extra `{s}` is not NAME=FIELD"))?;
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                    bail!("bad extra name `{name}`");
                }
                Ok((name.to_string(), field.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &extras {
            if !seen.insert(name) || ["x1", "x2", "x3"].contains(&name.as_str()) {
                bail!("duplicate output name `{name}`");
            }
        }
        Ok(EncodePlan { n, radius: positive_radius(a.r.or(f.r))?, coords, extras })
    }
}

pub struct ValidatePlan {
    pub geometry: Geometry,
    pub ns: Vec<usize>,
    pub radius: f64,
    pub profile: Option<PathBuf>,
    pub points: usize,
}

pub struct ConvergePlan {
    pub study: Study,
    pub ns: Vec<usize>,
    pub radius: f64,
    pub fields: Vec<String>,
}

pub struct EncodePlan {
    pub n: usize,
    pub radius: f64,
    pub coords: Vec<String>,
    pub extras: Vec<(String, String)>,
}

fn parse_override(s: &str) -> Result<(String, f64)> {
    let (k, v) = s.split_once('=').with_context(|| format!("--tol-override `{s}` is not NAME=VAL"))?;
    let v: f64 = v.trim().parse().with_context(|| format!("bad tolerance value in `{s}`"))?;
    Ok((k.trim().to_string(), v))
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        bail!("N must be at least 2, got {n}");
    }
    Ok(())
}

fn pick_ns(flag: &[usize], file: &Option<Vec<usize>>) -> Result<Vec<usize>> {
    let ns = if flag.is_empty() { file.clone().unwrap_or_default() } else { flag.to_vec() };
    if ns.is_empty() {
        bail!("missing --N");
    }
    ns.iter().try_for_each(|&n| check_n(n))?;
    Ok(ns)
}

fn positive_radius(r: Option<f64>) -> Result<f64> {
    let r = r.unwrap_or(1.0);
    if !(r > 0.0 && r.is_finite()) {
        bail!("R must be positive, got {r}");
    }
    Ok(r)
}

