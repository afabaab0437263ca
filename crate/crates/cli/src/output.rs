use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ncgeom::stats::fmt_f64;
use serde_json::Value;

/// Writes `contents` to `dir/name` through a temporary file and rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let target = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target).with_context(|| format!("writing {}", target.display()))?;
    Ok(target)
}

/// JSON number with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(serde_json::Number::from_f64(fmt_f64(x).parse().expect("formatted float")).expect("finite"))
    } else {
        Value::Null
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}
