use anyhow::{Context, Result};
use ncgeom::heisenberg::{order_normal, order_wick, CommutativePoly, Star};

use crate::config::{OutBasis, StarArgs, StarKind};

pub fn run(a: &StarArgs) -> Result<bool> {
    println!("{}", evaluate(a)?);
    Ok(true)
}

fn evaluate(a: &StarArgs) -> Result<String> {
    let u: CommutativePoly = a.u.parse().with_context(|| format!("parsing `{}`", a.u))?;
    let v: CommutativePoly = a.v.parse().with_context(|| format!("parsing `{}`", a.v))?;
    let star = match a.kind {
        StarKind::Vey => Star::Vey,
        StarKind::Normal => Star::Normal,
    };
    let w = star.apply(&u, &v);
    Ok(match a.basis {
        OutBasis::Commutative => w.to_string(),
        OutBasis::Normal => order_normal(&w).to_string(),
        OutBasis::Wick => order_wick(&w).to_string(),
    })
}
