//! Noncommutative surfaces of rotation and the clock/shift torus.
//!
//! A profile `rho(z, eps)` defines relations `[X0, X±] = ±eps X±` and
//! `X±X∓` in terms of `rho(X0 ∓ eps/2)`. Finite representations exist when
//! `{rho > 0}` is one bounded interval whose width is exactly `N eps`.

mod profile;
mod rep;
mod torus;

pub use profile::{real_roots, rho_interval, solve_eps, EpsSolution, Interval, RhoPoly};
pub use rep::{
    apply_ordering, build_rotation_rep, diag_fn, iso_map, quotient_residuals, Generators, IsoMap,
    OrderingKind, SurfaceRotRep,
};
pub use torus::{fuzzy_torus, torus_trace, FuzzyTorus};
