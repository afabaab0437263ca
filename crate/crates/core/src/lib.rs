//! Finite matrix ("fuzzy") models of compact surfaces.
//!
//! The crate builds matrix representations of algebraic noncommutative
//! surfaces and checks both their exact algebraic identities and their
//! classical limits:
//!
//! - [`angmom`]: exact Clebsch-Gordan, 3j and 6j coefficients.
//! - [`heisenberg`]: the Heisenberg algebra `[p, q] = i eps` with normal and
//!   Wick bases, orderings and the Vey / normal star products.
//! - [`fuzzy_sphere`]: the su(2) fuzzy sphere, its harmonics `P^m_n` and
//!   the 6j product formula.
//! - [`surfaces`]: surfaces of rotation defined by a profile polynomial, and
//!   the clock/shift torus.
//! - [`geometry`]: classical Poisson calculus on the sphere, metric from
//!   brackets, the fuzzy bracket and trace limits.
//! - [`encode`]: band-limited fields on the sphere and the encoder/decoder
//!   pair between fields and `N x N` matrices.

pub mod angmom;
pub mod encode;
pub mod error;
pub mod fuzzy_sphere;
pub mod geometry;
pub mod heisenberg;
pub mod matrix;
pub mod stats;
pub mod surfaces;

pub use error::{Error, Result};
