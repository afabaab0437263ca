//! Exact angular-momentum coupling coefficients.
//!
//! Values are carried as `rational * sqrt(square-free integer)` using the
//! Racah formulas with big-integer factorials. Phases follow the
//! Condon-Shortley convention.

mod exact;
mod factor;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use exact::{ExactCoupling, SurdSum};
use factor::{factorial, Factorization};

use crate::{Error, Result};

/// Largest supported `2j`.
pub const MAX_TWICE_J: i64 = 400;

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn check_j(j: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::InvalidLabel(format!("negative angular momentum {j}")));
    }
    if j.0 > MAX_TWICE_J {
        return Err(Error::LabelRange {
            twice: j.0,
            max: MAX_TWICE_J,
        });
    }
    Ok(())
}

/// `m` is a legal projection of `j`.
fn projection_ok(j: HalfInt, m: HalfInt) -> bool {
    m.0.abs() <= j.0 && (j.0 - m.0) % 2 == 0
}

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    (a.0 + b.0 + c.0) % 2 == 0 && c.0 >= (a.0 - b.0).abs() && c.0 <= a.0 + b.0
}

/// Half of a sum of twice-values that is known to be even.
fn half(x: i64) -> i64 {
    debug_assert!(x % 2 == 0);
    x / 2
}

/// `sqrt((a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!)` as a factorization.
fn delta(a: HalfInt, b: HalfInt, c: HalfInt) -> Factorization {
    let mut f = Factorization::of_factorial(half(a.0 + b.0 - c.0));
    f.mul_assign(&Factorization::of_factorial(half(a.0 - b.0 + c.0)));
    f.mul_assign(&Factorization::of_factorial(half(-a.0 + b.0 + c.0)));
    f.div_assign(&Factorization::of_factorial(half(a.0 + b.0 + c.0) + 1));
    f
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Clebsch-Gordan coefficient `<j1 m1 j2 m2 | j m>`.
///
/// Selection-rule violations give an exact zero.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<ExactCoupling> {
    for x in [j1, j2, j] {
        check_j(x)?;
    }
    if m1.0 + m2.0 != m.0
        || !triangle(j1, j2, j)
        || !projection_ok(j1, m1)
        || !projection_ok(j2, m2)
        || !projection_ok(j, m)
    {
        return Ok(ExactCoupling::zero());
    }

    let mut rad = delta(j1, j2, j);
    rad.mul_assign(&Factorization::of_int(j.0 + 1));
    for x in [
        j.0 + m.0,
        j.0 - m.0,
        j1.0 - m1.0,
        j1.0 + m1.0,
        j2.0 - m2.0,
        j2.0 + m2.0,
    ] {
        rad.mul_assign(&Factorization::of_factorial(half(x)));
    }

    let a = half(j1.0 + j2.0 - j.0);
    let b = half(j1.0 - m1.0);
    let c = half(j2.0 + m2.0);
    let d = half(j.0 - j2.0 + m1.0);
    let e = half(j.0 - j1.0 - m2.0);
    let k_lo = 0.max(-d).max(-e);
    let k_hi = a.min(b).min(c);

    let mut sum = BigRational::zero();
    for k in k_lo..=k_hi {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(b - k)
            * factorial(c - k)
            * factorial(d + k)
            * factorial(e + k);
        sum += BigRational::new(BigInt::from(sign(k)), den);
    }
    Ok(ExactCoupling::from_parts(sum, &rad))
}

/// Wigner 3j symbol, from the Clebsch-Gordan coefficient by
/// `(j1 j2 j3; m1 m2 m3) = (-1)^(j1-j2-m3) / sqrt(2 j3 + 1) <j1 m1 j2 m2 | j3 -m3>`.
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<ExactCoupling> {
    let cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)?;
    if cg.is_zero() {
        return Ok(cg);
    }
    let mut inv = Factorization::one();
    inv.div_assign(&Factorization::of_int(j3.0 + 1));
    let s = sign(half(j1.0 - j2.0 - m3.0));
    let scale = ExactCoupling::from_parts(BigRational::from_integer(BigInt::from(s)), &inv);
    Ok(&cg * &scale)
}

/// Wigner 6j symbol `{j1 j2 j3; j4 j5 j6}` by the Racah formula.
pub fn wigner_6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> Result<ExactCoupling> {
    for x in [j1, j2, j3, j4, j5, j6] {
        check_j(x)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return Ok(ExactCoupling::zero());
    }

    let mut rad = Factorization::one();
    for &(a, b, c) in &triads {
        rad.mul_assign(&delta(a, b, c));
    }

    let alphas: Vec<i64> = triads.iter().map(|&(a, b, c)| half(a.0 + b.0 + c.0)).collect();
    let betas = [
        half(j1.0 + j2.0 + j4.0 + j5.0),
        half(j2.0 + j3.0 + j5.0 + j6.0),
        half(j3.0 + j1.0 + j6.0 + j4.0),
    ];
    let t_lo = *alphas.iter().max().unwrap();
    let t_hi = *betas.iter().min().unwrap();

    let mut sum = BigRational::zero();
    for t in t_lo..=t_hi {
        let mut den = BigInt::from(1);
        for &a in &alphas {
            den *= factorial(t - a);
        }
        for &b in &betas {
            den *= factorial(b - t);
        }
        sum += BigRational::new(factorial(t + 1) * sign(t), den);
    }
    Ok(ExactCoupling::from_parts(sum, &rad))
}

#[cfg(test)]
mod tests;
