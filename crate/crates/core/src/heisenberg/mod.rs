//! Formal Heisenberg algebra `[p, q] = i eps` with exact coefficients.
//!
//! Elements are finite sums `c eps^r X(a,b)` where `X` is either the normal
//! basis `N(a,b) = p^a q^b` or the fully symmetrised Wick basis `S(a,b)`.

mod element;
mod scalar;
mod text;

pub use element::{Basis, CommutativePoly, NormalElement, Terms, WickElement};
pub use scalar::{CRational, EpsPoly};
pub use text::{parse, pretty, to_canonical};

use element::falling;
use num_bigint::BigInt;
use num_rational::BigRational;

fn factorial(n: u32) -> BigInt {
    falling(n, n)
}

fn rat(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `N(a,b) N(c,d)` expanded in the normal basis.
fn normal_basis_product(a: u32, b: u32, c: u32, d: u32) -> Terms {
    let mut out = Terms::new();
    for r in 0..=b.min(c) {
        let k = rat(falling(b, r) * falling(c, r), factorial(r));
        // (-i)^r
        let coeff = CRational::i_pow((4 - r % 4) % 4).scale(&k);
        out.add_term(a + c - r, b + d - r, r, &coeff);
    }
    out
}

/// `S(a,b) S(c,d)` expanded in the Wick basis.
fn wick_basis_product(a: u32, b: u32, c: u32, d: u32) -> Terms {
    let mut out = Terms::new();
    let r_max = (a + b).min(c + d).min(a + c).min(b + d);
    for r in 0..=r_max {
        let mut sum = BigRational::from_integer(BigInt::from(0));
        for s in 0..=r {
            if s > b || s > c || r - s > a || r - s > d {
                continue;
            }
            let num = falling(a, r - s) * falling(b, s) * falling(c, s) * falling(d, r - s);
            let den = factorial(s) * factorial(r - s);
            let term = rat(num, den);
            if s % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        // (i/2)^r
        let half_pow = rat(BigInt::from(1), BigInt::from(2u32).pow(r));
        let coeff = CRational::i_pow(r).scale(&(sum * half_pow));
        out.add_term(a + c - r, b + d - r, r, &coeff);
    }
    out
}

fn bilinear(u: &Terms, v: &Terms, basis_product: impl Fn(u32, u32, u32, u32) -> Terms) -> Terms {
    let mut out = Terms::new();
    for ((a, b), pu) in u.iter() {
        for ((c, d), pv) in v.iter() {
            let coeff = pu.mul(pv);
            for ((x, y), pb) in basis_product(a, b, c, d).iter() {
                out.add_poly(x, y, &pb.mul(&coeff));
            }
        }
    }
    out
}

/// Product in the normal basis.
pub fn normal_mul(u: &NormalElement, v: &NormalElement) -> NormalElement {
    NormalElement::from_terms(bilinear(u.terms(), v.terms(), normal_basis_product))
}

/// Product in the Wick basis.
pub fn wick_mul(u: &WickElement, v: &WickElement) -> WickElement {
    WickElement::from_terms(bilinear(u.terms(), v.terms(), wick_basis_product))
}

impl std::ops::Mul for &NormalElement {
    type Output = NormalElement;
    fn mul(self, o: &NormalElement) -> NormalElement {
        normal_mul(self, o)
    }
}

impl std::ops::Mul for &WickElement {
    type Output = WickElement;
    fn mul(self, o: &WickElement) -> WickElement {
        wick_mul(self, o)
    }
}

/// Shared body of the two basis changes; `sign` is the sign of `i eps/2`.
fn convert(u: &Terms, sign: i64) -> Terms {
    let mut out = Terms::new();
    for ((a, b), poly) in u.iter() {
        for r in 0..=a.min(b) {
            let k = rat(
                falling(a, r) * falling(b, r),
                factorial(r) * BigInt::from(2u32).pow(r),
            );
            let mut c = CRational::i_pow(r).scale(&k);
            if sign < 0 && r % 2 == 1 {
                c = -c;
            }
            out.add_poly(a - r, b - r, &poly.times(r, &c));
        }
    }
    out
}

pub fn wick_to_normal(u: &WickElement) -> NormalElement {
    NormalElement::from_terms(convert(u.terms(), -1))
}

pub fn normal_to_wick(u: &NormalElement) -> WickElement {
    WickElement::from_terms(convert(u.terms(), 1))
}

/// Normal ordering: `p°^a q°^b -> N(a,b)`.
pub fn order_normal(u: &CommutativePoly) -> NormalElement {
    NormalElement::from_terms(u.terms().clone())
}

/// Wick ordering: `p°^a q°^b -> S(a,b)`.
pub fn order_wick(u: &CommutativePoly) -> WickElement {
    WickElement::from_terms(u.terms().clone())
}

/// Inverse of the extended ordering map; any ordered element becomes a
/// commutative polynomial with its `eps` powers kept.
pub trait Unorder {
    fn unorder(&self) -> CommutativePoly;
}

impl Unorder for NormalElement {
    fn unorder(&self) -> CommutativePoly {
        CommutativePoly::from_terms(self.terms().clone())
    }
}

impl Unorder for WickElement {
    fn unorder(&self) -> CommutativePoly {
        CommutativePoly::from_terms(self.terms().clone())
    }
}

pub fn unorder<T: Unorder>(u: &T) -> CommutativePoly {
    u.unorder()
}

/// `n choose k`
fn binom(n: u32, k: u32) -> BigInt {
    falling(n, k) / factorial(k)
}

/// Vey (Moyal) product `exp(i eps P / 2)(u, v)`.
pub fn star_vey(u: &CommutativePoly, v: &CommutativePoly) -> CommutativePoly {
    let mut out = CommutativePoly::zero();
    let r_max = u.terms().total_degree().min(v.terms().total_degree());
    for r in 0..=r_max {
        let mut bidiff = CommutativePoly::zero();
        for s in 0..=r {
            let term = u.derivative(r - s, s).mul(&v.derivative(s, r - s));
            let mut c = CRational::real(BigRational::from_integer(binom(r, s)));
            if s % 2 == 1 {
                c = -c;
            }
            bidiff = &bidiff + &term.scaled(0, &c);
        }
        let k = rat(BigInt::from(1), factorial(r) * BigInt::from(2u32).pow(r));
        out = &out + &bidiff.scaled(r, &CRational::i_pow(r).scale(&k));
    }
    out
}

/// Normal-ordering star product `exp(-i eps N)(u, v)` with `N = ∂q°(u) ∂p°(v)`.
pub fn star_normal(u: &CommutativePoly, v: &CommutativePoly) -> CommutativePoly {
    let mut out = CommutativePoly::zero();
    let r_max = u.terms().total_degree().min(v.terms().total_degree());
    for r in 0..=r_max {
        let term = u.derivative(0, r).mul(&v.derivative(r, 0));
        let k = rat(BigInt::from(1), factorial(r));
        let c = CRational::i_pow((4 - r % 4) % 4).scale(&k);
        out = &out + &term.scaled(r, &c);
    }
    out
}

/// Choice of star product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Star {
    Vey,
    Normal,
}

impl Star {
    pub fn apply(self, u: &CommutativePoly, v: &CommutativePoly) -> CommutativePoly {
        match self {
            Star::Vey => star_vey(u, v),
            Star::Normal => star_normal(u, v),
        }
    }
}

/// First-order part of the star commutator: the `eps^1` coefficient of
/// `(u*v - v*u)/i`, which should be the classical bracket.
pub fn poisson_leading(u: &CommutativePoly, v: &CommutativePoly, star: Star) -> CommutativePoly {
    let comm = &star.apply(u, v) - &star.apply(v, u);
    let mut out = Terms::new();
    let minus_i = -CRational::i();
    for ((a, b), poly) in comm.terms().iter() {
        let c = &poly.coeff(1) * &minus_i;
        out.add_term(a, b, 0, &c);
    }
    CommutativePoly::from_terms(out)
}
