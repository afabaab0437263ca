use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::scalar::{CRational, EpsPoly};

/// Which basis a term map is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Normal,
    Wick,
    Commutative,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::Normal => "normal",
            Basis::Wick => "wick",
            Basis::Commutative => "commutative",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Sparse map `(a, b) -> coefficient polynomial in eps`, shared by every
/// element type. Zero entries are dropped on insert.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Terms(BTreeMap<(u32, u32), EpsPoly>);

impl Terms {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &EpsPoly)> {
        self.0.iter().map(|(&k, v)| (k, v))
    }

    pub fn get(&self, a: u32, b: u32) -> EpsPoly {
        self.0.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn add_poly(&mut self, a: u32, b: u32, poly: &EpsPoly) {
        if poly.is_zero() {
            return;
        }
        let slot = self.0.entry((a, b)).or_default();
        slot.add_assign(poly);
        if slot.is_zero() {
            self.0.remove(&(a, b));
        }
    }

    pub fn add_term(&mut self, a: u32, b: u32, eps_power: u32, c: &CRational) {
        self.add_poly(a, b, &EpsPoly::monomial(eps_power, c.clone()));
    }

    pub fn add_all(&mut self, other: &Terms) {
        for ((a, b), p) in other.iter() {
            self.add_poly(a, b, p);
        }
    }

    pub fn scaled(&self, eps_power: u32, c: &CRational) -> Terms {
        let mut out = Terms::new();
        for ((a, b), p) in self.iter() {
            out.add_poly(a, b, &p.times(eps_power, c));
        }
        out
    }

    pub fn conj(&self) -> Terms {
        Terms(self.0.iter().map(|(&k, p)| (k, p.conj())).collect())
    }

    /// Largest `a + b` with a nonzero coefficient.
    pub fn total_degree(&self) -> u32 {
        self.0.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    /// Commutative product of the labels `(a,b)(c,d) = (a+c, b+d)`.
    pub fn commutative_mul(&self, other: &Terms) -> Terms {
        let mut out = Terms::new();
        for ((a, b), p) in self.iter() {
            for ((c, d), r) in other.iter() {
                out.add_poly(a + c, b + d, &p.mul(r));
            }
        }
        out
    }
}

macro_rules! element_type {
    ($(#[$doc:meta])* $name:ident, $basis:expr) => {
        $(#[$doc])*
        #[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
        pub struct $name {
            terms: Terms,
        }

        impl $name {
            pub const BASIS: Basis = $basis;

            pub fn zero() -> Self {
                Self::default()
            }

            pub fn one() -> Self {
                Self::basis_element(0, 0)
            }

            /// The basis element with exponents `(a, b)`.
            pub fn basis_element(a: u32, b: u32) -> Self {
                Self::term(CRational::one(), 0, a, b)
            }

            /// `c eps^r` times the basis element `(a, b)`.
            pub fn term(c: CRational, r: u32, a: u32, b: u32) -> Self {
                let mut terms = Terms::new();
                terms.add_term(a, b, r, &c);
                Self { terms }
            }

            pub fn from_terms(terms: Terms) -> Self {
                Self { terms }
            }

            pub fn terms(&self) -> &Terms {
                &self.terms
            }

            pub fn into_terms(self) -> Terms {
                self.terms
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn scaled(&self, r: u32, c: &CRational) -> Self {
                Self::from_terms(self.terms.scaled(r, c))
            }

            /// Conjugates every coefficient.
            pub fn conj_coeffs(&self) -> Self {
                Self::from_terms(self.terms.conj())
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, o: &$name) -> $name {
                let mut t = self.terms.clone();
                t.add_all(&o.terms);
                $name::from_terms(t)
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, o: &$name) -> $name {
                self + &(-o.clone())
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scaled(0, &CRational::from_int(-1))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&super::text::pretty(&self.terms))
            }
        }

        impl std::str::FromStr for $name {
            type Err = crate::Error;
            fn from_str(s: &str) -> crate::Result<Self> {
                let (basis, terms) = super::text::parse(s)?;
                match basis {
                    Some(b) if b != $basis => Err(crate::Error::Parse(format!(
                        "expected basis '{}', found '{}'",
                        $basis, b
                    ))),
                    _ => Ok(Self::from_terms(terms)),
                }
            }
        }
    };
}

element_type!(
    /// Element written in the normal basis `N(a,b) = p^a q^b`.
    NormalElement,
    Basis::Normal
);
element_type!(
    /// Element written in the Wick (symmetrised) basis `S(a,b)`.
    WickElement,
    Basis::Wick
);
element_type!(
    /// Polynomial in commuting variables `p°, q°` with coefficients in `eps`.
    CommutativePoly,
    Basis::Commutative
);

impl CommutativePoly {
    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &CommutativePoly) -> CommutativePoly {
        CommutativePoly::from_terms(self.terms.commutative_mul(&other.terms))
    }

    /// `∂^dp/∂p° ∂^dq/∂q°`.
    pub fn derivative(&self, dp: u32, dq: u32) -> CommutativePoly {
        let mut out = Terms::new();
        for ((a, b), poly) in self.terms.iter() {
            if a < dp || b < dq {
                continue;
            }
            let k = falling(a, dp) * falling(b, dq);
            let c = CRational::real(num_rational::BigRational::from_integer(k));
            out.add_poly(a - dp, b - dq, &poly.times(0, &c));
        }
        CommutativePoly::from_terms(out)
    }

    /// Classical bracket `∂u/∂p° ∂v/∂q° - ∂u/∂q° ∂v/∂p°`.
    pub fn poisson(&self, other: &CommutativePoly) -> CommutativePoly {
        let a = self.derivative(1, 0).mul(&other.derivative(0, 1));
        let b = self.derivative(0, 1).mul(&other.derivative(1, 0));
        &a - &b
    }
}

/// `n!/(n-k)!` as a big integer.
pub(crate) fn falling(n: u32, k: u32) -> num_bigint::BigInt {
    if k > n {
        return num_bigint::BigInt::from(0u32);
    }
    (n - k + 1..=n).fold(num_bigint::BigInt::from(1u32), |acc, x| acc * x)
}
