use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::Factorization;

/// Exact value `rat * sqrt(root)` with `root` a square-free positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactCoupling {
    rat: BigRational,
    root: BigInt,
    float_view: u64,
}

impl ExactCoupling {
    pub fn zero() -> Self {
        Self::from_surd(BigRational::zero(), BigInt::one())
    }

    pub fn one() -> Self {
        Self::from_surd(BigRational::one(), BigInt::one())
    }

    /// `rat * sqrt(root)`; `root` must already be square-free.
    fn from_surd(rat: BigRational, root: BigInt) -> Self {
        let root = if rat.is_zero() { BigInt::one() } else { root };
        let float_view = surd_to_f64(&rat, &root).to_bits();
        ExactCoupling {
            rat,
            root,
            float_view,
        }
    }

    /// `coeff * sqrt(radicand)` where the radicand is given by its prime
    /// factorization.
    pub(crate) fn from_parts(coeff: BigRational, radicand: &Factorization) -> Self {
        let (num, den, inner) = radicand.sqrt_split();
        Self::from_surd(coeff * BigRational::new(num, den), inner)
    }

    /// Builds `rat * sqrt(root)` for an arbitrary nonnegative rational root
    /// whose numerator and denominator are small enough to factor.
    pub fn new(rat: BigRational, root: BigRational) -> Self {
        assert!(!root.is_negative(), "negative radicand");
        if root.is_zero() || rat.is_zero() {
            return Self::zero();
        }
        let (n, d) = (root.numer().clone(), root.denom().clone());
        // sqrt(n/d) = sqrt(n d) / d
        let nd = n * &d;
        let (sq, free) = square_free_split(&nd);
        Self::from_surd(rat * BigRational::new(sq, d), free)
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn root(&self) -> &BigInt {
        &self.root
    }

    pub fn float_view(&self) -> f64 {
        f64::from_bits(self.float_view)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    /// The exact square of the value, with sign: `sign(v) * v^2`.
    pub fn signed_square(&self) -> BigRational {
        let sq = &self.rat * &self.rat * BigRational::from_integer(self.root.clone());
        if self.rat.is_negative() {
            -sq
        } else {
            sq
        }
    }

    pub fn neg(&self) -> Self {
        Self::from_surd(-self.rat.clone(), self.root.clone())
    }
}

fn surd_to_f64(rat: &BigRational, root: &BigInt) -> f64 {
    if rat.is_zero() {
        return 0.0;
    }
    let sq = rat * rat * BigRational::from_integer(root.clone());
    let mag = sq.to_f64().expect("finite square").sqrt();
    if rat.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Trial-division split `n = s^2 * f` with `f` square-free.
fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut sq = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            sq *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += 1u32;
    }
    free *= rest;
    (sq, free)
}

impl Mul for &ExactCoupling {
    type Output = ExactCoupling;

    fn mul(self, rhs: &ExactCoupling) -> ExactCoupling {
        if self.is_zero() || rhs.is_zero() {
            return ExactCoupling::zero();
        }
        let g = self.root.gcd(&rhs.root);
        let root = (&self.root / &g) * (&rhs.root / &g);
        let rat = &self.rat * &rhs.rat * BigRational::from_integer(g);
        ExactCoupling::from_surd(rat, root)
    }
}

impl fmt::Display for ExactCoupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root.is_one() {
            write!(f, "{}", self.rat)
        } else {
            write!(f, "{}*sqrt({})", self.rat, self.root)
        }
    }
}

/// Exact linear combination of surds, grouped by square-free root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SurdSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl SurdSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, c: &ExactCoupling) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(c.root.clone())
            .or_insert_with(BigRational::zero);
        *slot += &c.rat;
        if slot.is_zero() {
            self.terms.remove(&c.root);
        }
    }

    /// Collapses to a single surd when at most one root survives.
    pub fn to_single(&self) -> Option<ExactCoupling> {
        match self.terms.len() {
            0 => Some(ExactCoupling::zero()),
            1 => {
                let (root, rat) = self.terms.iter().next()?;
                Some(ExactCoupling::from_surd(rat.clone(), root.clone()))
            }
            _ => None,
        }
    }

    pub fn float_view(&self) -> f64 {
        self.terms
            .iter()
            .map(|(root, rat)| surd_to_f64(rat, root))
            .sum()
    }
}
