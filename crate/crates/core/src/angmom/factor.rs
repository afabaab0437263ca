//! Prime-exponent arithmetic for factorial ratios under a square root.

use num_bigint::BigInt;
use num_traits::One;
use once_cell::sync::Lazy;

/// Largest factorial argument the tables cover. Racah sums for 2j <= 400
/// need `(j1+j2+j4+j5+1)!`, i.e. up to 801.
pub(crate) const MAX_FACTORIAL: usize = 802;

pub(crate) static PRIMES: Lazy<Vec<u32>> = Lazy::new(|| {
    let n = MAX_FACTORIAL;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut k = i * i;
            while k <= n {
                sieve[k] = false;
                k += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
});

static FACTORIALS: Lazy<Vec<BigInt>> = Lazy::new(|| {
    let mut out = Vec::with_capacity(MAX_FACTORIAL + 1);
    let mut acc = BigInt::one();
    out.push(acc.clone());
    for k in 1..=MAX_FACTORIAL {
        acc *= k;
        out.push(acc.clone());
    }
    out
});

pub(crate) fn factorial(n: i64) -> &'static BigInt {
    &FACTORIALS[usize::try_from(n).expect("negative factorial argument")]
}

/// Exponent vector over [`PRIMES`]; represents a positive rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Factorization {
    exps: Vec<i32>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            exps: vec![0; PRIMES.len()],
        }
    }

    /// Legendre's formula for the exponent of each prime in `n!`.
    pub fn of_factorial(n: i64) -> Self {
        let n = n as u64;
        let mut f = Self::one();
        for (slot, &p) in f.exps.iter_mut().zip(PRIMES.iter()) {
            let p = p as u64;
            if p > n {
                break;
            }
            let mut e = 0u64;
            let mut q = n / p;
            while q > 0 {
                e += q;
                q /= p;
            }
            *slot = e as i32;
        }
        f
    }

    pub fn of_int(n: i64) -> Self {
        assert!(n > 0, "factorization of non-positive integer");
        let mut rest = n as u64;
        let mut f = Self::one();
        for (slot, &p) in f.exps.iter_mut().zip(PRIMES.iter()) {
            let p = p as u64;
            while rest % p == 0 {
                rest /= p;
                *slot += 1;
            }
            if rest == 1 {
                break;
            }
        }
        assert_eq!(rest, 1, "integer {n} has a prime factor beyond the table");
        f
    }

    pub fn mul_assign(&mut self, other: &Factorization) {
        for (a, b) in self.exps.iter_mut().zip(&other.exps) {
            *a += *b;
        }
    }

    pub fn div_assign(&mut self, other: &Factorization) {
        for (a, b) in self.exps.iter_mut().zip(&other.exps) {
            *a -= *b;
        }
    }

    /// Splits `sqrt(self)` into `outer * sqrt(inner)` with `inner` a
    /// square-free integer. Returns `(outer_num, outer_den, inner)`.
    pub fn sqrt_split(&self) -> (BigInt, BigInt, BigInt) {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let mut inner = BigInt::one();
        for (&e, &p) in self.exps.iter().zip(PRIMES.iter()) {
            if e == 0 {
                continue;
            }
            let half = e.div_euclid(2);
            let odd = e.rem_euclid(2);
            if half > 0 {
                num *= BigInt::from(p).pow(half as u32);
            } else if half < 0 {
                den *= BigInt::from(p).pow((-half) as u32);
            }
            if odd == 1 {
                inner *= p;
            }
        }
        (num, den, inner)
    }
}
