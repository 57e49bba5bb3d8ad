//! Exact rational arithmetic helpers on top of `num_rational::BigRational`.
//!
//! Everything downstream (matrix entries, eigenvector coefficients, rescaling
//! factors, probabilities) lives in `BigRational`; no floating point touches
//! any exact result. Serialization is the string `"p/q"`, or `"p"` when q = 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// binom(n, k) with n allowed to be any integer (k a nonnegative integer);
/// vanishes for k > n >= 0 and follows the falling-factorial definition otherwise.
pub fn binomial_int(n: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i as i64);
    }
    num / factorial(k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    binomial_int(n as i64, k)
}

/// n! / (k_1! k_2! ... k_m!) for a composition of n.
pub fn multinomial(parts: &[u64]) -> BigInt {
    let n: u64 = parts.iter().sum();
    let mut acc = factorial(n);
    for &k in parts {
        acc /= factorial(k);
    }
    acc
}

/// Exact integer power of a rational.
pub fn pow_rat(base: &Rat, exp: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Formats as "p/q", or "p" when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "p/q" or "p".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(p))
        }
    }
}

/// Rounds a nonnegative rational to f64 for reporting only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    let digits = 15u32;
    let scale = BigInt::from(10u64).pow(digits);
    let scaled = (r * big(&scale)).round();
    let v: f64 = scaled.numer().to_string().parse().unwrap_or(f64::NAN);
    v / 10f64.powi(digits as i32)
}

pub fn abs_rat(r: &Rat) -> Rat {
    r.abs()
}
