//! Exact arithmetic: rationals, finite fields, scaled vectors.

mod field;
mod vector;

pub use field::FiniteField;
pub use vector::{linf_norm, lp_norm_pow, multilinear_product, tensor, ScaledVector, DEFAULT_DIM_CAP};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

pub fn rat_pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Parse "a/b" or "a".
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Lossy conversion for display only.
pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // fall back through logarithms for huge magnitudes
        let n = ln_big(&x.numer().abs().to_biguint().unwrap_or_default());
        let d = ln_big(&x.denom().to_biguint().unwrap_or_default());
        let v = (n - d).exp();
        if x.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// Natural log of a big unsigned integer (`-inf` for zero).
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Smallest integer t with t >= y + sqrt(y)/10, computed exactly.
pub fn ceil_y_plus_sqrt_y_over_10(y: u64) -> u64 {
    // t - y = smallest s >= 0 with 100 s^2 >= y
    let mut s = ((y as f64).sqrt() / 10.0).floor() as u64;
    s = s.saturating_sub(1);
    while 100u128 * (s as u128) * (s as u128) < y as u128 {
        s += 1;
    }
    y + s
}

/// Exact test of S >= y + sqrt(y/100) for integers.
pub fn meets_y_plus_sqrt_y_over_100(s: i64, y: i64) -> bool {
    let diff = s as i128 - y as i128;
    diff >= 0 && 100 * diff * diff >= y as i128
}

/// Exact test of S >= p'/2 + sqrt(p'/2)/10 for integers.
pub fn meets_half_threshold(s: i64, pp: i64) -> bool {
    let diff = 2 * s as i128 - pp as i128;
    diff >= 0 && 50 * diff * diff >= pp as i128
}
