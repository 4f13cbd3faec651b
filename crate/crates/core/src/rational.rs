//! Helpers on top of [`BigRational`]: correctly rounded conversion to `f64`,
//! the `"num/den"` text form and exact comparisons involving square roots.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Rounds `q` to the nearest `f64`, ties to even.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();

    // Scale so the integer quotient carries 55 or 56 significant bits.
    let shift = num.bits() as i64 - den.bits() as i64 - 55;
    let (n, d) = if shift >= 0 {
        (num, den << shift as usize)
    } else {
        (num << (-shift) as usize, den)
    };
    let (quot, rem) = n.div_rem(&d);
    let mut sticky = !rem.is_zero();
    let mut mant: u64 = quot.try_into().expect("quotient fits in u64");
    let mut exp = shift;
    while mant >= 1 << 54 {
        sticky |= mant & 1 == 1;
        mant >>= 1;
        exp += 1;
    }
    // mant now has 54 bits: 53 kept plus one rounding bit.
    let round_bit = mant & 1 == 1;
    mant >>= 1;
    exp += 1;
    if round_bit && (sticky || mant & 1 == 1) {
        mant += 1;
    }
    let value = (mant as f64) * 2f64.powi(exp.clamp(-1100, 1100) as i32);
    if negative {
        -value
    } else {
        value
    }
}

/// Formats as `"num/den"`, or `"num"` when the denominator is one.
pub fn format(q: &BigRational) -> String {
    q.to_string()
}

/// Parses the `"num/den"` or `"num"` form.
pub fn parse(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::invalid(format!("not an integer: {s:?}")))
    };
    match text.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(text)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::invalid("zero denominator"));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
    }
}

/// Compares `p` with `q·√m` for non-negative `p`, `q` exactly, by squaring.
pub fn cmp_with_sqrt(p: &BigRational, q: &BigRational, m: &BigInt) -> Ordering {
    assert!(!p.is_negative() && !q.is_negative() && m.sign() != Sign::Minus);
    let lhs = p * p;
    let rhs = q * q * BigRational::from_integer(m.clone());
    lhs.cmp(&rhs)
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
