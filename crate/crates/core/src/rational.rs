//! Exact rational helpers: parsing, formatting, and integer-power comparisons.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parse `"3"`, `"-2.45"`, `"7/22"` or `"1e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Invalid("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in {s:?}")))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Invalid(format!("not a number: {s:?}")));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Invalid(format!("not a number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().expect("validated digits")
    };
    if neg {
        num = -num;
    }
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Compare `a^r` with `b` for positive integers `a`, `b` and a rational `r`
/// (returns the ordering of `a^r` relative to `b`). Exact.
pub fn cmp_int_pow(a: &BigUint, r: &BigRational, b: &BigUint) -> std::cmp::Ordering {
    // a^(n/d) ? b  <=>  a^n ? b^d  (d > 0), with negative n moved across.
    let n = r.numer();
    let d = r.denom().magnitude();
    let d_usize: usize = d.try_into().expect("exponent denominator too large");
    let bd = num_traits::pow(b.clone(), d_usize);
    if n.is_negative() {
        let k: usize = n.magnitude().try_into().expect("exponent too large");
        // a^(-k/d) ? b  <=>  1 ? b^d a^k
        BigUint::one().cmp(&(bd * num_traits::pow(a.clone(), k)))
    } else {
        let k: usize = n.magnitude().try_into().expect("exponent too large");
        num_traits::pow(a.clone(), k).cmp(&bd)
    }
}

/// Smallest integer `m >= 0` with `m^t >= k`.
pub fn ceil_root(k: &BigUint, t: u32) -> BigUint {
    if k.is_zero() {
        return BigUint::zero();
    }
    let r = k.nth_root(t);
    if num_traits::pow(r.clone(), t as usize) == *k {
        r
    } else {
        r + 1u32
    }
}

pub fn floor_rat(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil_rat(r: &BigRational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Decimal digit count of a positive integer (exact).
pub fn decimal_digits(n: &BigUint) -> u64 {
    if n.is_zero() {
        return 1;
    }
    // bits * log10(2) is within one of the answer; settle it exactly.
    let est = ((n.bits() - 1) as f64 * std::f64::consts::LOG10_2).floor() as u64;
    let mut d = est.max(1);
    let ten = BigUint::from(10u32);
    while num_traits::pow(ten.clone(), d as usize) <= *n {
        d += 1;
    }
    while d > 1 && num_traits::pow(ten.clone(), (d - 1) as usize) > *n {
        d -= 1;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_rational("2.4").unwrap(), rat(12, 5));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("7/22").unwrap(), rat(7, 22));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn integer_power_comparison() {
        let a = BigUint::from(113u32);
        // 113^0.9 ~ 70.43
        assert_eq!(cmp_int_pow(&a, &rat(9, 10), &BigUint::from(70u32)), Ordering::Greater);
        assert_eq!(cmp_int_pow(&a, &rat(9, 10), &BigUint::from(71u32)), Ordering::Less);
        assert_eq!(
            cmp_int_pow(&BigUint::from(100u32), &rat(1, 2), &BigUint::from(10u32)),
            Ordering::Equal
        );
        assert_eq!(
            cmp_int_pow(&BigUint::from(4u32), &rat(-1, 2), &BigUint::from(1u32)),
            Ordering::Less
        );
    }

    #[test]
    fn roots_and_digits() {
        assert_eq!(ceil_root(&BigUint::from(16u32), 2), BigUint::from(4u32));
        assert_eq!(ceil_root(&BigUint::from(17u32), 2), BigUint::from(5u32));
        assert_eq!(decimal_digits(&BigUint::from(999u32)), 3);
        assert_eq!(decimal_digits(&BigUint::from(1000u32)), 4);
        assert_eq!(ceil_rat(&rat(-7, 2)), BigInt::from(-3));
        assert_eq!(floor_rat(&rat(-7, 2)), BigInt::from(-4));
    }
}
