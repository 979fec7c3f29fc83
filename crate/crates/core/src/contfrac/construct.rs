//! Continued fractions whose partial quotients grow fast enough to force
//! large series terms at every convergent denominator.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::expansion::CFExpansion;
use crate::error::{Error, Result};
use crate::rational::{ceil_root, decimal_digits};

/// Default cap on the decimal length of a constructed partial quotient.
pub const DEFAULT_DIGIT_BUDGET: u64 = 1_000_000;

/// Extend `prefix` (the expansion of `x = 1/α`) to `n_terms` terms, each new
/// quotient being `⌈α_hi·B2·q_n^(u/v − 1)⌉`, where `α_hi` is the exact upper
/// bound of `1/x` over all continuations of the current prefix.
pub fn construct_divergent(
    u: &BigRational,
    v: &BigRational,
    b2: &BigRational,
    n_terms: usize,
    prefix: &CFExpansion,
    digit_budget: u64,
) -> Result<CFExpansion> {
    if !u.is_positive() || !v.is_positive() || !b2.is_positive() {
        return Err(Error::Domain("u, v and B2 must be positive".into()));
    }
    if prefix.is_empty() {
        return Err(Error::Domain("prefix must be nonempty".into()));
    }
    let e = u / v - BigRational::one();
    let s = e.numer().clone();
    let t: u32 = e
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Domain("exponent denominator too large".into()))?;
    let mut cf = prefix.clone();
    while cf.len() < n_terms {
        let n = cf.len() - 1;
        let (a, b) = cf.tail_bounds();
        let x_lo = std::cmp::min(a, b);
        if !x_lo.is_positive() {
            return Err(Error::Domain(
                "prefix must pin the value away from 0 (try [0;1])".into(),
            ));
        }
        // α_hi·B2 = cn/cd.
        let c = b2 / x_lo;
        let (cn, cd) = (c.numer().magnitude().clone(), c.denom().magnitude().clone());
        let q = cf.q(n)?.magnitude().clone();
        let next = n + 1;
        let est_bits = (t as u64 * cn.bits() + s.magnitude().to_u64().unwrap_or(u64::MAX).saturating_mul(q.bits()))
            / t as u64;
        let est_digits = (est_bits as f64 * std::f64::consts::LOG10_2) as u64;
        if s.is_positive() && est_digits > digit_budget.saturating_add(2) {
            return Err(Error::DigitBudget {
                index: next,
                digits: est_digits,
                budget: digit_budget,
            });
        }
        let a = ceil_scaled_power(&cn, &cd, &q, &s, t);
        let a = if a.is_zero() { BigUint::one() } else { a };
        let digits = decimal_digits(&a);
        if digits > digit_budget {
            return Err(Error::DigitBudget {
                index: next,
                digits,
                budget: digit_budget,
            });
        }
        cf.push(BigInt::from(a))?;
    }
    Ok(cf)
}

/// `⌈(cn/cd)·q^(s/t)⌉` exactly.
fn ceil_scaled_power(cn: &BigUint, cd: &BigUint, q: &BigUint, s: &BigInt, t: u32) -> BigUint {
    let sp: usize = s.magnitude().try_into().expect("exponent numerator too large");
    let qs = num_traits::pow(q.clone(), sp);
    let (num, den) = if s.is_negative() {
        (num_traits::pow(cn.clone(), t as usize), num_traits::pow(cd.clone(), t as usize) * qs)
    } else {
        (num_traits::pow(cn.clone(), t as usize) * qs, num_traits::pow(cd.clone(), t as usize))
    };
    // a ≥ (num/den)^(1/t)  ⇔  a^t ≥ ⌈num/den⌉ for integer a.
    let k = num.div_ceil(&den);
    ceil_root(&k, t)
}

/// The conventional starting prefix `[0; 1]`.
pub fn default_prefix() -> CFExpansion {
    CFExpansion::from_terms([0, 1]).expect("valid prefix")
}
