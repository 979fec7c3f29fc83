//! Fixed-point series kernels.
//!
//! Every kernel works on integers scaled by `2^w` and returns `(v, e)` such
//! that the true value lies in `[(v - e)·2^-w, (v + e)·2^-w]`. Inputs are taken
//! as exact. Error counts are conservative: every truncating step is charged
//! at least one unit, and alternating or geometric tails are bounded by their
//! first omitted term.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::dyadic::shr_floor;

/// `(v, e)` pair: value and error bound, both in units of `2^-w`.
pub type Fixed = (BigInt, u64);

fn one(w: u64) -> BigInt {
    BigInt::from(1u32) << w
}

/// `arctan(1/k)` for an integer `k >= 2`.
pub fn atan_inv(k: u64, w: u64) -> Fixed {
    let k2 = BigInt::from(k) * BigInt::from(k);
    // p = floor(2^w / k^(2j+1)); nested floors of positive divisions are exact floors.
    let mut p = one(w) / BigInt::from(k);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        let t = &p / BigInt::from(2 * j + 1);
        if j % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        p /= &k2;
        j += 1;
    }
    // One unit per truncated term plus the alternating tail (< 1 unit).
    (sum, j + 1)
}

/// `π` by Machin's formula `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi(w: u64) -> Fixed {
    let (a, ea) = atan_inv(5, w);
    let (b, eb) = atan_inv(239, w);
    (a * 16u32 - b * 4u32, 16 * ea + 4 * eb)
}

/// `ln 2 = 2·atanh(1/3)`.
pub fn ln2(w: u64) -> Fixed {
    let mut p = one(w) / BigInt::from(3u32);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * j + 1);
        p /= BigInt::from(9u32);
        j += 1;
    }
    // Positive terms, geometric tail with ratio 1/9 starting below one unit.
    (sum * 2u32, 2 * (j + 2))
}

/// `atanh(z)` for `0 <= z <= 1/3`, `z = zf·2^-w`.
pub fn atanh(zf: &BigInt, w: u64) -> Fixed {
    debug_assert!(!zf.is_negative());
    let z2 = shr_floor(&(zf * zf), w);
    let mut p = zf.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * k + 1);
        p = shr_floor(&(&p * &z2), w);
        k += 1;
    }
    (sum, 4 * (k + 2))
}

/// `exp(r)` for `|r| <= 1/2`, `r = rf·2^-w`.
pub fn exp(rf: &BigInt, w: u64) -> Fixed {
    let mut t = one(w);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !t.is_zero() {
        sum += &t;
        k += 1;
        t = shr_floor(&(&t * rf), w).div_floor(&BigInt::from(k));
    }
    (sum, 4 * (k + 4))
}

/// `sin(x)` for `|x| <= 1`, `x = xf·2^-w`.
pub fn sin(xf: &BigInt, w: u64) -> Fixed {
    let x2 = shr_floor(&(xf * xf), w);
    let mut t = xf.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !t.is_zero() {
        sum += &t;
        let d = BigInt::from((2 * k + 2) * (2 * k + 3));
        t = -(shr_floor(&(&t * &x2), w).div_floor(&d));
        k += 1;
    }
    (sum, 4 * (k + 2))
}

/// `cos(x)` for `|x| <= 1`, `x = xf·2^-w`.
pub fn cos(xf: &BigInt, w: u64) -> Fixed {
    let x2 = shr_floor(&(xf * xf), w);
    let mut t = one(w);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !t.is_zero() {
        sum += &t;
        let d = BigInt::from((2 * k + 1) * (2 * k + 2));
        t = -(shr_floor(&(&t * &x2), w).div_floor(&d));
        k += 1;
    }
    (sum, 4 * (k + 2))
}
