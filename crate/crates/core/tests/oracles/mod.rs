//! Test-only reference computations in plain fixed point.
//!
//! Nothing here touches the library's numeric kernel: π comes from the
//! Gauss–Legendre AGM, sine from its Taylor series, logarithms from an atanh
//! series, and best approximations from a direct search. Results carry a
//! generous stated radius and are compared with library enclosures by overlap.
#![allow(dead_code)]

use dioph::numkernel::{CertReal, Dyadic};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Fractional bits of the fixed-point format (256 plus guard bits).
pub const W: u64 = 320;
/// Results are trusted to `2^-RADIUS_BITS` absolute.
pub const RADIUS_BITS: i64 = 240;

pub fn one() -> BigInt {
    BigInt::one() << W
}

pub fn from_int(n: i64) -> BigInt {
    BigInt::from(n) << W
}

pub fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> W
}

pub fn div(a: &BigInt, b: &BigInt) -> BigInt {
    (a << W).div_floor(b)
}

pub fn sqrt(a: &BigInt) -> BigInt {
    (a << W).sqrt()
}

pub fn to_f64(a: &BigInt) -> f64 {
    let shift = a.bits().saturating_sub(60);
    let top: i64 = (a >> shift).try_into().unwrap();
    top as f64 * 2f64.powi(shift as i32 - W as i32)
}

/// The oracle value as an enclosure of radius `2^-RADIUS_BITS`.
pub fn to_cert(a: &BigInt) -> CertReal {
    let c = Dyadic::from_fixed(a.clone(), W);
    let r = Dyadic::pow2(-RADIUS_BITS);
    CertReal::new(c.sub(&r), c.add(&r), 256).unwrap()
}

/// Same, with a caller-chosen radius `2^-bits`.
pub fn to_cert_radius(a: &BigInt, bits: i64) -> CertReal {
    let c = Dyadic::from_fixed(a.clone(), W);
    let r = Dyadic::pow2(-bits);
    CertReal::new(c.sub(&r), c.add(&r), 256).unwrap()
}

/// Gauss–Legendre iteration.
pub fn pi() -> BigInt {
    let mut a = one();
    let mut b = sqrt(&(one() >> 1u32));
    let mut t = one() >> 2u32;
    let mut p = BigInt::one();
    for _ in 0..12 {
        let an = (&a + &b) >> 1u32;
        b = sqrt(&mul(&a, &b));
        let d = &a - &an;
        t -= &p * mul(&d, &d);
        p <<= 1u32;
        a = an;
    }
    let s = &a + &b;
    div(&mul(&s, &s), &(t << 2u32))
}

/// Taylor series, for moderate `|x|`.
pub fn sin(x: &BigInt) -> BigInt {
    let x2 = mul(x, x);
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut k = 1i64;
    while !term.is_zero() {
        term = -mul(&term, &x2) / BigInt::from((k + 1) * (k + 2));
        sum += &term;
        k += 2;
    }
    sum
}

/// `sin n` for a positive integer, reducing by the nearest multiple of π.
pub fn sin_int(n: u64, pi: &BigInt) -> BigInt {
    let x = BigInt::from(n) << W;
    let k = (&x + (pi >> 1u32)).div_floor(pi);
    sin(&(x - k * pi))
}

fn atanh(z: &BigInt) -> BigInt {
    let z2 = mul(z, z);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let mut k = 3i64;
    loop {
        pow = mul(&pow, &z2);
        let t = &pow / BigInt::from(k);
        if t.is_zero() {
            return sum;
        }
        sum += t;
        k += 2;
    }
}

pub fn ln2() -> BigInt {
    atanh(&(one() / 3u32)) << 1u32
}

/// `ln x` for `x > 0`.
pub fn ln(x: &BigInt) -> BigInt {
    assert!(x.is_positive());
    let e = x.bits() as i64 - 1 - W as i64;
    let m = if e >= 0 { x >> (e as u64) } else { x << ((-e) as u64) };
    let z = div(&(&m - one()), &(&m + one()));
    (atanh(&z) << 1u32) + BigInt::from(e) * ln2()
}

/// Direct search for the best numerator of `x ≈ 1/α` at denominator `q`.
pub struct BestApprox {
    pub p: BigInt,
    pub error: BigInt,
    pub exponent: BigInt,
}

pub fn best_approx(q: u64, x: &BigInt) -> BestApprox {
    let qb = BigInt::from(q);
    let qx = &qb * x;
    let p0 = qx.div_floor(&one());
    let mut best: Option<(BigInt, BigInt)> = None;
    for dp in -1i64..=2 {
        let p = &p0 + dp;
        if p.is_negative() {
            continue;
        }
        // |x − p/q| = |q·x − p| / q.
        let err = (&qx - (&p << W)).abs() / &qb;
        if best.as_ref().map_or(true, |(_, e)| &err < e) {
            best = Some((p, err));
        }
    }
    let (p, error) = best.unwrap();
    let exponent = div(&-ln(&error), &ln(&from_int(q as i64)));
    BestApprox { p, error, exponent }
}

/// `1/π`, `1/√2` and `1/φ`.
pub fn inv_pi() -> BigInt {
    div(&one(), &pi())
}

pub fn inv_sqrt2() -> BigInt {
    sqrt(&(one() >> 1u32))
}

pub fn inv_golden() -> BigInt {
    // 1/φ = φ − 1 = (√5 − 1)/2.
    (sqrt(&from_int(5)) - one()) >> 1u32
}

/// `Σ_{n<=N} 1/(n³ sin² n)` term by term in fixed point.
pub fn flint_hills_sum(n_max: u64) -> BigInt {
    let pi = pi();
    let mut sum = BigInt::zero();
    for n in 1..=n_max {
        let s = sin_int(n, &pi);
        let den = mul(&s, &s) * BigInt::from(n).pow(3);
        sum += div(&one(), &den);
    }
    sum
}

/// `min_m |n − m·α|`.
pub fn lattice_dist(n: u64, alpha: &BigInt) -> BigInt {
    let x = BigInt::from(n) << W;
    let k = (&x + (alpha >> 1u32)).div_floor(alpha);
    (x - k * alpha).abs()
}

/// Sanity check of the oracle itself against `f64`.
pub fn self_check() {
    assert!((to_f64(&pi()) - std::f64::consts::PI).abs() < 1e-15);
    assert!((to_f64(&ln2()) - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((to_f64(&sin(&one())) - 1f64.sin()).abs() < 1e-15);
    assert!((to_f64(&ln(&from_int(10))) - 10f64.ln()).abs() < 1e-14);
}
