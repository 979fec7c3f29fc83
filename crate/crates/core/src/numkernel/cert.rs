//! Certified real enclosures `[lo, hi]` with dyadic endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::consts::{ln2_bounds, pi_bounds};
use super::dyadic::{Dyadic, Rounding};
use super::fixed;
use crate::error::{Error, Result};

/// Extra working bits carried by transcendental kernels beyond the target precision.
pub(crate) const GUARD: u32 = 24;

/// A closed interval guaranteed to contain the real it stands for.
///
/// Every operation rounds the lower endpoint down and the upper endpoint up
/// to `precision_bits` significant bits (the maximum of the operands').
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CertReal {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl CertReal {
    /// Enclosure `[lo, hi]`, rounded outward to `bits`.
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self::from_sorted(lo, hi, bits))
    }

    fn from_sorted(lo: Dyadic, hi: Dyadic, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        CertReal {
            lo: lo.round(bits, Rounding::Floor),
            hi: hi.round(bits, Rounding::Ceil),
            bits,
        }
    }

    /// Endpoints kept exactly as given (no rounding).
    pub fn exact_bounds(lo: Dyadic, hi: Dyadic, bits: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid("empty interval".into()));
        }
        Ok(CertReal { lo, hi, bits })
    }

    pub fn point(x: Dyadic, bits: u32) -> Self {
        Self::from_sorted(x.clone(), x, bits)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, bits: u32) -> Self {
        Self::point(Dyadic::from_int(v), bits)
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        CertReal {
            lo: Dyadic::from_rational(r, bits, Rounding::Floor),
            hi: Dyadic::from_rational(r, bits, Rounding::Ceil),
            bits,
        }
    }

    /// Enclosure of the rational interval `[a, b]` (order-insensitive).
    pub fn from_rational_bounds(a: &BigRational, b: &BigRational, bits: u32) -> Self {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        CertReal {
            lo: Dyadic::from_rational(a, bits, Rounding::Floor),
            hi: Dyadic::from_rational(b, bits, Rounding::Ceil),
            bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// Re-round outward at a new precision.
    pub fn with_precision(&self, bits: u32) -> Self {
        Self::from_sorted(self.lo.clone(), self.hi.clone(), bits)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    /// Approximate midpoint for display.
    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Smallest absolute value in the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else if self.lo.is_positive() {
            self.lo.clone()
        } else {
            self.hi.abs()
        }
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Dyadic {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then(|| CertReal {
            lo,
            hi,
            bits: self.bits.max(other.bits),
        })
    }

    /// Convex hull.
    pub fn hull(&self, other: &Self) -> Self {
        CertReal {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
            bits: self.bits.max(other.bits),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Self) -> bool {
        self.hi <= other.lo
    }

    /// `width <= target · mig` (relative width test, exact).
    pub fn meets_rel_width(&self, target: &BigRational) -> bool {
        let mig = self.mig();
        if mig.is_zero() {
            return self.width().is_zero();
        }
        let lhs = self.width().to_rational();
        lhs <= target * mig.to_rational()
    }

    /// Relative width as a float (for reporting).
    pub fn rel_width(&self) -> f64 {
        let mig = self.mig().to_f64();
        if mig == 0.0 {
            f64::INFINITY
        } else {
            self.width().to_f64() / mig
        }
    }

    /// Floor, if certified (both endpoints agree).
    pub fn certified_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    fn bits_with(&self, other: &Self) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn neg(&self) -> Self {
        CertReal {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo.is_negative() && self.hi.is_positive() {
            CertReal {
                lo: Dyadic::zero(),
                hi: self.mag(),
                bits: self.bits,
            }
        } else if self.hi.is_negative() || (self.hi.is_zero() && self.lo.is_negative()) {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_sorted(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.bits_with(other),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_sorted(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.bits_with(other),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bits = self.bits_with(other);
        if self.lo.is_positive() && other.lo.is_positive() {
            return Self::from_sorted(self.lo.mul(&other.lo), self.hi.mul(&other.hi), bits);
        }
        let p = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Self::from_sorted(lo, hi, bits)
    }

    /// Multiply by `2^k` (exact).
    pub fn shl(&self, k: i64) -> Self {
        CertReal {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
            bits: self.bits,
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        self.mul(&Self::from_rational(r, self.bits))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.contains_zero() {
            return Err(Error::Domain("division by an interval containing 0".into()));
        }
        let bits = self.bits_with(other);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let l = a.div(b, bits, Rounding::Floor);
                let h = a.div(b, bits, Rounding::Ceil);
                lo = Some(match lo {
                    Some(x) if x <= l => x,
                    _ => l,
                });
                hi = Some(match hi {
                    Some(x) if x >= h => x,
                    _ => h,
                });
            }
        }
        Ok(CertReal {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
            bits,
        })
    }

    pub fn recip(&self) -> Result<Self> {
        Self::from_int(1, self.bits).div(self)
    }

    /// Integer power.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        if n == 0 {
            return Ok(Self::from_int(1, self.bits));
        }
        let n = n as u64;
        let bits = self.bits;
        let pow_pos = |x: &Dyadic, dir: Rounding| -> Dyadic {
            // x >= 0: repeated squaring with every step rounded in `dir`.
            let mut base = x.clone();
            let mut acc = Dyadic::one();
            let mut e = n;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc.mul(&base).round(bits + GUARD, dir);
                }
                e >>= 1;
                if e > 0 {
                    base = base.mul(&base).round(bits + GUARD, dir);
                }
            }
            acc
        };
        let signed_pow = |x: &Dyadic, dir: Rounding| -> Dyadic {
            if x.is_negative() && n % 2 == 1 {
                pow_pos(&x.abs(), dir.flip()).neg()
            } else {
                pow_pos(&x.abs(), dir)
            }
        };
        let (lo, hi) = if n % 2 == 0 {
            let a = self.abs();
            (pow_pos(&a.lo, Rounding::Floor), pow_pos(&a.hi, Rounding::Ceil))
        } else {
            (signed_pow(&self.lo, Rounding::Floor), signed_pow(&self.hi, Rounding::Ceil))
        };
        Ok(Self::from_sorted(lo, hi, bits))
    }

    pub fn sqr(&self) -> Self {
        self.powi(2).expect("square never fails")
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.lo.is_negative() {
            return Err(Error::Domain("sqrt of an interval with negative part".into()));
        }
        let bits = self.bits;
        let root = |x: &Dyadic, dir: Rounding| -> Dyadic {
            if x.is_zero() {
                return Dyadic::zero();
            }
            // x = m·2^e; scale so that e is even and m has >= 2·bits + 8 bits.
            let mut e = x.exponent();
            let mut m = x.mantissa().clone();
            let want = 2 * (bits as i64 + GUARD as i64);
            let mut shift = (want - m.bits() as i64).max(0);
            if (e - shift) & 1 == 1 {
                shift += 1;
            }
            m <<= shift as u64;
            e -= shift;
            let s = m.sqrt();
            let s = if dir == Rounding::Ceil && &s * &s != m { s + 1u32 } else { s };
            Dyadic::new(s, e / 2)
        };
        Ok(Self::from_sorted(
            root(&self.lo, Rounding::Floor),
            root(&self.hi, Rounding::Ceil),
            bits,
        ))
    }

    pub fn exp(&self) -> Result<Self> {
        let lo = exp_point(&self.lo, self.bits)?.0;
        let hi = exp_point(&self.hi, self.bits)?.1;
        Ok(Self::from_sorted(lo, hi, self.bits))
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("ln of an interval not strictly positive".into()));
        }
        let lo = ln_point(&self.lo, self.bits).0;
        let hi = ln_point(&self.hi, self.bits).1;
        Ok(Self::from_sorted(lo, hi, self.bits))
    }

    /// `self^r` for a positive base and rational exponent (integer fast path).
    pub fn pow_rational(&self, r: &BigRational) -> Result<Self> {
        if r.is_integer() {
            if let Some(n) = r.to_integer().to_i64() {
                return self.powi(n);
            }
        }
        if !self.is_positive() {
            return Err(Error::Domain("non-integer power of a non-positive interval".into()));
        }
        self.ln()?.mul_rational(r).exp()
    }

    /// `self^e` for a positive base and an interval exponent.
    pub fn pow(&self, e: &Self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("real power of a non-positive interval".into()));
        }
        self.ln()?.mul(e).exp()
    }

    pub fn sin(&self) -> Self {
        sin_shifted(self, 0)
    }

    pub fn cos(&self) -> Self {
        sin_shifted(self, 1)
    }
}

/// `sin(x + shift·π/2)`.
fn sin_shifted(x: &CertReal, shift: i64) -> CertReal {
    let bits = x.bits;
    let unit = CertReal::from_sorted(Dyadic::from_int(-1), Dyadic::one(), bits);
    if x.width() > Dyadic::from_int(2) {
        return unit;
    }
    let mag = x.mag().msb().unwrap_or(0).max(0) as u32;
    let p = bits + GUARD + mag + 4;
    let (plo, phi) = pi_bounds(p as u64);
    let half_pi = CertReal::from_sorted(plo.shl(-1), phi.shl(-1), p);
    let xp = x.with_precision(p);
    let k = xp
        .mid()
        .div(&half_pi.mid(), mag + 8, Rounding::Floor)
        .add(&Dyadic::pow2(-1))
        .floor();
    let y = xp.sub(&half_pi.mul(&CertReal::from_int(k.clone(), p)));
    let bound = Dyadic::from_f64(1.0).unwrap();
    if y.lo < bound.neg() || y.hi > bound {
        return unit;
    }
    let quadrant = ((&k + BigInt::from(shift)) % 4u32 + 4u32) % 4u32;
    let quadrant = quadrant.to_u32().unwrap();
    let c = y.mid();
    let rad = std::cmp::max(c.sub(&y.lo), y.hi.sub(&c));
    let use_cos = quadrant % 2 == 1;
    let extra = if use_cos {
        0
    } else {
        c.msb().map_or(0, |m| (-m).max(0) as u64)
    };
    let w = bits as u64 + GUARD as u64 + extra;
    let cf = c.to_fixed(w, Rounding::Floor);
    let (v, e) = if use_cos {
        fixed::cos(&cf, w)
    } else {
        fixed::sin(&cf, w)
    };
    // One more unit for rounding the argument (both functions are 1-Lipschitz).
    let e = BigInt::from(e + 1);
    let mut lo = Dyadic::from_fixed(&v - &e, w).sub(&rad);
    let mut hi = Dyadic::from_fixed(&v + &e, w).add(&rad);
    if quadrant >= 2 {
        (lo, hi) = (hi.neg(), lo.neg());
    }
    let one = Dyadic::one();
    let lo = std::cmp::max(lo, one.neg());
    let hi = std::cmp::min(hi, one);
    CertReal::from_sorted(lo, hi, bits)
}

/// Enclosure `(lo, hi)` of `exp(c)` for an exact dyadic `c`.
fn exp_point(c: &Dyadic, bits: u32) -> Result<(Dyadic, Dyadic)> {
    if c.is_zero() {
        return Ok((Dyadic::one(), Dyadic::one()));
    }
    let mag = c.msb().unwrap();
    if mag > 60 {
        return Err(Error::Domain(format!("exp argument too large (2^{mag})")));
    }
    let mag = mag.max(0) as u64;
    let w = bits as u64 + GUARD as u64;
    let pl = w + mag + 8;
    let (llo, lhi) = ln2_bounds(pl);
    let k = c
        .div(&llo, mag as u32 + 8, Rounding::Floor)
        .add(&Dyadic::pow2(-1))
        .floor();
    let kd = Dyadic::from_int(k.clone());
    // r = c - k·ln2 as an interval (k may be negative).
    let (a, b) = (kd.mul(&llo), kd.mul(&lhi));
    let (kl_lo, kl_hi) = if a <= b { (a, b) } else { (b, a) };
    let r_lo = c.sub(&kl_hi);
    let r_hi = c.sub(&kl_lo);
    let half = Dyadic::pow2(-1);
    debug_assert!(r_lo >= half.neg() && r_hi <= half);
    let (vl, el) = fixed::exp(&r_lo.to_fixed(w, Rounding::Floor), w);
    let (vh, eh) = fixed::exp(&r_hi.to_fixed(w, Rounding::Ceil), w);
    let k = k.to_i64().expect("exp scale fits in i64");
    let lo = Dyadic::from_fixed(vl - BigInt::from(el), w).shl(k);
    let hi = Dyadic::from_fixed(vh + BigInt::from(eh), w).shl(k);
    Ok((lo, hi))
}

/// Enclosure `(lo, hi)` of `ln(c)` for an exact dyadic `c > 0`.
fn ln_point(c: &Dyadic, bits: u32) -> (Dyadic, Dyadic) {
    debug_assert!(c.is_positive());
    let mut e = c.msb().unwrap();
    let dist_to_one = c.sub(&Dyadic::one());
    let extra = if (e == 0 || e == -1) && !dist_to_one.is_zero() {
        (-dist_to_one.msb().unwrap()).max(0) as u64
    } else {
        0
    };
    let w = bits as u64 + GUARD as u64 + extra;
    let one_w = BigInt::one() << w;
    let mut m = c.shl(-e).to_fixed(w, Rounding::Floor);
    // Normalize m into [1/√2, √2).
    if &m * &m > (&one_w * &one_w) << 1u32 {
        e += 1;
        m = c.shl(-e).to_fixed(w, Rounding::Floor);
    }
    let num = &m - &one_w;
    let den = &m + &one_w;
    let z = (num.abs() << w) / den;
    let (s, se) = fixed::atanh(&z, w);
    let s = if num.is_negative() { -s } else { s };
    // atanh error, plus the rounding of m and of z.
    let err_m = BigInt::from(2 * se + 8);
    let mut lo_m = (&s * 2u32) - &err_m;
    let mut hi_m = (&s * 2u32) + &err_m;
    let mut w_tot = w;
    if e != 0 {
        let eb = BigInt::from(e);
        let extra_l = eb.bits() + 2;
        let wl = w + extra_l;
        let (l, le) = fixed::ln2(wl);
        let (ll, lh) = (l.clone() - BigInt::from(le), l + BigInt::from(le));
        let (a, b) = (&eb * ll, &eb * lh);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo_m = (lo_m << extra_l) + a;
        hi_m = (hi_m << extra_l) + b;
        w_tot = wl;
    }
    (Dyadic::from_fixed(lo_m, w_tot), Dyadic::from_fixed(hi_m, w_tot))
}

impl fmt::Debug for CertReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]@{}", self.lo, self.hi, self.bits)
    }
}

impl fmt::Display for CertReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.12e} ± {:.1e}",
            self.to_f64(),
            self.width().to_f64() / 2.0
        )
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CertRealDoc {
    lo: String,
    hi: String,
    bits: u32,
}

/// Endpoints serialize as exact positional decimals, so a round trip is bit-exact.
impl serde::Serialize for CertReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertRealDoc {
            lo: self.lo.to_decimal_string(),
            hi: self.hi.to_decimal_string(),
            bits: self.bits,
        }
        .serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for CertReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = CertRealDoc::deserialize(d)?;
        let lo = Dyadic::parse_decimal_exact(&doc.lo)
            .ok_or_else(|| D::Error::custom(format!("lo is not an exact dyadic: {}", doc.lo)))?;
        let hi = Dyadic::parse_decimal_exact(&doc.hi)
            .ok_or_else(|| D::Error::custom(format!("hi is not an exact dyadic: {}", doc.hi)))?;
        CertReal::exact_bounds(lo, hi, doc.bits).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cr(x: f64, bits: u32) -> CertReal {
        CertReal::point(Dyadic::from_f64(x).unwrap(), bits)
    }

    fn assert_near(x: &CertReal, v: f64, tol: f64) {
        assert!((x.to_f64() - v).abs() <= tol * v.abs().max(1e-300), "{x} vs {v}");
    }

    #[test]
    fn arithmetic_contains_rational_results() {
        let third = CertReal::from_rational(&rat(1, 3), 64);
        assert!(third.contains_rational(&rat(1, 3)));
        let s = third.add(&third).add(&third);
        assert!(s.contains_rational(&rat(1, 1)));
        let p = third.mul(&CertReal::from_int(-3, 64));
        assert!(p.contains_rational(&rat(-1, 1)));
        let q = CertReal::from_int(2, 64).div(&CertReal::from_int(7, 64)).unwrap();
        assert!(q.contains_rational(&rat(2, 7)));
        assert!(CertReal::from_int(1, 64).div(&cr(0.0, 64)).is_err());
    }

    #[test]
    fn powers_and_roots() {
        let x = CertReal::from_rational(&rat(-3, 2), 80);
        assert!(x.powi(3).unwrap().contains_rational(&rat(-27, 8)));
        assert!(x.powi(2).unwrap().contains_rational(&rat(9, 4)));
        assert!(x.powi(-2).unwrap().contains_rational(&rat(4, 9)));
        let two = CertReal::from_int(2, 100);
        let r = two.sqrt().unwrap();
        assert!(r.sqr().contains_rational(&rat(2, 1)));
        assert!(r.width() <= Dyadic::pow2(-98));
        assert_near(&r, std::f64::consts::SQRT_2, 1e-15);
    }

    #[test]
    fn exp_and_ln_are_inverse_enclosures() {
        for x in [-40.5, -3.0, -0.1, 1e-9, 0.7, 2.0, 123.25] {
            let c = cr(x, 96);
            let e = c.exp().unwrap();
            assert_near(&e, x.exp(), 1e-14);
            let back = e.ln().unwrap();
            assert!(back.contains(&Dyadic::from_f64(x).unwrap()), "{x}: {back:?}");
        }
        let l = CertReal::from_int(355, 96).ln().unwrap();
        assert_near(&l, 355f64.ln(), 1e-15);
        let near_one = cr(1.0 + 1e-12, 96).ln().unwrap();
        assert!(near_one.rel_width() < 1e-25);
    }

    #[test]
    fn sin_cos_on_assorted_arguments() {
        for x in [0.0, 1e-7, 0.5, 1.0, 2.0, 3.0, -4.0, 11.0, 355.0, 1e6] {
            let c = cr(x, 96);
            let s = c.sin();
            let co = c.cos();
            assert!((s.to_f64() - x.sin()).abs() < 1e-9, "sin {x}");
            assert!((co.to_f64() - x.cos()).abs() < 1e-9, "cos {x}");
            assert!(s.width().to_f64() < 1e-25);
            let one = s.sqr().add(&co.sqr());
            assert!(one.contains(&Dyadic::one()));
        }
    }

    #[test]
    fn pow_rational_uses_both_paths() {
        let x = CertReal::from_int(355, 128);
        let a = x.pow_rational(&rat(3, 1)).unwrap();
        assert!(a.contains(&Dyadic::from_int(355i64.pow(3))));
        let b = x.pow_rational(&rat(1, 2)).unwrap();
        let c = x.sqrt().unwrap();
        assert!(b.overlaps(&c));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let x = CertReal::from_rational(&rat(1, 3), 100).sin();
        let s = serde_json::to_string(&x).unwrap();
        let back: CertReal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(!s.contains('e'));
    }
}
