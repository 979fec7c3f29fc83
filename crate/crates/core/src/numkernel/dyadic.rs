//! Exact binary floating-point numbers `man · 2^exp` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Floor,
    /// Toward positive infinity.
    Ceil,
}

impl Rounding {
    pub fn flip(self) -> Self {
        match self {
            Rounding::Floor => Rounding::Ceil,
            Rounding::Ceil => Rounding::Floor,
        }
    }
}

/// `floor(m / 2^s)` for any sign of `m`.
pub(crate) fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.is_negative() {
        let a = -m;
        -((a - 1u32) >> s) - 1u32
    } else {
        m >> s
    }
}

/// `ceil(m / 2^s)` for any sign of `m`.
pub(crate) fn shr_ceil(m: &BigInt, s: u64) -> BigInt {
    -shr_floor(&-m, s)
}

pub(crate) fn shr_round(m: &BigInt, s: u64, dir: Rounding) -> BigInt {
    match dir {
        Rounding::Floor => shr_floor(m, s),
        Rounding::Ceil => shr_ceil(m, s),
    }
}

/// A dyadic rational `man · 2^exp`, kept normalized (odd mantissa, or the
/// canonical zero `0 · 2^0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Self::zero();
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { man, exp }
        } else {
            Dyadic {
                man: man >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::new(v.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic {
            man: BigInt::one(),
            exp: k,
        }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(sign) * BigInt::from(m), e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Dyadic {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    /// Round to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Rounding) -> Self {
        let bits = self.man.bits();
        let prec = prec.max(1) as u64;
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        Self::new(shr_round(&self.man, s, dir), self.exp + s as i64)
    }

    /// Round so that the result is an integer multiple of `2^min_exp`.
    pub fn round_to_exp(&self, min_exp: i64, dir: Rounding) -> Self {
        if self.is_zero() || self.exp >= min_exp {
            return self.clone();
        }
        let s = (min_exp - self.exp) as u64;
        Self::new(shr_round(&self.man, s, dir), min_exp)
    }

    /// Directed-rounded quotient with at least `prec` significant bits.
    pub fn div(&self, other: &Self, prec: u32, dir: Rounding) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        // Scale the numerator so the integer quotient carries prec + 2 bits.
        let want = prec as i64 + 2;
        let shift = (want + other.man.bits() as i64 - self.man.bits() as i64).max(0) as u64;
        let num = &self.man << shift;
        let (q, r) = num.div_mod_floor(&other.man);
        let q = if dir == Rounding::Ceil && !r.is_zero() {
            q + 1u32
        } else {
            q
        };
        Self::new(q, self.exp - other.exp - shift as i64).round(prec, dir)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            shr_floor(&self.man, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            shr_ceil(&self.man, (-self.exp) as u64)
        }
    }

    /// `x · 2^w` rounded to an integer in direction `dir`.
    pub fn to_fixed(&self, w: u64, dir: Rounding) -> BigInt {
        let e = self.exp + w as i64;
        if e >= 0 {
            &self.man << e as u64
        } else {
            shr_round(&self.man, (-e) as u64, dir)
        }
    }

    /// `v · 2^-w` exactly.
    pub fn from_fixed(v: BigInt, w: u64) -> Self {
        Self::new(v, -(w as i64))
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Directed rounding of a rational to `prec` significant bits.
    pub fn from_rational(r: &BigRational, prec: u32, dir: Rounding) -> Self {
        Self::from_int(r.numer().clone()).div(&Self::from_int(r.denom().clone()), prec, dir)
    }

    /// Exact conversion when the rational has a power-of-two denominator.
    pub fn from_rational_exact(r: &BigRational) -> Option<Self> {
        let d = r.denom();
        let tz = d.trailing_zeros()?;
        if d != &(BigInt::one() << tz) {
            return None;
        }
        Some(Self::new(r.numer().clone(), -(tz as i64)))
    }

    /// Nearest `f64` (approximate, for display and heuristics only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (shr_floor(&self.man, s), self.exp + s as i64)
        } else {
            (self.man.clone(), self.exp)
        };
        let mut v = m.to_f64().unwrap_or(f64::NAN);
        let mut e = e;
        while e > 1000 && v.is_finite() {
            v *= 2f64.powi(1000);
            e -= 1000;
        }
        while e < -1000 && v != 0.0 {
            v *= 2f64.powi(-1000);
            e += 1000;
        }
        v * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Exact positional decimal expansion (dyadics always terminate in base 10).
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.man << self.exp as u64).to_string();
        }
        let k = (-self.exp) as usize;
        let scaled = &self.man * num_traits::pow(BigInt::from(5u32), k);
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let (int_part, frac_part) = if digits.len() > k {
            let (a, b) = digits.split_at(digits.len() - k);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(k - digits.len()), digits))
        };
        let frac_part = frac_part.trim_end_matches('0');
        let sign = if neg { "-" } else { "" };
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    /// Parse a positional decimal string whose value is exactly dyadic.
    pub fn parse_decimal_exact(s: &str) -> Option<Self> {
        let r = crate::rational::parse_rational(s).ok()?;
        Self::from_rational_exact(&r)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes by msb first.
        let (ma, mb) = (self.msb().unwrap(), other.msb().unwrap());
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn floor_shift_matches_integer_division() {
        for m in -40i64..=40 {
            for s in 0..5u64 {
                let f = shr_floor(&BigInt::from(m), s);
                let c = shr_ceil(&BigInt::from(m), s);
                let den = 1i64 << s;
                assert_eq!(f, BigInt::from(m.div_euclid(den)));
                assert_eq!(c, BigInt::from(-((-m).div_euclid(den))));
            }
        }
    }

    #[test]
    fn rounding_is_directed() {
        let x = Dyadic::from_int(0b1011_0111);
        assert_eq!(x.round(4, Rounding::Floor), Dyadic::from_int(0b1011_0000));
        assert_eq!(x.round(4, Rounding::Ceil), Dyadic::from_int(0b1100_0000));
        let y = x.neg();
        assert_eq!(y.round(4, Rounding::Floor), Dyadic::from_int(-0b1100_0000));
        assert_eq!(y.round(4, Rounding::Ceil), Dyadic::from_int(-0b1011_0000));
    }

    #[test]
    fn division_brackets_quotient() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = one.div(&three, 40, Rounding::Floor);
        let hi = one.div(&three, 40, Rounding::Ceil);
        assert!(lo < hi);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.sub(&lo) <= Dyadic::pow2(-40));
    }

    #[test]
    fn ordering_and_arithmetic() {
        assert!(d(1.5) > d(1.25));
        assert!(d(-1.5) < d(-1.25));
        assert!(d(-0.5) < d(0.0));
        assert_eq!(d(1.5).add(&d(0.25)), d(1.75));
        assert_eq!(d(1.5).mul(&d(-0.5)), d(-0.75));
        assert_eq!(d(2.75).floor(), BigInt::from(2));
        assert_eq!(d(-2.75).floor(), BigInt::from(-3));
        assert_eq!(d(-2.75).ceil(), BigInt::from(-2));
    }

    #[test]
    fn decimal_round_trip() {
        for x in [0.0, 1.0, -3.125, 1e-5, 123456.0625, -0.0001220703125] {
            let v = d(x);
            let s = v.to_decimal_string();
            assert!(!s.contains('e'));
            assert_eq!(Dyadic::parse_decimal_exact(&s).unwrap(), v, "{s}");
        }
        assert_eq!(d(0.375).to_decimal_string(), "0.375");
        assert_eq!(d(-12.5).to_decimal_string(), "-12.5");
    }
}
