//! Constants with explicit remainder bounds, cached behind read-mostly locks,
//! and the [`Enclose`] trait for reals that can be enclosed at any precision.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::cert::CertReal;
use super::dyadic::Dyadic;
use super::fixed::{self, Fixed};
use crate::contfrac::CFExpansion;
use crate::error::{Error, Result};

/// Absolute ceiling on any requested precision.
pub const HARD_MAX_BITS: u32 = 1 << 22;

/// Fixed-point bounds `[lo, hi]·2^-w` of a constant; refinements are intersected
/// with what is already cached, so successive enclosures only shrink.
struct ConstCache {
    slot: RwLock<Option<(u64, BigInt, BigInt)>>,
    compute: fn(u64) -> Fixed,
}

impl ConstCache {
    const fn new(compute: fn(u64) -> Fixed) -> Self {
        ConstCache {
            slot: RwLock::new(None),
            compute,
        }
    }

    fn bounds(&self, w: u64) -> (Dyadic, Dyadic) {
        {
            let guard = self.slot.read().expect("constant cache poisoned");
            if let Some((cw, lo, hi)) = guard.as_ref() {
                if *cw >= w {
                    return (Dyadic::from_fixed(lo.clone(), *cw), Dyadic::from_fixed(hi.clone(), *cw));
                }
            }
        }
        let mut guard = self.slot.write().expect("constant cache poisoned");
        let target = match guard.as_ref() {
            Some((cw, _, _)) if *cw >= w => *cw,
            Some((cw, _, _)) => w.max(2 * cw),
            None => w.max(256),
        };
        if guard.as_ref().map_or(true, |(cw, _, _)| *cw < target) {
            let (v, e) = (self.compute)(target);
            let mut lo = &v - BigInt::from(e);
            let mut hi = v + BigInt::from(e);
            if let Some((cw, olo, ohi)) = guard.as_ref() {
                let s = target - cw;
                lo = lo.max(olo << s);
                hi = hi.min(ohi << s);
            }
            *guard = Some((target, lo, hi));
        }
        let (cw, lo, hi) = guard.as_ref().unwrap();
        (Dyadic::from_fixed(lo.clone(), *cw), Dyadic::from_fixed(hi.clone(), *cw))
    }
}

static PI_CACHE: ConstCache = ConstCache::new(fixed::pi);
static LN2_CACHE: ConstCache = ConstCache::new(fixed::ln2);

/// Exact dyadic bounds on π with absolute accuracy at least `2^-w`.
pub(crate) fn pi_bounds(w: u64) -> (Dyadic, Dyadic) {
    PI_CACHE.bounds(w + 8)
}

pub(crate) fn ln2_bounds(w: u64) -> (Dyadic, Dyadic) {
    LN2_CACHE.bounds(w + 8)
}

/// Certified enclosure of π with width at most `2^(2 - bits)`.
pub fn pi_enclosure(bits: u32) -> Result<CertReal> {
    if bits < 8 {
        return Err(Error::Domain(format!("pi_enclosure needs bits >= 8, got {bits}")));
    }
    if bits > HARD_MAX_BITS {
        return Err(Error::ResourceLimit {
            requested: bits,
            ceiling: HARD_MAX_BITS,
        });
    }
    let (lo, hi) = pi_bounds(bits as u64 + 8);
    // Round on a grid one bit finer than `bits` so two-ulp widening stays within 2^(2-bits).
    let r = CertReal::new(lo, hi, bits + 1)?;
    CertReal::exact_bounds(r.lo().clone(), r.hi().clone(), bits)
}

/// Enclosure of `ln 2`.
pub fn ln2_enclosure(bits: u32) -> CertReal {
    let (lo, hi) = ln2_bounds(bits as u64 + 8);
    CertReal::new(lo, hi, bits).expect("ordered bounds")
}

/// A real number that can be enclosed at any requested precision.
pub trait Enclose: Send + Sync {
    fn enclose(&self, bits: u32) -> Result<CertReal>;

    /// Short human-readable identifier.
    fn describe(&self) -> String;
}

/// A fixed enclosure ignores the requested precision.
impl Enclose for CertReal {
    fn enclose(&self, _bits: u32) -> Result<CertReal> {
        Ok(self.clone())
    }

    fn describe(&self) -> String {
        format!("enclosure {self}")
    }
}

/// `1/x` for a borrowed refinable `x`.
pub struct RecipOf<'a, A: ?Sized>(pub &'a A);

impl<A: Enclose + ?Sized> Enclose for RecipOf<'_, A> {
    fn enclose(&self, bits: u32) -> Result<CertReal> {
        self.0.enclose(bits)?.recip()
    }

    fn describe(&self) -> String {
        format!("1/({})", self.0.describe())
    }
}

/// Reals the toolkit knows how to refine.
#[derive(Clone, Debug, PartialEq)]
pub enum RealConst {
    Pi,
    /// `√n` for a positive integer `n`.
    Sqrt(u64),
    /// `(1 + √5)/2`.
    Golden,
    Rational(BigRational),
    /// Any continuation of the given continued fraction (the interval between
    /// the last convergent and its mediant with the previous one).
    ContinuedFraction(CFExpansion),
    /// `center ± radius`, for externally supplied digits.
    Decimal {
        center: BigRational,
        radius: BigRational,
    },
    Reciprocal(Box<RealConst>),
    Fixed(CertReal),
}

impl RealConst {
    pub fn reciprocal(self) -> Self {
        match self {
            RealConst::Reciprocal(inner) => *inner,
            other => RealConst::Reciprocal(Box::new(other)),
        }
    }
}

fn sqrt_bounds(n: &BigInt, bits: u32) -> (Dyadic, Dyadic) {
    let w = bits as u64 + 8;
    let s = (n << (2 * w)).sqrt();
    let exact = &s * &s == (n << (2 * w));
    let hi = if exact { s.clone() } else { &s + 1u32 };
    (Dyadic::from_fixed(s, w), Dyadic::from_fixed(hi, w))
}

impl Enclose for RealConst {
    fn enclose(&self, bits: u32) -> Result<CertReal> {
        if bits > HARD_MAX_BITS {
            return Err(Error::ResourceLimit {
                requested: bits,
                ceiling: HARD_MAX_BITS,
            });
        }
        match self {
            RealConst::Pi => pi_enclosure(bits.max(8)),
            RealConst::Sqrt(n) => {
                if *n == 0 {
                    return Ok(CertReal::from_int(0, bits));
                }
                let (lo, hi) = sqrt_bounds(&BigInt::from(*n), bits);
                CertReal::new(lo, hi, bits)
            }
            RealConst::Golden => {
                let (lo, hi) = sqrt_bounds(&BigInt::from(5u32), bits + 2);
                let one = Dyadic::one();
                CertReal::new(lo.add(&one).shl(-1), hi.add(&one).shl(-1), bits)
            }
            RealConst::Rational(r) => Ok(CertReal::from_rational(r, bits)),
            RealConst::ContinuedFraction(cf) => {
                let (a, b) = cf.tail_bounds();
                Ok(CertReal::from_rational_bounds(&a, &b, bits))
            }
            RealConst::Decimal { center, radius } => Ok(CertReal::from_rational_bounds(
                &(center - radius),
                &(center + radius),
                bits,
            )),
            RealConst::Reciprocal(inner) => inner.enclose(bits)?.recip(),
            RealConst::Fixed(c) => Ok(c.clone()),
        }
    }

    fn describe(&self) -> String {
        match self {
            RealConst::Pi => "pi".into(),
            RealConst::Sqrt(n) => format!("sqrt{n}"),
            RealConst::Golden => "golden".into(),
            RealConst::Rational(r) => crate::rational::format_rational(r),
            RealConst::ContinuedFraction(cf) => format!("cf[{} terms]", cf.len()),
            RealConst::Decimal { center, radius } => format!(
                "decimal {} ± {}",
                crate::rational::format_rational(center),
                crate::rational::format_rational(radius)
            ),
            RealConst::Reciprocal(inner) => format!("1/({})", inner.describe()),
            RealConst::Fixed(c) => format!("enclosure {c}"),
        }
    }
}
