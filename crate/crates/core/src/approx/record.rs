//! Approximation exponents of single denominators and of combined pairs.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::contfrac::MuSpec;
use crate::error::{Error, Result};
use crate::numkernel::{nearest_lattice_distance, CertReal, Enclose, PrecisionPolicy, PrecisionStatus};
use crate::rational::{cmp_int_pow, int};
use crate::serde_util::bigint_str;

/// How well `p/q` approximates `1/α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRecord {
    #[serde(with = "bigint_str")]
    pub q: BigInt,
    #[serde(with = "bigint_str")]
    pub p: BigInt,
    /// `p/q − 1/α`.
    pub signed_error: CertReal,
    /// `|1/α − p/q|`.
    pub error: CertReal,
    /// `−log_q(error)`.
    pub exponent: CertReal,
    pub status: PrecisionStatus,
}

/// Position of an enclosure relative to a rational threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    /// Entirely `>= t`.
    AtOrAbove,
    /// Entirely `< t`.
    Below,
    Straddle,
}

pub(crate) fn side(x: &CertReal, t: &BigRational) -> Side {
    if &x.lo().to_rational() >= t {
        Side::AtOrAbove
    } else if &x.hi().to_rational() < t {
        Side::Below
    } else {
        Side::Straddle
    }
}

fn check_q(q: &BigInt) -> Result<u32> {
    if q < &BigInt::from(2) {
        return Err(Error::Domain(format!("exponent needs q >= 2, got {q}")));
    }
    Ok(q.bits() as u32)
}

fn neg_log_base(err: &CertReal, q: &BigInt, bits: u32) -> Result<CertReal> {
    if err.contains_zero() {
        return Err(Error::PrecisionExhausted {
            bits,
            what: format!("error enclosure at q={q} contains 0"),
        });
    }
    let lnq = CertReal::from_int(q.clone(), bits).ln()?;
    err.ln()?.neg().div(&lnq)
}

/// Record for denominator `q`: the best numerator, error and exponent.
pub fn exponent<A: Enclose + ?Sized>(q: &BigInt, alpha: &A, policy: &PrecisionPolicy) -> Result<ApproxRecord> {
    let qb = check_q(q)?;
    // |q − αp| is minimized by the same p as |1/α − p/q|.
    let lp = nearest_lattice_distance(q, alpha, policy)?;
    let wb = lp.bits + qb;
    let a = alpha.enclose(wb)?.with_precision(wb);
    let qa = a.mul(&CertReal::from_int(q.clone(), wb));
    let signed_error = lp.value.signed.neg().div(&qa)?;
    let error = signed_error.abs();
    let exponent = neg_log_base(&error, q, wb)?;
    Ok(ApproxRecord {
        q: q.clone(),
        p: lp.value.m,
        signed_error,
        error,
        exponent,
        status: lp.status,
    })
}

/// Both forms of the exponent: `−log_q(min_p |1/α − p/q|)` and
/// `1 − log_q((1/α)·min_p |q − αp|)`.
pub fn exponent_forms<A: Enclose + ?Sized>(
    q: &BigInt,
    alpha: &A,
    policy: &PrecisionPolicy,
) -> Result<(CertReal, CertReal)> {
    let qb = check_q(q)?;
    let rec = exponent(q, alpha, policy)?;
    let lp = nearest_lattice_distance(q, alpha, policy)?;
    let wb = lp.bits + qb;
    let a = alpha.enclose(wb)?.with_precision(wb);
    let scaled = lp.value.dist.div(&a)?;
    let lnq = CertReal::from_int(q.clone(), wb).ln()?;
    let second = CertReal::from_int(1, wb).sub(&scaled.ln()?.div(&lnq)?);
    Ok((rec.exponent, second))
}

/// Trivalent goodness test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goodness {
    Good,
    NotGood,
    Unknown,
}

/// Good when the whole exponent interval is at or above `μ − ε₁`.
pub fn is_good(record: &ApproxRecord, mu: &MuSpec, epsilon1: &BigRational) -> Goodness {
    match side(&record.exponent, &(&mu.mu - epsilon1)) {
        Side::AtOrAbove => Goodness::Good,
        Side::Below => Goodness::NotGood,
        Side::Straddle => Goodness::Unknown,
    }
}

/// `q2 − q1 < q1^δ`, decided exactly.
pub fn are_close(q1: &BigInt, q2: &BigInt, delta: &BigRational) -> Result<bool> {
    if q1 >= q2 {
        return Err(Error::ArgumentOrder(format!("need q1 < q2, got {q1} and {q2}")));
    }
    if !q1.is_positive() || !delta.is_positive() {
        return Err(Error::Domain("q1 and delta must be positive".into()));
    }
    let gap = (q2 - q1).magnitude().clone();
    Ok(cmp_int_pow(q1.magnitude(), delta, &gap) == std::cmp::Ordering::Greater)
}

/// Signed error of `(p2 − p1)/(q2 − q1)`: `(q2·B − q1·A)/(q2 − q1)`.
pub fn combined_error(r1: &ApproxRecord, r2: &ApproxRecord) -> Result<CertReal> {
    if r1.q >= r2.q {
        return Err(Error::ArgumentOrder(format!("need q1 < q2, got {} and {}", r1.q, r2.q)));
    }
    let bits = r1.error.precision_bits().max(r2.error.precision_bits());
    let q = &r2.q - &r1.q;
    let num = r2
        .signed_error
        .mul(&CertReal::from_int(r2.q.clone(), bits))
        .sub(&r1.signed_error.mul(&CertReal::from_int(r1.q.clone(), bits)));
    num.div(&CertReal::from_int(q, bits))
}

/// Record for the combined approximation `(p2 − p1)/(q2 − q1)`. Its numerator
/// need not be the best one for `q2 − q1`.
pub fn combine(r1: &ApproxRecord, r2: &ApproxRecord) -> Result<ApproxRecord> {
    let signed_error = combined_error(r1, r2)?;
    let q = &r2.q - &r1.q;
    if q.is_one() {
        return Err(Error::DegenerateDenominator(format!(
            "q2 − q1 = 1 leaves the exponent undefined; combined error {}",
            signed_error.abs()
        )));
    }
    let bits = signed_error.precision_bits();
    let error = signed_error.abs();
    let exponent = neg_log_base(&error, &q, bits)?;
    let status = if r1.status == PrecisionStatus::Met && r2.status == PrecisionStatus::Met {
        PrecisionStatus::Met
    } else {
        PrecisionStatus::Exhausted
    };
    Ok(ApproxRecord {
        q,
        p: &r2.p - &r1.p,
        signed_error,
        error,
        exponent,
        status,
    })
}

fn check_eps2(epsilon2: &BigRational) -> Result<()> {
    if !epsilon2.is_positive() || epsilon2 >= &int(1) {
        return Err(Error::Domain("epsilon2 must lie in (0, 1)".into()));
    }
    Ok(())
}

/// `1 + (μ − 1 − ε₁)/ε₂ − 1/(ε₂·log₂ q1)`, exact when `q1` is a power of two.
pub fn combined_exponent_bound(
    mu: &MuSpec,
    epsilon1: &BigRational,
    epsilon2: &BigRational,
    q1: &BigInt,
    bits: u32,
) -> Result<CertReal> {
    check_eps2(epsilon2)?;
    if q1 < &BigInt::from(2) {
        return Err(Error::Domain("q1 must be >= 2".into()));
    }
    let head = int(1) + (&mu.mu - int(1) - epsilon1) / epsilon2;
    let tz = q1.trailing_zeros().unwrap_or(0);
    if q1 == &(BigInt::one() << tz) {
        let v = head - (epsilon2 * int(tz as i64)).recip();
        return Ok(CertReal::from_rational(&v, bits));
    }
    let log2q = CertReal::from_int(q1.clone(), bits)
        .ln()?
        .div(&crate::numkernel::ln2_enclosure(bits))?;
    let tail = CertReal::from_rational(epsilon2, bits).mul(&log2q).recip()?;
    Ok(CertReal::from_rational(&head, bits).sub(&tail))
}

/// Smallest `q0` with `μ > 1 + ε₁/(1−ε₂) + 1/((1−ε₂)·log₂ q0)`, i.e.
/// `log₂ q0 > 1/((1−ε₂)(μ−1) − ε₁)`.
pub fn slack_threshold(mu: &MuSpec, epsilon1: &BigRational, epsilon2: &BigRational) -> Result<BigInt> {
    check_eps2(epsilon2)?;
    let d = (int(1) - epsilon2) * (&mu.mu - int(1)) - epsilon1;
    if !d.is_positive() {
        return Err(Error::HypothesisViolation(format!(
            "μ = {} does not exceed 1 + ε₁/(1 − ε₂)",
            crate::rational::format_rational(&mu.mu)
        )));
    }
    let l = d.recip();
    if l > int(1 << 20) {
        return Err(Error::Domain("slack threshold is astronomically large".into()));
    }
    // q0^b > 2^a with l = a/b.
    let a = l.numer().to_usize().expect("bounded above");
    let b = l.denom().to_u32().ok_or_else(|| Error::Domain("threshold denominator too large".into()))?;
    let two_a = BigUint::one() << a;
    let r = two_a.nth_root(b);
    let q0 = BigInt::from(r + 1u32);
    Ok(q0.max(BigInt::from(2)))
}

/// Smallest `q` with `q^(μ − ε₁ − 2) > 2`, above which a good denominator must
/// be a multiple of a convergent denominator; `None` when `μ − ε₁ <= 2`.
pub fn legendre_threshold(mu: &MuSpec, epsilon1: &BigRational) -> Option<BigInt> {
    let t = &mu.mu - epsilon1 - int(2);
    if !t.is_positive() {
        return None;
    }
    // q^(a/b) > 2  ⇔  q^a > 2^b.
    let a = t.numer().to_u32()?;
    let b = t.denom().to_usize()?;
    if b > 1 << 20 {
        return None;
    }
    let r = (BigUint::one() << b).nth_root(a);
    Some(BigInt::from(r + 1u32))
}

impl ApproxRecord {
    pub fn goodness(&self, mu: &MuSpec, epsilon1: &BigRational) -> Goodness {
        is_good(self, mu, epsilon1)
    }

    /// `true` when the error is certified nonzero (always expected for irrational `α`).
    pub fn error_is_positive(&self) -> bool {
        self.error.is_positive()
    }
}
