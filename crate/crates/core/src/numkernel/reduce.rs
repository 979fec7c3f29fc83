//! Argument reduction modulo a period known only as an enclosure.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::cert::CertReal;
use super::consts::Enclose;
use super::dyadic::Dyadic;
use super::policy::{PrecisionPolicy, PrecisionStatus, Refined};
use crate::error::{Error, Result};

/// Nearest multiple of the period and the remainder.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticePoint {
    pub m: BigInt,
    /// Enclosure of `x − m·α`.
    pub signed: CertReal,
    /// Enclosure of `|x − m·α|`.
    pub dist: CertReal,
}

/// Integers `k` with `|x/α − k| <= 1/2` for some point of the enclosures.
/// A single candidate means the nearest multiple is certified unique.
pub(crate) fn nearest_candidates(x: &CertReal, alpha: &CertReal) -> Result<(BigInt, BigInt)> {
    let q = x.div(alpha)?;
    let half = Dyadic::pow2(-1);
    // k is a minimizer for some point iff q ∈ [k − 1/2, k + 1/2].
    let k_min = q.lo().sub(&half).ceil();
    let k_max = q.hi().add(&half).floor();
    Ok((k_min, k_max))
}

/// Reduce `x` by the nearest multiple of `alpha`; `None` when the nearest
/// multiple is not unique at the given enclosures.
pub fn reduce_certified(x: &CertReal, alpha: &CertReal) -> Result<Option<LatticePoint>> {
    let (a, b) = nearest_candidates(x, alpha)?;
    if a != b {
        return Ok(None);
    }
    let signed = x.sub(&alpha.mul(&CertReal::from_int(a.clone(), alpha.precision_bits())));
    Ok(Some(LatticePoint {
        m: a,
        dist: signed.abs(),
        signed,
    }))
}

fn check_period(alpha: &CertReal) -> Result<()> {
    if alpha.contains_zero() {
        return Err(Error::Domain("period enclosure contains 0".into()));
    }
    if !alpha.is_positive() {
        return Err(Error::Domain("period must be positive".into()));
    }
    Ok(())
}

fn check_n(n: &BigInt) -> Result<u32> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("n must be >= 1, got {n}")));
    }
    Ok(n.bits() as u32)
}

/// True when the period enclosure failed to halve since the previous step, so
/// more working precision cannot help (a fixed-width source such as a
/// truncated continued fraction).
fn stalled(prev: &mut Option<Dyadic>, alpha: &CertReal) -> bool {
    let w = alpha.width();
    let stuck = prev.as_ref().is_some_and(|p| w.shl(1) >= *p);
    *prev = Some(w);
    stuck
}

/// `min_m |n − m·α|` with the minimizing `m` certified unique.
pub fn nearest_lattice_distance<A: Enclose + ?Sized>(
    n: &BigInt,
    alpha: &A,
    policy: &PrecisionPolicy,
) -> Result<Refined<LatticePoint>> {
    let nb = check_n(n)?;
    let mut best: Option<Refined<LatticePoint>> = None;
    let mut last_bits = policy.start_bits;
    let mut prev_width = None;
    for bits in policy.schedule() {
        last_bits = bits;
        let wb = bits + nb;
        let a = alpha.enclose(wb)?.with_precision(wb);
        check_period(&a)?;
        let stuck = stalled(&mut prev_width, &a);
        let x = CertReal::from_int(n.clone(), wb);
        if let Some(lp) = reduce_certified(&x, &a)? {
            let met = lp.dist.meets_rel_width(&policy.target_rel_width);
            let r = Refined {
                value: lp,
                bits,
                status: if met { PrecisionStatus::Met } else { PrecisionStatus::Exhausted },
            };
            if met {
                return Ok(r);
            }
            best = Some(r);
        }
        if stuck {
            break;
        }
    }
    best.ok_or_else(|| Error::PrecisionExhausted {
        bits: last_bits,
        what: format!("nearest multiple of {} to {n} is not unique", alpha.describe()),
    })
}

/// `|sin(n − m·α)|` for the nearest multiple `m`; this is `|sin n|` when `α`
/// encloses π. A live tie between two multiples is resolved by taking the hull.
pub fn sin_abs_enclosure<A: Enclose + ?Sized>(
    n: &BigInt,
    alpha: &A,
    policy: &PrecisionPolicy,
) -> Result<Refined<CertReal>> {
    let nb = check_n(n)?;
    let mut best = None;
    let mut prev_width = None;
    for bits in policy.schedule() {
        let wb = bits + nb;
        let a = alpha.enclose(wb)?.with_precision(wb);
        check_period(&a)?;
        let stuck = stalled(&mut prev_width, &a);
        let x = CertReal::from_int(n.clone(), wb);
        let (k_lo, k_hi) = nearest_candidates(&x, &a)?;
        let value = if &k_hi - &k_lo > BigInt::one() {
            CertReal::new(Dyadic::zero(), Dyadic::one(), wb)?
        } else {
            let mut acc: Option<CertReal> = None;
            let mut k = k_lo.clone();
            while k <= k_hi {
                let r = x.sub(&a.mul(&CertReal::from_int(k.clone(), wb)));
                let s = r.sin().abs();
                acc = Some(match acc {
                    Some(h) => h.hull(&s),
                    None => s,
                });
                k += 1u32;
            }
            acc.expect("at least one candidate")
        };
        let value = value.with_precision(bits.max(value.precision_bits()));
        let met = value.meets_rel_width(&policy.target_rel_width);
        let r = Refined {
            value,
            bits,
            status: if met { PrecisionStatus::Met } else { PrecisionStatus::Exhausted },
        };
        if met {
            return Ok(r);
        }
        best = Some(r);
        if stuck {
            break;
        }
    }
    Ok(best.expect("schedule is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::consts::RealConst;
    use crate::rational::rat;

    fn close(x: &CertReal, v: f64, rel: f64) -> bool {
        (x.to_f64() - v).abs() <= rel * v.abs()
    }

    #[test]
    fn lattice_distance_examples() {
        let p = PrecisionPolicy::default();
        let r = nearest_lattice_distance(&BigInt::from(1), &RealConst::Sqrt(2), &p).unwrap();
        assert_eq!(r.value.m, BigInt::from(1));
        assert!(close(&r.value.dist, std::f64::consts::SQRT_2 - 1.0, 1e-15));
        assert!(r.is_met());
        let r = nearest_lattice_distance(&BigInt::from(355), &RealConst::Pi, &p).unwrap();
        assert_eq!(r.value.m, BigInt::from(113));
        assert!(close(&r.value.dist, 3.0144353364053721e-5, 1e-12));
    }

    #[test]
    fn tie_is_reported_not_guessed() {
        let four = RealConst::Rational(rat(4, 1));
        let p = PrecisionPolicy::new(64, 256, rat(1, 1 << 20)).unwrap();
        let e = nearest_lattice_distance(&BigInt::from(2), &four, &p).unwrap_err();
        assert!(matches!(e, Error::PrecisionExhausted { .. }));
        let s = sin_abs_enclosure(&BigInt::from(2), &four, &p).unwrap();
        // Both multiples give the same |sin|, so the hull is still tight.
        assert!(close(&s.value, 2f64.sin(), 1e-12));
    }

    #[test]
    fn sin_abs_examples() {
        let p = PrecisionPolicy::default();
        for (n, v) in [(1, 0.8414709848078965), (3, 0.1411200080598672), (355, 3.0144353359488449e-5)] {
            let s = sin_abs_enclosure(&BigInt::from(n), &RealConst::Pi, &p).unwrap();
            assert!(s.is_met(), "{n}");
            assert!(close(&s.value, v, 1e-12), "{n}: {}", s.value);
        }
        let zero = RealConst::Rational(rat(0, 1));
        assert!(matches!(
            sin_abs_enclosure(&BigInt::from(1), &zero, &p),
            Err(Error::Domain(_))
        ));
        assert!(sin_abs_enclosure(&BigInt::from(0), &RealConst::Pi, &p).is_err());
    }

    #[test]
    fn fixed_width_period_stops_early() {
        let cf = crate::contfrac::CFExpansion::from_terms([3u32, 7, 15]).unwrap();
        let alpha = RealConst::ContinuedFraction(cf);
        let p = PrecisionPolicy::default();
        let r = nearest_lattice_distance(&BigInt::from(22), &alpha, &p).unwrap();
        assert!(r.bits <= 2 * p.start_bits, "escalated to {}", r.bits);
        let s = sin_abs_enclosure(&BigInt::from(22), &alpha, &p).unwrap();
        assert!(s.bits <= 2 * p.start_bits, "escalated to {}", s.bits);
    }
}
