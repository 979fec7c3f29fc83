//! The weak convergence threshold and its three-set witness.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::contfrac::MuSpec;
use crate::error::{Error, Result};
use crate::numkernel::CertReal;
use crate::rational::{format_rational, int};
use crate::series::SeriesParams;
use crate::serde_util::rational_str;

const TRIAL_LIMIT: u64 = 1_000_000;

/// `a + b·√r` with `r` a nonnegative integer free of small square factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "rational_str")]
    pub a: BigRational,
    #[serde(with = "rational_str")]
    pub b: BigRational,
    #[serde(with = "crate::serde_util::bigint_str")]
    pub r: BigInt,
}

/// `m = s²·t`, pulling out square factors of primes up to the trial limit.
fn split_square(m: &BigUint) -> (BigUint, BigUint) {
    let mut t = m.clone();
    let mut s = BigUint::one();
    let s_full = t.sqrt();
    if &s_full * &s_full == t {
        return (s_full, BigUint::one());
    }
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && BigUint::from(p * p) <= t {
        let pp = BigUint::from(p * p);
        while (&t % &pp).is_zero() {
            t /= &pp;
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (s, t)
}

impl Surd {
    /// `a + b·√radicand`, normalized so that the root is of a small-square-free integer.
    pub fn new(a: BigRational, b: BigRational, radicand: &BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Domain("negative radicand".into()));
        }
        if radicand.is_zero() || b.is_zero() {
            return Ok(Surd {
                a,
                b: BigRational::zero(),
                r: BigInt::zero(),
            });
        }
        // √(n/d) = √(n·d)/d.
        let d = radicand.denom().clone();
        let nd = (radicand.numer() * &d).to_biguint().expect("positive");
        let (s, t) = split_square(&nd);
        let b = b * BigRational::new(BigInt::from(s), d);
        if t.is_one() {
            return Ok(Surd {
                a: a + b,
                b: BigRational::zero(),
                r: BigInt::zero(),
            });
        }
        Ok(Surd { a, b, r: BigInt::from(t) })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn enclosure(&self, bits: u32) -> Result<CertReal> {
        let a = CertReal::from_rational(&self.a, bits);
        if self.is_rational() {
            return Ok(a);
        }
        let root = CertReal::from_int(self.r.clone(), bits).sqrt()?;
        Ok(a.add(&root.mul_rational(&self.b)))
    }

    /// Exact sign of `self − q`.
    pub fn cmp_rational(&self, q: &BigRational) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let d = q - &self.a;
        if self.is_rational() {
            return BigRational::zero().cmp(&d);
        }
        // Compare b√r with d: signs first, then squares.
        let lhs_sign = if self.b.is_positive() { Greater } else { Less };
        let rhs_sign = d.cmp(&BigRational::zero());
        if lhs_sign != rhs_sign {
            return lhs_sign.cmp(&rhs_sign);
        }
        let l2 = &self.b * &self.b * BigRational::from_integer(self.r.clone());
        let r2 = &d * &d;
        if lhs_sign == Greater {
            l2.cmp(&r2)
        } else {
            r2.cmp(&l2)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", format_rational(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", format_rational(&self.a), format_rational(&self.b), self.r)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakThreshold {
    pub exact: Surd,
    pub enclosure: CertReal,
    /// Set when `u = 1` and the radicand vanishes.
    pub warning: Option<String>,
}

/// `(√((u+3)(u−1)) + u − 1)/(2v) + 1`.
pub fn weak_threshold(params: &SeriesParams, bits: u32) -> Result<WeakThreshold> {
    let (u, v) = (&params.u, &params.v);
    if u < &int(1) {
        return Err(Error::Domain(format!("weak threshold needs u >= 1, got {}", format_rational(u))));
    }
    let two_v = int(2) * v;
    let a = (u - int(1)) / &two_v + int(1);
    let b = int(1) / &two_v;
    let radicand = (u + int(3)) * (u - int(1));
    let warning = radicand
        .is_zero()
        .then(|| "u = 1 makes the radicand zero; the threshold degenerates to 1".to_string());
    let exact = Surd::new(a, b, &radicand)?;
    let enclosure = exact.enclosure(bits)?;
    Ok(WeakThreshold {
        exact,
        enclosure,
        warning,
    })
}

/// Exact test of `μ < threshold`, via `v²m² + v(1−u)m + (1−u) < 0` with `m = μ − 1`.
pub fn below_weak_threshold(mu: &BigRational, params: &SeriesParams) -> bool {
    let (u, v) = (&params.u, &params.v);
    let m = mu - int(1);
    if !m.is_positive() {
        return true;
    }
    let one_u = int(1) - u;
    (v * v * &m * &m + v * &one_u * &m + one_u).is_negative()
}

/// A single-cell witness: `S₁ = {r >= μ+y}`, `S₂ = {μ−x <= r < μ+y}`, `S₃ = {r < μ−x}`,
/// with density budget `b` for `S₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactWitness {
    #[serde(with = "rational_str")]
    pub x: BigRational,
    #[serde(with = "rational_str")]
    pub y: BigRational,
    #[serde(with = "rational_str")]
    pub b: BigRational,
}

/// Build a witness for `2 <= μ < threshold`; `safety` in `(0, 1)` scales `y`
/// inside its feasible range.
pub fn fact_witness(mu: &MuSpec, params: &SeriesParams, safety: &BigRational) -> Result<FactWitness> {
    super::plan::check_safety(safety)?;
    let (u, v) = (&params.u, &params.v);
    if !below_weak_threshold(&mu.mu, params) {
        return Err(Error::Infeasible(format!(
            "μ = {} is not below the weak threshold",
            format_rational(&mu.mu)
        )));
    }
    let m = &mu.mu - int(1);
    let floor = (&m + (int(1) - u) / v).max(BigRational::zero());
    // Upper end for x is (u + v(1 − μ − y))·m; y* makes it meet the floor.
    let y_star = (u + v * (int(1) - &mu.mu) - &floor / &m) / v;
    if !y_star.is_positive() {
        return Err(Error::Infeasible("no room for y > 0".into()));
    }
    let y = safety * &y_star;
    let x_hi = ((u + v * (int(1) - &mu.mu - &y)) * &m).min(m.clone());
    let x = (&floor + &x_hi) / int(2);
    let a1 = &mu.mu + &y;
    let b_lo = (int(1) - (u + v - v * &a1)).max(BigRational::zero());
    let b_hi = (int(1) - &x / &m).min(int(1));
    if b_lo >= b_hi {
        return Err(Error::Infeasible("empty density budget".into()));
    }
    Ok(FactWitness {
        x,
        y,
        b: (b_lo + b_hi) / int(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn params(u: i64, v: i64) -> SeriesParams {
        SeriesParams::new(int(u), int(v)).unwrap()
    }

    #[test]
    fn flint_hills_threshold() {
        let w = weak_threshold(&params(3, 2), 128).unwrap();
        assert_eq!(w.exact.a, rat(3, 2));
        assert_eq!(w.exact.b, rat(1, 2));
        assert_eq!(w.exact.r, BigInt::from(3));
        assert!(w.warning.is_none());
        assert!((w.enclosure.to_f64() - 2.36602540378443864676).abs() < 1e-15);
    }

    #[test]
    fn u5_v2_is_two_plus_root_two() {
        let w = weak_threshold(&params(5, 2), 128).unwrap();
        assert_eq!((w.exact.a.clone(), w.exact.b.clone(), w.exact.r.clone()), (int(2), int(1), BigInt::from(2)));
        assert!((w.enclosure.to_f64() - 3.41421356237309504880).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_domain() {
        let w = weak_threshold(&params(1, 3), 64).unwrap();
        assert_eq!(w.exact.a, int(1));
        assert!(w.exact.is_rational());
        assert!(w.warning.is_some());
        let p = SeriesParams::new(rat(1, 2), int(1)).unwrap();
        assert!(matches!(weak_threshold(&p, 64), Err(Error::Domain(_))));
    }

    #[test]
    fn perfect_square_radicand_collapses() {
        let s = Surd::new(int(0), int(1), &rat(9, 4)).unwrap();
        assert!(s.is_rational());
        assert_eq!(s.a, rat(3, 2));
        let s = Surd::new(int(0), int(1), &rat(8, 9)).unwrap();
        assert_eq!((s.b, s.r), (rat(2, 3), BigInt::from(2)));
    }

    #[test]
    fn exact_threshold_comparison() {
        let p = params(3, 2);
        let w = weak_threshold(&p, 64).unwrap().exact;
        assert!(below_weak_threshold(&rat(2366, 1000), &p));
        assert!(!below_weak_threshold(&rat(2367, 1000), &p));
        assert_eq!(w.cmp_rational(&rat(2366, 1000)), std::cmp::Ordering::Greater);
        assert_eq!(w.cmp_rational(&rat(2367, 1000)), std::cmp::Ordering::Less);
    }

    #[test]
    fn witness_exists_below_threshold_only() {
        let p = params(3, 2);
        let half = rat(1, 2);
        let w = fact_witness(&MuSpec::assumed(rat(23, 10)).unwrap(), &p, &half).unwrap();
        assert!(w.x.is_positive() && w.y.is_positive());
        assert!(fact_witness(&MuSpec::assumed(rat(24, 10)).unwrap(), &p, &half).is_err());
    }
}
