//! Adaptive precision schedule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::consts::HARD_MAX_BITS;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
    /// Target `width / mig` for adaptive results.
    #[serde(with = "crate::serde_util::rational_str")]
    pub target_rel_width: BigRational,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 128,
            max_bits: 4096,
            target_rel_width: BigRational::new(BigInt::one(), BigInt::one() << 50u32),
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32, target_rel_width: BigRational) -> Result<Self> {
        let p = PrecisionPolicy {
            start_bits,
            max_bits,
            target_rel_width,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start_bits < 8 {
            return Err(Error::Invalid(format!("start_bits must be >= 8, got {}", self.start_bits)));
        }
        if self.start_bits > self.max_bits {
            return Err(Error::Invalid(format!(
                "start_bits {} exceeds max_bits {}",
                self.start_bits, self.max_bits
            )));
        }
        if self.max_bits > HARD_MAX_BITS {
            return Err(Error::ResourceLimit {
                requested: self.max_bits,
                ceiling: HARD_MAX_BITS,
            });
        }
        if !self.target_rel_width.is_positive() {
            return Err(Error::Invalid("target_rel_width must be positive".into()));
        }
        Ok(())
    }

    /// Fixed precision: a single attempt at `bits`.
    pub fn fixed(bits: u32) -> Self {
        PrecisionPolicy {
            start_bits: bits,
            max_bits: bits,
            ..Self::default()
        }
    }

    /// Same policy with every precision doubled.
    pub fn doubled(&self) -> Self {
        PrecisionPolicy {
            start_bits: self.start_bits.saturating_mul(2).min(HARD_MAX_BITS),
            max_bits: self.max_bits.saturating_mul(2).min(HARD_MAX_BITS),
            target_rel_width: self.target_rel_width.clone(),
        }
    }

    /// `start, 2·start, …`, capped so the last entry is `max_bits`.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![];
        let mut b = self.start_bits.max(8);
        loop {
            let b_cap = b.min(self.max_bits.max(self.start_bits));
            out.push(b_cap);
            if b_cap >= self.max_bits {
                break;
            }
            b = b.saturating_mul(2);
        }
        out
    }
}

/// Whether an adaptive result met its width target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrecisionStatus {
    Met,
    /// `max_bits` reached; the enclosure is valid but wider than requested.
    Exhausted,
}

/// A value together with the precision it was computed at.
#[derive(Clone, Debug, PartialEq)]
pub struct Refined<T> {
    pub value: T,
    pub bits: u32,
    pub status: PrecisionStatus,
}

impl<T> Refined<T> {
    pub fn is_met(&self) -> bool {
        self.status == PrecisionStatus::Met
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Refined<U> {
        Refined {
            value: f(self.value),
            bits: self.bits,
            status: self.status,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_doubles_then_caps() {
        let p = PrecisionPolicy::new(128, 1000, BigRational::one()).unwrap();
        assert_eq!(p.schedule(), vec![128, 256, 512, 1000]);
        assert_eq!(PrecisionPolicy::fixed(256).schedule(), vec![256]);
        assert_eq!(PrecisionPolicy::default().schedule().last(), Some(&4096));
    }

    #[test]
    fn validation() {
        assert!(PrecisionPolicy::new(256, 128, BigRational::one()).is_err());
        assert!(PrecisionPolicy::new(128, 256, BigRational::from_integer(0.into())).is_err());
        assert!(PrecisionPolicy::new(128, HARD_MAX_BITS + 1, BigRational::one()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = PrecisionPolicy::default();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"1/1125899906842624\""));
        let back: PrecisionPolicy = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
