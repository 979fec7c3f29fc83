//! Periodic profiles `P` with `B₁·|x| <= P(x) <= B₂·|x|` on `|x| <= α/2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::term::SeriesParams;
use crate::error::{Error, Result};
use crate::numkernel::{
    nearest_lattice_distance, pi_enclosure, sin_abs_enclosure, CertReal, Dyadic, Enclose, PrecisionPolicy,
    PrecisionStatus, RealConst, Refined,
};
use crate::rational::{format_rational, parse_rational, rat};

const CHECK_BITS: u32 = 192;

/// Piecewise-linear profile over half a period.
///
/// Points are `(t, g)` with `t` the fraction of the period; `P(x) = g(|x|/α)`
/// after reducing `x` to `|x| <= α/2`. Even symmetry is built in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    #[serde(with = "crate::serde_util::rational_pairs")]
    points: Vec<(BigRational, BigRational)>,
}

impl Profile {
    pub fn new(points: Vec<(BigRational, BigRational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("profile needs at least two points".into()));
        }
        if !points[0].0.is_zero() || !points[0].1.is_zero() {
            return Err(Error::Invalid("profile must start at (0, 0)".into()));
        }
        if points.last().unwrap().0 != rat(1, 2) {
            return Err(Error::Invalid("profile must end at t = 1/2".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Invalid("profile abscissae must increase strictly".into()));
            }
        }
        if points[1..].iter().any(|(_, g)| !g.is_positive()) {
            return Err(Error::Invalid("profile must be positive away from t = 0".into()));
        }
        Ok(Profile { points })
    }

    /// One `t,g` pair per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pts = vec![];
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (t, g) = line
                .split_once(',')
                .ok_or_else(|| Error::Invalid(format!("profile line {}: expected `t,g`", i + 1)))?;
            pts.push((parse_rational(t)?, parse_rational(g)?));
        }
        Self::new(pts)
    }

    pub fn points(&self) -> &[(BigRational, BigRational)] {
        &self.points
    }

    fn at(&self, t: &BigRational) -> BigRational {
        let i = self.points.partition_point(|(x, _)| x <= t).clamp(1, self.points.len() - 1);
        let ((t0, g0), (t1, g1)) = (&self.points[i - 1], &self.points[i]);
        g0 + (g1 - g0) * (t - t0) / (t1 - t0)
    }

    /// Enclosure of `g` over `t ∩ [0, 1/2]`.
    fn eval(&self, t: &CertReal, bits: u32) -> CertReal {
        let zero = BigRational::zero();
        let half = rat(1, 2);
        let lo = t.lo().to_rational().max(zero).min(half.clone());
        let hi = t.hi().to_rational().min(half).max(lo.clone());
        let mut vals = vec![self.at(&lo), self.at(&hi)];
        vals.extend(self.points.iter().filter(|(x, _)| x > &lo && x < &hi).map(|(_, g)| g.clone()));
        let min = vals.iter().min().unwrap();
        let max = vals.iter().max().unwrap();
        CertReal::from_rational_bounds(min, max, bits)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SineKind {
    /// `|sin(π·x/α)|`, which is `|sin x|` for `α = π`.
    AbsSin,
    /// `B₂ · dist(x, αℤ)`.
    LatticeDistance,
    CustomTable(Profile),
}

impl SineKind {
    pub fn name(&self) -> &'static str {
        match self {
            SineKind::AbsSin => "abs-sin",
            SineKind::LatticeDistance => "lattice-distance",
            SineKind::CustomTable(_) => "custom-table",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SineLikeSpec {
    pub alpha: RealConst,
    pub b1: BigRational,
    pub b2: BigRational,
    pub kind: SineKind,
}

impl SineLikeSpec {
    /// Checks `0 < B₁ <= B₂` and the sandwich constants of the chosen kind.
    pub fn new(alpha: RealConst, b1: BigRational, b2: BigRational, kind: SineKind) -> Result<Self> {
        if !b1.is_positive() {
            return Err(Error::Invalid("B1 must be positive".into()));
        }
        if b1 > b2 {
            return Err(Error::ArgumentOrder(format!(
                "B1 = {} exceeds B2 = {}",
                format_rational(&b1),
                format_rational(&b2)
            )));
        }
        let spec = SineLikeSpec { alpha, b1, b2, kind };
        spec.check_sandwich()?;
        Ok(spec)
    }

    /// Named configurations: `flint-hills` and `sqrt2-lattice`.
    pub fn preset(name: &str) -> Result<(Self, SeriesParams)> {
        match name {
            "flint-hills" => Ok((
                Self::new(RealConst::Pi, rat(1, 2), rat(1, 1), SineKind::AbsSin)?,
                SeriesParams::new(rat(3, 1), rat(2, 1))?,
            )),
            "sqrt2-lattice" => Ok((
                Self::new(RealConst::Sqrt(2), rat(1, 1), rat(1, 1), SineKind::LatticeDistance)?,
                SeriesParams::new(rat(3, 1), rat(2, 1))?,
            )),
            other => Err(Error::Invalid(format!(
                "unknown preset {other:?} (expected flint-hills or sqrt2-lattice)"
            ))),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}(alpha={}, B1={}, B2={})",
            self.kind.name(),
            self.alpha.describe(),
            format_rational(&self.b1),
            format_rational(&self.b2)
        )
    }

    fn alpha_at(&self, bits: u32) -> Result<CertReal> {
        let a = self.alpha.enclose(bits)?;
        if !a.is_positive() {
            return Err(Error::Domain(format!("period {} is not certifiably positive", self.alpha.describe())));
        }
        Ok(a)
    }

    fn check_sandwich(&self) -> Result<()> {
        let a = self.alpha_at(CHECK_BITS)?;
        let b1 = CertReal::from_rational(&self.b1, CHECK_BITS);
        let b2 = CertReal::from_rational(&self.b2, CHECK_BITS);
        let fail = |what: String| Err(Error::Invalid(format!("sandwich fails for {}: {what}", self.describe())));
        match &self.kind {
            // 2|y|/π <= |sin y| <= |y| with y = πx/α.
            SineKind::AbsSin => {
                let pi = pi_enclosure(CHECK_BITS)?;
                if !b1.mul(&a).certainly_le(&CertReal::from_int(2, CHECK_BITS)) {
                    return fail("B1 must not exceed 2/alpha".into());
                }
                let upper_ok = if self.alpha == RealConst::Pi {
                    self.b2 >= rat(1, 1)
                } else {
                    pi.certainly_le(&b2.mul(&a))
                };
                if !upper_ok {
                    return fail("B2 must be at least pi/alpha".into());
                }
            }
            SineKind::LatticeDistance => {}
            SineKind::CustomTable(p) => {
                for (t, g) in &p.points[1..] {
                    let x = a.mul_rational(t);
                    let g = CertReal::from_rational(g, CHECK_BITS);
                    if !b1.mul(&x).certainly_le(&g) || !g.certainly_le(&b2.mul(&x)) {
                        return fail(format!("breakpoint t = {}", format_rational(t)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `P(r)` for a residue with `|r| <= α/2`, given the period enclosure used
    /// to reduce it.
    pub fn eval_residue(&self, r: &CertReal, alpha: &CertReal) -> Result<CertReal> {
        let bits = r.precision_bits().max(alpha.precision_bits());
        match &self.kind {
            SineKind::AbsSin => {
                if self.alpha == RealConst::Pi {
                    return Ok(r.sin().abs());
                }
                let pi = pi_enclosure(bits)?;
                Ok(pi.mul(r).div(alpha)?.sin().abs())
            }
            SineKind::LatticeDistance => Ok(r.abs().mul_rational(&self.b2)),
            SineKind::CustomTable(p) => Ok(p.eval(&r.abs().div(alpha)?, bits)),
        }
    }

    /// Enclosure of `P(n)`, refined under `policy`.
    pub fn value(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<Refined<CertReal>> {
        if self.kind == SineKind::AbsSin && self.alpha == RealConst::Pi {
            return sin_abs_enclosure(n, &self.alpha, policy);
        }
        let lp = nearest_lattice_distance(n, &self.alpha, policy)?;
        let wb = lp.value.signed.precision_bits();
        let a = self.alpha_at(wb)?.with_precision(wb);
        let v = self.eval_residue(&lp.value.signed, &a)?;
        let status = if lp.is_met() && v.meets_rel_width(&policy.target_rel_width) {
            PrecisionStatus::Met
        } else {
            PrecisionStatus::Exhausted
        };
        Ok(Refined {
            value: v,
            bits: lp.bits,
            status,
        })
    }

    /// `B₁·|r| <= P(r) <= B₂·|r|` as certified interval inequalities.
    pub fn sandwich_holds(&self, r: &CertReal, alpha: &CertReal) -> Result<bool> {
        let p = self.eval_residue(r, alpha)?;
        let x = r.abs();
        Ok(x.mul_rational(&self.b1).certainly_le(&p) && p.certainly_le(&x.mul_rational(&self.b2)))
    }
}

/// `2/π` and `1` as the tight constants for `|sin|` with period π.
pub fn tight_sin_constants(bits: u32) -> Result<(CertReal, CertReal)> {
    let two = CertReal::from_int(2, bits);
    Ok((two.div(&pi_enclosure(bits)?)?, CertReal::point(Dyadic::one(), bits)))
}
