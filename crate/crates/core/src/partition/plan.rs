//! Exponent cut points and per-cell density budgets, in exact arithmetic.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::threshold::FactWitness;
use crate::contfrac::MuSpec;
use crate::error::{Error, Result};
use crate::rational::{ceil_rat, format_rational, int};
use crate::series::SeriesParams;
use crate::serde_util::{rational_str, rational_vec};

/// Refuse plans with more cells than this.
pub const MAX_CELLS: u64 = 1_000_000;

pub(crate) fn check_safety(safety: &BigRational) -> Result<()> {
    if !safety.is_positive() || safety >= &int(1) {
        return Err(Error::Domain(format!(
            "safety must lie in (0, 1), got {}",
            format_rational(safety)
        )));
    }
    Ok(())
}

/// `f(a) = slope·a + intercept` for the step budget; `μ > 1` required.
pub fn step_budget_coefficients(mu: &BigRational, params: &SeriesParams) -> Result<(BigRational, BigRational)> {
    if mu <= &int(1) {
        return Err(Error::Domain(format!("step budget needs μ > 1, got {}", format_rational(mu))));
    }
    let (u, v) = (&params.u, &params.v);
    let m = mu - int(1);
    let den = v * &m;
    let slope = (int(1) + v - v * mu) / &den;
    let intercept = (&m * (u + v - int(1)) - int(1)) / den;
    Ok((slope, intercept))
}

/// Largest admissible width of a cell starting at `a_prev`.
pub fn step_budget(a_prev: &BigRational, mu: &BigRational, params: &SeriesParams) -> Result<BigRational> {
    let (slope, intercept) = step_budget_coefficients(mu, params)?;
    Ok(slope * a_prev + intercept)
}

/// Open interval of admissible budgets for the cell `[a_prev, a_next)`.
pub fn budget_range(
    a_prev: &BigRational,
    a_next: &BigRational,
    mu: &BigRational,
    params: &SeriesParams,
) -> (BigRational, BigRational) {
    let (u, v) = (&params.u, &params.v);
    let lo = (int(1) - (u + v - v * a_next)).max(BigRational::zero());
    let hi = (int(1) - (mu - a_prev) / (mu - int(1))).min(int(1));
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionPlan {
    #[serde(with = "rational_str")]
    pub mu: BigRational,
    #[serde(flatten)]
    pub params: SeriesParams,
    #[serde(with = "rational_str")]
    pub x: BigRational,
    #[serde(with = "rational_str")]
    pub y: BigRational,
    /// `a₀ < a₁ < … < a_k`.
    #[serde(with = "rational_vec")]
    pub cuts: Vec<BigRational>,
    /// Budget `b_i` for the cell `[a_{i−1}, a_i)`.
    #[serde(with = "rational_vec")]
    pub b: Vec<BigRational>,
    /// Upper bound on every cell width.
    #[serde(with = "rational_str")]
    pub margin: BigRational,
}

impl PartitionPlan {
    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// `(u + v − v·a_i)/(1 − b_i)`, the decay exponent of cell `i` (1-based).
    pub fn predicted_exponent(&self, i: usize) -> BigRational {
        let (u, v) = (&self.params.u, &self.params.v);
        (u + v - v * &self.cuts[i]) / (int(1) - &self.b[i - 1])
    }

    /// Every structural and arithmetic condition of a valid plan, checked exactly.
    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Invalid(format!("plan check failed: {what}")));
        let (u, v) = (&self.params.u, &self.params.v);
        let mu = &self.mu;
        if self.cuts.len() < 2 || self.b.len() + 1 != self.cuts.len() {
            return bad("need k >= 1 cells with one budget each".into());
        }
        if !self.x.is_positive() || !self.y.is_positive() || !self.margin.is_positive() {
            return bad("x, y and margin must be positive".into());
        }
        if self.cuts[0] != mu - &self.x || self.cuts[self.k()] != mu + &self.y {
            return bad("a₀ must be μ − x and a_k must be μ + y".into());
        }
        if self.x <= mu + (int(1) - u) / v - int(1) {
            return bad("x must exceed μ + (1 − u)/v − 1".into());
        }
        for i in 1..=self.k() {
            let (a0, a1) = (&self.cuts[i - 1], &self.cuts[i]);
            let w = a1 - a0;
            if !w.is_positive() {
                return bad(format!("cuts not increasing at {i}"));
            }
            if w > self.margin {
                return bad(format!("cell {i} is wider than the margin"));
            }
            if w >= step_budget(a0, mu, &self.params)? {
                return bad(format!("cell {i} exceeds its step budget"));
            }
            let b = &self.b[i - 1];
            if !b.is_positive() || b >= &int(1) {
                return bad(format!("b_{i} outside (0, 1)"));
            }
            if b >= &(int(1) - (mu - a0) / (mu - int(1))) {
                return bad(format!("b_{i} too large for the density bound"));
            }
            if self.predicted_exponent(i) <= int(1) {
                return bad(format!("cell {i} decays too slowly"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: PartitionPlan = serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad plan: {e}")))?;
        p.validate()?;
        Ok(p)
    }
}

fn check_hypotheses(mu: &MuSpec, params: &SeriesParams) -> Result<()> {
    let (u, v) = (&params.u, &params.v);
    if v < &int(1) {
        return Err(Error::Infeasible(format!(
            "hypothesis v >= 1 fails (v = {}); the step budget may increase",
            format_rational(v)
        )));
    }
    let cap = int(1) + u / v;
    if mu.mu >= cap {
        return Err(Error::Infeasible(format!(
            "hypothesis μ < 1 + u/v fails (μ = {}, 1 + u/v = {})",
            format_rational(&mu.mu),
            format_rational(&cap)
        )));
    }
    Ok(())
}

/// Canonical plan: `x` and `y` placed by `safety`, uniform cells of width at
/// most `safety·min f`, each budget at the middle of its admissible range.
pub fn plan(mu: &MuSpec, params: &SeriesParams, safety: &BigRational) -> Result<PartitionPlan> {
    check_safety(safety)?;
    check_hypotheses(mu, params)?;
    let (u, v) = (&params.u, &params.v);
    let m = &mu.mu - int(1);
    let x_lo = (&m + (int(1) - u) / v).max(BigRational::zero());
    let x = &x_lo + safety * (&m - &x_lo);
    let (slope, _) = step_budget_coefficients(&mu.mu, params)?;
    let f_mu = step_budget(&mu.mu, &mu.mu, params)?;
    let y = safety * &f_mu / (int(1) + slope.abs());
    let a0 = &mu.mu - &x;
    let ak = &mu.mu + &y;
    let f0 = step_budget(&a0, &mu.mu, params)?;
    let fk = step_budget(&ak, &mu.mu, params)?;
    let margin = safety * f0.min(fk);
    let k = ceil_rat(&((&ak - &a0) / &margin)).to_u64().unwrap_or(u64::MAX).max(1);
    if k > MAX_CELLS {
        return Err(Error::Invalid(format!("plan needs {k} cells (limit {MAX_CELLS})")));
    }
    let width = (&ak - &a0) / BigRational::from_integer(k.into());
    let cuts: Vec<BigRational> = (0..=k)
        .map(|i| &a0 + &width * BigRational::from_integer(i.into()))
        .collect();
    let b = cuts
        .windows(2)
        .map(|w| {
            let (lo, hi) = budget_range(&w[0], &w[1], &mu.mu, params);
            (lo + hi) / int(2)
        })
        .collect();
    let p = PartitionPlan {
        mu: mu.mu.clone(),
        params: params.clone(),
        x,
        y,
        cuts,
        b,
        margin,
    };
    p.validate()?;
    Ok(p)
}

/// The single-cell plan carried by a three-set witness.
pub fn witness_plan(mu: &MuSpec, params: &SeriesParams, w: &FactWitness) -> Result<PartitionPlan> {
    let p = PartitionPlan {
        mu: mu.mu.clone(),
        params: params.clone(),
        x: w.x.clone(),
        y: w.y.clone(),
        cuts: vec![&mu.mu - &w.x, &mu.mu + &w.y],
        b: vec![w.b.clone()],
        margin: &w.x + &w.y,
    };
    p.validate()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn params(u: i64, v: i64) -> SeriesParams {
        SeriesParams::new(int(u), int(v)).unwrap()
    }

    fn mu(x: BigRational) -> MuSpec {
        MuSpec::assumed(x).unwrap()
    }

    #[test]
    fn budget_examples() {
        let p = params(3, 2);
        let m = rat(12, 5);
        assert_eq!(step_budget(&m, &m, &p).unwrap(), rat(1, 10));
        assert_eq!(step_budget(&int(2), &m, &p).unwrap(), rat(5, 14));
        let (slope, _) = step_budget_coefficients(&m, &p).unwrap();
        assert_eq!(slope, (int(1) + int(2) - int(2) * &m) / (int(2) * (&m - int(1))));
        assert_eq!(
            step_budget(&int(3), &m, &p).unwrap() - step_budget(&int(2), &m, &p).unwrap(),
            slope
        );
        assert!(step_budget(&int(2), &int(1), &p).is_err());
    }

    #[test]
    fn feasible_plans() {
        let half = rat(1, 2);
        let a = plan(&mu(rat(12, 5)), &params(3, 2), &half).unwrap();
        assert!(a.k() >= 1);
        assert!(a.margin <= rat(1, 20));
        let b = plan(&mu(int(2)), &params(3, 2), &half).unwrap();
        assert!(b.margin > a.margin);
        assert!(plan(&mu(rat(11, 5)), &params(3, 1), &half).is_ok());
    }

    #[test]
    fn infeasible_plans_name_the_hypothesis() {
        let half = rat(1, 2);
        match plan(&mu(rat(5, 2)), &params(3, 2), &half) {
            Err(Error::Infeasible(m)) => assert!(m.contains("μ < 1 + u/v")),
            other => panic!("{other:?}"),
        }
        let p = SeriesParams::new(int(3), rat(1, 2)).unwrap();
        match plan(&mu(int(2)), &p, &half) {
            Err(Error::Infeasible(m)) => assert!(m.contains("v >= 1")),
            other => panic!("{other:?}"),
        }
        assert!(plan(&mu(int(2)), &params(3, 2), &int(1)).is_err());
    }

    #[test]
    fn json_round_trip_and_tamper() {
        let p = plan(&mu(rat(12, 5)), &params(3, 2), &rat(1, 2)).unwrap();
        let s = p.to_json().unwrap();
        for key in ["\"mu\"", "\"u\"", "\"v\"", "\"x\"", "\"y\"", "\"cuts\"", "\"b\"", "\"margin\""] {
            assert!(s.contains(key), "{key}");
        }
        assert_eq!(PartitionPlan::from_json(&s).unwrap(), p);
        let mut bad = p.clone();
        bad.b[0] = int(1);
        assert!(PartitionPlan::from_json(&bad.to_json().unwrap()).is_err());
    }
}
