//! Finite-depth check that a constructed expansion forces large terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::sinelike::{SineKind, SineLikeSpec};
use super::term::{term_at, SeriesParams};
use crate::contfrac::{construct_divergent, sondow_estimate, CFExpansion, RunningEstimate};
use crate::error::{Error, Result};
use crate::numkernel::{CertReal, Dyadic, PrecisionPolicy, RealConst};
use crate::rational::format_rational;

/// Extra constructed quotients used only to pin down `α` for the last checks.
const LOOKAHEAD: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergentCheck {
    pub n: usize,
    pub q: String,
    pub a_next: String,
    pub term: CertReal,
    /// `Some(true)` when `A(q_n) > 1` is certified, `None` when undecided.
    pub passes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub u: String,
    pub v: String,
    pub b2: String,
    /// One entry per convergent whose next quotient was constructed.
    pub checks: Vec<ConvergentCheck>,
    pub sondow: Vec<RunningEstimate>,
    pub final_estimate: Option<f64>,
    pub all_pass: bool,
}

/// Deepest construction available within the digit budget, up to `want` terms.
fn deepest(
    u: &BigRational,
    v: &BigRational,
    b2: &BigRational,
    n_terms: usize,
    prefix: &CFExpansion,
    digit_budget: u64,
) -> Result<CFExpansion> {
    let mut last_err = None;
    for extra in (0..=LOOKAHEAD).rev() {
        match construct_divergent(u, v, b2, n_terms + extra, prefix, digit_budget) {
            Ok(cf) => return Ok(cf),
            Err(e @ Error::DigitBudget { .. }) if extra > 0 => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("loop ran"))
}

/// Construct `n_terms` quotients of `x = 1/α` and check `A_{u,v}(q_n) > 1` at
/// every convergent whose successor quotient was constructed.
///
/// Terms use `P = B₂·dist(·, αℤ)`, the largest profile allowed by the upper
/// sandwich constant, so a pass holds for every profile with that constant.
pub fn divergence_certificate(
    u: &BigRational,
    v: &BigRational,
    b2: &BigRational,
    n_terms: usize,
    prefix: &CFExpansion,
    digit_budget: u64,
    policy: &PrecisionPolicy,
) -> Result<(CFExpansion, DivergenceReport)> {
    let params = SeriesParams::new(u.clone(), v.clone())?;
    let deep = deepest(u, v, b2, n_terms, prefix, digit_budget)?;
    let cf = deep.truncated(n_terms);
    let alpha = RealConst::ContinuedFraction(deep.clone()).reciprocal();
    let spec = SineLikeSpec::new(alpha, b2.clone(), b2.clone(), SineKind::LatticeDistance)?;
    let one = Dyadic::one();
    let first = prefix.len().saturating_sub(1);
    let mut checks = vec![];
    for n in first..n_terms.saturating_sub(1) {
        let q = cf.q(n)?.clone();
        if q < BigInt::from(1) {
            continue;
        }
        let t = term_at(&q, &spec, &params, policy)?.value;
        let passes = if t.lo() > &one {
            Some(true)
        } else if t.hi() <= &one {
            Some(false)
        } else {
            None
        };
        checks.push(ConvergentCheck {
            n,
            q: q.to_string(),
            a_next: cf.term(n + 1)?.to_string(),
            term: t,
            passes,
        });
    }
    let sondow = if cf.len() >= 2 {
        sondow_estimate(&cf, policy.start_bits)?
    } else {
        vec![]
    };
    let report = DivergenceReport {
        u: format_rational(u),
        v: format_rational(v),
        b2: format_rational(b2),
        all_pass: checks.iter().all(|c| c.passes == Some(true)),
        final_estimate: sondow.last().map(|e| e.approx),
        checks,
        sondow,
    };
    Ok((cf, report))
}
