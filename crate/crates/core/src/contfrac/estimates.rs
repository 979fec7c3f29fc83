//! Error brackets for convergents and the finite-depth partial-quotient estimate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::expansion::CFExpansion;
use crate::error::{Error, Result};
use crate::numkernel::CertReal;

/// `(1/((a_{n+1}+2) q_n²), 1/(a_{n+1} q_n²))`, which brackets `|x − p_n/q_n|`
/// for the value `x` of the expansion.
pub fn convergent_error_bounds(cf: &CFExpansion, n: usize) -> Result<(BigRational, BigRational)> {
    let a = cf.term(n + 1)?;
    let q = cf.q(n)?;
    let q2 = q * q;
    let lower = BigRational::new(BigInt::one(), (a + 2u32) * &q2);
    let upper = BigRational::new(BigInt::one(), a * q2);
    Ok((lower, upper))
}

/// One point of the running estimate `2 + ln(a_{n+1}) / ln(q_n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunningEstimate {
    pub n: usize,
    #[serde(skip)]
    pub value: CertReal,
    /// Midpoint, for reports.
    pub approx: f64,
}

/// Running estimates for every `n >= 1` with `q_n > 1` and `a_{n+1}` known.
/// These are finite-depth values, not the limit superior.
pub fn sondow_estimate(cf: &CFExpansion, bits: u32) -> Result<Vec<RunningEstimate>> {
    if cf.len() < 2 {
        return Err(Error::Invalid("running estimate needs at least 2 terms".into()));
    }
    let two = CertReal::from_int(2, bits);
    let mut out = vec![];
    for n in 1..cf.len() - 1 {
        let q = cf.q(n)?;
        if q <= &BigInt::one() {
            continue;
        }
        let a = cf.term(n + 1)?;
        let value = if a.is_one() {
            two.clone()
        } else {
            let la = CertReal::from_int(a.clone(), bits).ln()?;
            let lq = CertReal::from_int(q.clone(), bits).ln()?;
            two.add(&la.div(&lq)?)
        };
        out.push(RunningEstimate {
            n,
            approx: value.to_f64(),
            value,
        });
    }
    Ok(out)
}

/// Running maximum of the estimate, which is the finite-depth proxy for the limit superior.
pub fn running_max(est: &[RunningEstimate]) -> Option<&RunningEstimate> {
    est.iter().max_by(|a, b| a.approx.total_cmp(&b.approx))
}
