//! Window counts, growth checks and the combined-pair audit over scans.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::record::{are_close, combine, combined_exponent_bound, slack_threshold};
use super::scan::GoodScanResult;
use crate::contfrac::MuSpec;
use crate::error::{Error, Result};
use crate::rational::{cmp_int_pow, int};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCount {
    pub count: usize,
    /// Unknown entries that fall in the window.
    pub unknown: usize,
    /// The window reaches past `q_max`, so the count is a lower bound.
    pub truncated: bool,
}

/// Good denominators in `(q1, q1 + q1^ε₂]`, decided exactly.
pub fn window_count(scan: &GoodScanResult, q1: &BigInt, epsilon2: &BigRational) -> WindowCount {
    let inside = |q: &BigInt| {
        q > q1 && cmp_int_pow(q1.magnitude(), epsilon2, (q - q1).magnitude()) != std::cmp::Ordering::Less
    };
    let q_max = BigInt::from(scan.q_max);
    let truncated = q1 >= &q_max
        || cmp_int_pow(q1.magnitude(), epsilon2, (&q_max - q1).magnitude()) == std::cmp::Ordering::Greater;
    WindowCount {
        count: scan.records.iter().filter(|r| inside(&r.q)).count(),
        unknown: scan.unknown.iter().filter(|u| inside(&u.q)).count(),
        truncated,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub q: String,
    /// `C·n^γ`.
    pub floor: f64,
    /// `Q_n / (C·n^γ)`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    /// `1/(1 − ε₂)`.
    pub gamma: f64,
    /// Largest `C` with `Q_n >= C·n^γ` over the tail.
    pub constant: f64,
    /// Least-squares slope of `ln Q_n` against `ln n` over the tail.
    pub tail_slope: f64,
    /// First index of the tail (second half of the sequence).
    pub tail_start: usize,
    pub rows: Vec<GrowthRow>,
    pub pass: bool,
}

fn check_growth_hypothesis(mu: &MuSpec, epsilon1: &BigRational, epsilon2: &BigRational) -> Result<()> {
    if !epsilon2.is_positive() || epsilon2 >= &int(1) {
        return Err(Error::Domain("epsilon2 must lie in (0, 1)".into()));
    }
    let need = int(1) + epsilon1 / (int(1) - epsilon2);
    if mu.mu <= need {
        return Err(Error::HypothesisViolation(format!(
            "μ = {} must exceed 1 + ε₁/(1 − ε₂) = {}",
            crate::rational::format_rational(&mu.mu),
            crate::rational::format_rational(&need)
        )));
    }
    Ok(())
}

fn ln_big(q: &BigInt) -> f64 {
    let bits = q.bits();
    if bits < 1000 {
        return q.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (q >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Growth of an ascending sequence of good denominators against `n^(1/(1−ε₂))`.
/// Finite-range evidence only: passes when the tail slope in log-log scale
/// reaches `γ` (and the tail has at least two points).
pub fn growth_check_sequence(
    qs: &[BigInt],
    mu: &MuSpec,
    epsilon1: &BigRational,
    epsilon2: &BigRational,
) -> Result<GrowthReport> {
    check_growth_hypothesis(mu, epsilon1, epsilon2)?;
    let gamma = 1.0 / (1.0 - epsilon2.to_f64().unwrap());
    let total = qs.len();
    let tail_start = total / 2 + 1;
    let lnq: Vec<f64> = qs.iter().map(ln_big).collect();
    // ln C = min over the tail of ln Q_n − γ ln n.
    let ln_c = (tail_start..=total)
        .map(|n| lnq[n - 1] - gamma * (n as f64).ln())
        .fold(f64::INFINITY, f64::min);
    let pts: Vec<(f64, f64)> = (tail_start..=total).map(|n| ((n as f64).ln(), lnq[n - 1])).collect();
    let slope = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (m * sxy - sx * sy) / (m * sxx - sx * sx)
    } else {
        f64::NAN
    };
    let constant = if ln_c.is_finite() { ln_c.exp() } else { 0.0 };
    let rows = (1..=total)
        .map(|n| {
            let ln_floor = ln_c + gamma * (n as f64).ln();
            GrowthRow {
                n,
                q: qs[n - 1].to_string(),
                floor: ln_floor.exp(),
                margin: (lnq[n - 1] - ln_floor).exp(),
            }
        })
        .collect();
    let pass = pts.len() >= 2 && constant > 0.0 && slope >= gamma;
    Ok(GrowthReport {
        gamma,
        constant,
        tail_slope: slope,
        tail_start,
        rows,
        pass,
    })
}

pub fn growth_check(scan: &GoodScanResult, epsilon2: &BigRational) -> Result<GrowthReport> {
    growth_check_sequence(&scan.good_denominators(), &scan.mu, &scan.epsilon1, epsilon2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRow {
    pub q1: String,
    pub q2: String,
    pub combined_q: String,
    pub exponent_lo: f64,
    pub bound_hi: f64,
    /// `None` when the comparison could not be certified.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairAudit {
    pub slack_threshold: String,
    pub adjacent_pairs: usize,
    pub close_pairs: usize,
    pub checked: usize,
    pub violations: usize,
    pub undecided: usize,
    /// Close pairs with `q2 − q1 = 1`.
    pub degenerate: usize,
    pub rows: Vec<PairRow>,
}

/// For adjacent good records that are ε₂-close with `q1` at or above the slack
/// threshold, check that the combined exponent exceeds the proven lower bound.
pub fn audit_pairs(scan: &GoodScanResult, epsilon2: &BigRational, bits: u32) -> Result<PairAudit> {
    let q0 = slack_threshold(&scan.mu, &scan.epsilon1, epsilon2)?;
    let mut audit = PairAudit {
        slack_threshold: q0.to_string(),
        adjacent_pairs: scan.records.len().saturating_sub(1),
        close_pairs: 0,
        checked: 0,
        violations: 0,
        undecided: 0,
        degenerate: 0,
        rows: vec![],
    };
    for w in scan.records.windows(2) {
        let (r1, r2) = (&w[0], &w[1]);
        if !are_close(&r1.q, &r2.q, epsilon2)? {
            continue;
        }
        audit.close_pairs += 1;
        if r1.q < q0 {
            continue;
        }
        let c = match combine(r1, r2) {
            Ok(c) => c,
            Err(Error::DegenerateDenominator(_)) => {
                audit.degenerate += 1;
                continue;
            }
            Err(_) => {
                audit.undecided += 1;
                continue;
            }
        };
        let bound = combined_exponent_bound(&scan.mu, &scan.epsilon1, epsilon2, &r1.q, bits)?;
        let holds = if c.exponent.lo() > bound.hi() {
            Some(true)
        } else if c.exponent.hi() <= bound.lo() {
            Some(false)
        } else {
            None
        };
        audit.checked += 1;
        match holds {
            Some(false) => audit.violations += 1,
            None => audit.undecided += 1,
            Some(true) => {}
        }
        audit.rows.push(PairRow {
            q1: r1.q.to_string(),
            q2: r2.q.to_string(),
            combined_q: c.q.to_string(),
            exponent_lo: c.exponent.lo().to_f64(),
            bound_hi: bound.hi().to_f64(),
            holds,
        });
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn mu(x: BigRational) -> MuSpec {
        MuSpec::assumed(x).unwrap()
    }

    #[test]
    fn fibonacci_passes_linear_fails() {
        let mut fib = vec![BigInt::from(1), BigInt::from(2)];
        while fib.len() < 40 {
            let n = fib.len();
            fib.push(&fib[n - 1] + &fib[n - 2]);
        }
        let m = mu(rat(5, 2));
        let r = growth_check_sequence(&fib, &m, &rat(1, 10), &rat(1, 2)).unwrap();
        assert!(r.pass);
        assert!(r.constant > 0.0);
        let lin: Vec<BigInt> = (1..=200).map(BigInt::from).collect();
        let r = growth_check_sequence(&lin, &m, &rat(1, 10), &rat(1, 2)).unwrap();
        assert!(!r.pass);
        assert!((r.tail_slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hypothesis_is_enforced() {
        let e = growth_check_sequence(&[], &MuSpec::exactly_two(), &rat(1, 2), &rat(9, 10)).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)));
    }

    #[test]
    fn empty_scan_windows_are_empty() {
        let s = GoodScanResult::with_records("none", MuSpec::exactly_two(), rat(1, 10), 1000, vec![]);
        for q1 in [2, 113, 999] {
            assert_eq!(window_count(&s, &BigInt::from(q1), &rat(1, 2)).count, 0);
        }
        assert!(window_count(&s, &BigInt::from(999), &rat(1, 2)).truncated);
        assert!(!window_count(&s, &BigInt::from(113), &rat(1, 2)).truncated);
    }
}
