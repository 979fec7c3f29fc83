//! Scans over denominators for good approximations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::record::{exponent, is_good, legendre_threshold, ApproxRecord, Goodness};
use crate::contfrac::{expand_prefix, CFExpansion, MuSpec};
use crate::error::{Error, Result};
use crate::numkernel::{Enclose, PrecisionPolicy, RecipOf};
use crate::serde_util::{bigint_str, rational_str};

/// A denominator whose classification could not be certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnknownEntry {
    #[serde(with = "bigint_str")]
    pub q: BigInt,
    /// Present when the record exists but straddles the threshold.
    pub record: Option<ApproxRecord>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodScanResult {
    pub alpha_id: String,
    pub mu: MuSpec,
    #[serde(with = "rational_str")]
    pub epsilon1: BigRational,
    pub q_max: u64,
    /// Certified-good records, ascending in `q`.
    pub records: Vec<ApproxRecord>,
    /// Ascending in `q`; never silently dropped.
    pub unknown: Vec<UnknownEntry>,
    /// Number of denominators actually evaluated.
    pub evaluated: u64,
}

/// Convergent denominators of `1/α` up to past `q_max`, with the quotient after each.
fn reciprocal_expansion<A: Enclose + ?Sized>(alpha: &A, q_max: u64, policy: &PrecisionPolicy) -> Option<CFExpansion> {
    let target = BigInt::from(q_max);
    for bits in policy.schedule() {
        let x = RecipOf(alpha).enclose(bits).ok()?;
        let cf = expand_prefix(&x, usize::MAX);
        if cf.denominators().last().is_some_and(|q| q > &target) {
            return Some(cf);
        }
    }
    None
}

/// Denominators that can possibly be good. Above the Legendre threshold a good
/// `q` must be `k·q_n` with `2k² < a_{n+1} + 2`; below it every `q` is kept.
/// `None` means the rule does not apply and every `q` must be evaluated.
pub fn candidate_denominators<A: Enclose + ?Sized>(
    alpha: &A,
    mu: &MuSpec,
    epsilon1: &BigRational,
    q_max: u64,
    policy: &PrecisionPolicy,
) -> Option<Vec<u64>> {
    let qstar = legendre_threshold(mu, epsilon1)?.to_u64()?;
    if qstar > q_max {
        return None;
    }
    let cf = reciprocal_expansion(alpha, q_max, policy)?;
    let mut out: Vec<u64> = (2..qstar).collect();
    let qs = cf.denominators();
    for n in 0..qs.len() - 1 {
        let Some(qn) = qs[n].to_u64() else { break };
        if qn > q_max {
            break;
        }
        let a_next = &cf.terms()[n + 1];
        let mut k: u64 = 1;
        while BigInt::from(2 * k * k) < a_next + 2u32 {
            let Some(q) = qn.checked_mul(k) else { break };
            if q > q_max {
                break;
            }
            if q >= qstar {
                out.push(q);
            }
            k += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn evaluate<A: Enclose + ?Sized>(qs: &[u64], alpha: &A, policy: &PrecisionPolicy) -> Vec<(u64, Result<ApproxRecord>)> {
    qs.par_iter()
        .map(|&q| (q, exponent(&BigInt::from(q), alpha, policy)))
        .collect()
}

fn scan_impl<A: Enclose + ?Sized>(
    alpha: &A,
    mu: &MuSpec,
    epsilon1: &BigRational,
    q_max: u64,
    policy: &PrecisionPolicy,
    skip: bool,
) -> Result<GoodScanResult> {
    if q_max < 2 {
        return Err(Error::Domain("q_max must be >= 2".into()));
    }
    if epsilon1 <= &BigRational::from_integer(0.into()) {
        return Err(Error::Domain("epsilon1 must be positive".into()));
    }
    let qs = if skip {
        candidate_denominators(alpha, mu, epsilon1, q_max, policy)
    } else {
        None
    }
    .unwrap_or_else(|| (2..=q_max).collect());
    let mut records = vec![];
    let mut unknown = vec![];
    for (q, r) in evaluate(&qs, alpha, policy) {
        match r {
            Ok(rec) => match is_good(&rec, mu, epsilon1) {
                Goodness::Good => records.push(rec),
                Goodness::NotGood => {}
                Goodness::Unknown => unknown.push(UnknownEntry {
                    q: BigInt::from(q),
                    record: Some(rec),
                    reason: "exponent straddles the threshold".into(),
                }),
            },
            Err(e) => unknown.push(UnknownEntry {
                q: BigInt::from(q),
                record: None,
                reason: e.to_string(),
            }),
        }
    }
    Ok(GoodScanResult {
        alpha_id: alpha.describe(),
        mu: mu.clone(),
        epsilon1: epsilon1.clone(),
        q_max,
        records,
        unknown,
        evaluated: qs.len() as u64,
    })
}

/// All `q ∈ [2, q_max]` whose records are certified good (plus the unknown ones),
/// skipping denominators excluded by the convergent structure of `1/α`.
pub fn scan_good<A: Enclose + ?Sized>(
    alpha: &A,
    mu: &MuSpec,
    epsilon1: &BigRational,
    q_max: u64,
    policy: &PrecisionPolicy,
) -> Result<GoodScanResult> {
    scan_impl(alpha, mu, epsilon1, q_max, policy, true)
}

/// Same as [`scan_good`] but evaluating every denominator.
pub fn scan_good_exhaustive<A: Enclose + ?Sized>(
    alpha: &A,
    mu: &MuSpec,
    epsilon1: &BigRational,
    q_max: u64,
    policy: &PrecisionPolicy,
) -> Result<GoodScanResult> {
    scan_impl(alpha, mu, epsilon1, q_max, policy, false)
}

/// Records for every `q ∈ [2, q_max]`; failures are returned separately.
pub fn scan_all<A: Enclose + ?Sized>(
    alpha: &A,
    q_max: u64,
    policy: &PrecisionPolicy,
) -> (Vec<ApproxRecord>, Vec<UnknownEntry>) {
    let qs: Vec<u64> = (2..=q_max).collect();
    let mut ok = vec![];
    let mut bad = vec![];
    for (q, r) in evaluate(&qs, alpha, policy) {
        match r {
            Ok(rec) => ok.push(rec),
            Err(e) => bad.push(UnknownEntry {
                q: BigInt::from(q),
                record: None,
                reason: e.to_string(),
            }),
        }
    }
    (ok, bad)
}

const CSV_HEADER: [&str; 7] = ["q", "p", "error_lo", "error_hi", "exp_lo", "exp_hi", "status"];

/// One CSV row per record: good rows, then unknown rows, merged by `q`.
pub fn records_to_csv<'a>(rows: impl IntoIterator<Item = (&'a ApproxRecord, &'a str)>) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for (r, status) in rows {
        w.write_record([
            r.q.to_string(),
            r.p.to_string(),
            r.error.lo().to_decimal_string(),
            r.error.hi().to_decimal_string(),
            r.exponent.lo().to_decimal_string(),
            r.exponent.hi().to_decimal_string(),
            status.to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

/// A parsed CSV row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvRow {
    pub q: BigInt,
    pub p: Option<BigInt>,
    pub columns: [String; 4],
    pub status: String,
}

pub fn parse_records_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let headers = rd.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Invalid(format!("unexpected csv header {headers:?}")));
    }
    let mut out = vec![];
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let q = rec[0].parse().map_err(|_| Error::Invalid(format!("bad q {:?}", &rec[0])))?;
        let p = rec[1].parse().ok();
        out.push(CsvRow {
            q,
            p,
            columns: [rec[2].into(), rec[3].into(), rec[4].into(), rec[5].into()],
            status: rec[6].into(),
        });
    }
    Ok(out)
}

impl GoodScanResult {
    /// Good denominators, ascending.
    pub fn good_denominators(&self) -> Vec<BigInt> {
        self.records.iter().map(|r| r.q.clone()).collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut rows: Vec<(&ApproxRecord, &str)> = self.records.iter().map(|r| (r, "good")).collect();
        let mut missing = vec![];
        for u in &self.unknown {
            match &u.record {
                Some(r) => rows.push((r, "unknown")),
                None => missing.push(u),
            }
        }
        rows.sort_by(|a, b| a.0.q.cmp(&b.0.q));
        let mut text = records_to_csv(rows)?;
        for u in missing {
            text.push_str(&format!("{},,,,,,unknown\n", u.q));
        }
        Ok(text)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))
    }

    /// A scan with hand-supplied good records (used for synthetic growth checks).
    pub fn with_records(alpha_id: &str, mu: MuSpec, epsilon1: BigRational, q_max: u64, records: Vec<ApproxRecord>) -> Self {
        GoodScanResult {
            alpha_id: alpha_id.into(),
            mu,
            epsilon1,
            q_max,
            records,
            unknown: vec![],
            evaluated: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::RealConst;
    use crate::rational::rat;

    #[test]
    fn small_scan_matches_exhaustive() {
        let p = PrecisionPolicy::default();
        let mu = MuSpec::assumed(rat(5, 2)).unwrap();
        let a = scan_good(&RealConst::Pi, &mu, &rat(1, 5), 10, &p).unwrap();
        let b = scan_good_exhaustive(&RealConst::Pi, &mu, &rat(1, 5), 10, &p).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.unknown, b.unknown);
    }

    #[test]
    fn candidates_include_convergents_of_the_reciprocal() {
        let p = PrecisionPolicy::default();
        let mu = MuSpec::assumed(rat(5, 2)).unwrap();
        let c = candidate_denominators(&RealConst::Pi, &mu, &rat(1, 5), 10_000, &p).unwrap();
        for q in [3, 22, 333, 355, 710] {
            assert!(c.contains(&q), "{q}");
        }
        assert!(c.len() < 200);
        assert!(candidate_denominators(&RealConst::Pi, &MuSpec::exactly_two(), &rat(1, 10), 100, &p).is_none());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let p = PrecisionPolicy::default();
        let s = scan_good(&RealConst::Golden, &MuSpec::exactly_two(), &rat(1, 2), 50, &p).unwrap();
        assert!(!s.is_empty());
        let text = s.to_csv().unwrap();
        let rows = parse_records_csv(&text).unwrap();
        assert_eq!(rows.len(), s.records.len() + s.unknown.len());
        assert!(text.lines().skip(1).all(|l| !l.contains('e')));
        let back = GoodScanResult::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
