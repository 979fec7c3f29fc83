//! Certified partial sums with checkpoint and resume.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sinelike::SineLikeSpec;
use super::term::{term, SeriesParams};
use crate::error::{Error, Result};
use crate::numkernel::{CertReal, PrecisionPolicy, PrecisionStatus, Refined};

pub const DEFAULT_CHECKPOINT_EVERY: u64 = 1_000_000;
const DEFAULT_CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargestTerm {
    pub n: u64,
    pub value: CertReal,
}

/// Running state of `Σ_{i<=N} A(i)`; also the checkpoint format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSumLedger {
    #[serde(rename = "N")]
    pub n: u64,
    pub sum: CertReal,
    pub largest_term: LargestTerm,
    /// Indices whose term missed the width target at `max_bits`.
    pub wide_terms: Vec<u64>,
    /// Identifies the series, so a checkpoint is only resumed by the same one.
    pub series: String,
    pub policy: PrecisionPolicy,
}

impl PartialSumLedger {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad ledger: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumOptions {
    pub checkpoint_every: u64,
    /// Terms evaluated per batch.
    pub chunk: u64,
    pub parallel: bool,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions {
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            chunk: DEFAULT_CHUNK,
            parallel: true,
        }
    }
}

fn series_id(spec: &SineLikeSpec, params: &SeriesParams) -> String {
    format!("{}; {}", spec.describe(), params.describe())
}

fn eval_range(
    lo: u64,
    hi: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    policy: &PrecisionPolicy,
    parallel: bool,
) -> Result<Vec<Refined<CertReal>>> {
    if parallel {
        (lo..hi).into_par_iter().map(|n| term(n, spec, params, policy)).collect()
    } else {
        (lo..hi).map(|n| term(n, spec, params, policy)).collect()
    }
}

struct Acc {
    n: u64,
    sum: CertReal,
    largest: Option<LargestTerm>,
    wide: Vec<u64>,
}

fn run(
    mut acc: Acc,
    n_max: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    policy: &PrecisionPolicy,
    opts: &SumOptions,
    sink: &mut dyn FnMut(&PartialSumLedger) -> Result<()>,
) -> Result<PartialSumLedger> {
    if opts.checkpoint_every == 0 || opts.chunk == 0 {
        return Err(Error::Invalid("checkpoint_every and chunk must be positive".into()));
    }
    let id = series_id(spec, params);
    let snapshot = |acc: &Acc| PartialSumLedger {
        n: acc.n,
        sum: acc.sum.clone(),
        largest_term: acc.largest.clone().expect("at least one term"),
        wide_terms: acc.wide.clone(),
        series: id.clone(),
        policy: policy.clone(),
    };
    while acc.n < n_max {
        let start = acc.n + 1;
        let next_cp = (acc.n / opts.checkpoint_every + 1) * opts.checkpoint_every;
        let end = n_max.min(acc.n + opts.chunk).min(next_cp);
        let terms = eval_range(start, end + 1, spec, params, policy, opts.parallel)?;
        // Serial fold in ascending n keeps the result independent of scheduling.
        for (i, t) in terms.into_iter().enumerate() {
            let n = start + i as u64;
            if t.status == PrecisionStatus::Exhausted {
                acc.wide.push(n);
            }
            acc.sum = acc.sum.add(&t.value);
            if acc.largest.as_ref().map_or(true, |l| t.value.lo() > l.value.lo()) {
                acc.largest = Some(LargestTerm { n, value: t.value });
            }
        }
        acc.n = end;
        if acc.n % opts.checkpoint_every == 0 && acc.n < n_max {
            sink(&snapshot(&acc))?;
        }
    }
    Ok(snapshot(&acc))
}

/// `Σ_{n=1}^{N} A(n)` with every term enclosed and summed left to right.
pub fn partial_sum(
    n_max: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    policy: &PrecisionPolicy,
    opts: &SumOptions,
) -> Result<PartialSumLedger> {
    partial_sum_checkpointed(n_max, spec, params, policy, opts, &mut |_| Ok(()))
}

/// As [`partial_sum`], handing a ledger to `sink` every `checkpoint_every` terms.
pub fn partial_sum_checkpointed(
    n_max: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    policy: &PrecisionPolicy,
    opts: &SumOptions,
    sink: &mut dyn FnMut(&PartialSumLedger) -> Result<()>,
) -> Result<PartialSumLedger> {
    if n_max == 0 {
        return Err(Error::Domain("N must be >= 1".into()));
    }
    policy.validate()?;
    let acc = Acc {
        n: 0,
        sum: CertReal::from_int(0, policy.start_bits),
        largest: None,
        wide: vec![],
    };
    run(acc, n_max, spec, params, policy, opts, sink)
}

/// Continue a checkpoint up to `n_max`; the result matches an uninterrupted run.
pub fn resume_partial_sum(
    ledger: &PartialSumLedger,
    n_max: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    opts: &SumOptions,
    sink: &mut dyn FnMut(&PartialSumLedger) -> Result<()>,
) -> Result<PartialSumLedger> {
    let id = series_id(spec, params);
    if ledger.series != id {
        return Err(Error::Invalid(format!(
            "checkpoint is for {:?}, not {id:?}",
            ledger.series
        )));
    }
    if n_max < ledger.n {
        return Err(Error::ArgumentOrder(format!("checkpoint already covers N = {}", ledger.n)));
    }
    let acc = Acc {
        n: ledger.n,
        sum: ledger.sum.clone(),
        largest: Some(ledger.largest_term.clone()),
        wide: ledger.wide_terms.clone(),
    };
    run(acc, n_max, spec, params, &ledger.policy, opts, sink)
}

/// Stream `n,term_lo,term_hi` rows for `n` in `[first, last]`.
pub fn write_terms_csv<W: Write>(
    out: W,
    first: u64,
    last: u64,
    spec: &SineLikeSpec,
    params: &SeriesParams,
    policy: &PrecisionPolicy,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    w.write_record(["n", "term_lo", "term_hi"]).map_err(io)?;
    let mut n = first.max(1);
    while n <= last {
        let end = last.min(n + DEFAULT_CHUNK - 1);
        for (i, t) in eval_range(n, end + 1, spec, params, policy, true)?.into_iter().enumerate() {
            w.write_record([
                (n + i as u64).to_string(),
                t.value.lo().to_decimal_string(),
                t.value.hi().to_decimal_string(),
            ])
            .map_err(io)?;
        }
        n = end + 1;
    }
    w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    Ok(())
}
