//! Bucketing of certified exponents into partition cells.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::plan::PartitionPlan;
use crate::approx::ApproxRecord;
use crate::contfrac::MuSpec;
use crate::error::{Error, Result};
use crate::numkernel::{CertReal, PrecisionPolicy};
use crate::rational::{format_rational, int};
use crate::series::{term, SineLikeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cell3 {
    /// `r >= μ + y`.
    S1,
    S2,
    /// `r < μ − x`.
    S3,
    Unknown,
}

fn lo(r: &ApproxRecord) -> BigRational {
    r.exponent.lo().to_rational()
}

fn hi(r: &ApproxRecord) -> BigRational {
    r.exponent.hi().to_rational()
}

pub fn classify3(record: &ApproxRecord, mu: &MuSpec, x: &BigRational, y: &BigRational) -> Cell3 {
    let top = &mu.mu + y;
    let bottom = &mu.mu - x;
    let (l, h) = (lo(record), hi(record));
    if l >= top {
        Cell3::S1
    } else if h < bottom {
        Cell3::S3
    } else if l >= bottom && h < top {
        Cell3::S2
    } else {
        Cell3::Unknown
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FineCell {
    S3,
    /// `T_i`: exponent in `[a_{i−1}, a_i)`, 1-based.
    T(usize),
    S1,
    Unknown,
}

impl FineCell {
    pub fn label(&self) -> String {
        match self {
            FineCell::S3 => "S3".into(),
            FineCell::T(i) => format!("T{i}"),
            FineCell::S1 => "S1".into(),
            FineCell::Unknown => "unknown".into(),
        }
    }
}

pub fn classify_fine(record: &ApproxRecord, plan: &PartitionPlan) -> FineCell {
    let (l, h) = (lo(record), hi(record));
    let cuts = &plan.cuts;
    if h < cuts[0] {
        return FineCell::S3;
    }
    if l >= cuts[cuts.len() - 1] {
        return FineCell::S1;
    }
    // Last cut <= l; the cell is certain when h stays below the next cut.
    let i = cuts.partition_point(|c| c <= &l);
    if i == 0 || i == cuts.len() {
        return FineCell::Unknown;
    }
    if h < cuts[i] {
        FineCell::T(i)
    } else {
        FineCell::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellRow {
    pub cell: String,
    pub count: usize,
    pub sum: CertReal,
    /// For `T_i` cells only.
    pub predicted_exponent: Option<String>,
    /// Predicted exponent at most 1.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellReport {
    pub rows: Vec<CellRow>,
    pub flagged: usize,
}

impl CellReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(vec![]);
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        w.write_record(["cell", "count", "sum_lo", "sum_hi", "predicted_exponent", "flagged"])
            .map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.cell.clone(),
                r.count.to_string(),
                r.sum.lo().to_decimal_string(),
                r.sum.hi().to_decimal_string(),
                r.predicted_exponent.clone().unwrap_or_default(),
                r.flagged.to_string(),
            ])
            .map_err(io)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?)
            .map_err(|e| Error::Invalid(e.to_string()))
    }
}

/// Per-cell counts and certified term sums over `records` (ascending `q`),
/// with the predicted decay exponent of each `T_i`.
pub fn cell_sum_report(
    records: &[ApproxRecord],
    plan: &PartitionPlan,
    spec: &SineLikeSpec,
    policy: &PrecisionPolicy,
) -> Result<CellReport> {
    let k = plan.k();
    let mut cells: Vec<FineCell> = vec![FineCell::S3];
    cells.extend((1..=k).map(FineCell::T));
    cells.extend([FineCell::S1, FineCell::Unknown]);
    let index = |c: FineCell| match c {
        FineCell::S3 => 0,
        FineCell::T(i) => i,
        FineCell::S1 => k + 1,
        FineCell::Unknown => k + 2,
    };
    let terms: Vec<(FineCell, CertReal)> = records
        .par_iter()
        .map(|r| {
            let q = r
                .q
                .to_u64()
                .ok_or_else(|| Error::Domain(format!("denominator {} too large for a term", r.q)))?;
            Ok((classify_fine(r, plan), term(q, spec, &plan.params, policy)?.value))
        })
        .collect::<Result<_>>()?;
    let zero = CertReal::from_int(BigInt::from(0), policy.start_bits);
    let mut rows: Vec<CellRow> = cells
        .iter()
        .map(|c| {
            let predicted = match c {
                FineCell::T(i) => Some(plan.predicted_exponent(*i)),
                _ => None,
            };
            CellRow {
                cell: c.label(),
                count: 0,
                sum: zero.clone(),
                flagged: predicted.as_ref().is_some_and(|p| p <= &int(1)),
                predicted_exponent: predicted.as_ref().map(format_rational),
            }
        })
        .collect();
    for (c, t) in terms {
        let row = &mut rows[index(c)];
        row.count += 1;
        row.sum = row.sum.add(&t);
    }
    let flagged = rows.iter().filter(|r| r.flagged).count();
    Ok(CellReport { rows, flagged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{Dyadic, PrecisionStatus};
    use crate::partition::plan;
    use crate::rational::rat;
    use crate::series::SeriesParams;

    fn rec(lo: f64, hi: f64) -> ApproxRecord {
        let e = CertReal::new(Dyadic::from_f64(lo).unwrap(), Dyadic::from_f64(hi).unwrap(), 64).unwrap();
        ApproxRecord {
            q: BigInt::from(7),
            p: BigInt::from(2),
            signed_error: e.clone(),
            error: e.clone(),
            exponent: e,
            status: PrecisionStatus::Met,
        }
    }

    #[test]
    fn three_cells() {
        let mu = MuSpec::assumed(rat(5, 2)).unwrap();
        let (x, y) = (rat(3, 10), rat(2, 10));
        assert_eq!(classify3(&rec(2.9, 3.0), &mu, &x, &y), Cell3::S1);
        assert_eq!(classify3(&rec(2.0, 2.1), &mu, &x, &y), Cell3::S3);
        assert_eq!(classify3(&rec(2.3, 2.4), &mu, &x, &y), Cell3::S2);
        assert_eq!(classify3(&rec(2.1, 2.3), &mu, &x, &y), Cell3::Unknown);
    }

    fn fixture_plan() -> PartitionPlan {
        let mu = MuSpec::assumed(rat(12, 5)).unwrap();
        plan(&mu, &SeriesParams::new(int(3), int(2)).unwrap(), &rat(1, 2)).unwrap()
    }

    #[test]
    fn fine_cells() {
        let p = fixture_plan();
        let c = |i: usize| p.cuts[i].to_f64().unwrap();
        let mid = (c(0) + c(1)) / 2.0;
        assert_eq!(classify_fine(&rec(mid, mid), &p), FineCell::T(1));
        assert_eq!(classify_fine(&rec(1.0, 1.1), &p), FineCell::S3);
        assert_eq!(classify_fine(&rec(4.0, 4.1), &p), FineCell::S1);
        assert_eq!(classify_fine(&rec(c(1) - 1e-9, c(1) + 1e-9), &p), FineCell::Unknown);
        let last = p.k();
        let m = (c(last - 1) + c(last)) / 2.0;
        assert_eq!(classify_fine(&rec(m, m), &p), FineCell::T(last));
    }

    #[test]
    fn empty_report() {
        let p = fixture_plan();
        let (s, _) = SineLikeSpec::preset("flint-hills").unwrap();
        let r = cell_sum_report(&[], &p, &s, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.rows.len(), p.k() + 3);
        assert_eq!(r.flagged, 0);
        assert!(r.rows.iter().all(|row| row.count == 0 && row.sum.lo().is_zero() && row.sum.hi().is_zero()));
        assert!(r.to_csv().unwrap().starts_with("cell,count"));
    }
}
