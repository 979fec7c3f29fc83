//! One function per subcommand. Each writes its main output through
//! [`RunConfig::emit`] and a short summary to standard error.

use std::path::{Path, PathBuf};

use dioph::approx::{audit_pairs, growth_check, growth_check_sequence, scan_all, scan_good, scan_good_exhaustive, window_count, GrowthReport};
use dioph::contfrac::{expand_prefix, expand_source, sondow_estimate, CFExpansion, MuSpec};
use dioph::numkernel::{Enclose, RealConst};
use dioph::partition::{cell_sum_report, plan};
use dioph::rational::{format_rational, parse_rational};
use dioph::series::{
    divergence_certificate, partial_sum_checkpointed, resume_partial_sum, write_terms_csv, PartialSumLedger,
    Profile, SeriesParams, SineKind, SineLikeSpec, SumOptions,
};
use dioph::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::config::{read, AlphaSource, Format, RunConfig};
use crate::error::{CliError, EXIT_PRECISION};

fn rational(flag: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::other(format!("--{flag}: {e}")))
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::other(e.to_string()))
}

fn cf_csv(cf: &CFExpansion) -> Result<String, CliError> {
    let rows = (0..cf.len())
        .map(|n| {
            vec![
                n.to_string(),
                cf.terms()[n].to_string(),
                cf.numerators()[n].to_string(),
                cf.denominators()[n].to_string(),
            ]
        })
        .collect();
    csv_text(&["n", "a", "p", "q"], rows)
}

fn emit_cf(cfg: &RunConfig, cf: &CFExpansion) -> Result<(), CliError> {
    match cfg.output {
        Format::Json => cfg.emit(&serde_json::to_string_pretty(cf)?),
        Format::Csv => cfg.emit(&cf_csv(cf)?),
    }
}

fn digits(n: &BigInt) -> usize {
    n.magnitude().to_string().len()
}

/// Abbreviate huge integers for summaries.
fn short(n: &BigInt) -> String {
    let d = digits(n);
    if d <= 24 {
        n.to_string()
    } else {
        format!("<{d} digits>")
    }
}

fn cf_summary(cf: &CFExpansion, bits: u32) -> String {
    let mut s = format!("{} terms", cf.len());
    if let (Some(p), Some(q)) = (cf.numerators().last(), cf.denominators().last()) {
        s += &format!(", last convergent {}/{}", short(p), short(q));
    }
    if let Ok(est) = sondow_estimate(cf, bits) {
        if let Some(e) = est.last() {
            s += &format!(", running estimate {:.6} at n = {}", e.approx, e.n);
        }
    }
    s
}

/// First `n_terms` partial quotients of α, or of the supplied expansion.
pub fn cmd_cf(cfg: &RunConfig, n_terms: usize) -> Result<(), CliError> {
    let alpha = cfg.alpha_source.load()?;
    let (cf, short_by) = match &alpha {
        RealConst::ContinuedFraction(cf) => {
            let have = cf.len();
            (cf.truncated(n_terms), (have < n_terms).then_some(have))
        }
        _ => match expand_source(&alpha, n_terms, &cfg.precision) {
            Ok(cf) => (cf, None),
            Err(Error::ExpansionExhausted { certified }) => {
                let cf = expand_prefix(&alpha.enclose(cfg.precision.max_bits)?, n_terms);
                (cf, Some(certified))
            }
            Err(e) => return Err(e.into()),
        },
    };
    emit_cf(cfg, &cf)?;
    eprintln!("cf: {}", cf_summary(&cf, cfg.precision.start_bits));
    match short_by {
        None => Ok(()),
        Some(certified) => Err(CliError {
            code: EXIT_PRECISION,
            message: format!(
                "only {certified} of {n_terms} terms certified for {} at max_bits = {}; partial output written",
                cfg.alpha_source, cfg.precision.max_bits
            ),
        }),
    }
}

/// Default measure hypothesis for the configured α.
fn default_mu(src: &AlphaSource) -> MuSpec {
    match src {
        AlphaSource::Pi => MuSpec::pi_literature(),
        _ => MuSpec::exactly_two(),
    }
}

fn mu_spec(cfg: &RunConfig, mu: Option<&str>) -> Result<MuSpec, CliError> {
    match mu {
        Some(m) => Ok(MuSpec::assumed(rational("mu", m)?)?),
        None => Ok(default_mu(&cfg.alpha_source)),
    }
}

/// The real whose reciprocal the records approximate.
fn record_target(cfg: &RunConfig, direct: bool) -> Result<RealConst, CliError> {
    let alpha = cfg.alpha_source.load()?;
    Ok(if direct { alpha.reciprocal() } else { alpha })
}

fn growth_line(g: &GrowthReport) -> String {
    format!(
        "growth {}: gamma = {:.4}, tail slope = {:.4}, C = {:.4e} over {} terms",
        if g.pass { "PASS" } else { "FAIL" },
        g.gamma,
        g.tail_slope,
        g.constant,
        g.rows.len()
    )
}

pub struct ScanArgs {
    pub mu: Option<String>,
    pub eps1: String,
    pub eps2: Option<String>,
    pub q_max: u64,
    pub exhaustive: bool,
    pub direct: bool,
}

pub fn cmd_scan(cfg: &RunConfig, a: &ScanArgs) -> Result<(), CliError> {
    let target = record_target(cfg, a.direct)?;
    let mu = mu_spec(cfg, a.mu.as_deref())?;
    let eps1 = rational("eps1", &a.eps1)?;
    let scan = if a.exhaustive {
        scan_good_exhaustive(&target, &mu, &eps1, a.q_max, &cfg.precision)?
    } else {
        scan_good(&target, &mu, &eps1, a.q_max, &cfg.precision)?
    };
    match cfg.output {
        Format::Csv => cfg.emit(&scan.to_csv()?)?,
        Format::Json => cfg.emit(&scan.to_json()?)?,
    }
    eprintln!(
        "scan: {} good, {} unknown, {} denominators evaluated up to {} (mu = {}, eps1 = {})",
        scan.records.len(),
        scan.unknown.len(),
        scan.evaluated,
        a.q_max,
        format_rational(&mu.mu),
        format_rational(&eps1)
    );
    if let Some(e2) = &a.eps2 {
        let g = growth_check(&scan, &rational("eps2", e2)?)?;
        eprintln!("{}", growth_line(&g));
    }
    Ok(())
}

pub struct SumArgs {
    pub preset: Option<String>,
    pub u: Option<String>,
    pub v: Option<String>,
    pub sine: Option<String>,
    pub b1: Option<String>,
    pub b2: Option<String>,
    pub n: u64,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_every: u64,
    pub resume: Option<PathBuf>,
    pub terms_csv: Option<PathBuf>,
    pub serial: bool,
}

fn sine_kind(s: &str) -> Result<SineKind, CliError> {
    match s {
        "abs-sin" => Ok(SineKind::AbsSin),
        "lattice" => Ok(SineKind::LatticeDistance),
        _ => match s.strip_prefix("table:") {
            Some(p) => Ok(SineKind::CustomTable(Profile::parse(&read(Path::new(p))?)?)),
            None => Err(CliError::other(format!(
                "unknown sine kind {s:?} (expected abs-sin, lattice or table:PATH)"
            ))),
        },
    }
}

fn series_setup(cfg: &RunConfig, a: &SumArgs) -> Result<(SineLikeSpec, SeriesParams), CliError> {
    let (spec, mut params) = match &a.sine {
        Some(kind) => {
            let need = |flag: &str, v: &Option<String>| {
                v.as_deref()
                    .ok_or_else(|| CliError::other(format!("--sine needs --{flag}")))
                    .and_then(|s| rational(flag, s))
            };
            let spec = SineLikeSpec::new(cfg.alpha_source.load()?, need("b1", &a.b1)?, need("b2", &a.b2)?, sine_kind(kind)?)?;
            (spec, SineLikeSpec::preset("flint-hills")?.1)
        }
        None => SineLikeSpec::preset(a.preset.as_deref().unwrap_or("flint-hills"))?,
    };
    if let Some(u) = &a.u {
        params = SeriesParams::new(rational("u", u)?, params.v.clone())?;
    }
    if let Some(v) = &a.v {
        params = SeriesParams::new(params.u.clone(), rational("v", v)?)?;
    }
    Ok((spec, params))
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| CliError::other(format!("{}: {e}", path.display())))
}

fn ledger_csv(l: &PartialSumLedger) -> Result<String, CliError> {
    csv_text(
        &["N", "sum_lo", "sum_hi", "largest_n", "largest_lo", "largest_hi", "wide_terms"],
        vec![vec![
            l.n.to_string(),
            l.sum.lo().to_decimal_string(),
            l.sum.hi().to_decimal_string(),
            l.largest_term.n.to_string(),
            l.largest_term.value.lo().to_decimal_string(),
            l.largest_term.value.hi().to_decimal_string(),
            l.wide_terms.len().to_string(),
        ]],
    )
}

pub fn cmd_sum(cfg: &RunConfig, a: &SumArgs) -> Result<(), CliError> {
    let (spec, params) = series_setup(cfg, a)?;
    let opts = SumOptions {
        checkpoint_every: a.checkpoint_every.max(1),
        parallel: !a.serial,
        ..SumOptions::default()
    };
    let mut sink = |l: &PartialSumLedger| -> dioph::Result<()> {
        if let Some(p) = &a.checkpoint {
            write_atomic(p, &l.to_json()?).map_err(|e| Error::Invalid(e.message))?;
        }
        Ok(())
    };
    let ledger = match &a.resume {
        Some(p) => {
            let start = PartialSumLedger::from_json(&read(p)?)?;
            resume_partial_sum(&start, a.n, &spec, &params, &opts, &mut sink)?
        }
        None => partial_sum_checkpointed(a.n, &spec, &params, &cfg.precision, &opts, &mut sink)?,
    };
    sink(&ledger)?;
    if let Some(p) = &a.terms_csv {
        let f = std::fs::File::create(p).map_err(|e| CliError::other(format!("{}: {e}", p.display())))?;
        write_terms_csv(std::io::BufWriter::new(f), 1, a.n, &spec, &params, &ledger.policy)?;
    }
    match cfg.output {
        Format::Json => cfg.emit(&ledger.to_json()?)?,
        Format::Csv => cfg.emit(&ledger_csv(&ledger)?)?,
    }
    eprintln!(
        "sum: {} {}, N = {}: {} (largest term at n = {}, {} wide terms)",
        spec.describe(),
        params.describe(),
        ledger.n,
        ledger.sum,
        ledger.largest_term.n,
        ledger.wide_terms.len()
    );
    Ok(())
}

pub struct ConstructArgs {
    pub u: String,
    pub v: String,
    pub b2: String,
    pub terms: usize,
    pub digit_budget: u64,
    pub prefix: Option<String>,
    pub report: Option<PathBuf>,
}

fn parse_prefix(s: &str) -> Result<CFExpansion, CliError> {
    let terms = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::other(format!("--prefix: {e}")))?;
    Ok(CFExpansion::from_terms(terms)?)
}

pub fn cmd_construct(cfg: &RunConfig, a: &ConstructArgs) -> Result<(), CliError> {
    let prefix = match &a.prefix {
        Some(p) => parse_prefix(p)?,
        None => dioph::contfrac::default_prefix(),
    };
    let (cf, report) = divergence_certificate(
        &rational("u", &a.u)?,
        &rational("v", &a.v)?,
        &rational("b2", &a.b2)?,
        a.terms,
        &prefix,
        a.digit_budget,
        &cfg.precision,
    )?;
    emit_cf(cfg, &cf)?;
    if let Some(p) = &a.report {
        write_atomic(p, &serde_json::to_string_pretty(&report)?)?;
    }
    for c in &report.checks {
        let q: BigInt = c.q.parse().expect("decimal integer");
        let verdict = match c.passes {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "UNDECIDED",
        };
        eprintln!("  n = {:>2}  q_n {:<24}  A(q_n) > 1: {verdict}", c.n, short(&q));
    }
    eprintln!(
        "construct: {}; certificate {}",
        cf_summary(&cf, cfg.precision.start_bits),
        if report.all_pass { "PASS" } else { "FAIL" }
    );
    Ok(())
}

pub struct PlanArgs {
    pub mu: String,
    pub u: String,
    pub v: String,
    pub safety: String,
    pub cells: Option<u64>,
}

/// Term family used for per-cell sums: `|sin|` for π, the lattice distance otherwise.
fn cell_series(cfg: &RunConfig, alpha: RealConst) -> Result<SineLikeSpec, CliError> {
    Ok(match cfg.alpha_source {
        AlphaSource::Pi => SineLikeSpec::preset("flint-hills")?.0,
        _ => SineLikeSpec::new(alpha, BigRational::from_integer(1.into()), BigRational::from_integer(1.into()), SineKind::LatticeDistance)?,
    })
}

fn plan_csv(p: &dioph::partition::PartitionPlan) -> Result<String, CliError> {
    let rows = (1..=p.k())
        .map(|i| {
            vec![
                format!("T{i}"),
                format_rational(&p.cuts[i - 1]),
                format_rational(&p.cuts[i]),
                format_rational(&p.b[i - 1]),
                format_rational(&p.predicted_exponent(i)),
            ]
        })
        .collect();
    csv_text(&["cell", "a_lo", "a_hi", "budget", "predicted_exponent"], rows)
}

pub fn cmd_plan(cfg: &RunConfig, a: &PlanArgs) -> Result<(), CliError> {
    let mu = MuSpec::assumed(rational("mu", &a.mu)?)?;
    let params = SeriesParams::new(rational("u", &a.u)?, rational("v", &a.v)?)?;
    let p = plan(&mu, &params, &rational("safety", &a.safety)?)?;
    eprintln!(
        "plan: k = {} cells, x = {}, y = {}, margin = {}",
        p.k(),
        format_rational(&p.x),
        format_rational(&p.y),
        format_rational(&p.margin)
    );
    let Some(q_max) = a.cells else {
        return match cfg.output {
            Format::Json => cfg.emit(&p.to_json()?),
            Format::Csv => cfg.emit(&plan_csv(&p)?),
        };
    };
    let alpha = cfg.alpha_source.load()?;
    let (records, failed) = scan_all(&alpha, q_max, &cfg.precision);
    let report = cell_sum_report(&records, &p, &cell_series(cfg, alpha)?, &cfg.precision)?;
    match cfg.output {
        Format::Json => cfg.emit(&serde_json::to_string_pretty(&json!({ "plan": p, "cells": report }))?)?,
        Format::Csv => cfg.emit(&report.to_csv()?)?,
    }
    for r in &report.rows {
        eprintln!("  {:<8} {:>7} terms  sum {}", r.cell, r.count, r.sum);
    }
    if !failed.is_empty() {
        eprintln!("plan: {} denominators had no certified record", failed.len());
    }
    Ok(())
}

pub struct DensityArgs {
    pub mu: Option<String>,
    pub eps1: String,
    pub eps2: String,
    pub q_max: u64,
    pub sequence: Option<PathBuf>,
    pub direct: bool,
}

fn read_sequence(path: &Path) -> Result<Vec<BigInt>, CliError> {
    let mut qs = vec![];
    for (i, line) in read(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let q: BigInt = line
            .parse()
            .map_err(|e| CliError::other(format!("{} line {}: {e}", path.display(), i + 1)))?;
        if qs.last().is_some_and(|p| &q <= p) {
            return Err(CliError::other(format!(
                "{} line {}: sequence must increase strictly",
                path.display(),
                i + 1
            )));
        }
        qs.push(q);
    }
    Ok(qs)
}

fn growth_csv(g: &GrowthReport) -> Result<String, CliError> {
    let rows = g
        .rows
        .iter()
        .map(|r| vec![r.n.to_string(), r.q.clone(), r.floor.to_string(), r.margin.to_string()])
        .collect();
    csv_text(&["n", "q", "floor", "margin"], rows)
}

/// Growth of the good denominators against the polynomial floor, window
/// counts, and the combined-exponent audit of close pairs.
pub fn cmd_density(cfg: &RunConfig, a: &DensityArgs) -> Result<(), CliError> {
    let mu = mu_spec(cfg, a.mu.as_deref())?;
    let eps1 = rational("eps1", &a.eps1)?;
    let eps2 = rational("eps2", &a.eps2)?;
    let (growth, doc) = match &a.sequence {
        Some(path) => {
            let qs = read_sequence(path)?;
            let g = growth_check_sequence(&qs, &mu, &eps1, &eps2)?;
            let doc = json!({ "source": path.display().to_string(), "growth": g });
            (g, doc)
        }
        None => {
            let target = record_target(cfg, a.direct)?;
            let scan = scan_good(&target, &mu, &eps1, a.q_max, &cfg.precision)?;
            let g = growth_check(&scan, &eps2)?;
            let windows: Vec<_> = scan
                .records
                .iter()
                .map(|r| {
                    let w = window_count(&scan, &r.q, &eps2);
                    json!({ "q": r.q.to_string(), "count": w.count, "unknown": w.unknown, "truncated": w.truncated })
                })
                .collect();
            let audit = audit_pairs(&scan, &eps2, cfg.precision.start_bits.max(256))?;
            eprintln!(
                "audit: {} close pairs, {} checked, {} violations, {} undecided",
                audit.close_pairs, audit.checked, audit.violations, audit.undecided
            );
            let doc = json!({
                "alpha": scan.alpha_id,
                "q_max": a.q_max,
                "good": scan.records.len(),
                "unknown": scan.unknown.len(),
                "growth": g,
                "windows": windows,
                "audit": audit,
            });
            (g, doc)
        }
    };
    let doc = json!({
        "mu": mu,
        "eps1": format_rational(&eps1),
        "eps2": format_rational(&eps2),
        "report": doc,
    });
    match cfg.output {
        Format::Json => cfg.emit(&serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => cfg.emit(&growth_csv(&growth)?)?,
    }
    eprintln!("{}", growth_line(&growth));
    Ok(())
}
