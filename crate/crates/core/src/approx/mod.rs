//! Approximation exponents of `1/α`, good-approximation scans and density checks.

pub mod density;
pub mod record;
pub mod scan;

pub use density::{audit_pairs, growth_check, growth_check_sequence, window_count, GrowthReport, PairAudit, WindowCount};
pub use record::{
    are_close, combine, combined_error, combined_exponent_bound, exponent, exponent_forms, is_good,
    legendre_threshold, slack_threshold, ApproxRecord, Goodness,
};
pub use scan::{
    candidate_denominators, parse_records_csv, records_to_csv, scan_all, scan_good, scan_good_exhaustive,
    GoodScanResult, UnknownEntry,
};
