//! Sine-like functions and generalized Flint-Hills terms and partial sums.

pub mod divergence;
pub mod sinelike;
pub mod sum;
pub mod term;

pub use divergence::{divergence_certificate, ConvergentCheck, DivergenceReport};
pub use sinelike::{tight_sin_constants, Profile, SineKind, SineLikeSpec};
pub use sum::{
    partial_sum, partial_sum_checkpointed, resume_partial_sum, write_terms_csv, LargestTerm, PartialSumLedger,
    SumOptions, DEFAULT_CHECKPOINT_EVERY,
};
pub use term::{bound_chain_holds, term, term_at, term_lower_bound, term_upper_bound, SeriesParams};
