//! Exact continued fractions: expansion, convergents, error brackets and
//! the fast-growth constructor.

pub mod construct;
pub mod estimates;
pub mod expansion;
pub mod mu;

pub use construct::{construct_divergent, default_prefix, DEFAULT_DIGIT_BUDGET};
pub use estimates::{convergent_error_bounds, running_max, sondow_estimate, RunningEstimate};
pub use expansion::{expand, expand_prefix, expand_source, CFExpansion};
pub use mu::{MuProvenance, MuSpec};
