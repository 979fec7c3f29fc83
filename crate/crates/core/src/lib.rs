//! Certified-precision toolkit for Diophantine approximation, continued
//! fractions and generalized Flint-Hills series.
//!
//! All real quantities travel as [`numkernel::CertReal`] enclosures; integer
//! and rational quantities are exact.

pub mod approx;
pub mod contfrac;
pub mod error;
pub mod numkernel;
pub mod partition;
pub mod rational;
pub mod series;
pub(crate) mod serde_util;

pub use error::{Error, Result};
