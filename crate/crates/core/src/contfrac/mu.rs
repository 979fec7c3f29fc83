//! The irrationality measure as an explicit hypothesis.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serde_util::rational_str;
use crate::rational::{int, rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuProvenance {
    /// Supplied by the user as a scenario.
    Assumed,
    /// Known by construction.
    Constructed,
    /// An upper bound from the literature.
    LiteratureBound,
}

/// An irrationality measure value together with where it came from.
/// It is never computed from finitely many digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuSpec {
    #[serde(with = "rational_str")]
    pub mu: BigRational,
    pub provenance: MuProvenance,
}

impl MuSpec {
    pub fn new(mu: BigRational, provenance: MuProvenance) -> Result<Self> {
        if mu < int(2) {
            return Err(Error::Domain(format!(
                "irrationality measure must be >= 2, got {}",
                crate::rational::format_rational(&mu)
            )));
        }
        Ok(MuSpec { mu, provenance })
    }

    pub fn assumed(mu: BigRational) -> Result<Self> {
        Self::new(mu, MuProvenance::Assumed)
    }

    pub fn exactly_two() -> Self {
        MuSpec {
            mu: int(2),
            provenance: MuProvenance::Assumed,
        }
    }

    /// Published upper bound for π, 7.104.
    pub fn pi_literature() -> Self {
        MuSpec {
            mu: rat(7104, 1000),
            provenance: MuProvenance::LiteratureBound,
        }
    }

    /// `1 + u/v`, the measure forced by the divergent construction.
    pub fn constructed(u: &BigRational, v: &BigRational) -> Result<Self> {
        Self::new(int(1) + u / v, MuProvenance::Constructed)
    }
}
