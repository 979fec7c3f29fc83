//! Certified arbitrary-precision real arithmetic.

pub mod cert;
pub mod consts;
pub mod dyadic;
pub mod fixed;
pub mod policy;
pub mod reduce;

pub use cert::CertReal;
pub use consts::{ln2_enclosure, pi_enclosure, Enclose, RealConst, RecipOf, HARD_MAX_BITS};
pub use dyadic::{Dyadic, Rounding};
pub use policy::{PrecisionPolicy, PrecisionStatus, Refined};
pub use reduce::{nearest_lattice_distance, reduce_certified, sin_abs_enclosure, LatticePoint};
