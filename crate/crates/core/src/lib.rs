//! Exact enumeration, verification and classification of maximal
//! m-distance sets that contain the Johnson graph representation
//! `J(n, m) = (1^m, 0^(n-m))^P`.
//!
//! All geometry is exact. Coordinates are rationals (or multiquadratic
//! surds for the `J(n-1, 2)` setting); squared distances are compared by
//! exact equality only.

pub mod error;
pub mod exactnum;
pub mod families;
pub mod maximality;
pub mod spectra;
pub mod subjohnson;
pub mod theorem;

pub use error::{Error, Result};
pub use exactnum::{QuadNum, Rational};
pub use families::{CandidateFamily, IProfile, Parameters};
