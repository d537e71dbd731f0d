//! Exact computation of the invariants behind the McKay correspondence for
//! finite matrix groups: conjugacy classes, ages, monomial valuations,
//! discrepancies, ramification indices and the fixed-subspace
//! stratification, together with the predicted Borel-Moore homology of a
//! crepant resolution of `V/G`.

pub mod cli;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod mckay;
pub mod par;
pub mod polyval;
pub mod strata;
pub mod weights;

pub use cyclo::CycNum;
pub use error::{Error, Result};
pub use linalg::{ExactMatrix, Subspace};
