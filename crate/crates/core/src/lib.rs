//! Exact computations for lines meeting a projective variety: intersection
//! schemes, cycle types, secant and contact sheaves, their colengths and
//! splitting types, plus the closed-form dimension counts they are checked
//! against.

pub mod curvilinear;
pub mod error;
pub mod exact;
pub mod incidence;
pub mod nested;
pub mod scenario;
pub mod sheaf;
pub mod stratify;
pub mod suite;

pub use error::{Error, Result};
