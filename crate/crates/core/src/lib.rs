//! Exact and numeric verification of constant-length Killing fields,
//! δ-vectors and invariant metrics on round spheres.

pub mod algebra;
pub mod clifford;
pub mod deltacheck;
pub mod error;
pub mod firey;
pub mod homspace;
pub mod killing;
pub mod report;
pub mod spin9;
pub mod suites;
pub mod textfmt;

pub use error::{Error, Result};
