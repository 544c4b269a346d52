//! Finite n-relative categories, truncated multisimplicial sets and the
//! constructions relating them.

pub mod corpus;
pub mod division;
pub mod enrichment;
pub mod error;
pub mod fincat;
pub mod msset;
pub mod nerve;
pub mod prescat;
pub mod relcat;
pub mod suite;

pub use error::{Error, Result};
