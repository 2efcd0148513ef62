//! Hyperplane insertion/deletion coding theory on d-dimensional q-ary
//! arrays: edit balls, correcting-code predicates, constructive equivalence
//! witnesses, exhaustive statement verifiers, and confusability-graph
//! search for maximum codes at desk scale.

pub mod balls;
pub mod codes;
pub mod error;
pub mod lab;
pub mod search;
pub mod tensor;

pub use error::{Error, Result};
