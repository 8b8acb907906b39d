//! Conically averaged operators and relaxed splitting algorithms for
//! generalized monotone inclusions.

pub mod algorithms;
pub mod calculus;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod resolvents;

pub use error::{Error, Result};
pub use hilbert::Vector;
pub use linalg::Matrix;
