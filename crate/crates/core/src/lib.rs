//! Exact computations for Lie triple systems with Nijenhuis operators:
//! operator checks, Nijenhuis representations, the cohomology of a
//! Nijenhuis operator, abelian extensions, and 2-term systems.
//!
//! All arithmetic is over the rationals. Every check evaluates identities
//! on basis tuples and reports violations with a witness tuple.

pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod extensions;
pub mod io;
pub mod linalg;
pub mod lts;
pub mod nrep;
pub mod operators;
pub mod rational;
pub mod report;
pub mod tensor;
pub mod twosys;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rational::Rational;
pub use report::{Report, Violation};
pub use tensor::Tensor;
