//! Exact symbolic verification engine for the graded algebra of a deformed
//! Chern-Simons-matter theory in N=3 harmonic superspace.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod derivation;
pub mod dsl;
pub mod error;
pub mod gauge;
pub mod linsolve;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod star;
pub mod superspace;

pub use error::{Error, Result};
