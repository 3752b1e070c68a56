//! Component-level BFCG theory for a generic Lie 2-group.

pub mod convergence;
pub mod canonical;
pub mod crossed_module;
pub mod dof;
pub mod dual;
pub mod lattice;
mod error;

pub use error::{Error, Result};
