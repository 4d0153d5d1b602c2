//! Consistent query answering under tuple-deletion repairs for disjunctive
//! embedded dependencies with inequalities.

pub mod classify;
pub mod cli;
pub mod entail;
pub mod error;
pub mod fo;
pub mod gadgets;
pub mod model;
mod names;
pub mod options;
pub mod random;
pub mod repair;
pub mod subsets;
pub mod syntax;
pub mod weakcons;

pub use error::{Error, Result};
