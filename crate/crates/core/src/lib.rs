//! Exact and numerical tools for quaternionic modular forms on `SO(4,4)`.

pub mod classify;
pub mod cli;
pub mod error;
pub mod exact;
pub mod jacobi;
pub mod orbits;
pub mod pairspace;
pub mod qseries;
pub mod quaternionic;
pub mod siegel;
pub mod whittaker;

pub use error::{Error, Result};
