//! File formats, configuration, sweep harness and command-line front end
//! for the `firesat-core` wildfire and link-budget models.

pub mod cli;
pub mod config;
mod error;
pub mod harness;
pub mod io;
pub mod scenario;

pub use error::{Error, Result};
