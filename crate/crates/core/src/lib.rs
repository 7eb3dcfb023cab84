//! Wildfire spread, sensor detection, carbon accounting and satellite
//! uplink capacity models.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the parallel
//! sweep harness and the command line live in the `firesat` crate.
//!
//! Units used throughout: planar positions in km, spread speeds in m/s,
//! time in hours (grid index) or seconds (`dt_s`), biomass in Mg/ha,
//! areas in km².

#![no_std]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod carbon;
pub mod envdata;
mod error;
pub mod evolution;
pub mod firekernel;
pub mod geom;
pub mod linkbudget;
pub(crate) mod math;
pub mod rng;
pub mod season;
pub mod sensors;

pub use error::{Error, Result};
pub use geom::{Point2, Rect};

/// Name of the deterministic generator used for every seeded draw in the
/// crate. Recorded in run manifests.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9, seed_from_u64), 53-bit uniform doubles";
