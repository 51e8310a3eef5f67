//! Nonreciprocal optical transmission in a spinning whispering-gallery
//! resonator whose two counter-propagating modes couple to a squeezed
//! magnon mode.
//!
//! - [`model`]: parameter records, Fizeau shift, squeezing maps, validation.
//! - [`steady_state`]: mean-field solve, port outputs, T12/T21 and isolation.
//! - [`analysis`]: analytic isolation extrema, reciprocal points, brute-force oracle.
//! - [`sweep`]: 1D/2D parameter sweeps and named presets.
//! - [`cli`]: command-line front end and CSV/JSON/SVG emission.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
