//! Space-time-frequency non-stationary geometry-based stochastic channel
//! simulator for terahertz ultra-massive MIMO links.

pub mod channel;
pub mod cli;
pub mod cluster;
pub mod config;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod rays;
pub mod output;
pub mod rng;
pub mod run;
pub mod scattering;
pub mod scenario;
pub mod stats;

pub use error::{GbsmError, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
