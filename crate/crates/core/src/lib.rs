//! Capacity simulator for single-stream indoor mmWave links assisted by a
//! reconfigurable intelligent surface (RIS) mounted on the floor between two
//! parallel walls.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`] places the transmit array, receive array and RIS elements
//!   in a 2D side view and derives every distance and direction cosine.
//! - [`channel`] turns those distances into the normalized cascade channel
//!   `H = k V F U` (and the unnormalized free-space form used to check it).
//! - [`schemes`] holds the four phase-optimization schemes and their
//!   capacity formulas.
//! - [`approx`] evaluates the array-factor approximation of the RIS-only gain.
//! - [`oracle`] provides brute-force and local-search validators.
//! - [`sim`] drives Monte Carlo sweeps, parses plan files and writes CSV.
//!
//! Data-parallel loops (Monte Carlo trials, oracle enumeration) go through
//! [`Execution`]; with the `parallel` feature disabled every loop runs
//! sequentially and produces identical results.

pub mod approx;
pub mod channel;
pub mod cli;
mod error;
mod exec;
pub mod geometry;
mod matrix;
pub mod oracle;
pub mod schemes;
pub mod sim;

pub use error::{Error, Result};
pub use exec::Execution;
pub use matrix::Matrix;
