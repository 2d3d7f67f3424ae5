//! Link-level simulator for directional-modulation secure transmission aided
//! by an intelligent reflecting surface (IRS).
//!
//! The pipeline runs bottom-up:
//!
//! - [`numerics`]: small dense complex containers, the Gaussian tail function
//!   and power unit conversions.
//! - [`geometry`]: positions, angles, distances and free-space path losses.
//! - [`arrays`]: steering vectors, the Alice→IRS cascade matrix and the IRS
//!   phase matrix.
//! - [`transmitter`]: precoders, the artificial-noise projector and the
//!   composite transmit signal.
//! - [`secrecy`]: SNR/SINR, BER, rates and the secrecy rate, with and without
//!   the IRS.
//! - [`config`], [`sweep`] and [`csv`]: scenario files, the experiment sweeps
//!   and their CSV output, driven by the `dmirs` binary.

pub mod arrays;
pub mod config;
pub mod csv;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod secrecy;
pub mod sweep;
pub mod transmitter;

pub use config::{parse_config, Scenario};
pub use error::{Error, Result};
pub use geometry::{LinkBudget, PathLossCombine, Position};
pub use secrecy::{AnMode, SecrecyMetrics};
pub use sweep::SweepResult;
