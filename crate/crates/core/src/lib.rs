//! Simulation and analysis toolkit for coherent time-domain cancellation of
//! modulated RF interference.
//!
//! The library synthesizes interference-plus-noise scenarios with known ground
//! truth, blindly demodulates and remodulates the interferer to subtract a
//! clean replica (with short-time sinusoidal and reference-filter baselines
//! for comparison), and evaluates the achieved interference rejection ratio
//! against closed-form predictions driven by estimator error-variance bounds.

pub mod buffer;
pub mod cancel;
pub mod classify;
pub mod config;
pub mod dsp;
pub mod error;
pub mod estimators;
pub mod io;
pub mod metrics;
pub mod seeding;
pub mod signals;
pub mod sweep;

pub use buffer::{Modulation, SignalBuffer, WaveformParams};
pub use error::{Error, Result};
