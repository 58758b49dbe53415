//! Wideband terahertz direction finding for uniform linear arrays whose
//! steering vectors are distorted by beam-split and by direction-dependent
//! mutual coupling.
//!
//! The crate synthesizes subarrayed radar echoes ([`scene_synth`]), estimates
//! directions with MUSIC variants including the alternating beam-split and
//! coupling calibrated estimator ([`estimator`]), and drives Monte-Carlo
//! experiments that emit CSV tables ([`harness`]).

pub mod array_model;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod harness;
pub mod numerics;
pub mod scene_synth;

pub use error::{Error, Result};
pub use exec::Execution;
