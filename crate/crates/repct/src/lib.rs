//! Critical-threshold analysis for the two-dimensional restricted
//! Euler-Poisson system.
//!
//! The velocity gradient of a pressureless flow with a normalized Poisson
//! forcing closes into a 2x2 matrix ODE coupled to the density along
//! particle paths. In two space dimensions the spectral gap of that matrix
//! scales like the squared density, which collapses the dynamics onto a
//! (density, divergence) phase plane governed by a single parameter: the
//! initial gap to density-squared ratio. Whether a given initial state
//! survives for all time or loses regularity in finite time is decided by
//! explicit threshold surfaces in that plane.
//!
//! The crate provides:
//!
//! * [`spectral`]: gradient tensors, their invariants, and validated
//!   initial data.
//! * [`thresholds`]: closed-form threshold surfaces, rest points of the
//!   reduced system, and region classification.
//! * [`dynamics`]: an adaptive embedded Runge-Kutta integrator for the
//!   reduced and full systems, with breakdown-time bracketing and the
//!   conserved quantity used to monitor accuracy.
//! * [`experiments`]: empirical threshold measurement by bisection,
//!   parallel parameter sweeps, and phase-portrait extraction.
//! * [`verify`]: a self-contained suite of acceptance and property checks
//!   cross-validating the closed forms against simulation.
//! * [`cli`]: the `repct` command-line front end.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

// validation comparisons are written as !(x > 0.0) so NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
mod rk45;
pub mod spectral;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
pub use spectral::{beta_of, Beta, GradientTensor, InitialConfig};
pub use thresholds::{classify, CriticalPoints, Region, RegionVerdict};
