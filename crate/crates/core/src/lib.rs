//! Secure transmission toward a flying UAV receiver with a ground
//! uniform linear array.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: array steering vectors, flight geometry, path loss and the
//!   per-sample [`LinkState`].
//! - [`rates`]: achievable rates at Bob and Eve and the resulting secrecy rate.
//! - [`beamforming`]: closed-form Max-SLNR message beamformer and Max-ANLNR
//!   artificial-noise beamformer.
//! - [`power_allocation`]: closed-form Max-SR power split between message and
//!   artificial noise, plus an exhaustive-search reference.
//! - [`ais`]: the alternating loop coupling the beamformers with the power
//!   allocation at one sampling point.
//!
//! All powers are linear (mW) and all rates are in bits/s/Hz.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ais;
pub mod beamforming;
pub mod error;
pub mod linalg;
pub mod model;
pub mod power_allocation;
pub mod rates;

pub use ais::{optimize_point, run_baseline, AisConfig, AisOutcome, AisTrace, IterationRecord};
pub use beamforming::{anlnr_beamformer, slnr_beamformer, BeamformingPair};
pub use error::{Error, Result};
pub use model::{
    path_loss, sample_trajectory, steering_vector, ArrayConfig, LinkState, Point3,
    ScenarioGeometry, SteeringVector, TrajectoryPoint,
};
pub use power_allocation::{
    beta_grid_oracle, optimal_beta, rational_coefficients, stationary_points, Candidate,
    PaSolution, RationalCoefficients, StationaryPoints,
};
pub use rates::{secrecy_rate, RateBreakdown};

pub use num_complex::Complex64;
