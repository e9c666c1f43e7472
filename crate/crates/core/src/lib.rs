//! Geometric multipath error propagation for GNSS direct position estimation (DPE).
//!
//! A non-line-of-sight (NLOS) path biases a satellite's cross-ambiguity function (CAF)
//! by a code delay `δτ` and a Doppler offset `δf_d`. This crate follows that bias through
//! two projections:
//!
//! 1. elevation: CAF bias to range / range-rate bias (`δρ`, `δρ̇`), see [`scmb::project_to_range`];
//! 2. azimuth: per-satellite range biases to the horizontal position / velocity error of the
//!    DPE solution (`δr`, `δṙ`), via tangent lines of the satellite circular multipath bias
//!    construction, see [`scmb::pair_bias`].
//!
//! [`caf`] is an analytic grid-search DPE receiver that serves as an independent check on the
//! closed-form geometry, and [`mc`] holds the experiment drivers built on both.

pub mod caf;
pub mod channel;
pub mod error;
pub mod geom;
pub mod mc;
pub mod reference;
pub mod scmb;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Whether a computation may fan out over the rayon thread pool.
///
/// Both modes produce bit-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}
