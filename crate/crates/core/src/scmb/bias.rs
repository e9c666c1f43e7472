use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::line::{intersect_lines, CenterLine};
use super::EPS_EQUAL_RADII;
use crate::caf::Space;
use crate::channel::PathRef;
use crate::geom::wrap_two_pi;
use crate::{Error, Result};

/// Error of the DPE solution at the crossing of two center lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasResult {
    pub space: Space,
    pub pair: Option<(PathRef, PathRef)>,
    /// Azimuth separation folded into `[0, π]`, radians.
    pub delta_theta: f64,
    /// East error `δx` (or `δẋ`).
    pub dx: f64,
    /// North error `δy` (or `δẏ`).
    pub dy: f64,
    /// Horizontal error `δr` (or `δṙ`).
    pub dr: f64,
}

impl BiasResult {
    /// Crossing point in the truth-centered E-N plane.
    pub fn point(&self) -> (f64, f64) {
        (self.dx, self.dy)
    }

    /// Same pair, result recomputed from two lines.
    pub fn from_lines(a: &CenterLine, b: &CenterLine) -> Result<Self> {
        let (dx, dy) = intersect_lines(a, b)?;
        let delta_theta = fold_azimuth_difference(a.azimuth, b.azimuth);
        Ok(Self {
            space: a.space,
            pair: a.source.zip(b.source),
            delta_theta,
            dx,
            dy,
            dr: law_of_cosines_error(a.tangent_offset, b.tangent_offset, delta_theta),
        })
    }
}

/// `√(ρi² + ρj² − 2 ρi ρj cos Δθ) / sin Δθ`.
fn law_of_cosines_error(rho_i: f64, rho_j: f64, delta_theta: f64) -> f64 {
    let chord_sq = rho_i * rho_i + rho_j * rho_j - 2.0 * rho_i * rho_j * delta_theta.cos();
    chord_sq.max(0.0).sqrt() / delta_theta.sin()
}

/// Absolute azimuth separation mapped into `[0, π]`.
pub fn fold_azimuth_difference(theta_i: f64, theta_j: f64) -> f64 {
    let d = wrap_two_pi(theta_j - theta_i);
    if d > PI {
        2.0 * PI - d
    } else {
        d
    }
}

/// Position error from two range biases and the satellites' azimuths.
pub fn pair_bias(rho_i: f64, rho_j: f64, theta_i: f64, theta_j: f64) -> Result<BiasResult> {
    pair_in(Space::Position, rho_i, rho_j, theta_i, theta_j)
}

/// Velocity error from two range-rate biases; same geometry as [`pair_bias`].
pub fn pair_bias_velocity(
    rate_i: f64,
    rate_j: f64,
    theta_i: f64,
    theta_j: f64,
) -> Result<BiasResult> {
    pair_in(Space::Velocity, rate_i, rate_j, theta_i, theta_j)
}

fn pair_in(space: Space, rho_i: f64, rho_j: f64, theta_i: f64, theta_j: f64) -> Result<BiasResult> {
    if ![rho_i, rho_j, theta_i, theta_j]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(Error::InvalidInput(
            "pair bias inputs must be finite".into(),
        ));
    }
    let a = CenterLine::new(space, theta_i, rho_i, None);
    let b = CenterLine::new(space, theta_j, rho_j, None);
    BiasResult::from_lines(&a, &b)
}

/// Acute angle between two center lines: `Δθ` or `π − Δθ`.
pub fn delta_alpha(theta_i: f64, theta_j: f64) -> f64 {
    let d = fold_azimuth_difference(theta_i, theta_j);
    if d <= FRAC_PI_2 {
        d
    } else {
        PI - d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// Azimuth separation of the minimum error, radians.
    pub delta_theta: f64,
    /// Minimum (or, for equal radii, infimum) error: the larger radius.
    pub min_error: f64,
    /// `false` when the minimum is only approached as `Δθ → 0`.
    pub attained: bool,
}

/// Minimum of the pair error over azimuth separation: `Δθ* = arccos(small / large)`, error = large.
pub fn critical_points(rho_i: f64, rho_j: f64) -> Result<CriticalPoint> {
    if !(rho_i >= 0.0 && rho_j >= 0.0) || !rho_i.is_finite() || !rho_j.is_finite() {
        return Err(Error::InvalidInput(
            "radii must be finite and non-negative".into(),
        ));
    }
    let (small, large) = (rho_i.min(rho_j), rho_i.max(rho_j));
    if large == 0.0 {
        return Err(Error::UndefinedCriticalPoint);
    }
    if large - small <= EPS_EQUAL_RADII * large {
        return Ok(CriticalPoint {
            delta_theta: 0.0,
            min_error: large,
            attained: false,
        });
    }
    Ok(CriticalPoint {
        delta_theta: (small / large).acos(),
        min_error: large,
        attained: true,
    })
}
