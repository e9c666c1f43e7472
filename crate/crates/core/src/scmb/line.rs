use serde::{Deserialize, Serialize};

use super::projection::{project_to_range, project_to_range_rate};
use super::{EPS_PARALLEL, TANGENT_SIDE};
use crate::caf::Space;
use crate::channel::{PathRef, SatelliteChannel, Scenario};
use crate::{Error, Result};

/// Correlation-peak center line of one path in the truth-centered E-N plane.
///
/// Stored in normal form `sin θ · x̃ + cos θ · ỹ = TANGENT_SIDE · δρ`, which is the slope-intercept
/// line `ỹ = -tan θ · x̃ + b` whenever `cos θ ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterLine {
    pub space: Space,
    /// Satellite azimuth, radians.
    pub azimuth: f64,
    /// Signed projected bias `δρ` (m) or `δρ̇` (m/s); zero for a LOS path.
    pub tangent_offset: f64,
    pub source: Option<PathRef>,
}

/// Circle centered on truth to which a center line is tangent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiasCircle {
    pub radius: f64,
    pub source: Option<PathRef>,
}

impl CenterLine {
    pub fn new(space: Space, azimuth: f64, tangent_offset: f64, source: Option<PathRef>) -> Self {
        Self {
            space,
            azimuth,
            tangent_offset,
            source,
        }
    }

    /// Unit normal `(sin θ, cos θ)`: the horizontal line-of-sight direction.
    pub fn normal(&self) -> (f64, f64) {
        self.azimuth.sin_cos()
    }

    /// Signed distance of the line from truth along the normal.
    pub fn offset(&self) -> f64 {
        TANGENT_SIDE * self.tangent_offset
    }

    /// Coefficients `(a, b, c)` of `a·x̃ + b·ỹ = c`.
    pub fn implicit(&self) -> (f64, f64, f64) {
        let (a, b) = self.normal();
        (a, b, self.offset())
    }

    /// `-tan θ`, undefined for a North-South line of sight.
    pub fn slope(&self) -> Option<f64> {
        let (s, c) = self.normal();
        (c.abs() >= 1e-9).then(|| -s / c)
    }

    pub fn intercept(&self) -> Option<f64> {
        let c = self.azimuth.cos();
        (c.abs() >= 1e-9).then(|| self.offset() / c)
    }

    pub fn distance_to(&self, east: f64, north: f64) -> f64 {
        let (a, b, c) = self.implicit();
        (a * east + b * north - c).abs()
    }

    pub fn distance_from_truth(&self) -> f64 {
        self.offset().abs()
    }

    /// Foot of the perpendicular from truth: where the line touches its bias circle.
    pub fn tangent_point(&self) -> (f64, f64) {
        let (a, b) = self.normal();
        (a * self.offset(), b * self.offset())
    }

    pub fn bias_circle(&self) -> BiasCircle {
        BiasCircle {
            radius: self.tangent_offset.abs(),
            source: self.source,
        }
    }
}

/// Center line of path `index` of `channel`.
pub fn center_line(
    channel: &SatelliteChannel,
    index: usize,
    space: Space,
    scenario: &Scenario,
) -> Result<CenterLine> {
    let path = channel
        .paths()
        .get(index)
        .ok_or_else(|| Error::InvalidInput(format!("PRN{} has no path {index}", channel.prn)))?;
    let elevation = channel.angles().elevation();
    let offset = match space {
        Space::Position => {
            project_to_range(path.delay_chips, elevation, scenario.signal.code_rate)?
        }
        Space::Velocity => project_to_range_rate(
            path.doppler_hz,
            elevation,
            scenario.signal.carrier_frequency,
        )?,
    };
    Ok(CenterLine::new(
        space,
        channel.angles().azimuth(),
        offset,
        Some(channel.path_ref(index)),
    ))
}

/// Center lines of every path of every satellite, in scenario order.
pub fn center_lines(scenario: &Scenario, space: Space) -> Result<Vec<CenterLine>> {
    let mut out = Vec::new();
    for ch in scenario.satellites() {
        for i in 0..ch.paths().len() {
            out.push(center_line(ch, i, space, scenario)?);
        }
    }
    Ok(out)
}

/// Crossing point `(x̂, ŷ)` of two center lines.
pub fn intersect_lines(a: &CenterLine, b: &CenterLine) -> Result<(f64, f64)> {
    let (sa, ca) = a.normal();
    let (sb, cb) = b.normal();
    let det = sa * cb - ca * sb;
    if det.abs() < EPS_PARALLEL {
        return Err(Error::ParallelLines {
            sin_delta: det.abs(),
        });
    }
    let (oa, ob) = (a.offset(), b.offset());
    Ok(((oa * cb - ob * ca) / det, (sa * ob - sb * oa) / det))
}
