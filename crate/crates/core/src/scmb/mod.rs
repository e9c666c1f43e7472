//! Satellite circular multipath bias (SCMB) geometry.
//!
//! Each NLOS path yields a correlation-peak center line in the horizontal plane with slope
//! `-tan θ`, tangent to a circle around the receiver truth whose radius is the path's
//! elevation-projected range (or range-rate) bias. A DPE solution sits where center lines of
//! two satellites cross, so its error is the distance of that crossing from truth.

mod bias;
mod bound;
mod intersections;
mod line;
mod projection;

pub use bias::{
    critical_points, delta_alpha, fold_azimuth_difference, pair_bias, pair_bias_velocity,
    BiasResult, CriticalPoint,
};
pub use bound::{case_bound, BoundCase, ErrorBound};
pub use intersections::{
    enumerate_intersections, intersection_count, IntersectionPoint, Intersections,
};
pub use line::{center_line, center_lines, intersect_lines, BiasCircle, CenterLine};
pub use projection::{
    project_to_range, project_to_range_rate, range_rate_to_doppler, range_to_delay,
};

/// Side of the truth on which a positive delay (or Doppler) bias places the center line,
/// as a multiple of the horizontal line-of-sight unit vector: `-1` is away from the satellite,
/// matching a multipath path that lengthens the measured range.
pub const TANGENT_SIDE: f64 = -1.0;

/// `|sin Δθ|` below this is treated as parallel center lines.
pub const EPS_PARALLEL: f64 = 1e-6;

/// Intersections closer than this (m or m/s) are merged.
pub const EPS_MERGE: f64 = 1e-6;

/// Relative tolerance for treating radii as equal when classifying bound cases.
pub const EPS_EQUAL_RADII: f64 = 1e-9;
