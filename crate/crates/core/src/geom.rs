//! Earth-fixed and local East-North-Up frames, satellite look angles, slant ranges.
//!
//! Azimuth is measured clockwise from North, so the horizontal line-of-sight unit vector
//! of a satellite is `(sin θ, cos θ)` in (East, North). With that convention the
//! correlation-peak center lines in the E-N plane have slope `-tan θ`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::{Error, Result};

/// WGS-84 semi-major axis, m.
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;

/// Elevations at or above `90° - ZENITH_GUARD_DEG` are rejected: `sec φ` diverges at zenith.
pub const ZENITH_GUARD_DEG: f64 = 0.5;

/// Highest accepted elevation, radians.
pub fn max_elevation() -> f64 {
    FRAC_PI_2 - ZENITH_GUARD_DEG.to_radians()
}

const ORIGIN_NORM_RANGE: (f64, f64) = (6.2e6, 6.6e6);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EcefVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EcefVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl std::ops::Sub for EcefVector {
    type Output = EcefVector;

    fn sub(self, rhs: Self) -> Self {
        EcefVector::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl std::ops::Add for EcefVector {
    type Output = EcefVector;

    fn add(self, rhs: Self) -> Self {
        EcefVector::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

/// East, North, Up components relative to some origin (m, or m/s for velocities).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnuVector {
    pub e: f64,
    pub n: f64,
    pub u: f64,
}

impl EnuVector {
    pub const fn new(e: f64, n: f64, u: f64) -> Self {
        Self { e, n, u }
    }

    /// A point in the horizontal plane.
    pub const fn horizontal(e: f64, n: f64) -> Self {
        Self { e, n, u: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        (self.e * self.e + self.n * self.n + self.u * self.u).sqrt()
    }

    pub fn horizontal_norm(&self) -> f64 {
        self.e.hypot(self.n)
    }
}

/// Geodetic latitude / longitude (radians) and ellipsoidal height (m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodetic {
    pub latitude: f64,
    pub longitude: f64,
    pub height: f64,
}

/// Satellite elevation `φ` and azimuth `θ`, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LookAngles {
    elevation: f64,
    azimuth: f64,
}

impl LookAngles {
    /// Validates the elevation against the zenith guard and wraps the azimuth into `[0, 2π)`.
    pub fn new(elevation: f64, azimuth: f64) -> Result<Self> {
        if !elevation.is_finite() || !azimuth.is_finite() {
            return Err(Error::InvalidInput("look angles must be finite".into()));
        }
        check_elevation(elevation)?;
        Ok(Self {
            elevation,
            azimuth: wrap_two_pi(azimuth),
        })
    }

    pub fn from_degrees(elevation_deg: f64, azimuth_deg: f64) -> Result<Self> {
        Self::new(elevation_deg.to_radians(), azimuth_deg.to_radians())
    }

    pub fn elevation(&self) -> f64 {
        self.elevation
    }

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    /// Horizontal line-of-sight direction `(sin θ, cos θ)` in (East, North).
    pub fn horizontal_unit(&self) -> (f64, f64) {
        self.azimuth.sin_cos()
    }

    /// Unit line-of-sight vector in ENU.
    pub fn unit_enu(&self) -> EnuVector {
        let (sin_el, cos_el) = self.elevation.sin_cos();
        let (sin_az, cos_az) = self.azimuth.sin_cos();
        EnuVector::new(cos_el * sin_az, cos_el * cos_az, sin_el)
    }

    /// The point at `range` meters along the line of sight.
    pub fn to_enu(&self, range: f64) -> EnuVector {
        let unit = self.unit_enu();
        EnuVector::new(unit.e * range, unit.n * range, unit.u * range)
    }
}

pub(crate) fn check_elevation(elevation: f64) -> Result<()> {
    if elevation >= max_elevation() {
        return Err(Error::ZenithDegenerate {
            elevation_deg: elevation.to_degrees(),
            limit_deg: 90.0 - ZENITH_GUARD_DEG,
        });
    }
    if elevation < 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "satellite below the horizon (elevation {:.4}°)",
            elevation.to_degrees()
        )));
    }
    Ok(())
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_two_pi(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// WGS-84 geodetic coordinates of an ECEF point (Bowring iteration).
pub fn ecef_to_geodetic(p: EcefVector) -> Geodetic {
    let e2 = WGS84_F * (2.0 - WGS84_F);
    let b = WGS84_A * (1.0 - WGS84_F);
    let ep2 = e2 / (1.0 - e2);
    let rho = p.x.hypot(p.y);
    let longitude = p.y.atan2(p.x);

    let mut beta = (p.z * WGS84_A).atan2(rho * b);
    let mut latitude = 0.0;
    for _ in 0..8 {
        let (sb, cb) = beta.sin_cos();
        latitude = (p.z + ep2 * b * sb.powi(3)).atan2(rho - e2 * WGS84_A * cb.powi(3));
        let next = ((1.0 - WGS84_F) * latitude.sin()).atan2(latitude.cos());
        if (next - beta).abs() < 1e-15 {
            break;
        }
        beta = next;
    }
    let sin_lat = latitude.sin();
    let n = WGS84_A / (1.0 - e2 * sin_lat * sin_lat).sqrt();
    let height = rho * latitude.cos() + (p.z + e2 * n * sin_lat) * sin_lat - n;
    Geodetic {
        latitude,
        longitude,
        height,
    }
}

/// Local tangent frame anchored at an Earth-surface origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnuFrame {
    origin: EcefVector,
    // rows: east, north, up expressed in ECEF
    rotation: [[f64; 3]; 3],
}

impl EnuFrame {
    pub fn new(origin: EcefVector) -> Result<Self> {
        let norm = origin.norm();
        if !origin.is_finite() || norm < ORIGIN_NORM_RANGE.0 || norm > ORIGIN_NORM_RANGE.1 {
            return Err(Error::InvalidOrigin { norm });
        }
        let geo = ecef_to_geodetic(origin);
        let (sl, cl) = geo.latitude.sin_cos();
        let (so, co) = geo.longitude.sin_cos();
        Ok(Self {
            origin,
            rotation: [
                [-so, co, 0.0],
                [-sl * co, -sl * so, cl],
                [cl * co, cl * so, sl],
            ],
        })
    }

    pub fn origin(&self) -> EcefVector {
        self.origin
    }

    /// Rotates an ECEF difference vector (no translation) into ENU.
    pub fn rotate_to_enu(&self, v: EcefVector) -> EnuVector {
        let r = &self.rotation;
        let row = |i: usize| r[i][0] * v.x + r[i][1] * v.y + r[i][2] * v.z;
        EnuVector::new(row(0), row(1), row(2))
    }

    /// Rotates an ENU vector back into ECEF axes (no translation).
    pub fn rotate_to_ecef(&self, v: EnuVector) -> EcefVector {
        let r = &self.rotation;
        let col = |j: usize| r[0][j] * v.e + r[1][j] * v.n + r[2][j] * v.u;
        EcefVector::new(col(0), col(1), col(2))
    }

    pub fn to_enu(&self, point: EcefVector) -> EnuVector {
        self.rotate_to_enu(point - self.origin)
    }

    pub fn to_ecef(&self, enu: EnuVector) -> EcefVector {
        self.origin + self.rotate_to_ecef(enu)
    }
}

/// `point` expressed in the local tangent frame at `origin`.
pub fn ecef_to_enu(point: EcefVector, origin: EcefVector) -> Result<EnuVector> {
    Ok(EnuFrame::new(origin)?.to_enu(point))
}

/// Elevation and azimuth of a satellite given its ENU position relative to the receiver.
pub fn look_angles(sat_enu: EnuVector) -> Result<LookAngles> {
    let horizontal = sat_enu.horizontal_norm();
    if horizontal.is_nan() || horizontal <= 1e-9 * sat_enu.norm().max(1.0) {
        return Err(Error::ZenithDegenerate {
            elevation_deg: 90.0,
            limit_deg: 90.0 - ZENITH_GUARD_DEG,
        });
    }
    let elevation = sat_enu.u.atan2(horizontal);
    let azimuth = wrap_two_pi(sat_enu.e.atan2(sat_enu.n));
    LookAngles::new(elevation, azimuth)
}

/// Euclidean distance between satellite and receiver.
pub fn slant_range(sat: EcefVector, rcv: EcefVector) -> f64 {
    (sat - rcv).norm()
}
