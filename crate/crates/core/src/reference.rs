//! Reference receiver, sky geometry and multipath cases used by the bundled experiments.

use crate::channel::{Scenario, SignalConfig, SignalPath, NOMINAL_SATELLITE_RANGE};
use crate::geom::{EcefVector, LookAngles};
use crate::scmb::{range_rate_to_doppler, range_to_delay};
use crate::Result;

pub const RECEIVER_POSITION: EcefVector = EcefVector::new(-2_851_838.0, 4_653_607.0, 3_289_209.0);
pub const RECEIVER_VELOCITY: EcefVector = EcefVector::new(-5.5, -4.7, 1.9);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkySatellite {
    pub prn: u32,
    pub elevation_deg: f64,
    pub azimuth_deg: f64,
}

pub const SKY: [SkySatellite; 4] = [
    SkySatellite {
        prn: 10,
        elevation_deg: 35.4,
        azimuth_deg: 320.2,
    },
    SkySatellite {
        prn: 18,
        elevation_deg: 42.8,
        azimuth_deg: 213.8,
    },
    SkySatellite {
        prn: 23,
        elevation_deg: 66.7,
        azimuth_deg: 336.1,
    },
    SkySatellite {
        prn: 24,
        elevation_deg: 69.8,
        azimuth_deg: 45.1,
    },
];

/// NLOS delay and Doppler applied to every satellite in the elevation study.
pub const STUDY_DELAY_CHIPS: f64 = 1.0;
pub const STUDY_DOPPLER_HZ: f64 = 120.0;

/// Per-satellite range (m) and range-rate (m/s) biases, in [`SKY`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseRadii {
    pub id: u8,
    pub radii: [f64; 4],
}

pub const CASE1: CaseRadii = CaseRadii {
    id: 1,
    radii: [0.0, 40.0, 0.0, 0.0],
};
pub const CASE2: CaseRadii = CaseRadii {
    id: 2,
    radii: [40.0, 40.0, 40.0, 40.0],
};
pub const CASE3: CaseRadii = CaseRadii {
    id: 3,
    radii: [60.0, 40.0, 30.0, 15.0],
};

pub fn case(id: u8) -> Option<CaseRadii> {
    [CASE1, CASE2, CASE3].into_iter().find(|c| c.id == id)
}

pub fn sky_angles(sat: &SkySatellite) -> Result<LookAngles> {
    LookAngles::from_degrees(sat.elevation_deg, sat.azimuth_deg)
}

/// All four satellites, direct path only.
pub fn los_scenario() -> Result<Scenario> {
    scenario_with(|_, _| Ok(vec![SignalPath::los(1.0)]))
}

/// Every satellite carries one pure NLOS path with the given delay and Doppler.
pub fn uniform_delay_scenario(delay_chips: f64, doppler_hz: f64) -> Result<Scenario> {
    scenario_with(|_, _| Ok(vec![SignalPath::nlos(1.0, delay_chips, doppler_hz)]))
}

/// Satellites with a zero radius keep their direct path; the rest carry one pure NLOS path
/// whose delay and Doppler project to the requested range and range-rate biases.
pub fn case_scenario(case: &CaseRadii) -> Result<Scenario> {
    let signal = SignalConfig::gps_l5();
    scenario_with(|i, angles| {
        let radius = case.radii[i];
        if radius == 0.0 {
            return Ok(vec![SignalPath::los(1.0)]);
        }
        let delay = range_to_delay(radius, angles.elevation(), signal.code_rate)?;
        let doppler = range_rate_to_doppler(radius, angles.elevation(), signal.carrier_frequency)?;
        Ok(vec![SignalPath::nlos(1.0, delay, doppler)])
    })
}

fn scenario_with<F>(mut paths: F) -> Result<Scenario>
where
    F: FnMut(usize, &LookAngles) -> Result<Vec<SignalPath>>,
{
    let mut builder =
        Scenario::builder(RECEIVER_POSITION, RECEIVER_VELOCITY, SignalConfig::gps_l5())?;
    for (i, sat) in SKY.iter().enumerate() {
        let angles = sky_angles(sat)?;
        let p = paths(i, &angles)?;
        builder = builder.satellite_from_angles(sat.prn, angles, NOMINAL_SATELLITE_RANGE, p)?;
    }
    builder.build()
}
