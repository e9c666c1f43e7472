//! Signal constants, propagation paths, satellite channels and the scenario that bundles them.

use serde::{Deserialize, Serialize};

use crate::geom::{look_angles, EcefVector, EnuFrame, EnuVector, LookAngles};
use crate::{Error, Result, SPEED_OF_LIGHT};

/// Range at which satellites known only by look angles are synthesized, m.
pub const NOMINAL_SATELLITE_RANGE: f64 = 2.2e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalConfig {
    /// PRN code rate `f_c`, Hz.
    pub code_rate: f64,
    /// Carrier frequency `f_L`, Hz.
    pub carrier_frequency: f64,
    /// Coherent integration time `T_c`, s.
    pub coherent_integration: f64,
    /// Front-end sampling rate, Hz. Recorded only; nothing here works at sample level.
    pub sampling_rate: Option<f64>,
}

impl SignalConfig {
    pub fn new(code_rate: f64, carrier_frequency: f64, coherent_integration: f64) -> Result<Self> {
        let config = Self {
            code_rate,
            carrier_frequency,
            coherent_integration,
            sampling_rate: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// GPS L5: 10.23 MHz code, 1176.45 MHz carrier, 20 ms coherent integration.
    pub fn gps_l5() -> Self {
        Self {
            code_rate: 10.23e6,
            carrier_frequency: 1176.45e6,
            coherent_integration: 0.020,
            sampling_rate: Some(30.69e6),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.code_rate.is_finite()
            && self.carrier_frequency.is_finite()
            && self.coherent_integration.is_finite();
        if !finite || self.code_rate <= 0.0 {
            return Err(Error::InvalidInput("code rate must be positive".into()));
        }
        if self.carrier_frequency <= self.code_rate {
            return Err(Error::InvalidInput(
                "carrier frequency must exceed the code rate".into(),
            ));
        }
        if self.coherent_integration <= 0.0 {
            return Err(Error::InvalidInput(
                "coherent integration time must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Length of one code chip, m.
    pub fn chip_length(&self) -> f64 {
        SPEED_OF_LIGHT / self.code_rate
    }

    /// Carrier wavelength, m.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PathKind {
    Los,
    Nlos,
}

/// One propagation path of a satellite signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalPath {
    pub kind: PathKind,
    pub amplitude: f64,
    /// Code delay relative to the direct path, chips.
    pub delay_chips: f64,
    /// Doppler offset relative to the direct path, Hz.
    pub doppler_hz: f64,
}

impl SignalPath {
    pub fn los(amplitude: f64) -> Self {
        Self {
            kind: PathKind::Los,
            amplitude,
            delay_chips: 0.0,
            doppler_hz: 0.0,
        }
    }

    pub fn nlos(amplitude: f64, delay_chips: f64, doppler_hz: f64) -> Self {
        Self {
            kind: PathKind::Nlos,
            amplitude,
            delay_chips,
            doppler_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "path amplitude must be finite and non-negative, got {}",
                self.amplitude
            )));
        }
        if !self.delay_chips.is_finite() || !self.doppler_hz.is_finite() {
            return Err(Error::InvalidInput("path biases must be finite".into()));
        }
        if self.kind == PathKind::Los && (self.delay_chips != 0.0 || self.doppler_hz != 0.0) {
            return Err(Error::InvalidInput(
                "a LOS path carries no delay or Doppler bias".into(),
            ));
        }
        Ok(())
    }
}

/// Identifies one path of one satellite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathRef {
    pub prn: u32,
    pub path: usize,
}

impl std::fmt::Display for PathRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PRN{}/{}", self.prn, self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatelliteChannel {
    pub prn: u32,
    position: EcefVector,
    velocity: EcefVector,
    angles: LookAngles,
    /// Satellite minus receiver, in the receiver's ENU frame.
    line_of_sight: EnuVector,
    paths: Vec<SignalPath>,
}

impl SatelliteChannel {
    pub fn position(&self) -> EcefVector {
        self.position
    }

    pub fn velocity(&self) -> EcefVector {
        self.velocity
    }

    pub fn angles(&self) -> LookAngles {
        self.angles
    }

    pub fn line_of_sight(&self) -> EnuVector {
        self.line_of_sight
    }

    /// Slant range `r^m`, m.
    pub fn range(&self) -> f64 {
        self.line_of_sight.norm()
    }

    pub fn paths(&self) -> &[SignalPath] {
        &self.paths
    }

    pub fn path_ref(&self, index: usize) -> PathRef {
        PathRef {
            prn: self.prn,
            path: index,
        }
    }
}

fn validate_paths(prn: u32, paths: &[SignalPath]) -> Result<()> {
    if paths.is_empty() {
        return Err(Error::InvalidInput(format!("PRN{prn} has no signal paths")));
    }
    for path in paths {
        path.validate()?;
    }
    let los = paths.iter().filter(|p| p.kind == PathKind::Los).count();
    if los > 1 {
        return Err(Error::InvalidInput(format!("PRN{prn} has {los} LOS paths")));
    }
    if los == 1 && paths[0].kind != PathKind::Los {
        return Err(Error::InvalidInput(format!(
            "PRN{prn}: the LOS path must come first"
        )));
    }
    Ok(())
}

/// Receiver truth, signal constants and satellites.
///
/// Receiver clock bias and drift are held at truth; only horizontal position and velocity are
/// searched.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    receiver_position: EcefVector,
    receiver_velocity: EcefVector,
    frame: EnuFrame,
    pub signal: SignalConfig,
    satellites: Vec<SatelliteChannel>,
    /// Post-correlation noise standard deviation; `None` or `0` disables noise.
    pub noise_sigma: Option<f64>,
    pub seed: u64,
}

impl Scenario {
    pub fn builder(
        receiver_position: EcefVector,
        receiver_velocity: EcefVector,
        signal: SignalConfig,
    ) -> Result<ScenarioBuilder> {
        signal.validate()?;
        if !receiver_velocity.is_finite() {
            return Err(Error::InvalidInput(
                "receiver velocity must be finite".into(),
            ));
        }
        Ok(ScenarioBuilder {
            frame: EnuFrame::new(receiver_position)?,
            receiver_velocity,
            signal,
            satellites: Vec::new(),
            noise_sigma: None,
            seed: 0,
        })
    }

    pub fn receiver_position(&self) -> EcefVector {
        self.receiver_position
    }

    pub fn receiver_velocity(&self) -> EcefVector {
        self.receiver_velocity
    }

    /// Receiver velocity in the local ENU frame.
    pub fn receiver_velocity_enu(&self) -> EnuVector {
        self.frame.rotate_to_enu(self.receiver_velocity)
    }

    pub fn frame(&self) -> &EnuFrame {
        &self.frame
    }

    pub fn satellites(&self) -> &[SatelliteChannel] {
        &self.satellites
    }

    pub fn satellite(&self, prn: u32) -> Option<&SatelliteChannel> {
        self.satellites.iter().find(|s| s.prn == prn)
    }

    /// Effective noise sigma, `0` when disabled.
    pub fn noise(&self) -> f64 {
        self.noise_sigma.unwrap_or(0.0)
    }

    /// A copy restricted to the listed PRNs, in the order given.
    pub fn subset(&self, prns: &[u32]) -> Result<Scenario> {
        let satellites = prns
            .iter()
            .map(|&prn| {
                self.satellite(prn)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput(format!("no satellite PRN{prn}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if satellites.is_empty() {
            return Err(Error::TooFew {
                what: "satellites",
                needed: 1,
                got: 0,
            });
        }
        Ok(Scenario {
            satellites,
            ..self.clone()
        })
    }

    /// A copy where one satellite keeps only the listed paths.
    pub fn with_paths(&self, prn: u32, paths: Vec<SignalPath>) -> Result<Scenario> {
        validate_paths(prn, &paths)?;
        let mut out = self.clone();
        let sat = out
            .satellites
            .iter_mut()
            .find(|s| s.prn == prn)
            .ok_or_else(|| Error::InvalidInput(format!("no satellite PRN{prn}")))?;
        sat.paths = paths;
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioBuilder {
    frame: EnuFrame,
    receiver_velocity: EcefVector,
    signal: SignalConfig,
    satellites: Vec<SatelliteChannel>,
    noise_sigma: Option<f64>,
    seed: u64,
}

impl ScenarioBuilder {
    /// Adds a satellite known only by its look angles, placed at `range` meters.
    pub fn satellite_from_angles(
        mut self,
        prn: u32,
        angles: LookAngles,
        range: f64,
        paths: Vec<SignalPath>,
    ) -> Result<Self> {
        if !(range.is_finite() && range > 0.0) {
            return Err(Error::DegenerateGeometry(format!(
                "PRN{prn}: satellite range must be positive"
            )));
        }
        validate_paths(prn, &paths)?;
        let line_of_sight = angles.to_enu(range);
        self.satellites.push(SatelliteChannel {
            prn,
            position: self.frame.to_ecef(line_of_sight),
            velocity: EcefVector::default(),
            angles,
            line_of_sight,
            paths,
        });
        Ok(self)
    }

    /// Adds a satellite from its ECEF position and velocity; look angles are derived.
    pub fn satellite_from_position(
        mut self,
        prn: u32,
        position: EcefVector,
        velocity: EcefVector,
        paths: Vec<SignalPath>,
    ) -> Result<Self> {
        if !position.is_finite() || !velocity.is_finite() {
            return Err(Error::InvalidInput(format!(
                "PRN{prn}: satellite state must be finite"
            )));
        }
        validate_paths(prn, &paths)?;
        let line_of_sight = self.frame.to_enu(position);
        if line_of_sight.norm() == 0.0 {
            return Err(Error::DegenerateGeometry(format!(
                "PRN{prn}: satellite coincides with the receiver"
            )));
        }
        let angles = look_angles(line_of_sight)?;
        self.satellites.push(SatelliteChannel {
            prn,
            position,
            velocity,
            angles,
            line_of_sight,
            paths,
        });
        Ok(self)
    }

    pub fn noise(mut self, sigma: Option<f64>, seed: u64) -> Self {
        self.noise_sigma = sigma;
        self.seed = seed;
        self
    }

    pub fn build(self) -> Result<Scenario> {
        if self.satellites.is_empty() {
            return Err(Error::TooFew {
                what: "satellites",
                needed: 1,
                got: 0,
            });
        }
        let mut prns: Vec<u32> = self.satellites.iter().map(|s| s.prn).collect();
        prns.sort_unstable();
        if prns.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate PRN in scenario".into()));
        }
        if let Some(sigma) = self.noise_sigma {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidInput(
                    "noise sigma must be finite and non-negative".into(),
                ));
            }
        }
        Ok(Scenario {
            receiver_position: self.frame.origin(),
            receiver_velocity: self.receiver_velocity,
            frame: self.frame,
            signal: self.signal,
            satellites: self.satellites,
            noise_sigma: self.noise_sigma,
            seed: self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;

    #[test]
    fn l5_constants() {
        let s = SignalConfig::gps_l5();
        s.validate().unwrap();
        assert!((s.chip_length() - 29.305_225_6).abs() < 1e-6);
    }

    #[test]
    fn signal_validation() {
        assert!(SignalConfig::new(0.0, 1.0e9, 0.02).is_err());
        assert!(SignalConfig::new(10.23e6, 1.0e6, 0.02).is_err());
        assert!(SignalConfig::new(10.23e6, 1.17645e9, 0.0).is_err());
    }

    #[test]
    fn path_rules() {
        let los_with_bias = SignalPath {
            delay_chips: 0.5,
            ..SignalPath::los(1.0)
        };
        assert!(los_with_bias.validate().is_err());
        assert!(SignalPath::nlos(-1.0, 1.0, 0.0).validate().is_err());
        assert!(validate_paths(1, &[]).is_err());
        assert!(validate_paths(1, &[SignalPath::los(1.0), SignalPath::los(1.0)]).is_err());
        assert!(
            validate_paths(1, &[SignalPath::nlos(1.0, 1.0, 0.0), SignalPath::los(1.0)]).is_err()
        );
        assert!(
            validate_paths(1, &[SignalPath::los(1.0), SignalPath::nlos(1.0, 1.0, 0.0)]).is_ok()
        );
    }

    #[test]
    fn empty_scenario_rejected() {
        let b = Scenario::builder(
            reference::RECEIVER_POSITION,
            reference::RECEIVER_VELOCITY,
            SignalConfig::gps_l5(),
        )
        .unwrap();
        assert!(matches!(b.build(), Err(Error::TooFew { .. })));
    }

    #[test]
    fn position_and_angle_satellites_agree() {
        let angles = LookAngles::from_degrees(42.8, 213.8).unwrap();
        let a = reference::los_scenario().unwrap();
        let sat = a.satellite(18).unwrap();
        assert!((sat.angles().elevation() - angles.elevation()).abs() < 1e-12);

        let b = Scenario::builder(
            reference::RECEIVER_POSITION,
            reference::RECEIVER_VELOCITY,
            SignalConfig::gps_l5(),
        )
        .unwrap()
        .satellite_from_position(
            18,
            sat.position(),
            EcefVector::default(),
            vec![SignalPath::los(1.0)],
        )
        .unwrap()
        .build()
        .unwrap();
        let derived = b.satellite(18).unwrap().angles();
        assert!((derived.elevation() - angles.elevation()).abs() < 1e-9);
        assert!((derived.azimuth() - angles.azimuth()).abs() < 1e-9);
    }

    #[test]
    fn duplicate_prn_rejected() {
        let angles = LookAngles::from_degrees(30.0, 10.0).unwrap();
        let b = Scenario::builder(
            reference::RECEIVER_POSITION,
            reference::RECEIVER_VELOCITY,
            SignalConfig::gps_l5(),
        )
        .unwrap()
        .satellite_from_angles(
            3,
            angles,
            NOMINAL_SATELLITE_RANGE,
            vec![SignalPath::los(1.0)],
        )
        .unwrap()
        .satellite_from_angles(
            3,
            angles,
            NOMINAL_SATELLITE_RANGE,
            vec![SignalPath::los(1.0)],
        )
        .unwrap();
        assert!(b.build().is_err());
    }
}
