//! JSON scenario files.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "receiver": { "position": [x, y, z], "velocity": [vx, vy, vz] },
//!   "signal": { "f_c": 10230000.0, "f_L": 1176450000.0, "f_s": 30690000.0, "T_c": 0.02 },
//!   "grid": [{ "space": "position", "half_extent": 100.0, "step": 1.0 }],
//!   "satellites": [
//!     { "prn": 18, "angles": { "elevation_deg": 42.8, "azimuth_deg": 213.8 },
//!       "paths": [{ "kind": "NLOS", "amplitude": 1.0, "delay_chips": 1.0, "doppler_hz": 120.0 }] }
//!   ],
//!   "noise_sigma": 0.0,
//!   "seed": 1
//! }
//! ```

use std::path::Path;

use dpe_multipath::caf::{GridSpec, Space};
use dpe_multipath::channel::{
    PathKind, Scenario, SignalConfig, SignalPath, NOMINAL_SATELLITE_RANGE,
};
use dpe_multipath::geom::{look_angles, wrap_two_pi, EcefVector, EnuFrame, LookAngles};
use dpe_multipath::scmb::{range_rate_to_doppler, range_to_delay};
use dpe_multipath::Error;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Largest tolerated disagreement between given angles and those derived from a position, degrees.
pub const ANGLE_TOLERANCE_DEG: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub receiver: ReceiverEntry,
    pub signal: SignalEntry,
    #[serde(
        default,
        deserialize_with = "one_or_many",
        skip_serializing_if = "Vec::is_empty"
    )]
    pub grid: Vec<GridEntry>,
    pub satellites: Vec<SatelliteEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Range at which angle-only satellites are placed, m.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominal_range: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverEntry {
    pub position: [f64; 3],
    pub velocity: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalEntry {
    pub f_c: f64,
    #[serde(rename = "f_L")]
    pub f_l: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_s: Option<f64>,
    #[serde(rename = "T_c")]
    pub t_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridEntry {
    pub space: Space,
    pub half_extent: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteEntry {
    pub prn: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<AnglesEntry>,
    pub paths: Vec<PathEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnglesEntry {
    pub elevation_deg: f64,
    pub azimuth_deg: f64,
}

/// A path bias is given either in the correlator domain (`delay_chips`, `doppler_hz`) or already
/// projected (`range_bias_m`, `range_rate_bias_mps`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub kind: PathKind,
    #[serde(default = "unit_amplitude")]
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay_chips: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doppler_hz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_bias_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range_rate_bias_mps: Option<f64>,
}

fn unit_amplitude() -> f64 {
    1.0
}

fn one_or_many<'de, D>(d: D) -> Result<Vec<GridEntry>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(GridEntry),
        Many(Vec<GridEntry>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(g) => vec![g],
        OneOrMany::Many(v) => v,
    })
}

/// A validated scenario together with the grids it asks for.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub name: String,
    pub file: ScenarioFile,
    pub scenario: Scenario,
    /// Position grid first, then velocity; defaults fill missing spaces.
    pub grids: [GridSpec; 2],
}

impl LoadedScenario {
    pub fn grid(&self, space: Space) -> GridSpec {
        match space {
            Space::Position => self.grids[0],
            Space::Velocity => self.grids[1],
        }
    }
}

pub fn parse_scenario(text: &str) -> CliResult<ScenarioFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => CliError::schema(path, inner.to_string()),
            _ => CliError::Parse(inner.to_string()),
        }
    })?;
    Ok(file)
}

pub fn read_scenario(path: &Path) -> CliResult<LoadedScenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    load_str(&name, &text)
}

pub fn load_str(name: &str, text: &str) -> CliResult<LoadedScenario> {
    let file = parse_scenario(text)?;
    let (scenario, grids) = file.to_scenario()?;
    Ok(LoadedScenario {
        name: name.to_string(),
        file,
        scenario,
        grids,
    })
}

pub fn write_scenario(path: &Path, file: &ScenarioFile) -> CliResult<()> {
    std::fs::write(path, to_json(file)?)?;
    Ok(())
}

pub fn to_json(file: &ScenarioFile) -> CliResult<String> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    Ok(text)
}

fn vector(v: [f64; 3]) -> EcefVector {
    EcefVector::new(v[0], v[1], v[2])
}

fn geometry_or_schema(path: String, e: Error) -> CliError {
    match e {
        Error::ZenithDegenerate { .. }
        | Error::InvalidOrigin { .. }
        | Error::DegenerateGeometry(_) => CliError::Geometry(format!("{path}: {e}")),
        other => CliError::schema(path, other.to_string()),
    }
}

impl ScenarioFile {
    /// Validates the file and builds the scenario and its grids.
    pub fn to_scenario(&self) -> CliResult<(Scenario, [GridSpec; 2])> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::schema(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        if self.satellites.is_empty() {
            return Err(CliError::schema(
                "satellites",
                "at least one satellite is required",
            ));
        }
        let signal = SignalConfig {
            code_rate: self.signal.f_c,
            carrier_frequency: self.signal.f_l,
            coherent_integration: self.signal.t_c,
            sampling_rate: self.signal.f_s,
        };
        signal
            .validate()
            .map_err(|e| CliError::schema("signal", e.to_string()))?;
        let grids = self.grid_specs()?;

        let receiver = vector(self.receiver.position);
        let frame = EnuFrame::new(receiver)
            .map_err(|e| geometry_or_schema("receiver.position".into(), e))?;
        let range = self.nominal_range.unwrap_or(NOMINAL_SATELLITE_RANGE);
        if !(range.is_finite() && range > 0.0) {
            return Err(CliError::schema("nominal_range", "must be positive"));
        }

        let mut builder = Scenario::builder(receiver, vector(self.receiver.velocity), signal)
            .map_err(|e| geometry_or_schema("receiver".into(), e))?;
        for (i, sat) in self.satellites.iter().enumerate() {
            let at = format!("satellites[{i}]");
            let angles = sat.look_angles(&frame, &at)?;
            let paths = sat
                .paths
                .iter()
                .enumerate()
                .map(|(k, p)| p.to_path(&angles, &signal, &format!("{at}.paths[{k}]")))
                .collect::<CliResult<Vec<_>>>()?;
            builder = match sat.position {
                Some(pos) => builder.satellite_from_position(
                    sat.prn,
                    vector(pos),
                    vector(sat.velocity.unwrap_or_default()),
                    paths,
                ),
                None => builder.satellite_from_angles(sat.prn, angles, range, paths),
            }
            .map_err(|e| geometry_or_schema(at, e))?;
        }
        let scenario = builder
            .noise(self.noise_sigma, self.seed.unwrap_or(0))
            .build()
            .map_err(|e| geometry_or_schema("satellites".into(), e))?;
        Ok((scenario, grids))
    }

    fn grid_specs(&self) -> CliResult<[GridSpec; 2]> {
        let mut out = [
            GridSpec::default_for(Space::Position),
            GridSpec::default_for(Space::Velocity),
        ];
        let mut seen = [false; 2];
        for (i, g) in self.grid.iter().enumerate() {
            let slot = match g.space {
                Space::Position => 0,
                Space::Velocity => 1,
            };
            if seen[slot] {
                return Err(CliError::schema(
                    format!("grid[{i}]"),
                    format!("duplicate {} grid", g.space),
                ));
            }
            seen[slot] = true;
            out[slot] = GridSpec::new(g.space, g.half_extent, g.step)
                .map_err(|e| CliError::schema(format!("grid[{i}]"), e.to_string()))?;
        }
        Ok(out)
    }
}

impl SatelliteEntry {
    fn look_angles(&self, frame: &EnuFrame, at: &str) -> CliResult<LookAngles> {
        if self.velocity.is_some() && self.position.is_none() {
            return Err(CliError::schema(
                format!("{at}.velocity"),
                "velocity requires a position",
            ));
        }
        let given = self
            .angles
            .map(|a| {
                LookAngles::from_degrees(a.elevation_deg, a.azimuth_deg)
                    .map_err(|e| geometry_or_schema(format!("{at}.angles"), e))
            })
            .transpose()?;
        let derived = self
            .position
            .map(|p| {
                let enu = frame.to_enu(vector(p));
                look_angles(enu).map_err(|e| geometry_or_schema(format!("{at}.position"), e))
            })
            .transpose()?;
        match (given, derived) {
            (None, None) => Err(CliError::schema(
                at,
                "one of `position` or `angles` is required",
            )),
            (Some(a), None) => Ok(a),
            (None, Some(d)) => Ok(d),
            (Some(a), Some(d)) => {
                let del = (a.elevation() - d.elevation()).abs().to_degrees();
                let daz = wrap_two_pi(a.azimuth() - d.azimuth());
                let daz = daz.min(std::f64::consts::TAU - daz).to_degrees();
                if del > ANGLE_TOLERANCE_DEG || daz > ANGLE_TOLERANCE_DEG {
                    return Err(CliError::Geometry(format!(
                        "{at} (PRN{}): angles disagree with position by {del:.3}° elevation, {daz:.3}° azimuth",
                        self.prn
                    )));
                }
                Ok(d)
            }
        }
    }
}

impl PathEntry {
    fn to_path(
        self,
        angles: &LookAngles,
        signal: &SignalConfig,
        at: &str,
    ) -> CliResult<SignalPath> {
        let pick = |raw: Option<f64>,
                    projected: Option<f64>,
                    raw_name: &str,
                    projected_name: &str| match (raw, projected) {
            (Some(_), Some(_)) => Err(CliError::schema(
                at,
                format!("give either `{raw_name}` or `{projected_name}`, not both"),
            )),
            (r, p) => Ok((r, p)),
        };
        let delay = match pick(
            self.delay_chips,
            self.range_bias_m,
            "delay_chips",
            "range_bias_m",
        )? {
            (Some(d), _) => d,
            (None, Some(r)) => range_to_delay(r, angles.elevation(), signal.code_rate)
                .map_err(|e| geometry_or_schema(at.to_string(), e))?,
            (None, None) if self.kind == PathKind::Nlos => {
                return Err(CliError::schema(
                    at,
                    "an NLOS path needs `delay_chips` or `range_bias_m`",
                ))
            }
            (None, None) => 0.0,
        };
        let doppler = match pick(
            self.doppler_hz,
            self.range_rate_bias_mps,
            "doppler_hz",
            "range_rate_bias_mps",
        )? {
            (Some(d), _) => d,
            (None, Some(r)) => {
                range_rate_to_doppler(r, angles.elevation(), signal.carrier_frequency)
                    .map_err(|e| geometry_or_schema(at.to_string(), e))?
            }
            (None, None) => 0.0,
        };
        let path = SignalPath {
            kind: self.kind,
            amplitude: self.amplitude,
            delay_chips: delay,
            doppler_hz: doppler,
        };
        path.validate()
            .map_err(|e| CliError::schema(at, e.to_string()))?;
        Ok(path)
    }
}
