//! Experiment drivers: elevation sweeps, random-azimuth Monte Carlo, multipath case studies,
//! and grid-versus-geometry cross checks.
//!
//! Every driver is deterministic. Random draws come from per-trial ChaCha streams keyed by
//! `(seed, trial)`, so serial and parallel runs produce identical reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::caf::{evaluate, scenario_caf, GridSpec, Peak, Space};
use crate::channel::{PathRef, Scenario, SignalConfig};
use crate::geom::{max_elevation, ZENITH_GUARD_DEG};
use crate::scmb::{
    case_bound, center_lines, critical_points, enumerate_intersections, pair_bias,
    project_to_range, project_to_range_rate, CriticalPoint, ErrorBound,
};
use crate::{Error, Execution, Result};

/// Half-width of the scatter window (m or m/s) marked in Monte Carlo samples.
pub const DEFAULT_WINDOW: f64 = 100.0;

/// Grid readouts must land within this many steps of the analytic error.
pub const READOUT_TOLERANCE_STEPS: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ElevationSweep,
    AzimuthMc,
    CaseStudy,
    OracleCompare,
}

/// Inclusive arithmetic sweep `start, start + step, …` up to `end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Sweep {
    pub fn new(start: f64, end: f64, step: f64) -> Result<Self> {
        let s = Self { start, end, step };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidInput("sweep step must be positive".into()));
        }
        if !(self.start.is_finite() && self.end.is_finite() && self.end >= self.start) {
            return Err(Error::InvalidInput(
                "sweep range must be finite and ordered".into(),
            ));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub seed: u64,
    pub sweep: Option<Sweep>,
    pub execution: Execution,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElevationPoint {
    pub elevation_deg: f64,
    pub range_bias: f64,
    pub range_rate_bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElevationSweepReport {
    pub delay_chips: f64,
    pub doppler_hz: f64,
    pub points: Vec<ElevationPoint>,
    pub range_strictly_increasing: bool,
    pub rate_strictly_increasing: bool,
}

/// Range and range-rate bias of a fixed delay / Doppler bias across elevations (degrees).
pub fn run_elevation_sweep(
    delay_chips: f64,
    doppler_hz: f64,
    elevation_deg: &Sweep,
    signal: &SignalConfig,
) -> Result<ElevationSweepReport> {
    elevation_deg.validate()?;
    if elevation_deg.start < 0.0 || elevation_deg.end.to_radians() >= max_elevation() {
        return Err(Error::InvalidInput(format!(
            "elevation sweep must lie in [0°, {}°)",
            90.0 - ZENITH_GUARD_DEG
        )));
    }
    let points = elevation_deg
        .points()
        .into_iter()
        .map(|deg| {
            let el = deg.to_radians();
            Ok(ElevationPoint {
                elevation_deg: deg,
                range_bias: project_to_range(delay_chips, el, signal.code_rate)?,
                range_rate_bias: project_to_range_rate(doppler_hz, el, signal.carrier_frequency)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let increasing = |f: fn(&ElevationPoint) -> f64| points.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    Ok(ElevationSweepReport {
        delay_chips,
        doppler_hz,
        range_strictly_increasing: increasing(|p| p.range_bias),
        rate_strictly_increasing: increasing(|p| p.range_rate_bias),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AzimuthSample {
    pub trial: usize,
    /// Azimuth separation, radians.
    pub delta_theta: f64,
    pub dx: f64,
    pub dy: f64,
    /// `+∞` when the draw is numerically parallel.
    pub dr: f64,
    /// Inside the ±[`DEFAULT_WINDOW`] scatter window.
    pub in_window: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AzimuthSummary {
    pub count: usize,
    pub min_dr: f64,
    pub argmin_delta_theta: f64,
    /// Largest finite error.
    pub max_dr: f64,
    /// `max(ρi, ρj)`: no sample may fall below it.
    pub floor: f64,
    pub below_floor: usize,
    pub unbounded: usize,
    pub in_window: usize,
}

impl AzimuthSummary {
    pub fn from_samples(samples: &[AzimuthSample], floor: f64) -> Self {
        let mut s = AzimuthSummary {
            count: samples.len(),
            min_dr: f64::INFINITY,
            argmin_delta_theta: f64::NAN,
            max_dr: 0.0,
            floor,
            below_floor: 0,
            unbounded: 0,
            in_window: 0,
        };
        for x in samples {
            if !x.dr.is_finite() {
                s.unbounded += 1;
                continue;
            }
            if x.dr < s.min_dr {
                s.min_dr = x.dr;
                s.argmin_delta_theta = x.delta_theta;
            }
            s.max_dr = s.max_dr.max(x.dr);
            if x.dr < floor - 1e-9 {
                s.below_floor += 1;
            }
            if x.in_window {
                s.in_window += 1;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzimuthReport {
    pub rho_i: f64,
    pub rho_j: f64,
    pub seed: Option<u64>,
    pub window: f64,
    pub samples: Vec<AzimuthSample>,
    pub summary: AzimuthSummary,
    pub critical: Option<CriticalPoint>,
}

fn azimuth_sample(rho_i: f64, rho_j: f64, trial: usize, delta_theta: f64) -> AzimuthSample {
    match pair_bias(rho_i, rho_j, 0.0, delta_theta) {
        Ok(b) => AzimuthSample {
            trial,
            delta_theta,
            dx: b.dx,
            dy: b.dy,
            dr: b.dr,
            in_window: b.dx.abs() <= DEFAULT_WINDOW && b.dy.abs() <= DEFAULT_WINDOW,
        },
        Err(_) => AzimuthSample {
            trial,
            delta_theta,
            dx: f64::NAN,
            dy: f64::NAN,
            dr: f64::INFINITY,
            in_window: false,
        },
    }
}

fn azimuth_report(
    rho_i: f64,
    rho_j: f64,
    seed: Option<u64>,
    samples: Vec<AzimuthSample>,
) -> AzimuthReport {
    let floor = rho_i.abs().max(rho_j.abs());
    AzimuthReport {
        rho_i,
        rho_j,
        seed,
        window: DEFAULT_WINDOW,
        summary: AzimuthSummary::from_samples(&samples, floor),
        critical: critical_points(rho_i, rho_j).ok(),
        samples,
    }
}

/// Draw of trial `trial`: `Δθ ~ U[0, π)` from the stream keyed by `(seed, trial)`.
pub fn trial_delta_theta(seed: u64, trial: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.random_range(0.0..PI)
}

/// Pair error for uniformly random azimuth separations.
pub fn run_random_azimuth_mc(
    rho_i: f64,
    rho_j: f64,
    trials: usize,
    seed: u64,
    execution: Execution,
) -> Result<AzimuthReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    if !rho_i.is_finite() || !rho_j.is_finite() {
        return Err(Error::InvalidInput("radii must be finite".into()));
    }
    let one = |t: usize| azimuth_sample(rho_i, rho_j, t, trial_delta_theta(seed, t));
    let samples: Vec<AzimuthSample> = match execution {
        Execution::Serial => (0..trials).map(one).collect(),
        Execution::Parallel => (0..trials).into_par_iter().map(one).collect(),
    };
    Ok(azimuth_report(rho_i, rho_j, Some(seed), samples))
}

/// Pair error over a deterministic grid of separations (degrees); endpoints 0° and 180° come
/// out unbounded.
pub fn run_azimuth_sweep(rho_i: f64, rho_j: f64, delta_theta_deg: &Sweep) -> Result<AzimuthReport> {
    delta_theta_deg.validate()?;
    let samples = delta_theta_deg
        .points()
        .into_iter()
        .enumerate()
        .map(|(k, deg)| azimuth_sample(rho_i, rho_j, k, deg.to_radians()))
        .collect();
    Ok(azimuth_report(rho_i, rho_j, None, samples))
}

/// One satellite pair of a case study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub first: PathRef,
    pub second: PathRef,
    pub delta_theta: f64,
    /// Analytic crossing, truth-centered.
    pub point: (f64, f64),
    pub theoretical: f64,
    /// Error read off the noiseless two-satellite grid; `None` outside the window.
    pub simulated: Option<f64>,
    pub grid_point: Option<(f64, f64)>,
    pub pass: Option<bool>,
}

impl CaseRow {
    pub fn diff(&self) -> Option<f64> {
        self.simulated.map(|s| s - self.theoretical)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpaceReport {
    pub space: Space,
    pub grid: GridSpec,
    pub rows: Vec<CaseRow>,
    /// Distinct crossings after merging.
    pub distinct_points: usize,
    /// Argmax of the full multi-satellite grid.
    pub estimate: Peak,
    pub bound: Option<ErrorBound>,
    pub tolerance: f64,
}

impl CaseSpaceReport {
    pub fn row(&self, prn_a: u32, prn_b: u32) -> Option<&CaseRow> {
        self.rows.iter().find(|r| {
            (r.first.prn, r.second.prn) == (prn_a, prn_b)
                || (r.first.prn, r.second.prn) == (prn_b, prn_a)
        })
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass != Some(false))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub label: String,
    pub spaces: Vec<CaseSpaceReport>,
}

impl CaseStudyReport {
    pub fn space(&self, space: Space) -> Option<&CaseSpaceReport> {
        self.spaces.iter().find(|s| s.space == space)
    }
}

/// Analytic crossings of every satellite pair against readouts from noiseless grids.
///
/// The "simulated" error of a pair is the argmax distance of a grid holding only the two paths
/// that cross there.
pub fn run_case_study(
    scenario: &Scenario,
    label: &str,
    grids: &[GridSpec],
    execution: Execution,
) -> Result<CaseStudyReport> {
    let mut clean = scenario.clone();
    clean.noise_sigma = None;
    let spaces = grids
        .iter()
        .map(|spec| case_space(&clean, spec, execution))
        .collect::<Result<Vec<_>>>()?;
    Ok(CaseStudyReport {
        label: label.to_string(),
        spaces,
    })
}

fn case_space(
    scenario: &Scenario,
    spec: &GridSpec,
    execution: Execution,
) -> Result<CaseSpaceReport> {
    let lines = center_lines(scenario, spec.space)?;
    let crossings = enumerate_intersections(&lines, execution)?;
    let tolerance = READOUT_TOLERANCE_STEPS * spec.step;

    let mut rows = Vec::new();
    for point in &crossings.points {
        for &(a, b) in &point.pairs {
            let (Some(first), Some(second)) = (a, b) else {
                continue;
            };
            let line_a = lines
                .iter()
                .find(|l| l.source == Some(first))
                .expect("line exists");
            let line_b = lines
                .iter()
                .find(|l| l.source == Some(second))
                .expect("line exists");
            let bias = crate::scmb::BiasResult::from_lines(line_a, line_b)?;
            let mut row = CaseRow {
                first,
                second,
                delta_theta: bias.delta_theta,
                point: bias.point(),
                theoretical: bias.dr,
                simulated: None,
                grid_point: None,
                pass: None,
            };
            if spec.contains(bias.dx, bias.dy) {
                let pair = pair_scenario(scenario, first, second)?;
                let peak = scenario_caf(spec, &pair, execution)?.argmax();
                row.simulated = Some(peak.error());
                row.grid_point = Some((peak.east, peak.north));
                row.pass = Some((peak.error() - bias.dr).abs() <= tolerance);
            }
            rows.push(row);
        }
    }

    let one_path_each = scenario.satellites().iter().all(|s| s.paths().len() == 1);
    let bound = if one_path_each {
        let radii: Vec<f64> = lines.iter().map(|l| l.tangent_offset.abs()).collect();
        case_bound(&radii).ok()
    } else {
        None
    };

    Ok(CaseSpaceReport {
        space: spec.space,
        grid: *spec,
        rows,
        distinct_points: crossings.points.len(),
        estimate: scenario_caf(spec, scenario, execution)?.argmax(),
        bound,
        tolerance,
    })
}

/// Two-satellite scenario holding only the given paths.
fn pair_scenario(scenario: &Scenario, a: PathRef, b: PathRef) -> Result<Scenario> {
    let mut pair = scenario.subset(&[a.prn, b.prn])?;
    for r in [a, b] {
        let path = scenario
            .satellite(r.prn)
            .and_then(|s| s.paths().get(r.path))
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("no path {r}")))?;
        pair = pair.with_paths(r.prn, vec![path])?;
    }
    Ok(pair)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCandidate {
    pub east: f64,
    pub north: f64,
    pub distance: f64,
    /// Noiseless summed correlation at the exact crossing.
    pub correlation: f64,
    pub in_window: bool,
    pub contributors: Vec<PathRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub space: Space,
    pub grid: GridSpec,
    pub peak: Peak,
    pub candidates: Vec<OracleCandidate>,
    /// Index into `candidates` of the best-correlated in-window crossing.
    pub best: Option<usize>,
    /// Distance between the grid peak and the best crossing.
    pub separation: f64,
    /// One grid step in any lattice direction: `√2 · step`.
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn best_candidate(&self) -> Option<&OracleCandidate> {
        self.best.map(|i| &self.candidates[i])
    }
}

/// Checks the exhaustive grid argmax against the best-correlated analytic crossing.
///
/// A mismatch is reported through `pass`, not as an error.
pub fn run_oracle_compare(
    scenario: &Scenario,
    spec: &GridSpec,
    execution: Execution,
) -> Result<OracleReport> {
    if scenario.noise() > 0.0 {
        return Err(Error::InvalidInput(
            "oracle comparison needs a noiseless scenario".into(),
        ));
    }
    let lines = center_lines(scenario, spec.space)?;
    let crossings = enumerate_intersections(&lines, execution)?;
    let peak = scenario_caf(spec, scenario, execution)?.argmax();

    let candidates = crossings
        .points
        .iter()
        .map(|p| {
            let (e, n) = p.bias.point();
            Ok(OracleCandidate {
                east: e,
                north: n,
                distance: p.distance(),
                correlation: evaluate(scenario, spec.space, e, n)?,
                in_window: spec.contains(e, n),
                contributors: p.contributors.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best = candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.in_window)
        .max_by(|(_, a), (_, b)| {
            a.correlation
                .total_cmp(&b.correlation)
                .then(b.distance.total_cmp(&a.distance))
        })
        .map(|(i, _)| i);
    let tolerance = SQRT_2 * spec.step;
    let separation = best
        .map(|i| (candidates[i].east - peak.east).hypot(candidates[i].north - peak.north))
        .unwrap_or(f64::INFINITY);
    Ok(OracleReport {
        space: spec.space,
        grid: *spec,
        peak,
        candidates,
        best,
        separation,
        tolerance,
        pass: separation <= tolerance * (1.0 + 1e-12),
    })
}
