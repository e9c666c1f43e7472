//! Analytic cross-ambiguity function over horizontal position / velocity candidate grids.
//!
//! Correlation shapes are modeled, not computed from samples: a triangle of one chip
//! half-width in code delay and a `sinc` in Doppler. Position and velocity are searched
//! separately with the other held at truth, and clock terms are held at truth throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::channel::{SatelliteChannel, Scenario, SignalConfig};
use crate::geom::EnuVector;
use crate::scmb::TANGENT_SIDE;
use crate::{Error, Execution, Result, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Velocity,
}

impl Space {
    pub fn unit(&self) -> &'static str {
        match self {
            Space::Position => "m",
            Space::Velocity => "m/s",
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Space::Position => "position",
            Space::Velocity => "velocity",
        })
    }
}

/// Code correlation: `max(0, 1 - |Δτ|)`.
pub fn corr_code(delta_chips: f64) -> f64 {
    (1.0 - delta_chips.abs()).max(0.0)
}

/// Doppler correlation: `sinc(π Δf T_c)`, with the limit 1 at zero.
pub fn corr_doppler(delta_hz: f64, coherent_integration: f64) -> f64 {
    let x = PI * delta_hz * coherent_integration;
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Signed range change, per unit displacement, of a horizontal candidate offset `(e, n)`:
/// `((x^m - x)(x - x̂) + (y^m - y)(y - ŷ)) / r^m`.
fn projected_offset(channel: &SatelliteChannel, e: f64, n: f64) -> Result<f64> {
    let los = channel.line_of_sight();
    let range = los.norm();
    if range.is_nan() || range <= 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "PRN{}: zero slant range",
            channel.prn
        )));
    }
    Ok(-(los.e * e + los.n * n) / range)
}

/// LOS code-delay deviation (chips) of a candidate horizontal position, given relative to the
/// receiver truth in the local E-N frame.
pub fn delta_tau0(
    candidate_en: EnuVector,
    channel: &SatelliteChannel,
    scenario: &Scenario,
) -> Result<f64> {
    let proj = projected_offset(channel, candidate_en.e, candidate_en.n)?;
    Ok(scenario.signal.code_rate / SPEED_OF_LIGHT * proj)
}

/// LOS Doppler deviation (Hz) of a candidate horizontal velocity (absolute, ENU).
pub fn delta_fd0(
    candidate_vel_en: EnuVector,
    channel: &SatelliteChannel,
    scenario: &Scenario,
) -> Result<f64> {
    let truth = scenario.receiver_velocity_enu();
    let proj = projected_offset(
        channel,
        candidate_vel_en.e - truth.e,
        candidate_vel_en.n - truth.n,
    )?;
    Ok(scenario.signal.carrier_frequency / SPEED_OF_LIGHT * proj)
}

/// Square candidate grid centered on truth. Row index runs along North, column along East.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub space: Space,
    pub half_extent: f64,
    pub step: f64,
    half_count: usize,
}

impl GridSpec {
    pub fn new(space: Space, half_extent: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0 && half_extent.is_finite() && half_extent >= 0.0) {
            return Err(Error::InvalidInput(
                "grid step must be positive and extent non-negative".into(),
            ));
        }
        let count = (half_extent / step).round();
        if (count * step - half_extent).abs() > 1e-9 * half_extent.max(step) {
            return Err(Error::InvalidInput(format!(
                "grid half extent {half_extent} is not a whole number of {step} steps"
            )));
        }
        if count > 20_000.0 {
            return Err(Error::InvalidInput("grid too large".into()));
        }
        Ok(Self {
            space,
            half_extent,
            step,
            half_count: count as usize,
        })
    }

    /// ±100 m at 1 m, or ±100 m/s at 0.1 m/s.
    pub fn default_for(space: Space) -> Self {
        match space {
            Space::Position => Self::new(space, 100.0, 1.0),
            Space::Velocity => Self::new(space, 100.0, 0.1),
        }
        .expect("default grid is valid")
    }

    /// Samples per axis (always odd).
    pub fn side(&self) -> usize {
        2 * self.half_count + 1
    }

    pub fn len(&self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Offset from truth of sample `index` along one axis.
    pub fn axis_value(&self, index: usize) -> f64 {
        (index as f64 - self.half_count as f64) * self.step
    }

    /// `(east, north)` offset of a cell.
    pub fn offset(&self, row: usize, col: usize) -> (f64, f64) {
        (self.axis_value(col), self.axis_value(row))
    }

    /// Whether an offset lies inside the searched window.
    pub fn contains(&self, e: f64, n: f64) -> bool {
        let lim = self.half_extent + 1e-9;
        e.abs() <= lim && n.abs() <= lim
    }

    fn squared_index_norm(&self, row: usize, col: usize) -> u64 {
        let h = self.half_count as i64;
        let (dr, dc) = (row as i64 - h, col as i64 - h);
        (dr * dr + dc * dc) as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub spec: GridSpec,
    /// Row-major correlation values.
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.side() + col]
    }

    pub fn argmax(&self) -> Peak {
        argmax_values(&self.spec, &self.values)
    }
}

/// Location and value of the largest grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub row: usize,
    pub col: usize,
    /// Offset from truth (East, North), m or m/s.
    pub east: f64,
    pub north: f64,
    pub value: f64,
}

impl Peak {
    /// Estimation error: distance of the peak from truth.
    pub fn error(&self) -> f64 {
        self.east.hypot(self.north)
    }
}

fn argmax_values(spec: &GridSpec, values: &[f64]) -> Peak {
    let side = spec.side();
    let mut best = (0usize, f64::NEG_INFINITY, u64::MAX);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v, spec.squared_index_norm(i / side, i % side));
        } else if v == best.1 {
            let norm = spec.squared_index_norm(i / side, i % side);
            if norm < best.2 {
                best = (i, v, norm);
            }
        }
    }
    let (row, col) = (best.0 / side, best.0 % side);
    let (east, north) = spec.offset(row, col);
    Peak {
        row,
        col,
        east,
        north,
        value: best.1,
    }
}

/// Noiseless correlation of one channel at a horizontal offset from truth.
fn channel_value(
    channel: &SatelliteChannel,
    signal: &SignalConfig,
    space: Space,
    e: f64,
    n: f64,
) -> Result<f64> {
    let proj = projected_offset(channel, e, n)?;
    let value = match space {
        Space::Position => {
            let d0 = signal.code_rate / SPEED_OF_LIGHT * proj;
            channel
                .paths()
                .iter()
                .map(|p| p.amplitude * corr_code(d0 + TANGENT_SIDE * p.delay_chips))
                .sum()
        }
        Space::Velocity => {
            let d0 = signal.carrier_frequency / SPEED_OF_LIGHT * proj;
            channel
                .paths()
                .iter()
                .map(|p| {
                    p.amplitude
                        * corr_doppler(
                            d0 + TANGENT_SIDE * p.doppler_hz,
                            signal.coherent_integration,
                        )
                })
                .sum()
        }
    };
    Ok(value)
}

/// Noiseless summed correlation of all satellites at an arbitrary offset from truth.
pub fn evaluate(scenario: &Scenario, space: Space, east: f64, north: f64) -> Result<f64> {
    scenario.satellites().iter().try_fold(0.0, |acc, ch| {
        Ok(acc + channel_value(ch, &scenario.signal, space, east, north)?)
    })
}

fn noise_rng(seed: u64, prn: u32, row: usize) -> ChaCha8Rng {
    let key = seed ^ u64::from(prn).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(row as u64);
    rng
}

fn fill_grid(
    spec: &GridSpec,
    channels: &[&SatelliteChannel],
    scenario: &Scenario,
    execution: Execution,
) -> Result<Grid2D> {
    for ch in channels {
        projected_offset(ch, 0.0, 0.0)?;
    }
    let side = spec.side();
    let sigma = scenario.noise();
    let mut values = vec![0.0; spec.len()];
    let fill_row = |(row, chunk): (usize, &mut [f64])| {
        let north = spec.axis_value(row);
        let mut rngs: Vec<ChaCha8Rng> = if sigma > 0.0 {
            channels
                .iter()
                .map(|ch| noise_rng(scenario.seed, ch.prn, row))
                .collect()
        } else {
            Vec::new()
        };
        for (col, cell) in chunk.iter_mut().enumerate() {
            let east = spec.axis_value(col);
            let mut total = 0.0;
            for (k, ch) in channels.iter().enumerate() {
                // slant range already checked above
                let mut v = channel_value(ch, &scenario.signal, spec.space, east, north)
                    .unwrap_or(f64::NAN);
                if let Some(rng) = rngs.get_mut(k) {
                    let z: f64 = rng.sample(StandardNormal);
                    v += sigma * z;
                }
                total += v;
            }
            *cell = total;
        }
    };
    match execution {
        Execution::Serial => values.chunks_mut(side).enumerate().for_each(fill_row),
        Execution::Parallel => values.par_chunks_mut(side).enumerate().for_each(fill_row),
    }
    Ok(Grid2D {
        spec: *spec,
        values,
    })
}

/// Correlation grid of a single satellite: the amplitude-weighted sum of its path correlations,
/// each shifted by that path's delay (position) or Doppler (velocity) bias.
pub fn channel_caf(
    spec: &GridSpec,
    channel: &SatelliteChannel,
    scenario: &Scenario,
    execution: Execution,
) -> Result<Grid2D> {
    fill_grid(spec, &[channel], scenario, execution)
}

/// Sum of all channel grids of a scenario, evaluated in one pass.
///
/// Equal to superposing the individual [`channel_caf`] grids in satellite order.
pub fn scenario_caf(spec: &GridSpec, scenario: &Scenario, execution: Execution) -> Result<Grid2D> {
    let channels: Vec<&SatelliteChannel> = scenario.satellites().iter().collect();
    fill_grid(spec, &channels, scenario, execution)
}

/// Sums grids cell by cell and returns the maximizing cell.
///
/// Ties go to the cell nearest truth, then to the first in row-major order.
pub fn superpose_and_argmax(grids: &[Grid2D]) -> Result<(Grid2D, Peak)> {
    let first = grids.first().ok_or(Error::TooFew {
        what: "grids",
        needed: 1,
        got: 0,
    })?;
    if grids
        .iter()
        .any(|g| g.spec != first.spec || g.values.len() != first.spec.len())
    {
        return Err(Error::GridMismatch);
    }
    let mut values = vec![0.0; first.spec.len()];
    for g in grids {
        for (acc, v) in values.iter_mut().zip(&g.values) {
            *acc += v;
        }
    }
    let peak = argmax_values(&first.spec, &values);
    Ok((
        Grid2D {
            spec: first.spec,
            values,
        },
        peak,
    ))
}
