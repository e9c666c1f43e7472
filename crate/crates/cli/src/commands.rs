//! Subcommand bodies. Each returns the tables to write and a short text summary.

use dpe_multipath::caf::{scenario_caf, GridSpec, Space};
use dpe_multipath::mc::{
    run_azimuth_sweep, run_case_study, run_elevation_sweep, run_random_azimuth_mc, Sweep,
};
use dpe_multipath::scmb::{
    case_bound, center_lines, critical_points, enumerate_intersections, project_to_range,
    project_to_range_rate,
};
use dpe_multipath::Execution;

use crate::error::{CliError, CliResult};
use crate::report::{criterion_lines, run_report};
use crate::scenario_file::LoadedScenario;
use crate::table::ResultTable;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tables: Vec<ResultTable>,
    pub summary: Vec<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(tables: Vec<ResultTable>, summary: Vec<String>) -> Self {
        Self {
            tables,
            summary,
            exit_code: 0,
        }
    }
}

/// Parses `start:end:step`.
pub fn parse_sweep(text: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected start:end:step, got `{text}`"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    Sweep::new(num(a)?, num(b)?, num(c)?).map_err(|e| e.to_string())
}

pub fn spaces(space: Option<Space>) -> Vec<Space> {
    match space {
        Some(s) => vec![s],
        None => vec![Space::Position, Space::Velocity],
    }
}

/// Range and range-rate biases of every path, or of the given delay / Doppler on every satellite.
pub fn project(
    loaded: &LoadedScenario,
    delay_chips: Option<f64>,
    doppler_hz: Option<f64>,
    elevation_sweep: Option<Sweep>,
) -> CliResult<Outcome> {
    let s = &loaded.scenario;
    let mut t = ResultTable::new(
        "projection",
        &[
            ("prn", ""),
            ("path", ""),
            ("elevation", "deg"),
            ("azimuth", "deg"),
            ("delay", "chip"),
            ("doppler", "Hz"),
            ("range_bias", "m"),
            ("range_rate_bias", "m/s"),
        ],
    );
    let mut summary = Vec::new();
    let overriding = delay_chips.is_some() || doppler_hz.is_some();
    for ch in s.satellites() {
        let el = ch.angles().elevation();
        let biases: Vec<(Option<usize>, f64, f64)> = if overriding {
            vec![(None, delay_chips.unwrap_or(0.0), doppler_hz.unwrap_or(0.0))]
        } else {
            ch.paths()
                .iter()
                .enumerate()
                .map(|(i, p)| (Some(i), p.delay_chips, p.doppler_hz))
                .collect()
        };
        for (path, delay, doppler) in biases {
            let range = project_to_range(delay, el, s.signal.code_rate)?;
            let rate = project_to_range_rate(doppler, el, s.signal.carrier_frequency)?;
            summary.push(format!(
                "PRN{} elevation {:.1} deg: range bias {range:.2} m, range-rate bias {rate:.2} m/s",
                ch.prn,
                el.to_degrees()
            ));
            t.push(vec![
                ch.prn.into(),
                path.into(),
                el.to_degrees().into(),
                ch.angles().azimuth().to_degrees().into(),
                delay.into(),
                doppler.into(),
                range.into(),
                rate.into(),
            ]);
        }
    }
    let mut tables = vec![t];
    if let Some(sweep) = elevation_sweep {
        let r = run_elevation_sweep(
            delay_chips.unwrap_or(1.0),
            doppler_hz.unwrap_or(120.0),
            &sweep,
            &s.signal,
        )?;
        let mut f = ResultTable::new(
            "elevation_sweep",
            &[
                ("elevation", "deg"),
                ("range_bias", "m"),
                ("range_rate_bias", "m/s"),
            ],
        );
        for p in &r.points {
            f.push(vec![
                p.elevation_deg.into(),
                p.range_bias.into(),
                p.range_rate_bias.into(),
            ]);
        }
        summary.push(format!(
            "sweep of {} elevations, strictly increasing: range {}, range rate {}",
            r.points.len(),
            r.range_strictly_increasing,
            r.rate_strictly_increasing
        ));
        tables.push(f);
    }
    Ok(Outcome::ok(tables, summary))
}

/// Center lines and their cross-satellite crossings; `simulate` adds noiseless grid readouts.
pub fn intersect(
    loaded: &LoadedScenario,
    space: Option<Space>,
    simulate: bool,
    execution: Execution,
) -> CliResult<Outcome> {
    let s = &loaded.scenario;
    let mut tables = Vec::new();
    let mut summary = Vec::new();
    for space in spaces(space) {
        let unit = space.unit();
        let lines = center_lines(s, space)?;
        let mut lt = ResultTable::new(
            &format!("center_lines_{space}"),
            &[
                ("prn", ""),
                ("path", ""),
                ("azimuth", "deg"),
                ("offset", unit),
                ("slope", ""),
                ("intercept", unit),
            ],
        );
        for l in &lines {
            let src = l.source.expect("scenario lines carry a source");
            lt.push(vec![
                src.prn.into(),
                src.path.into(),
                l.azimuth.to_degrees().into(),
                l.tangent_offset.into(),
                l.slope().into(),
                l.intercept().into(),
            ]);
        }
        tables.push(lt);

        let mut it = ResultTable::new(
            &format!("intersections_{space}"),
            &[
                ("first", ""),
                ("second", ""),
                ("delta_theta", "deg"),
                ("dx", unit),
                ("dy", unit),
                ("dr", unit),
                ("simulated", unit),
                ("diff", unit),
                ("pass", ""),
            ],
        );
        if simulate {
            let study = run_case_study(s, &loaded.name, &[loaded.grid(space)], execution)?;
            let sp = &study.spaces[0];
            for r in &sp.rows {
                it.push(vec![
                    r.first.to_string().into(),
                    r.second.to_string().into(),
                    r.delta_theta.to_degrees().into(),
                    r.point.0.into(),
                    r.point.1.into(),
                    r.theoretical.into(),
                    r.simulated.into(),
                    r.diff().into(),
                    r.pass.into(),
                ]);
            }
            summary.push(format!(
                "{space}: {} pairs, {} distinct crossings, grid readouts {}",
                sp.rows.len(),
                sp.distinct_points,
                if sp.all_pass() { "agree" } else { "DISAGREE" }
            ));
        } else {
            let crossings = enumerate_intersections(&lines, execution)?;
            for p in &crossings.points {
                for (a, b) in &p.pairs {
                    it.push(vec![
                        fmt_ref(a).into(),
                        fmt_ref(b).into(),
                        p.bias.delta_theta.to_degrees().into(),
                        p.bias.dx.into(),
                        p.bias.dy.into(),
                        p.bias.dr.into(),
                        None::<f64>.into(),
                        None::<f64>.into(),
                        None::<bool>.into(),
                    ]);
                }
            }
            for (a, b) in &crossings.unbounded {
                it.push(vec![
                    fmt_ref(a).into(),
                    fmt_ref(b).into(),
                    None::<f64>.into(),
                    None::<f64>.into(),
                    None::<f64>.into(),
                    f64::INFINITY.into(),
                    None::<f64>.into(),
                    None::<f64>.into(),
                    None::<bool>.into(),
                ]);
            }
            summary.push(format!(
                "{space}: {} pairs, {} distinct crossings, {} parallel",
                crossings.raw_pairs,
                crossings.points.len(),
                crossings.unbounded.len()
            ));
        }
        tables.push(it);
    }
    Ok(Outcome::ok(tables, summary))
}

fn fmt_ref(r: &Option<dpe_multipath::channel::PathRef>) -> String {
    r.map(|r| r.to_string()).unwrap_or_default()
}

/// Error bound of a radius set, given directly or taken from single-path satellites.
pub fn bounds(loaded: &LoadedScenario, radii: Option<Vec<f64>>) -> CliResult<Outcome> {
    let radii = match radii {
        Some(r) => r,
        None => {
            let s = &loaded.scenario;
            if s.satellites().iter().any(|c| c.paths().len() != 1) {
                return Err(CliError::Compute(dpe_multipath::Error::InvalidInput(
                    "bounds from a scenario need exactly one path per satellite; pass --radii"
                        .into(),
                )));
            }
            center_lines(s, Space::Position)?
                .iter()
                .map(|l| l.tangent_offset.abs())
                .collect()
        }
    };
    let bound = case_bound(&radii)?;
    let mut t = ResultTable::new(
        "bounds",
        &[
            ("case", ""),
            ("lower", "m"),
            ("lower_attained", ""),
            ("attained_at", "deg"),
            ("upper", "m"),
        ],
    );
    t.push(vec![
        bound.case.to_string().into(),
        bound.lower.into(),
        bound.lower_attained.into(),
        bound.attained_at.map(f64::to_degrees).into(),
        bound.upper.into(),
    ]);

    let mut cp = ResultTable::new(
        "critical_points",
        &[
            ("i", ""),
            ("j", ""),
            ("rho_i", "m"),
            ("rho_j", "m"),
            ("delta_theta", "deg"),
            ("min_error", "m"),
            ("attained", ""),
        ],
    );
    for i in 0..radii.len() {
        for j in i + 1..radii.len() {
            let Ok(c) = critical_points(radii[i], radii[j]) else {
                continue;
            };
            cp.push(vec![
                i.into(),
                j.into(),
                radii[i].into(),
                radii[j].into(),
                c.delta_theta.to_degrees().into(),
                c.min_error.into(),
                c.attained.into(),
            ]);
        }
    }
    Ok(Outcome::ok(vec![t, cp], vec![bound.to_string()]))
}

/// Evaluates the summed CAF over a grid; optional overrides of the scenario grid and PRN set.
pub fn caf(
    loaded: &LoadedScenario,
    space: Space,
    grid: Option<(f64, f64)>,
    prns: Option<Vec<u32>>,
    execution: Execution,
) -> CliResult<Outcome> {
    let spec = match grid {
        Some((half, step)) => GridSpec::new(space, half, step)?,
        None => loaded.grid(space),
    };
    let scenario = match prns {
        Some(p) => loaded.scenario.subset(&p)?,
        None => loaded.scenario.clone(),
    };
    let g = scenario_caf(&spec, &scenario, execution)?;
    let unit = space.unit();
    let mut t = ResultTable::new(
        &format!("caf_{space}"),
        &[("east", unit), ("north", unit), ("value", "")],
    );
    for row in 0..spec.side() {
        for col in 0..spec.side() {
            let (e, n) = spec.offset(row, col);
            t.push(vec![e.into(), n.into(), g.value(row, col).into()]);
        }
    }
    let peak = g.argmax();
    let mut p = ResultTable::new(
        &format!("caf_peak_{space}"),
        &[
            ("east", unit),
            ("north", unit),
            ("error", unit),
            ("value", ""),
        ],
    );
    p.push(vec![
        peak.east.into(),
        peak.north.into(),
        peak.error().into(),
        peak.value.into(),
    ]);
    let summary = vec![format!(
        "{space} peak at ({}, {}) {unit}, error {:.3} {unit}, value {:.6}",
        peak.east,
        peak.north,
        peak.error(),
        peak.value
    )];
    Ok(Outcome::ok(vec![t, p], summary))
}

/// Random azimuth separations, or a deterministic sweep in degrees.
pub fn montecarlo(
    rho_i: f64,
    rho_j: f64,
    trials: usize,
    seed: u64,
    sweep: Option<Sweep>,
    execution: Execution,
) -> CliResult<Outcome> {
    let r = match sweep {
        Some(s) => run_azimuth_sweep(rho_i, rho_j, &s)?,
        None => run_random_azimuth_mc(rho_i, rho_j, trials, seed, execution)?,
    };
    let mut samples = ResultTable::new(
        "montecarlo_samples",
        &[
            ("delta_theta", "deg"),
            ("dr", "m"),
            ("dx", "m"),
            ("dy", "m"),
            ("in_window", ""),
            ("trial", ""),
        ],
    );
    for s in &r.samples {
        samples.push(vec![
            s.delta_theta.to_degrees().into(),
            s.dr.into(),
            s.dx.into(),
            s.dy.into(),
            s.in_window.into(),
            s.trial.into(),
        ]);
    }
    let m = &r.summary;
    let mut summary_t = ResultTable::new(
        "montecarlo_summary",
        &[
            ("count", ""),
            ("min_dr", "m"),
            ("argmin_delta_theta", "deg"),
            ("max_dr", "m"),
            ("floor", "m"),
            ("below_floor", ""),
            ("unbounded", ""),
            ("in_window", ""),
            ("critical_delta_theta", "deg"),
        ],
    );
    summary_t.push(vec![
        m.count.into(),
        m.min_dr.into(),
        m.argmin_delta_theta.to_degrees().into(),
        m.max_dr.into(),
        m.floor.into(),
        m.below_floor.into(),
        m.unbounded.into(),
        m.in_window.into(),
        r.critical.map(|c| c.delta_theta.to_degrees()).into(),
    ]);
    let summary = vec![format!(
        "min error {:.3} m at {:.2} deg over {} samples; {} below {} m",
        m.min_dr,
        m.argmin_delta_theta.to_degrees(),
        m.count,
        m.below_floor,
        m.floor
    )];
    Ok(Outcome::ok(vec![samples, summary_t], summary))
}

/// Runs every bundled reproduction; exit code 1 when any check fails.
pub fn report(seed: u64, execution: Execution) -> CliResult<Outcome> {
    let r = run_report(seed, execution)?;
    let mut summary: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.line())
        .collect();
    summary.extend(criterion_lines(&r));
    summary.push(format!(
        "{} of {} checks passed",
        r.checks.iter().filter(|c| c.pass).count(),
        r.checks.len()
    ));
    let mut tables = vec![r.checks_table()];
    tables.extend(r.tables.iter().cloned());
    Ok(Outcome {
        tables,
        summary,
        exit_code: if r.all_pass() { 0 } else { 1 },
    })
}
