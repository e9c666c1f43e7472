//! End-to-end reproduction of the reference results with embedded expected values.

use dpe_multipath::caf::Space;
use dpe_multipath::mc::{
    run_azimuth_sweep, run_case_study, run_elevation_sweep, run_oracle_compare,
    run_random_azimuth_mc, CaseStudyReport, Sweep,
};
use dpe_multipath::scmb::{center_lines, critical_points, project_to_range, project_to_range_rate};
use dpe_multipath::Execution;
use serde::Serialize;

use crate::bundled::load_bundled;
use crate::error::CliResult;
use crate::table::ResultTable;

pub const PROJECTION_TOLERANCE: f64 = 0.1;
/// The OA pair separation is listed as 85.1° but the sky geometry gives 84.9°.
pub const OA_TOLERANCE: f64 = 0.4;
pub const MC_TRIALS: usize = 10_000;
pub const MC_RADII: (f64, f64) = (60.0, 40.0);
pub const MC_MIN_RELATIVE: f64 = 0.005;
pub const MC_ARGMIN_TOLERANCE_DEG: f64 = 1.0;
pub const SWEEP_RADIUS: f64 = 40.0;

/// `(prn, δρ [m], δρ̇ [m/s])` for 1 chip / 120 Hz.
pub const ELEVATION_EXPECTED: [(u32, f64, f64); 4] = [
    (10, 36.0, 37.5),
    (18, 39.9, 41.7),
    (23, 74.0, 77.2),
    (24, 84.8, 88.5),
];

/// `(label, prn a, prn b)` of the labeled crossings.
pub const CROSSINGS: [(&str, u32, u32); 5] = [
    ("OA", 10, 24),
    ("OB", 18, 23),
    ("OC", 10, 18),
    ("OD", 23, 24),
    ("OE", 10, 23),
];

/// `(label, analytic, reference grid value)`; identical in m and m/s.
pub type CaseValues = &'static [(&'static str, f64, f64)];

pub const CASE_EXPECTED: [(u8, CaseValues); 3] = [
    (1, &[("OB", 47.3, 46.7), ("OC", 41.7, 41.9)]),
    (
        2,
        &[
            ("OA", 54.2, 54.3),
            ("OB", 82.9, 82.3),
            ("OC", 66.7, 66.8),
            ("OD", 48.5, 48.2),
            ("OE", 40.4, 40.7),
        ],
    ),
    (
        3,
        &[
            ("OA", 60.8, 61.2),
            ("OB", 72.8, 73.2),
            ("OC", 84.4, 84.9),
            ("OD", 30.3, 30.0),
        ],
    ),
];

/// Single-NLOS pair replay: `δρ`, `δρ̇`, `δr`, `δṙ`.
pub const REPLAY_EXPECTED: [f64; 4] = [39.9, 41.8, 47.2, 49.5];
/// Field-measured counterparts of [`REPLAY_EXPECTED`]; documentation only.
pub const REPLAY_MEASURED: [f64; 4] = [39.7, 41.8, 46.1, 47.6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn near(
        criterion: u8,
        name: impl Into<String>,
        expected: f64,
        actual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            criterion,
            name: name.into(),
            expected,
            actual,
            tolerance,
            pass: (actual - expected).abs() <= tolerance,
        }
    }

    /// Compares `actual` rounded to `decimals` places, as the expected values are.
    pub fn near_rounded(
        criterion: u8,
        name: impl Into<String>,
        expected: f64,
        actual: f64,
        tolerance: f64,
        decimals: i32,
    ) -> Self {
        let scale = 10f64.powi(decimals);
        let rounded = (actual * scale).round() / scale;
        Self {
            pass: (rounded - expected).abs() <= tolerance + 1e-9,
            ..Self::near(criterion, name, expected, actual, tolerance)
        }
    }

    pub fn flag(criterion: u8, name: impl Into<String>, ok: bool) -> Self {
        Self::near(criterion, name, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {} {}: expected {} actual {} (tol {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.expected,
            self.actual,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub tables: Vec<ResultTable>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn criterion(&self, n: u8) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(move |c| c.criterion == n)
    }

    /// `Some(pass)` when the criterion has at least one check.
    pub fn criterion_pass(&self, n: u8) -> Option<bool> {
        let mut any = false;
        let mut all = true;
        for c in self.criterion(n) {
            any = true;
            all &= c.pass;
        }
        any.then_some(all)
    }

    pub fn checks_table(&self) -> ResultTable {
        let mut t = ResultTable::new(
            "report",
            &[
                ("criterion", ""),
                ("check", ""),
                ("expected", ""),
                ("actual", ""),
                ("tolerance", ""),
                ("pass", ""),
            ],
        );
        for c in &self.checks {
            t.push(vec![
                usize::from(c.criterion).into(),
                c.name.clone().into(),
                c.expected.into(),
                c.actual.into(),
                c.tolerance.into(),
                c.pass.into(),
            ]);
        }
        t
    }
}

pub fn run_report(seed: u64, execution: Execution) -> CliResult<Report> {
    let mut report = Report {
        checks: Vec::new(),
        tables: Vec::new(),
    };
    elevation_study(&mut report)?;
    elevation_sweep(&mut report)?;
    case_studies(&mut report, execution)?;
    monte_carlo(&mut report, seed, execution)?;
    pair_replay(&mut report, execution)?;
    azimuth_sweep(&mut report)?;
    Ok(report)
}

fn elevation_study(report: &mut Report) -> CliResult<()> {
    let loaded = load_bundled("table1")?;
    let signal = loaded.scenario.signal;
    let mut t = ResultTable::new(
        "elevation_study",
        &[
            ("prn", ""),
            ("elevation", "deg"),
            ("range_bias", "m"),
            ("expected_range_bias", "m"),
            ("range_rate_bias", "m/s"),
            ("expected_range_rate_bias", "m/s"),
        ],
    )
    .note("1 chip code delay, 120 Hz Doppler offset");
    for (prn, range_exp, rate_exp) in ELEVATION_EXPECTED {
        let ch = loaded.scenario.satellite(prn).expect("bundled PRN");
        let el = ch.angles().elevation();
        let range = project_to_range(1.0, el, signal.code_rate)?;
        let rate = project_to_range_rate(120.0, el, signal.carrier_frequency)?;
        report.checks.push(Check::near_rounded(
            1,
            format!("PRN{prn} range bias"),
            range_exp,
            range,
            PROJECTION_TOLERANCE,
            1,
        ));
        report.checks.push(Check::near_rounded(
            1,
            format!("PRN{prn} range-rate bias"),
            rate_exp,
            rate,
            PROJECTION_TOLERANCE,
            1,
        ));
        t.push(vec![
            prn.into(),
            el.to_degrees().into(),
            range.into(),
            range_exp.into(),
            rate.into(),
            rate_exp.into(),
        ]);
    }
    report.tables.push(t);
    Ok(())
}

fn elevation_sweep(report: &mut Report) -> CliResult<()> {
    let signal = load_bundled("table1")?.scenario.signal;
    let sweep = run_elevation_sweep(1.0, 120.0, &Sweep::new(0.0, 89.0, 0.5)?, &signal)?;
    let first = sweep.points[0];
    report.checks.push(Check::near(
        2,
        "range bias at 0 deg",
        29.3,
        first.range_bias,
        PROJECTION_TOLERANCE,
    ));
    report.checks.push(Check::near(
        2,
        "range-rate bias at 0 deg",
        30.6,
        first.range_rate_bias,
        PROJECTION_TOLERANCE,
    ));
    report.checks.push(Check::flag(
        2,
        "range bias strictly increasing",
        sweep.range_strictly_increasing,
    ));
    report.checks.push(Check::flag(
        2,
        "range-rate bias strictly increasing",
        sweep.rate_strictly_increasing,
    ));

    let mut t = ResultTable::new(
        "fig7_data",
        &[
            ("elevation", "deg"),
            ("range_bias", "m"),
            ("range_rate_bias", "m/s"),
        ],
    )
    .note("1 chip code delay, 120 Hz Doppler offset");
    for p in &sweep.points {
        t.push(vec![
            p.elevation_deg.into(),
            p.range_bias.into(),
            p.range_rate_bias.into(),
        ]);
    }
    report.tables.push(t);
    Ok(())
}

fn case_studies(report: &mut Report, execution: Execution) -> CliResult<()> {
    let mut t = ResultTable::new(
        "case_study",
        &[
            ("case", ""),
            ("space", ""),
            ("unit", ""),
            ("label", ""),
            ("prn_a", ""),
            ("prn_b", ""),
            ("delta_theta", "deg"),
            ("theoretical", ""),
            ("expected", ""),
            ("simulated", ""),
            ("reference_simulated", ""),
            ("diff", ""),
            ("in_window", ""),
        ],
    )
    .note("simulated: argmax distance of the noiseless two-satellite grid; empty outside the grid window");
    for (id, expected) in CASE_EXPECTED {
        let loaded = load_bundled(&format!("case{id}"))?;
        let study = run_case_study(
            &loaded.scenario,
            &format!("case{id}"),
            &[loaded.grid(Space::Position), loaded.grid(Space::Velocity)],
            execution,
        )?;
        case_checks(report, id, expected, &study);
        for space in &study.spaces {
            for (label, a, b) in CROSSINGS {
                let Some(row) = space.row(a, b) else { continue };
                let exp = expected.iter().find(|(l, _, _)| *l == label);
                t.push(vec![
                    usize::from(id).into(),
                    space.space.to_string().into(),
                    space.space.unit().into(),
                    label.into(),
                    a.into(),
                    b.into(),
                    row.delta_theta.to_degrees().into(),
                    row.theoretical.into(),
                    exp.map(|e| e.1).into(),
                    row.simulated.into(),
                    exp.map(|e| e.2).into(),
                    row.diff().into(),
                    row.simulated.is_some().into(),
                ]);
            }
        }
    }
    report.tables.push(t);
    Ok(())
}

fn case_checks(
    report: &mut Report,
    id: u8,
    expected: &[(&str, f64, f64)],
    study: &CaseStudyReport,
) {
    for space in &study.spaces {
        for (label, value, _) in expected {
            let (_, a, b) = CROSSINGS
                .iter()
                .find(|c| c.0 == *label)
                .expect("known label");
            let tol = if *label == "OA" {
                OA_TOLERANCE
            } else {
                PROJECTION_TOLERANCE
            };
            let actual = space.row(*a, *b).map_or(f64::NAN, |r| r.theoretical);
            report.checks.push(Check::near(
                3,
                format!("case{id} {} {label}", space.space),
                *value,
                actual,
                tol,
            ));
        }
        for row in &space.rows {
            if let Some(sim) = row.simulated {
                report.checks.push(Check::near(
                    4,
                    format!(
                        "case{id} {} PRN{}-PRN{} grid readout",
                        space.space, row.first.prn, row.second.prn
                    ),
                    row.theoretical,
                    sim,
                    space.tolerance,
                ));
            }
        }
    }
}

fn monte_carlo(report: &mut Report, seed: u64, execution: Execution) -> CliResult<()> {
    let (ri, rj) = MC_RADII;
    let mc = run_random_azimuth_mc(ri, rj, MC_TRIALS, seed, execution)?;
    let floor = ri.max(rj);
    let cp = critical_points(ri, rj)?;
    report.checks.push(Check::near(
        5,
        "minimum error",
        floor,
        mc.summary.min_dr,
        MC_MIN_RELATIVE * floor,
    ));
    report.checks.push(Check::near(
        5,
        "separation of minimum [deg]",
        cp.delta_theta.to_degrees(),
        mc.summary.argmin_delta_theta.to_degrees(),
        MC_ARGMIN_TOLERANCE_DEG,
    ));
    report.checks.push(Check::near(
        5,
        "samples below outer radius",
        0.0,
        mc.summary.below_floor as f64,
        0.0,
    ));

    let mut t = ResultTable::new(
        "fig11_data",
        &[
            ("delta_theta", "deg"),
            ("dr", "m"),
            ("dx", "m"),
            ("dy", "m"),
            ("in_window", ""),
            ("trial", ""),
        ],
    )
    .note(format!(
        "radii {ri} and {rj}, {MC_TRIALS} trials, seed {seed}"
    ));
    for s in &mc.samples {
        t.push(vec![
            s.delta_theta.to_degrees().into(),
            s.dr.into(),
            s.dx.into(),
            s.dy.into(),
            s.in_window.into(),
            s.trial.into(),
        ]);
    }
    report.tables.push(t);
    Ok(())
}

fn pair_replay(report: &mut Report, execution: Execution) -> CliResult<()> {
    let loaded = load_bundled("table6")?;
    let s = &loaded.scenario;
    let mut t = ResultTable::new(
        "pair_replay",
        &[
            ("quantity", ""),
            ("unit", ""),
            ("theoretical", ""),
            ("expected", ""),
            ("measured", ""),
            ("grid_argmax", ""),
        ],
    )
    .note("PRN18 NLOS 1 chip / 120.3 Hz, PRN23 LOS; measured values are documentation only");
    let mut values = Vec::new();
    for space in [Space::Position, Space::Velocity] {
        let lines = center_lines(s, space)?;
        let offset = lines
            .iter()
            .find(|l| l.source.map(|r| r.prn) == Some(18))
            .map_or(f64::NAN, |l| l.tangent_offset);
        let oracle = run_oracle_compare(s, &loaded.grid(space), execution)?;
        let best = oracle.best_candidate().map_or(f64::NAN, |c| c.distance);
        report.checks.push(Check::flag(
            6,
            format!("{space} grid argmax within one step of crossing"),
            oracle.pass,
        ));
        values.push((space, offset, best, oracle.peak.error()));
    }
    let names = [
        "range bias",
        "range-rate bias",
        "position error",
        "velocity error",
    ];
    let rows = [
        (values[0].1, None),
        (values[1].1, None),
        (values[0].2, Some(values[0].3)),
        (values[1].2, Some(values[1].3)),
    ];
    for (k, (actual, grid)) in rows.into_iter().enumerate() {
        let unit = if k % 2 == 0 { "m" } else { "m/s" };
        report.checks.push(Check::near(
            6,
            names[k],
            REPLAY_EXPECTED[k],
            actual,
            PROJECTION_TOLERANCE,
        ));
        t.push(vec![
            names[k].into(),
            unit.into(),
            actual.into(),
            REPLAY_EXPECTED[k].into(),
            REPLAY_MEASURED[k].into(),
            grid.into(),
        ]);
    }
    report.tables.push(t);
    Ok(())
}

fn azimuth_sweep(report: &mut Report) -> CliResult<()> {
    let sweep = Sweep::new(0.0, 180.0, 0.5)?;
    let single = run_azimuth_sweep(SWEEP_RADIUS, 0.0, &sweep)?;
    let equal = run_azimuth_sweep(SWEEP_RADIUS, SWEEP_RADIUS, &sweep)?;
    let mut t = ResultTable::new(
        "fig8_data",
        &[("delta_theta", "deg"), ("case1_dr", "m"), ("case2_dr", "m")],
    )
    .note(format!(
        "bias {SWEEP_RADIUS} on one satellite (case1) or both (case2); velocity curves coincide in m/s"
    ));
    for (a, b) in single.samples.iter().zip(&equal.samples) {
        t.push(vec![
            a.delta_theta.to_degrees().into(),
            a.dr.into(),
            b.dr.into(),
        ]);
    }
    report.tables.push(t);
    Ok(())
}

/// Formats the per-criterion summary, one line each.
pub fn criterion_lines(report: &Report) -> Vec<String> {
    (1..=6)
        .filter_map(|n| {
            report.criterion_pass(n).map(|ok| {
                let count = report.criterion(n).count();
                format!(
                    "criterion {n}: {} ({count} checks)",
                    if ok { "PASS" } else { "FAIL" }
                )
            })
        })
        .collect()
}
