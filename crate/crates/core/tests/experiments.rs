use dpe_multipath::caf::{scenario_caf, GridSpec, Space};
use dpe_multipath::channel::{Scenario, SignalConfig, SignalPath};
use dpe_multipath::geom::LookAngles;
use dpe_multipath::mc::{
    run_case_study, run_elevation_sweep, run_oracle_compare, run_random_azimuth_mc, AzimuthSummary,
    Sweep,
};
use dpe_multipath::reference::{self, RECEIVER_POSITION, RECEIVER_VELOCITY};
use dpe_multipath::scmb::{range_to_delay, TANGENT_SIDE};
use dpe_multipath::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

/// Crossing of two center lines by Cramer's rule on `sin θ x + cos θ y = side · ρ`.
fn analytic_crossing(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let ((ta, ra), (tb, rb)) = (a, b);
    let (sa, ca, sb, cb) = (ta.sin(), ta.cos(), tb.sin(), tb.cos());
    let (oa, ob) = (TANGENT_SIDE * ra, TANGENT_SIDE * rb);
    let det = sa * cb - ca * sb;
    ((oa * cb - ob * ca) / det, (sa * ob - sb * oa) / det)
}

struct PairDraw {
    elevation: [f64; 2],
    azimuth: [f64; 2],
    radius: [f64; 2],
}

fn draw_pair(rng: &mut ChaCha8Rng) -> PairDraw {
    loop {
        let az0 = rng.random_range(0.0..360.0f64).to_radians();
        let sep = rng.random_range(45.0..135.0f64).to_radians();
        let d = PairDraw {
            elevation: [
                rng.random_range(15.0..70.0f64).to_radians(),
                rng.random_range(15.0..70.0f64).to_radians(),
            ],
            azimuth: [az0, az0 + sep],
            radius: [rng.random_range(0.0..60.0), rng.random_range(0.0..60.0)],
        };
        let (x, y) = analytic_crossing((d.azimuth[0], d.radius[0]), (d.azimuth[1], d.radius[1]));
        if x.abs() <= 90.0 && y.abs() <= 90.0 {
            return d;
        }
    }
}

fn pair_scenario(d: &PairDraw) -> Scenario {
    let signal = SignalConfig::gps_l5();
    let mut b = Scenario::builder(RECEIVER_POSITION, RECEIVER_VELOCITY, signal).unwrap();
    for k in 0..2 {
        let angles = LookAngles::new(d.elevation[k], d.azimuth[k]).unwrap();
        let path = if d.radius[k] == 0.0 {
            SignalPath::los(1.0)
        } else {
            SignalPath::nlos(
                1.0,
                range_to_delay(d.radius[k], d.elevation[k], signal.code_rate).unwrap(),
                0.0,
            )
        };
        b = b
            .satellite_from_angles(k as u32 + 1, angles, 2.2e7, vec![path])
            .unwrap();
    }
    b.build().unwrap()
}

#[test]
fn grid_argmax_matches_analytic_crossing() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let spec = GridSpec::default_for(Space::Position);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let d = draw_pair(&mut rng);
        let s = pair_scenario(&d);
        let (x, y) = analytic_crossing((d.azimuth[0], d.radius[0]), (d.azimuth[1], d.radius[1]));
        let peak = scenario_caf(&spec, &s, Execution::Parallel)
            .unwrap()
            .argmax();
        let miss = (peak.east - x).hypot(peak.north - y);
        worst = worst.max(miss);
        assert!(
            miss <= SQRT_2 * spec.step,
            "draw {i}: peak ({}, {}) vs ({x}, {y})",
            peak.east,
            peak.north
        );
        let report = run_oracle_compare(&s, &spec, Execution::Serial).unwrap();
        assert!(report.pass, "draw {i}");
        let best = report.best_candidate().unwrap();
        assert!((best.east - x).abs() < 1e-9 && (best.north - y).abs() < 1e-9);
    }
    assert!(worst > 0.0);
}

#[test]
fn reports_identical_serial_and_parallel() {
    let s = reference::case_scenario(&reference::CASE3).unwrap();
    let grids = [
        GridSpec::new(Space::Position, 100.0, 1.0).unwrap(),
        GridSpec::new(Space::Velocity, 100.0, 1.0).unwrap(),
    ];
    let a = run_case_study(&s, "case3", &grids, Execution::Serial).unwrap();
    let b = run_case_study(&s, "case3", &grids, Execution::Parallel).unwrap();
    assert_eq!(a, b);

    let a = run_random_azimuth_mc(60.0, 40.0, 5000, 11, Execution::Serial).unwrap();
    let b = run_random_azimuth_mc(60.0, 40.0, 5000, 11, Execution::Parallel).unwrap();
    assert_eq!(a, b);

    let t6 = reference::case_scenario(&reference::CASE1)
        .unwrap()
        .subset(&[18, 23])
        .unwrap();
    let a = run_oracle_compare(&t6, &grids[0], Execution::Serial).unwrap();
    let b = run_oracle_compare(&t6, &grids[0], Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn monte_carlo_summary_recomputable() {
    let r = run_random_azimuth_mc(30.0, 15.0, 3000, 5, Execution::Parallel).unwrap();
    assert_eq!(r.samples.len(), 3000);
    assert_eq!(
        AzimuthSummary::from_samples(&r.samples, r.summary.floor),
        r.summary
    );
    assert!(r.summary.min_dr >= 30.0 - 1e-9);
    assert!(r.samples.iter().enumerate().all(|(i, s)| s.trial == i));
}

#[test]
fn elevation_sweep_record_count_and_zero_bias() {
    let sweep = Sweep::new(0.0, 89.5, 0.5).unwrap();
    assert!(run_elevation_sweep(1.0, 120.0, &sweep, &SignalConfig::gps_l5()).is_err());
    let sweep = Sweep::new(0.0, 89.0, 0.5).unwrap();
    let r = run_elevation_sweep(0.0, 0.0, &sweep, &SignalConfig::gps_l5()).unwrap();
    assert_eq!(r.points.len(), 179);
    assert!(r
        .points
        .iter()
        .all(|p| p.range_bias == 0.0 && p.range_rate_bias == 0.0));
}

#[test]
fn single_nlos_pair_oracle() {
    let s = reference::case_scenario(&reference::CASE1)
        .unwrap()
        .subset(&[18, 23])
        .unwrap();
    let spec = GridSpec::default_for(Space::Position);
    let r = run_oracle_compare(&s, &spec, Execution::Parallel).unwrap();
    assert!(r.pass);
    assert_eq!(r.candidates.len(), 1);
    assert!((r.candidates[0].distance - 47.3).abs() < 0.05);
}
