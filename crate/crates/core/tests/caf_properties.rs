use dpe_multipath::caf::{
    channel_caf, corr_code, corr_doppler, delta_fd0, delta_tau0, scenario_caf,
    superpose_and_argmax, GridSpec, Space,
};
use dpe_multipath::channel::{Scenario, SignalConfig, SignalPath, NOMINAL_SATELLITE_RANGE};
use dpe_multipath::geom::EnuVector;
use dpe_multipath::reference::{self, RECEIVER_POSITION, RECEIVER_VELOCITY, SKY};
use dpe_multipath::scmb::{center_lines, range_to_delay};
use dpe_multipath::{Execution, SPEED_OF_LIGHT};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn correlation_shapes_are_even(x in -5.0f64..5.0, f in -500.0f64..500.0) {
        prop_assert_eq!(corr_code(x), corr_code(-x));
        prop_assert_eq!(corr_doppler(f, 0.02), corr_doppler(-f, 0.02));
        prop_assert!(corr_code(x) <= 1.0 && corr_code(x) >= 0.0);
        prop_assert!(corr_doppler(f, 0.02).abs() <= 1.0);
        if x.abs() >= 1.0 {
            prop_assert_eq!(corr_code(x), 0.0);
        }
    }

    #[test]
    fn deviations_are_linear_in_the_candidate(
        e in -500.0f64..500.0, n in -500.0f64..500.0, h in 0.5f64..20.0, k in 0usize..4,
    ) {
        let s = reference::los_scenario().unwrap();
        let ch = &s.satellites()[k];
        let (el, az) = (ch.angles().elevation(), ch.angles().azimuth());
        let signal = s.signal;
        // oracle gradient: minus the horizontal line-of-sight unit vector, scaled to chips or Hz
        let grad_tau = (-signal.code_rate / SPEED_OF_LIGHT * el.cos() * az.sin(),
                        -signal.code_rate / SPEED_OF_LIGHT * el.cos() * az.cos());
        let tau = |e: f64, n: f64| delta_tau0(EnuVector::horizontal(e, n), ch, &s).unwrap();
        let fd_e = (tau(e + h, n) - tau(e, n)) / h;
        let fd_n = (tau(e, n + h) - tau(e, n)) / h;
        prop_assert!((fd_e - grad_tau.0).abs() <= 1e-9 * grad_tau.0.abs().max(grad_tau.1.abs()));
        prop_assert!((fd_n - grad_tau.1).abs() <= 1e-9 * grad_tau.0.abs().max(grad_tau.1.abs()));
        prop_assert!(tau(0.0, 0.0).abs() < 1e-15);

        let v0 = s.receiver_velocity_enu();
        let dop = |e: f64, n: f64| delta_fd0(EnuVector::horizontal(v0.e + e, v0.n + n), ch, &s).unwrap();
        let scale = signal.carrier_frequency / SPEED_OF_LIGHT;
        let grad_fd = (-scale * el.cos() * az.sin(), -scale * el.cos() * az.cos());
        let fd_e = (dop(e + h, n) - dop(e, n)) / h;
        let fd_n = (dop(e, n + h) - dop(e, n)) / h;
        let mag = grad_fd.0.abs().max(grad_fd.1.abs());
        prop_assert!((fd_e - grad_fd.0).abs() <= 1e-9 * mag);
        prop_assert!((fd_n - grad_fd.1).abs() <= 1e-9 * mag);
    }
}

#[test]
fn superposition_equals_combined_grid() {
    let s = reference::case_scenario(&reference::CASE3).unwrap();
    let spec = GridSpec::new(Space::Position, 40.0, 1.0).unwrap();
    let grids: Vec<_> = s
        .satellites()
        .iter()
        .map(|ch| channel_caf(&spec, ch, &s, Execution::Serial).unwrap())
        .collect();
    let (sum, peak) = superpose_and_argmax(&grids).unwrap();
    let direct = scenario_caf(&spec, &s, Execution::Parallel).unwrap();
    for (a, b) in sum.values.iter().zip(&direct.values) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(peak, direct.argmax());
}

#[test]
fn noisy_grids_are_reproducible() {
    let mut s = reference::case_scenario(&reference::CASE2).unwrap();
    s.noise_sigma = Some(0.05);
    s.seed = 42;
    let spec = GridSpec::new(Space::Velocity, 20.0, 0.5).unwrap();
    let a = scenario_caf(&spec, &s, Execution::Serial).unwrap();
    let b = scenario_caf(&spec, &s, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    s.seed = 43;
    assert_ne!(a, scenario_caf(&spec, &s, Execution::Parallel).unwrap());
}

#[test]
fn negated_biases_mirror_the_grid() {
    let s = reference::case_scenario(&reference::CASE3).unwrap();
    let mut m = s.clone();
    for ch in s.satellites() {
        let paths = ch
            .paths()
            .iter()
            .map(|p| SignalPath::nlos(p.amplitude, -p.delay_chips, -p.doppler_hz))
            .collect();
        m = m.with_paths(ch.prn, paths).unwrap();
    }
    for space in [Space::Position, Space::Velocity] {
        let spec = GridSpec::new(space, 50.0, 1.0).unwrap();
        let g = scenario_caf(&spec, &s, Execution::Parallel).unwrap();
        let h = scenario_caf(&spec, &m, Execution::Parallel).unwrap();
        let side = spec.side();
        for row in 0..side {
            for col in 0..side {
                let mirrored = h.value(side - 1 - row, side - 1 - col);
                assert!(
                    (g.value(row, col) - mirrored).abs() < 1e-9,
                    "{space} {row} {col}"
                );
            }
        }
    }
}

fn case1_at_range(range: f64) -> Scenario {
    let signal = SignalConfig::gps_l5();
    let mut b = Scenario::builder(RECEIVER_POSITION, RECEIVER_VELOCITY, signal).unwrap();
    for (sat, radius) in SKY.iter().zip(reference::CASE1.radii) {
        let angles = reference::sky_angles(sat).unwrap();
        let path = if radius == 0.0 {
            SignalPath::los(1.0)
        } else {
            SignalPath::nlos(
                1.0,
                range_to_delay(radius, angles.elevation(), signal.code_rate).unwrap(),
                0.0,
            )
        };
        b = b
            .satellite_from_angles(sat.prn, angles, range, vec![path])
            .unwrap();
    }
    b.build().unwrap()
}

#[test]
fn insensitive_to_nominal_range() {
    let spec = GridSpec::new(Space::Position, 60.0, 1.0).unwrap();
    let base = case1_at_range(NOMINAL_SATELLITE_RANGE);
    let base_lines = center_lines(&base, Space::Position).unwrap();
    let base_peak = scenario_caf(&spec, &base, Execution::Parallel)
        .unwrap()
        .argmax();
    for factor in [0.7, 1.3] {
        let s = case1_at_range(NOMINAL_SATELLITE_RANGE * factor);
        for (a, b) in center_lines(&s, Space::Position)
            .unwrap()
            .iter()
            .zip(&base_lines)
        {
            assert!((a.tangent_offset - b.tangent_offset).abs() < 1e-12);
            assert!((a.azimuth - b.azimuth).abs() < 1e-12);
        }
        let peak = scenario_caf(&spec, &s, Execution::Parallel)
            .unwrap()
            .argmax();
        assert_eq!((peak.row, peak.col), (base_peak.row, base_peak.col));
        assert!((peak.value - base_peak.value).abs() < 1e-9);
    }
}
