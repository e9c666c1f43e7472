use dpe_multipath::caf::Space;
use dpe_multipath::channel::PathKind;
use dpe_multipath_cli::scenario_file::{
    parse_scenario, read_scenario, to_json, write_scenario, AnglesEntry, GridEntry, PathEntry,
    ReceiverEntry, SatelliteEntry, ScenarioFile, SignalEntry, SCHEMA_VERSION,
};
use proptest::prelude::*;

fn los_entry() -> impl Strategy<Value = PathEntry> {
    (0.1f64..2.0).prop_map(|a| PathEntry {
        kind: PathKind::Los,
        amplitude: a,
        delay_chips: None,
        doppler_hz: None,
        range_bias_m: None,
        range_rate_bias_mps: None,
    })
}

fn nlos_entry() -> impl Strategy<Value = PathEntry> {
    prop_oneof![
        (0.1f64..2.0, -3.0f64..3.0, -500.0f64..500.0).prop_map(|(a, d, f)| PathEntry {
            kind: PathKind::Nlos,
            amplitude: a,
            delay_chips: Some(d),
            doppler_hz: Some(f),
            range_bias_m: None,
            range_rate_bias_mps: None,
        }),
        (0.1f64..2.0, 0.0f64..100.0, 0.0f64..100.0).prop_map(|(a, r, v)| PathEntry {
            kind: PathKind::Nlos,
            amplitude: a,
            delay_chips: None,
            doppler_hz: None,
            range_bias_m: Some(r),
            range_rate_bias_mps: Some(v),
        }),
    ]
}

fn scenario_file() -> impl Strategy<Value = ScenarioFile> {
    let paths = (
        prop::option::of(los_entry()),
        prop::collection::vec(nlos_entry(), 0..3),
    )
        .prop_filter("at least one path", |(los, nlos)| {
            los.is_some() || !nlos.is_empty()
        })
        .prop_map(|(los, nlos)| los.into_iter().chain(nlos).collect::<Vec<_>>());
    let satellite = (0.0f64..85.0, 0.0f64..360.0, paths);
    (
        prop::collection::vec(satellite, 1..6),
        prop::option::of(0.0f64..0.5),
        prop::option::of(any::<u64>()),
        prop::array::uniform3(-30.0f64..30.0),
        prop::bool::ANY,
    )
        .prop_map(|(sats, noise, seed, velocity, with_grid)| ScenarioFile {
            schema_version: SCHEMA_VERSION,
            receiver: ReceiverEntry {
                position: [-2_851_838.0, 4_653_607.0, 3_289_209.0],
                velocity,
            },
            signal: SignalEntry {
                f_c: 10.23e6,
                f_l: 1176.45e6,
                f_s: Some(30.69e6),
                t_c: 0.02,
            },
            grid: if with_grid {
                vec![GridEntry {
                    space: Space::Velocity,
                    half_extent: 50.0,
                    step: 0.5,
                }]
            } else {
                Vec::new()
            },
            satellites: sats
                .into_iter()
                .enumerate()
                .map(|(i, (el, az, paths))| SatelliteEntry {
                    prn: i as u32 + 1,
                    position: None,
                    velocity: None,
                    angles: Some(AnglesEntry {
                        elevation_deg: el,
                        azimuth_deg: az,
                    }),
                    paths,
                })
                .collect(),
            noise_sigma: noise,
            seed,
            nominal_range: None,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_then_load_is_identity(file in scenario_file()) {
        let original = file.to_scenario().unwrap();
        let text = to_json(&file).unwrap();
        let parsed = parse_scenario(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_scenario().unwrap(), original.clone());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.scenario");
        write_scenario(&path, &file).unwrap();
        let loaded = read_scenario(&path).unwrap();
        prop_assert_eq!(loaded.scenario, original.0);
        prop_assert_eq!(loaded.grids, original.1);
    }
}

#[test]
fn position_satellites_round_trip() {
    let file = parse_scenario(
        r#"{ "schema_version": 1,
             "receiver": { "position": [-2851838.0, 4653607.0, 3289209.0], "velocity": [1, 2, 3] },
             "signal": { "f_c": 10230000.0, "f_L": 1176450000.0, "T_c": 0.02 },
             "satellites": [
               { "prn": 5, "position": [-12000000.0, 18000000.0, 14000000.0], "velocity": [100.0, -2000.0, 1500.0],
                 "paths": [{ "kind": "LOS" }, { "kind": "NLOS", "amplitude": 0.5, "delay_chips": 0.3 }] }
             ] }"#,
    )
    .unwrap();
    let s = file.to_scenario().unwrap();
    let again = parse_scenario(&to_json(&file).unwrap()).unwrap();
    assert_eq!(again.to_scenario().unwrap(), s);
}
