//! End-to-end behavior of scenarios, sweeps, and CSV output.

use gmud_core::experiment::{
    build_single_bs_scenario, build_two_bs_scenario, render_csv, run_sweep, CsvOptions,
    SingleBsConfig, SweepSpec, SweepVariable, TwoBsConfig, DEFAULT_TWO_BS_DISTANCES,
};

fn snr_grid(lo: i32, hi: i32, step: i32) -> Vec<f64> {
    (lo..=hi).step_by(step as usize).map(f64::from).collect()
}

#[test]
fn identical_inputs_produce_byte_identical_csv() {
    let cfg = SingleBsConfig {
        sigma_s_db: 8.0,
        mc_runs: 4,
        ..SingleBsConfig::default()
    };
    let render = || {
        let scenario = build_single_bs_scenario(&cfg).unwrap();
        let spec = SweepSpec::new(SweepVariable::SnrDb, snr_grid(-20, 20, 10)).unwrap();
        let result = run_sweep(&scenario, &spec, None).unwrap();
        render_csv(&result, &CsvOptions::default())
    };
    assert_eq!(render(), render());
}

#[test]
fn changing_the_seed_changes_shadowed_results() {
    let base = SingleBsConfig {
        sigma_s_db: 8.0,
        mc_runs: 2,
        ..SingleBsConfig::default()
    };
    let run_with_seed = |seed: u64| {
        let cfg = SingleBsConfig { seed, ..base.clone() };
        let scenario = build_single_bs_scenario(&cfg).unwrap();
        let spec = SweepSpec::new(SweepVariable::SnrDb, vec![20.0]).unwrap();
        run_sweep(&scenario, &spec, None).unwrap()
    };
    let a = run_with_seed(1);
    let b = run_with_seed(2);
    assert_ne!(
        a.points[0].stations[0].structures[0].mean_group_total,
        b.points[0].stations[0].structures[0].mean_group_total
    );
}

#[test]
fn mirrored_two_bs_layout_gives_identical_station_curves() {
    let scenario = build_two_bs_scenario(&TwoBsConfig::default()).unwrap();
    let spec = SweepSpec::new(SweepVariable::SnrDb, snr_grid(-60, 20, 10)).unwrap();
    let result = run_sweep(&scenario, &spec, None).unwrap();
    for point in &result.points {
        let (bs1, bs2) = (&point.stations[0], &point.stations[1]);
        for (a, b) in bs1.structures.iter().zip(&bs2.structures) {
            let rel = (a.mean_group_total - b.mean_group_total).abs()
                / a.mean_group_total.abs().max(1e-300);
            assert!(rel <= 1e-9, "stations diverge at {}", point.value);
        }
    }
}

#[test]
fn widely_separated_cells_converge_to_the_single_bs_game() {
    // Same in-cell geometry, inter-cell distance pushed out to 100 km.
    let two = TwoBsConfig {
        separation: 1.0e5,
        ..TwoBsConfig::default()
    };
    let single = SingleBsConfig {
        distances: DEFAULT_TWO_BS_DISTANCES.to_vec(),
        ..SingleBsConfig::default()
    };
    let spec = SweepSpec::new(SweepVariable::SnrDb, snr_grid(-60, 20, 10)).unwrap();
    let two_result = run_sweep(&build_two_bs_scenario(&two).unwrap(), &spec, None).unwrap();
    let single_result =
        run_sweep(&build_single_bs_scenario(&single).unwrap(), &spec, None).unwrap();
    for (tp, sp) in two_result.points.iter().zip(&single_result.points) {
        for (a, b) in tp.stations[0].structures.iter().zip(&sp.stations[0].structures) {
            assert_eq!(a.structure, b.structure);
            let rel =
                (a.mean_group_total - b.mean_group_total).abs() / b.mean_group_total.abs();
            assert!(
                rel < 0.01,
                "structure {} differs by {rel} at {}",
                a.structure.label(),
                tp.value
            );
        }
    }
}

#[test]
fn csv_numbers_round_trip_to_the_in_memory_values() {
    let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
    let spec = SweepSpec::new(SweepVariable::SnrDb, vec![27.0]).unwrap();
    let result = run_sweep(&scenario, &spec, None).unwrap();
    let csv = render_csv(&result, &CsvOptions::default());

    let station = &result.points[0].stations[0];
    for line in csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("station_id"))
    {
        let fields: Vec<&str> = line.split(',').collect();
        let label = fields[4];
        let user = fields[5];
        let sinr: f64 = fields[6].parse().unwrap();
        let series = station
            .structures
            .iter()
            .find(|s| s.structure.label() == label)
            .unwrap();
        let expected = match (fields[3], user) {
            ("mean", "total") => series.mean_group_total,
            ("mean", u) => series.mean_payoffs[u.parse::<usize>().unwrap() - 1],
            (_, "total") => series.runs[0].group_total,
            (_, u) => series.runs[0].payoffs.as_slice()[u.parse::<usize>().unwrap() - 1],
        };
        assert_eq!(sinr, expected, "line {line}");
    }
}

#[test]
fn shadowing_sweep_keeps_all_payoffs_positive_and_finite() {
    let cfg = SingleBsConfig {
        mc_runs: 6,
        ..SingleBsConfig::default()
    };
    let scenario = build_single_bs_scenario(&cfg).unwrap();
    let spec = SweepSpec::new(
        SweepVariable::SigmaSDb,
        (0..=12).map(f64::from).collect(),
    )
    .unwrap();
    let result = run_sweep(&scenario, &spec, None).unwrap();
    for point in &result.points {
        for series in &point.stations[0].structures {
            for run in &series.runs {
                assert!(run
                    .payoffs
                    .as_slice()
                    .iter()
                    .all(|s| s.is_finite() && *s > 0.0));
            }
            assert!((0.0..=1.0).contains(&series.core_frequency));
        }
    }
}

#[test]
fn grand_coalition_tops_every_point_of_the_default_snr_sweep() {
    // Ordering claim at the default layout: with no shadowing and one run,
    // the grand coalition's group total is maximal across the whole range.
    let scenario = build_single_bs_scenario(&SingleBsConfig::default()).unwrap();
    let spec = SweepSpec::new(SweepVariable::SnrDb, snr_grid(-40, 40, 5)).unwrap();
    let result = run_sweep(&scenario, &spec, None).unwrap();
    for point in &result.points {
        let station = &point.stations[0];
        let grand = &station.structures[0];
        assert_eq!(grand.structure.label(), "123");
        for other in &station.structures[1..] {
            assert!(
                grand.mean_group_total >= other.mean_group_total,
                "{} beats the grand coalition at snr {}",
                other.structure.label(),
                point.value
            );
        }
    }
    let last = result.points.len() - 1;
    let best = result.max_group_structure_at(last);
    assert_eq!(best[0].1.label(), "123");
}
