use std::f64::consts::FRAC_PI_2;

use quantcrb::experiment::{run_sweep, write_sweep_csv, Scheme, SweepConfig, W2};

#[test]
fn ordering_at_equal_amplitudes() {
    let cfg = SweepConfig {
        r_grid: vec![1.0],
        ..SweepConfig::standard(100)
    };
    let row = &run_sweep(&cfg).unwrap()[0];
    let w2 = |s| row.crb(s).unwrap()[W2];
    assert!(w2(Scheme::Unquantized) <= w2(Scheme::LloydMax4));
    assert!(w2(Scheme::LloydMax4) <= w2(Scheme::Binary0));
}

#[test]
fn dac_threshold_crb_floor() {
    for row in run_sweep(&SweepConfig::standard(100)).unwrap() {
        let dac = row.crb(Scheme::Binary4bitDacThreshold).unwrap();
        let unq = row.crb(Scheme::Unquantized).unwrap();
        for (d, u) in dac.iter().zip(unq) {
            assert!(*d >= FRAC_PI_2 * u * (1.0 - 1e-9), "r={}: {d} < pi/2 * {u}", row.r);
        }
    }
}

#[test]
fn singular_rows_are_marked_not_dropped() {
    let cfg = SweepConfig::standard(100);
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 60);
    let last = rows.last().unwrap();
    assert!(last.crb(Scheme::Binary0).unwrap().iter().all(|v| v.is_infinite()));
    assert!(rows
        .iter()
        .flat_map(|r| r.crb(Scheme::Unquantized).unwrap())
        .all(|v| v.is_finite() && *v > 0.0));
}

#[test]
fn csv_is_bit_identical_across_runs() {
    let cfg = SweepConfig {
        r_grid: quantcrb::experiment::log_grid(1.0, 200.0, 12).unwrap(),
        ..SweepConfig::standard(512)
    };
    let render = || {
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &cfg.schemes, &run_sweep(&cfg).unwrap()).unwrap();
        buf
    };
    assert_eq!(render(), render());
}
