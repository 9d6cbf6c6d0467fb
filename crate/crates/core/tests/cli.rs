use std::fs;
use std::process::{Command, Output};

fn quantcrb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantcrb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn rho_one_bit_golden() {
    let o = quantcrb(&["rho", "--quantizer", "binary:0", "--s", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rho = 0.636619772368\nrho0 = 1.00000000000\n");
}

#[test]
fn rho_lloyd_max_in_range() {
    let o = quantcrb(&["rho", "--quantizer", "lloydmax4:1", "--s", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().next().unwrap().to_string();
    let rho: f64 = line.trim_start_matches("rho = ").parse().unwrap();
    assert!(rho > 0.94 && rho < 1.0, "{rho}");
}

#[test]
fn rho_laplace_breakpoint_list() {
    let o = quantcrb(&["rho", "--quantizer", "list:-1,0,1", "--s", "-0.25", "--dist", "laplace"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("rho0 = 2.00000000000\n"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["rho", "--quantizer", "binary:0", "--s", "bad"][..],
        &["rho", "--quantizer", "octal:3", "--s", "0"],
        &["rho", "--s", "0"],
        &["converge", "--bits", "5:2"],
        &["search", "--bits", "12"],
        &["nonsense"],
    ] {
        let o = quantcrb(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn converge_matches_closed_form() {
    let o = quantcrb(&["converge", "--bits", "1:16", "--dist", "normal"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "bits,levels,rho");
    assert_eq!(lines.len(), 17);
    let rho = |i: usize| lines[i].split(',').nth(2).unwrap().parse::<f64>().unwrap();
    assert!((rho(1) - 2.0 / std::f64::consts::PI).abs() < 1e-12);
    // Four equiprobable cells: breakpoints 0 and ±a with Φ(a) = 3/4.
    let a: f64 = 0.674_489_750_196_081_7;
    let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let four = 2.0 * (phi(a).powi(2) + (phi(0.0) - phi(a)).powi(2)) / 0.25;
    assert!((rho(2) - four).abs() < 1e-12, "{} vs {four}", rho(2));
    assert!(rho(16) >= 0.9999);
}

#[test]
fn fcheck_reports_nonnegative() {
    let o = quantcrb(&["fcheck"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("nonnegative = true"));
    assert!(out.contains("rho1_at_zero = 4.00000000000"));
}

#[test]
fn search_four_bits() {
    let o = quantcrb(&["search", "--bits", "4", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rho: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("rho = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((rho - 0.99).abs() <= 0.005);
    let bps = out.lines().find_map(|l| l.strip_prefix("breakpoints = ")).unwrap();
    assert_eq!(bps.split(", ").count(), 15);
}

#[test]
fn counterexample_is_deterministic() {
    let a = quantcrb(&["counterexample", "--seed", "3"]);
    let b = quantcrb(&["counterexample", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("rho_laplace"));
    assert_eq!(quantcrb(&["counterexample", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("n100.cfg");
    let (first, second) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    fs::write(
        &config,
        "# two-sinusoid, N = 100\nn = 100\nsnr2_db = 0\nr_min = 1\nr_max = 200\nr_points = 60\n",
    )
    .unwrap();
    for out in [&first, &second] {
        let o = quantcrb(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let a = fs::read(&first).unwrap();
    assert_eq!(a, fs::read(&second).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 61);
    assert!(text.lines().next().unwrap().starts_with("r,sigma,unquantized_crb_a1"));
    assert!(
        text.contains(",inf"),
        "1-bit CRB should be singular somewhere for N=100"
    );
}

#[test]
fn sweep_output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let config = dir.path().join("c.cfg");
    fs::write(
        &config,
        format!(
            "n = 16\nr_points = 3\nschemes = binary0\noutput_path = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = quantcrb(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap().split(',').count(), 8);
}

#[test]
fn sweep_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.cfg");
    assert_eq!(
        quantcrb(&["sweep", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "n = 10\nwindow = hann\n").unwrap();
    let o = quantcrb(&["sweep", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("window") && err.contains("line 2"), "{err}");
}

#[test]
fn fim_then_crb_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let fim = dir.path().join("fim.csv");
    let crb = dir.path().join("crb.csv");
    let o = quantcrb(&[
        "fim",
        "--n",
        "100",
        "--r",
        "3",
        "--scheme",
        "lloydmax4",
        "--output",
        fim.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = quantcrb(&[
        "crb",
        "--input",
        fim.to_str().unwrap(),
        "--output",
        crb.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&crb).unwrap();
    assert!(text.starts_with("# condition_number="));
    assert!(text.contains("singular=false"));
    assert_eq!(text.lines().count(), 8);
    assert_eq!(
        quantcrb(&["crb", "--input", dir.path().join("nope.csv").to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}
