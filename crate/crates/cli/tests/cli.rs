use std::process::{Command, Output};

fn anticipate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anticipate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn curves_cover_the_default_grid() {
    let out = anticipate(&["curves"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 25 * 6);
    assert_eq!(lines[0], "theta,kind,k,analytic,empirical,stderr,shots,seed");
    assert!(lines.contains(&"1.57079632679,anticipative,2,0.763523138347,,,,"));
    assert!(lines.contains(&"1.57079632679,standard,2,0.75,,,,"));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let out = anticipate(&["curves", "--simulate", "--points", "4", "--shots", "2000", "--seed", "7", "--output", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&first).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&second).unwrap());
}

#[test]
fn simulate_stays_within_four_sigma() {
    let out = anticipate(&["simulate", "--points", "5", "--noise-readout", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (analytic, empirical, stderr): (f64, f64, f64) = (f[3].parse().unwrap(), f[4].parse().unwrap(), f[5].parse().unwrap());
        assert!((empirical - analytic).abs() <= 4.0 * stderr, "{line}");
        assert_eq!(f[6], "20000");
        assert_eq!(f[7], "1");
        rows += 1;
    }
    assert_eq!(rows, 30);
}

#[test]
fn simulate_dumps_records() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("shots.csv");
    let out = anticipate(&["simulate", "--points", "1", "--shots", "10", "--random-basis", "--dump-records", records.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(records).unwrap();
    assert_eq!(text.lines().count(), 1 + 16 * 10);
}

#[test]
fn solve_reports_certified_optimum() {
    let out = anticipate(&["solve", "--theta", "1.5707963267948966", "--k", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for expected in [
        "C = 64",
        "2*C*Lambda = 0.596856471681",
        "outcome functions = 256",
        "certified = true",
        "direction +n = (0.894427191, 0.4472135955, 0)",
    ] {
        assert!(text.contains(expected), "missing {expected:?} in\n{text}");
    }
}

#[test]
fn verify_exit_codes() {
    let ok = anticipate(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verification passed"));

    let strict = anticipate(&["verify", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("FAIL"));

    let tampered = anticipate(&["verify", "--tamper-normalization", "1.01"]);
    assert_eq!(tampered.status.code(), Some(1));
    assert!(stdout(&tampered).contains("FAIL optimality-certificates"));
}

#[test]
fn bad_configuration_exits_with_two() {
    for args in [
        &["curves", "--points", "0"][..],
        &["curves", "--theta-max", "2"],
        &["curves", "--theta-min", "0"],
        &["simulate", "--noise-readout", "0.7"],
        &["simulate", "--shots", "0"],
        &["verify", "--tol", "-1"],
        &["solve", "--theta", "3", "--k", "1"],
        &["solve", "--theta", "1", "--k", "3"],
        &["frobnicate"],
    ] {
        let out = anticipate(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_fails() {
    let out = anticipate(&["curves", "--output", "/nonexistent-dir/x.csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}
