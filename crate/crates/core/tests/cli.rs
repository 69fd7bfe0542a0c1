mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data;

fn multiwise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiwise"))
        .args(args)
        .env_remove("MULTIWISE_MAX_T")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sample_table1_then_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.txt");
    let car = data("car.uvl");
    let groups = data("table1.json");
    let o = multiwise(&["sample", path(&car), "--groups", path(&groups), "--seed", "7", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = stdout(&o);
    assert!(summary.starts_with("size=3 time_ms="), "{summary}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# model=car seed=7\n"));
    assert_eq!(text.lines().count(), 4);

    let o = multiwise(&["coverage", path(&car), path(&out), "--scope", path(&groups)]);
    assert_eq!(o.status.code(), Some(0));
    let lines = stdout(&o);
    assert!(lines.contains("group=TG_1 t=1 valid=4 covered=4 ratio=1.000000"), "{lines}");
    assert!(lines.contains("group=TG_2 t=2 valid=6 covered=6 ratio=1.000000"), "{lines}");
    assert!(lines.contains("group=default t=0 valid=0 covered=0 ratio=1.000000"), "{lines}");

    let o = multiwise(&["coverage", path(&car), path(&out), "--t", "1"]);
    // 3 core literals plus both signs of 8 optional features; the three
    // configurations select 6 features and deselect 8
    assert_eq!(stdout(&o).trim(), "valid=19 covered=14 ratio=0.736842");
}

#[test]
fn sample_to_stdout_and_uniform_t() {
    let car = data("car.uvl");
    let o = multiwise(&["sample", path(&car), "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# model=car seed=0\n");
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("size=0 "));
    let o = multiwise(&["sample", path(&car), "--t", "2", "--order", "descending-t", "--defer-completion"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let car = data("car.uvl");
    assert_eq!(multiwise(&["sample", path(&data("void.dimacs")), "--t", "2"]).status.code(), Some(3));
    assert_eq!(multiwise(&["sample", path(&car), "--t", "2", "--bogus"]).status.code(), Some(1));
    assert_eq!(multiwise(&["sample", path(&car)]).status.code(), Some(1));
    assert_eq!(multiwise(&[]).status.code(), Some(1));
    assert_eq!(multiwise(&["--help"]).status.code(), Some(0));

    let bad_uvl = dir.path().join("bad.uvl");
    std::fs::write(&bad_uvl, "features\n  A\n    or\n").unwrap();
    assert_eq!(multiwise(&["inspect", path(&bad_uvl)]).status.code(), Some(2));
    assert_eq!(multiwise(&["inspect", path(&dir.path().join("missing.uvl"))]).status.code(), Some(2));

    let malformed = dir.path().join("m.txt");
    std::fs::write(&malformed, "Car;;Radio\n").unwrap();
    assert_eq!(multiwise(&["coverage", path(&car), path(&malformed)]).status.code(), Some(2));
    let unknown = dir.path().join("u.txt");
    std::fs::write(&unknown, "Car;Wheel\n").unwrap();
    assert_eq!(multiwise(&["coverage", path(&car), path(&unknown)]).status.code(), Some(4));
    let invalid = dir.path().join("i.txt");
    std::fs::write(&invalid, "Car;Manual;Automatic\n").unwrap();
    assert_eq!(multiwise(&["coverage", path(&car), path(&invalid)]).status.code(), Some(4));
    let empty = dir.path().join("e.txt");
    std::fs::write(&empty, "# model=car seed=0\n").unwrap();
    let o = multiwise(&["coverage", path(&car), path(&empty), "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("ratio=0.000000\n"), "{}", stdout(&o));
}

#[test]
fn max_t_environment_override() {
    let car = data("car.uvl");
    let o = Command::new(env!("CARGO_BIN_EXE_multiwise"))
        .args(["sample", path(&car), "--t", "2"])
        .env("MULTIWISE_MAX_T", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_lists_flags() {
    let o = multiwise(&["sample", "--help"]);
    let help = stdout(&o);
    for flag in ["--groups", "--t", "--seed", "--order", "--defer-completion", "--out"] {
        assert!(help.contains(flag), "{flag}");
    }
}

#[test]
fn inspect_car() {
    let o = multiwise(&["inspect", path(&data("car.uvl"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("features=11\n"));
    assert!(text.contains("core=Car,Carbody,Gearbox\n"));
    assert!(text.contains("configurations=34\n"));
    let o = multiwise(&["inspect", path(&data("car.uvl")), "--enumerate-cap", "5"]);
    assert!(stdout(&o).contains("configurations>5"));
}

#[test]
fn convert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("car.dimacs");
    let d2 = dir.path().join("back.dimacs");
    let u = dir.path().join("again.uvl");
    let car = data("car.uvl");
    assert_eq!(multiwise(&["convert", path(&car), path(&d1)]).status.code(), Some(0));
    assert_eq!(multiwise(&["convert", path(&d1), path(&d2)]).status.code(), Some(0));
    assert_eq!(std::fs::read(&d1).unwrap(), std::fs::read(&d2).unwrap());
    assert_eq!(multiwise(&["convert", path(&car), path(&u)]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&u).unwrap(), std::fs::read_to_string(&car).unwrap());
    // a flat tree recovered from DIMACS has the same configurations
    let flat = dir.path().join("flat.uvl");
    assert_eq!(multiwise(&["convert", path(&d1), path(&flat)]).status.code(), Some(0));
    assert!(stdout(&multiwise(&["inspect", path(&flat)])).contains("configurations=34\n"));
    assert_eq!(multiwise(&["convert", path(&car), path(&dir.path().join("x.txt"))]).status.code(), Some(2));
}

#[test]
fn experiment_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let o = multiwise(&[
        "experiment",
        path(&data("car.uvl")),
        "--reps",
        "10",
        "--seed",
        "1",
        "--out-dir",
        path(dir.path()),
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let results = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 71);
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 7 * 4);
    assert_eq!(multiwise(&["experiment", path(&data("car.uvl")), "--setups", "Exp9"]).status.code(), Some(2));
    assert_eq!(multiwise(&["experiment", path(&data("car.uvl")), "--reps", "0"]).status.code(), Some(1));
}
