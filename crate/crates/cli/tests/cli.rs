use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gamecond::{condition_measure, ConditionOptions, MatrixGame};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gamecond"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("GAMECOND_THREADS").output().unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const PENNIES: &str = "1,-1\n-1,1\n";
const RPS: &str = "0,-1,1\n1,0,-1\n-1,1,0\n";

#[test]
#[allow(clippy::approx_constant)]
fn kappa_of_pennies() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.csv", PENNIES);
    let v = json(&run(&["kappa", "--input", s(&input)]));
    let kappa = v["result"]["kappa"].as_f64().unwrap();
    assert!((kappa - 0.70711).abs() <= 1e-5);
    assert_eq!(v["command"], "kappa");
    assert_eq!(v["result"]["argmax_config"]["I"], serde_json::json!([1]));
    assert_eq!(v["result"]["argmax_config"]["K"], serde_json::json!([1, 2]));
    assert_eq!(v["result"]["argmax_config"]["J"], serde_json::json!([2]));
    assert!(v["timestamp"].is_u64());
}

#[test]
fn json_input_is_accepted() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.json", r#"{"matrix": [[1, -1], [-1, 1]]}"#);
    let v = json(&run(&["kappa", "--input", s(&input)]));
    assert!((v["result"]["kappa"].as_f64().unwrap() - 0.5_f64.sqrt()).abs() < 1e-12);
}

#[test]
fn constant_game_exits_three() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.csv", "2,2\n2,2\n");
    for cmd in ["kappa", "kappa-oracle", "vz-check"] {
        let out = run(&[cmd, "--input", s(&input)]);
        assert_eq!(out.status.code(), Some(3), "{cmd}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("all strategy profiles are equilibria"), "{err}");
    }
}

#[test]
fn equilibrium_point_exits_three() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "p.csv", PENNIES);
    let out = run(&["reg", "--input", s(&input), "--point", "0.5,0.5;0.5,0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn value_of_rps_is_zero() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r.csv", RPS);
    let v = json(&run(&["value", "--input", s(&input)]));
    assert!(v["result"]["value"].as_f64().unwrap().abs() <= 1e-9);
    for c in v["result"]["row_strategy"].as_array().unwrap() {
        assert!((c.as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-9);
    }
}

#[test]
fn bad_input_and_flags_exit_two() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "bad.csv", "1,2\n3\n");
    let text = write(&dir, "nan.csv", "1,x\n2,3\n");
    let empty = write(&dir, "empty.csv", "");
    let good = write(&dir, "p.csv", PENNIES);
    let missing = dir.path().join("missing.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["value", "--input", s(&ragged)],
        vec!["value", "--input", s(&text)],
        vec!["value", "--input", s(&empty)],
        vec!["value", "--input", s(&missing)],
        vec!["value", "--input", s(&good), "--tol-feas", "0"],
        vec!["solve", "--input", s(&good), "--eps", "-1"],
        vec!["reg", "--input", s(&good), "--point", "0.5,0.6;0.5,0.5"],
        vec!["reg", "--input", s(&good), "--point", "1,0"],
        vec!["report", "--input", s(&good), "--ladder", "1e-2,1e-1"],
        vec!["no-such-command"],
        vec!["value"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn output_file_round_trips_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let body = "0.3,-1.7,0.25\n-0.9,0.4,1.1\n";
    let input = write(&dir, "g.csv", body);
    let out_path = dir.path().join("out.json");
    let out = run(&["kappa", "--input", s(&input), "--output", s(&out_path)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();

    let game = MatrixGame::new(&[vec![0.3, -1.7, 0.25], vec![-0.9, 0.4, 1.1]]).unwrap();
    let report = condition_measure(&game, &ConditionOptions::default()).unwrap();
    assert_eq!(v["result"]["kappa"].as_f64().unwrap().to_bits(), report.kappa.to_bits());
    assert_eq!(
        v["result"]["witness_distance"].as_f64().unwrap().to_bits(),
        report.witness_distance.to_bits()
    );

    let out = run(&["value", "--input", s(&input), "--output", s(&out_path)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let value = game.value().unwrap();
    assert_eq!(v["result"]["value"].as_f64().unwrap().to_bits(), value.value.to_bits());
    for (a, b) in v["result"]["row_strategy"].as_array().unwrap().iter().zip(&value.row_strategy) {
        assert_eq!(a.as_f64().unwrap().to_bits(), b.to_bits());
    }
}

#[test]
fn output_is_deterministic_without_timestamp() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "0.3,-1.7,0.25\n-0.9,0.4,1.1\n0.2,0.2,-0.5\n");
    for args in [
        vec!["kappa", "--threads", "2"],
        vec!["kappa-oracle", "--samples", "50", "--seed", "7"],
        vec!["solve", "--eps", "1e-5"],
        vec!["vz-check", "--trials", "10", "--seed", "3"],
        vec!["report", "--ladder", "1e-1,1e-3"],
    ] {
        let mut full = args.clone();
        full.extend(["--input", s(&input), "--no-timestamp"]);
        let a = run(&full);
        let b = run(&full);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!String::from_utf8_lossy(&a.stdout).contains("timestamp"));
    }
}

#[test]
fn thread_count_does_not_change_kappa() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "0.3,-1.7,0.25\n-0.9,0.4,1.1\n0.2,0.2,-0.5\n");
    let one = json(&run(&["kappa", "--input", s(&input), "--threads", "1", "--no-timestamp"]));
    let four = bin()
        .args(["kappa", "--input", s(&input), "--no-timestamp"])
        .env("GAMECOND_THREADS", "4")
        .output()
        .unwrap();
    let four = json(&four);
    assert_eq!(one["result"], four["result"]);
    assert_eq!(four["diagnostics"]["threads"], 4);
}

#[test]
fn iteration_cap_exits_four() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "3,-1,0.5\n-2,1,0\n");
    let out = run(&["solve", "--input", s(&input), "--eps", "1e-12", "--max-iterations", "3"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("iteration limit"));
}

#[test]
fn solve_certifies_its_gap() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "3,-1,0.5\n-2,1,0\n");
    let v = json(&run(&["solve", "--input", s(&input), "--eps", "1e-6"]));
    let x: Vec<f64> = serde_json::from_value(v["result"]["x"].clone()).unwrap();
    let y: Vec<f64> = serde_json::from_value(v["result"]["y"].clone()).unwrap();
    let game = MatrixGame::new(&[vec![3.0, -1.0, 0.5], vec![-2.0, 1.0, 0.0]]).unwrap();
    let w = gamecond::StrategyProfile::with_tolerance(x, y, 1e-12).unwrap();
    assert!(game.gap_value(&w).unwrap() <= 1e-6);
}

#[test]
fn report_writes_csv_ladder() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "3,-1,0.5\n-2,1,0\n");
    let out = run(&["report", "--input", s(&input), "--ladder", "1e-1,1e-2,1e-3"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["epsilon", "iterations", "final_gap"]
    );
    let rows: Vec<(f64, usize, f64)> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    for (eps, _, gap) in &rows {
        assert!(gap <= eps);
    }
    assert!(rows.windows(2).all(|r| r[0].1 <= r[1].1));
}

#[test]
fn vz_check_agrees() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.csv", "0.3,-1.7,0.25\n-0.9,0.4,1.1\n");
    let v = json(&run(&["vz-check", "--input", s(&input), "--trials", "25"]));
    assert!(v["result"]["max_scaled_deviation"].as_f64().unwrap() <= 1e-8);
}
