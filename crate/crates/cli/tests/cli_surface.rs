//! Black-box checks of the installed binary: exit codes, file schemas, and
//! flag handling.

use std::path::Path;
use std::process::{Command, Output};

use cusum_design_cli::config::RunConfig;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cusum-design"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

/// Config with a small optimizer budget so command tests stay quick.
fn small_budget_config(dir: &Path) -> String {
    let text = cusum_design_cli::config::EXAMPLE_SEC5
        .replace("population_size = 100", "population_size = 40")
        .replace("generations = 250", "generations = 60");
    let path = dir.join("small.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn evaluate_reports_run_lengths_and_both_variants() {
    let output = run(&["evaluate", "--n", "2", "--h", "0.36", "--H", "4.19"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("ARL_delta = 8.7214"), "{text}");
    assert!(text.contains("ARL_0     = 205.5197"), "{text}");
    assert!(text.contains("C_E (literal)            = 18.7429"), "{text}");
    assert!(text.contains("C_E (no-in-control-cost) = 9.4023"), "{text}");
    assert!(text.contains("feasible under policy enforce: true"), "{text}");
}

#[test]
fn evaluate_matches_second_published_row() {
    let output = run(&["evaluate", "--n", "2", "--h", "0.71", "--H", "2.50"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("ARL_delta = 5.3810"));
}

#[test]
fn evaluate_rejects_out_of_space_points() {
    let output = run(&["evaluate", "--n", "0", "--h", "0.5", "--H", "1.0"]);
    assert!(!output.status.success());

    let output = run(&["evaluate", "--n", "1", "--h", "0.5", "--H", "1.0"]);
    assert!(!output.status.success());
    let message = String::from_utf8_lossy(&output.stderr).into_owned();
    assert!(message.contains("outside the space"), "{message}");
}

#[test]
fn optimize_writes_schema_stable_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_budget_config(dir.path());
    let out = dir.path().join("front.csv");
    let output = run(&[
        "optimize",
        "--config",
        &config,
        "--constraints",
        "off",
        "--variant",
        "no-in-control-cost",
        "--seed",
        "9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());

    let front = std::fs::read_to_string(&out).unwrap();
    let mut lines = front.lines();
    assert_eq!(lines.next(), Some("# seed: 9"));
    assert_eq!(lines.next(), Some("# variant: no-in-control-cost"));
    assert_eq!(lines.next(), Some("# constraints: off"));
    assert!(lines.next().unwrap().starts_with("# version:"));
    assert_eq!(lines.next(), Some("C_E,ARL_delta,n,h,H"));
    let first_row = lines.next().unwrap();
    let fields: Vec<&str> = first_row.split(',').collect();
    assert_eq!(fields.len(), 5);
    // Two decimals for the real columns, bare integer for n.
    for index in [0usize, 1, 3, 4] {
        let (_, decimals) = fields[index].split_once('.').expect("decimal point");
        assert_eq!(decimals.len(), 2, "field {index} in {first_row}");
    }
    assert!(fields[2].parse::<u32>().is_ok());

    // Percentile summary is a subset of the front rows, in order.
    let front_rows: Vec<&str> = front
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("C_E"))
        .collect();
    let percentiles =
        std::fs::read_to_string(dir.path().join("front.percentiles.csv")).unwrap();
    let mut last_index = 0usize;
    for line in percentiles
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("percentile"))
    {
        let (_, row) = line.split_once(',').unwrap();
        let position = front_rows[last_index..]
            .iter()
            .position(|r| *r == row)
            .expect("percentile row present in the front, after the previous one");
        last_index += position;
    }

    let plot = std::fs::read_to_string(dir.path().join("front.plot.csv")).unwrap();
    assert!(plot.lines().any(|l| l == "C_E,ARL_delta"));
}

#[test]
fn optimize_json_mirrors_the_front() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_budget_config(dir.path());
    let out = dir.path().join("front.json");
    let output = run(&[
        "optimize",
        "--config",
        &config,
        "--constraints",
        "off",
        "--seed",
        "9",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(value["metadata"]["seed"], 9);
    assert!(value["front"].as_array().unwrap().len() > 5);
    assert!(value["percentiles"].as_array().unwrap().len() == 21);
}

#[test]
fn simulate_reports_closed_form_side_by_side() {
    let output = run(&[
        "simulate",
        "--K",
        "0.5",
        "--H",
        "4.19",
        "--shift",
        "1",
        "--replications",
        "20000",
        "--seed",
        "7",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("closed-form ARL = 8.7214"), "{text}");
    let mean: f64 = text
        .lines()
        .find(|l| l.starts_with("simulated ARL"))
        .and_then(|l| l.split_whitespace().nth(3))
        .unwrap()
        .parse()
        .unwrap();
    assert!((mean - 8.7214).abs() / 8.7214 < 0.10, "mean {mean}");
}

#[test]
fn simulate_zero_shift_uses_the_in_control_form() {
    let output = run(&[
        "simulate",
        "--K",
        "0.5",
        "--H",
        "1.22",
        "--replications",
        "4000",
        "--seed",
        "3",
    ]);
    assert!(output.status.success());
    // Two equal one-sided in-control ARLs of 14.9679 combine to 7.4839.
    assert!(stdout(&output).contains("closed-form ARL = 7.4839"));
}

#[test]
fn simulate_rejects_zero_replications() {
    let output = run(&["simulate", "--K", "0.5", "--H", "4.19", "--replications", "0"]);
    assert!(!output.status.success());
}

#[test]
fn sensitivity_without_specs_is_an_error() {
    let output = run(&["sensitivity"]);
    assert!(!output.status.success());
}

#[test]
fn sensitivity_reports_two_rows_per_factor() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_budget_config(dir.path());
    let output = run(&[
        "sensitivity",
        "--config",
        &config,
        "--constraints",
        "off",
        "--seed",
        "9",
        "--spec",
        "t0=2:5",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let base: Vec<&str> = text.lines().filter(|l| l.starts_with("base,")).collect();
    let moved: Vec<&str> = text.lines().filter(|l| l.starts_with("t0,")).collect();
    assert_eq!(base.len(), 2);
    assert_eq!(moved.len(), 2);
    // Production continues during the search, so the false-alarm time
    // cannot change the optimum.
    assert_eq!(
        base[0].trim_start_matches("base,,,"),
        moved[0].trim_start_matches("t0,2,5,")
    );
}

#[test]
fn config_dump_load_is_a_fixed_point_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig::load("example_sec5").unwrap();
    let path = dir.path().join("dumped.toml");
    std::fs::write(&path, config.to_toml().unwrap()).unwrap();
    let reloaded = RunConfig::load(path.to_str().unwrap()).unwrap();
    assert_eq!(config, reloaded);
}

#[test]
fn bad_config_paths_fail_cleanly() {
    let output = run(&["optimize", "--config", "/nonexistent/config.toml"]);
    assert!(!output.status.success());
}
