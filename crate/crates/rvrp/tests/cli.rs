//! End-to-end tests of the `rvrp` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rvrp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvrp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn solve_exact_reference_min_cost() {
    let dir = tempfile::tempdir().unwrap();
    let output = rvrp(
        &[
            "solve", "--reference", "--exact", "--min-cost", "--alpha", "90",
            "--out", "result.txt",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let line = stdout(&output);
    assert!(line.contains("cost 248.55"), "summary: {line}");
    assert!(line.contains("feasible"), "summary: {line}");

    let text = fs::read_to_string(dir.path().join("result.txt")).unwrap();
    assert!(text.contains("instance: reference"));
    assert!(text.contains("solver: exact"));
    assert!(text.contains("mode: min-cost alpha=90%"));
    assert!(text.contains("route 1: 0 ->"));
    assert!(text.contains("node 6: success"));
}

#[test]
fn solve_exact_infeasible_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let output = rvrp(
        &["solve", "--reference", "--exact", "--min-cost", "--alpha", "92.3"],
        dir.path(),
    );
    // Infeasibility is an answer, not an error.
    assert!(output.status.success());
    assert!(stdout(&output).contains("infeasible"));
}

#[test]
fn solve_sa_reference_max_success() {
    let dir = tempfile::tempdir().unwrap();
    let output = rvrp(
        &[
            "solve", "--reference", "--sa", "--max-success", "--beta", "220",
            "--seed", "1", "--sa-seeds", "5",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let line = stdout(&output);
    assert!(line.contains("objective 7.44"), "summary: {line}");
    assert!(line.contains("cost 212.89"), "summary: {line}");
}

#[test]
fn generate_is_deterministic_and_solvable() {
    let dir = tempfile::tempdir().unwrap();
    let first = rvrp(
        &["generate", "--n", "6", "--k", "2", "--seed", "9", "--out", "a.json"],
        dir.path(),
    );
    assert!(first.status.success());
    let second = rvrp(
        &["generate", "--n", "6", "--k", "2", "--seed", "9", "--out", "b.json"],
        dir.path(),
    );
    assert!(second.status.success());
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "same seed must produce byte-identical files");

    let solve = rvrp(
        &[
            "solve", "--instance", "a.json", "--exact", "--min-cost", "--alpha", "0",
        ],
        dir.path(),
    );
    assert!(solve.status.success());
    assert!(stdout(&solve).contains("feasible"));
}

#[test]
fn sweep_writes_csv_and_chart() {
    let dir = tempfile::tempdir().unwrap();
    let output = rvrp(
        &[
            "sweep", "--reference", "--solver", "both", "--alphas", "0,90,92.3",
            "--sa-seeds", "2", "--out", "sweep.csv", "--chart", "chart.csv",
        ],
        dir.path(),
    );
    assert!(output.status.success());

    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "value,solver,feasible,objective,objective_full,total_cost,total_cost_full,\
         total_success,total_success_full,time_s,seed,gap_pct"
    );
    // Three swept values x two solvers.
    assert_eq!(lines.count(), 6);
    assert!(csv.contains("90,exact,true,248.55"));
    assert!(csv.contains("92.3,exact,false"));

    let chart = fs::read_to_string(dir.path().join("chart.csv")).unwrap();
    assert!(chart.starts_with("value,objective\n"));
    // The infeasible value is skipped in chart data.
    assert_eq!(chart.lines().count(), 3);
}

#[test]
fn scale_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let output = rvrp(
        &[
            "scale", "--sizes", "5x1,6x2", "--alpha", "0", "--betas", "1000,1000",
            "--seed", "3", "--sa-seeds", "1", "--out", "scale.csv",
        ],
        dir.path(),
    );
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let csv = fs::read_to_string(dir.path().join("scale.csv")).unwrap();
    assert!(csv.starts_with(
        "n,k,c_alpha0,phi_alpha0,feasible_alpha0,t_alpha0,alpha_pct,c_alpha,phi_alpha,\
         feasible_alpha,t_alpha,beta,c_beta,phi_beta,feasible_beta,t_beta\n"
    ));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.contains("\n5,1,"));
    assert!(csv.contains("\n6,2,"));
}

#[test]
fn sa_config_file_overrides_parameters() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sa.json"),
        r#"{"delta":0.95,"outer_iterations":200,"inner_iterations":40,"init_samples":30,"seed":0,"penalty":null}"#,
    )
    .unwrap();
    let output = rvrp(
        &[
            "solve", "--reference", "--sa", "--min-cost", "--alpha", "0",
            "--config", "sa.json", "--seed", "2", "--sa-seeds", "3",
        ],
        dir.path(),
    );
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(stdout(&output).contains("feasible"));
}

#[test]
fn usage_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // No instance source.
    let output = rvrp(&["solve", "--exact", "--min-cost", "--alpha", "0"], dir.path());
    assert!(!output.status.success());

    // Both objectives at once.
    let output = rvrp(
        &[
            "solve", "--reference", "--exact", "--min-cost", "--max-success",
            "--alpha", "0", "--beta", "100",
        ],
        dir.path(),
    );
    assert!(!output.status.success());

    // Missing alpha for min-cost.
    let output = rvrp(&["solve", "--reference", "--exact", "--min-cost"], dir.path());
    assert!(!output.status.success());

    // Unknown solver name in sweep.
    let output = rvrp(
        &["sweep", "--reference", "--solver", "fast", "--alphas", "0", "--out", "x.csv"],
        dir.path(),
    );
    assert!(!output.status.success());

    // Malformed size list in scale.
    let output = rvrp(
        &["scale", "--sizes", "banana", "--betas", "100", "--out", "x.csv"],
        dir.path(),
    );
    assert!(!output.status.success());

    // Missing instance file.
    let output = rvrp(
        &["solve", "--instance", "nope.json", "--exact", "--min-cost", "--alpha", "0"],
        dir.path(),
    );
    assert!(!output.status.success());
}
