//! End-to-end tests of the installed binary: exit codes, artifact bytes,
//! determinism, and the no-partial-files guarantee.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vilenkin"))
}

/// Fresh working directory per test, under the harness-provided temp root.
fn workspace(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn fejer_kernel_writes_plateau_values() {
    let dir = workspace("fejer-kernel");
    let out = dir.to_str().unwrap();
    let result = run(&["kernel", "--m", "2,2,2", "--kind", "fejer", "--n", "4", "--out", out]);
    assert!(result.status.success(), "{result:?}");
    let text = read(&dir.join("kernel_fejer_n4.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9, "header plus one row per cell:\n{text}");
    assert_eq!(lines[0], "coset_index,re,im");
    // The averaging kernel at index M_2 holds (M_2 + 1)/2 on the rank-2
    // coset of zero: the first two cells at resolution 3.
    for line in &lines[1..3] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[1].parse::<f64>().unwrap(), 2.5);
        assert_eq!(fields[2].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn constant_weight_output_matches_fejer_bytes() {
    let dir = workspace("kernel-bytes");
    let out = dir.to_str().unwrap();
    assert!(run(&["kernel", "--kind", "fejer", "--n", "4", "--out", out])
        .status
        .success());
    assert!(run(&[
        "kernel", "--kind", "norlund", "--weights", "constant", "--n", "4", "--out", out
    ])
    .status
    .success());
    let fejer = fs::read(dir.join("kernel_fejer_n4.csv")).unwrap();
    let norlund = fs::read(dir.join("kernel_norlund_n4.csv")).unwrap();
    assert_eq!(fejer, norlund);
}

#[test]
fn zero_index_is_a_usage_error() {
    let result = run(&["kernel", "--n", "0"]);
    assert_eq!(result.status.code(), Some(2));
    assert!(!result.stderr.is_empty());
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let result = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_one_with_a_message() {
    let dir = workspace("kernel-error");
    let result = run(&[
        "kernel",
        "--m",
        "2,2,2",
        "--n",
        "4",
        "--resolution",
        "9",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.starts_with("error:"), "{stderr}");
}

#[test]
fn closed_forms_suite_passes_and_reports_json() {
    let dir = workspace("verify-closed-forms");
    let result = run(&[
        "verify",
        "--suite",
        "closed-forms",
        "--m",
        "2,2,2,2",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let report: serde_json::Value =
        serde_json::from_str(&read(&dir.join("verify_closed-forms.json"))).unwrap();
    let checks = report.as_array().unwrap();
    assert_eq!(checks.len(), 4);
    for check in checks {
        assert_eq!(check["pass"], serde_json::Value::Bool(true), "{check}");
        assert!(check["tolerance"].is_string());
    }
}

#[test]
fn verify_all_covers_every_suite() {
    let dir = workspace("verify-all");
    let result = run(&[
        "verify",
        "--suite",
        "all",
        "--m",
        "2,3,2,2",
        "--weights",
        "cesaro:0.5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    for suite in [
        "closed-forms",
        "block-decomposition",
        "abel",
        "kernel-majorant",
        "tail-integrals",
        "weight-conditions",
    ] {
        let path = dir.join(format!("verify_{suite}.json"));
        assert!(path.exists(), "missing report for {suite}");
        let report: serde_json::Value = serde_json::from_str(&read(&path)).unwrap();
        for check in report.as_array().unwrap() {
            assert_eq!(check["pass"], serde_json::Value::Bool(true), "{check}");
        }
    }
}

#[test]
fn experiments_are_deterministic_per_seed() {
    let first = workspace("experiment-det-1");
    let second = workspace("experiment-det-2");
    let args = |out: &Path| {
        vec![
            "experiment".to_string(),
            "--kind".into(),
            "atom-integral".into(),
            "--m".into(),
            "2,2,2,2".into(),
            "--N".into(),
            "1..2".into(),
            "--factors".into(),
            "2,4".into(),
            "--atoms".into(),
            "3".into(),
            "--seed".into(),
            "7".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    assert!(binary().args(args(&first)).output().unwrap().status.success());
    assert!(binary().args(args(&second)).output().unwrap().status.success());
    let a = fs::read(first.join("experiment_atom-integral.csv")).unwrap();
    let b = fs::read(second.join("experiment_atom-integral.csv")).unwrap();
    assert_eq!(a, b);
    // A different seed must actually change the table.
    let third = workspace("experiment-det-3");
    let mut changed = args(&third);
    let seed_index = changed.iter().position(|a| a == "7").unwrap();
    changed[seed_index] = "8".into();
    assert!(binary().args(&changed).output().unwrap().status.success());
    let c = fs::read(third.join("experiment_atom-integral.csv")).unwrap();
    assert_ne!(a, c);
}

#[test]
fn atom_integral_csv_has_summary_row_and_json_parses() {
    let dir = workspace("experiment-formats");
    let base = [
        "experiment",
        "--kind",
        "atom-integral",
        "--m",
        "2,2,2,2",
        "--N",
        "1..2",
        "--factors",
        "2,4",
        "--atoms",
        "2",
        "--seed",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ];
    assert!(binary().args(base).output().unwrap().status.success());
    let csv = read(&dir.join("experiment_atom-integral.csv"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "N,n_max,atom_seed,value");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2 + 1, "{csv}");
    let summary = lines.last().unwrap();
    assert!(summary.starts_with("max,"), "{summary}");
    let max: f64 = summary.rsplit(',').next().unwrap().parse().unwrap();
    assert!(max.is_finite() && max > 0.0);

    let mut json_args = base.to_vec();
    json_args.extend_from_slice(&["--format", "json"]);
    assert!(binary().args(&json_args).output().unwrap().status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&read(&dir.join("experiment_atom-integral.json"))).unwrap();
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 8);
    let json_max: f64 = parsed["global_max"].as_str().unwrap().parse().unwrap();
    assert_eq!(json_max, max);
}

#[test]
fn violated_precondition_warns_but_still_succeeds() {
    let dir = workspace("experiment-warning");
    let result = run(&[
        "experiment",
        "--kind",
        "atom-integral",
        "--m",
        "2,2,2,2",
        "--N",
        "1..2",
        "--factors",
        "2,4",
        "--atoms",
        "2",
        "--weights",
        "inverse_sqrt",
        "--alpha",
        "0.75",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("warning:"), "{stderr}");
    assert!(stderr.contains("normalizer growth"), "{stderr}");
}

#[test]
fn failed_runs_leave_no_partial_files() {
    let dir = workspace("experiment-failure");
    let result = run(&[
        "experiment",
        "--kind",
        "atom-integral",
        "--m",
        "2,2,2",
        "--N",
        "5..6",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    assert!(!result.stderr.is_empty());
    let leftovers: Vec<_> = fs::read_dir(&dir).unwrap().collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn thread_cap_does_not_change_output_bytes() {
    let capped = workspace("verify-threads-1");
    let free = workspace("verify-threads-n");
    let args = |out: &Path| {
        vec![
            "verify",
            "--suite",
            "block-decomposition",
            "--m",
            "2,3,2",
            "--weights",
            "cesaro:0.5",
            "--out",
            out.to_str().unwrap(),
        ]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()
    };
    let result = binary()
        .args(args(&capped))
        .env("VILENKIN_THREADS", "1")
        .output()
        .unwrap();
    assert!(result.status.success(), "{result:?}");
    assert!(binary().args(args(&free)).output().unwrap().status.success());
    let a = fs::read(capped.join("verify_block-decomposition.json")).unwrap();
    let b = fs::read(free.join("verify_block-decomposition.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn strong_sum_and_background_tables_have_expected_shape() {
    let dir = workspace("experiment-shapes");
    let out = dir.to_str().unwrap();
    let result = run(&[
        "experiment", "--kind", "strong-sum", "--m", "2,2,2,2", "--N", "2..4", "--atoms",
        "2", "--seed", "3", "--out", out,
    ]);
    assert!(result.status.success(), "{result:?}");
    let strong = read(&dir.join("experiment_strong-sum.csv"));
    let lines: Vec<&str> = strong.lines().collect();
    assert_eq!(lines[0], "order,n,atom_seed,value,reference,ratio");
    assert_eq!(lines.len(), 1 + 2 * 3 + 1, "{strong}");

    let result = run(&[
        "experiment", "--kind", "background", "--m", "2,2,2", "--atoms", "2", "--r-max",
        "64", "--seed", "3", "--out", out,
    ]);
    assert!(result.status.success(), "{result:?}");
    let background = read(&dir.join("experiment_background.csv"));
    let lines: Vec<&str> = background.lines().collect();
    assert_eq!(
        lines[0],
        "probe,probe_seed,n,partial_sums,fejer_means,deviations"
    );
    // Three probes (one character, two seeded) over the doubling ladder
    // 2..64, plus header and summary.
    assert_eq!(lines.len(), 1 + 3 * 6 + 1, "{background}");
    assert!(lines.last().unwrap().starts_with("max,"));
}

#[test]
fn spectrum_flag_writes_the_coefficient_table() {
    let dir = workspace("kernel-spectrum");
    let result = run(&[
        "kernel",
        "--m",
        "2,2,2",
        "--kind",
        "dirichlet",
        "--n",
        "4",
        "--spectrum",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");
    let text = read(&dir.join("kernel_dirichlet_n4_spectrum.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "frequency,re,im");
    // D_4 has coefficient 1 on frequencies 0..4 and 0 above.
    for (i, line) in lines[1..].iter().enumerate() {
        let re: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let expected = if i < 4 { 1.0 } else { 0.0 };
        assert!((re - expected).abs() < 1e-12, "frequency {i}: {line}");
    }
}
