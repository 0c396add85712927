//! Report emission, the violation pipeline and the command-line front end.

use std::path::Path;
use std::process::Command;

use chanlab_harness::emit::{parse_json, plot_path, to_json, write_trials_csv};
use chanlab_harness::report::{Cell, Certification, ExperimentReport};
use chanlab_harness::{emit_report, run, ExperimentConfig, OutputFormat};

fn pipeline_config(k: usize, d: usize, m: usize, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        command: "violation".into(),
        k: vec![k],
        d: vec![d],
        m: vec![m],
        trials,
        starts: 4,
        max_iters: 100,
        seed: 21,
        ..Default::default()
    }
}

fn num(cell: &Cell) -> f64 {
    cell.as_f64().expect("numeric cell")
}

#[test]
fn pipeline_product_bound_examples() {
    let r = run(&pipeline_config(2, 4, 4, 3)).unwrap();
    assert_eq!(r.trials.len(), 3);
    // λ = 1/2 on C²⊗C²: −½ log ½ − ½ log(1/6) = ½ log 12
    let closed = 0.5 * 12f64.ln();
    for row in &r.trials {
        assert!((num(&row["smin_product_upper"]) - closed).abs() < 1e-12);
        assert!((closed - 1.2424533).abs() < 1e-7);
        assert!(num(&row["entangled_overlap"]) >= 0.5 - 1e-9);
    }

    let r = run(&pipeline_config(3, 36, 18, 1)).unwrap();
    assert!(num(&r.trials[0]["smin_product_upper"]) < 2.0 * 3f64.ln());
}

#[test]
fn pipeline_fields_combine_exactly() {
    let r = run(&pipeline_config(3, 12, 9, 4)).unwrap();
    assert!(!r.certification.certified);
    assert_eq!(r.certification.label, "indicative");
    for row in &r.trials {
        let (u, s1, h) = (
            num(&row["smin_product_upper"]),
            num(&row["smin_single_upper"]),
            num(&row["smin_hs_heuristic_lower"]),
        );
        assert!(s1 <= 3f64.ln() + 1e-9);
        assert_eq!(num(&row["gap_diagnostic"]), u - 2.0 * s1);
        assert_eq!(num(&row["heuristic_slack"]), s1 - h);
        let g = num(&row["g_hat"]);
        assert_eq!(h, 3f64.ln() - 3.0 * g * g);
    }
}

#[test]
fn product_step_is_skipped_over_budget() {
    let cfg = ExperimentConfig { budget: 1, ..pipeline_config(2, 4, 4, 2) };
    let r = run(&cfg).unwrap();
    assert!(r.trials.iter().all(|row| row["entangled_overlap"] == Cell::Missing));
    assert!(r.trials.iter().all(|row| row["product_output_entropy"] == Cell::Missing));
    let mut csv = Vec::new();
    write_trials_csv(&r, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.lines().nth(1).unwrap().contains(",,"));
}

#[test]
fn csv_has_one_row_per_trial_and_header_only_when_empty() {
    let r = run(&pipeline_config(2, 4, 3, 3)).unwrap();
    let mut csv = Vec::new();
    write_trials_csv(&r, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), r.columns.join(","));

    let empty = ExperimentReport::new(&ExperimentConfig::default(), &["k", "value"], Certification::exact("none"));
    let mut csv = Vec::new();
    write_trials_csv(&empty, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap(), "k,value\n");
    let json = to_json(&empty).unwrap();
    assert!(json.contains("\"trials\": []"));
    assert_eq!(to_json(&parse_json(&json).unwrap()).unwrap(), json);
}

#[test]
fn replay_is_independent_of_worker_count() {
    let cfg = ExperimentConfig {
        command: "oscillation".into(),
        k: vec![2, 3],
        d: vec![8],
        m: vec![3],
        subspace_trials: 4,
        starts: 3,
        max_iters: 40,
        probes: 30,
        seed: 22,
        constants: [("center_trials".to_string(), 100.0)].into(),
        ..Default::default()
    };
    let with_threads = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| run(&cfg).unwrap().canonical_json().unwrap())
    };
    assert_eq!(with_threads(1), with_threads(4));
    let pipe = pipeline_config(2, 4, 3, 3);
    let a = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run(&pipe).unwrap());
    let b = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| run(&pipe).unwrap());
    assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
}

#[test]
fn bits_change_only_serialized_entropies() {
    let nats = run(&pipeline_config(2, 4, 3, 2)).unwrap();
    let bits = run(&ExperimentConfig { bits: true, ..pipeline_config(2, 4, 3, 2) }).unwrap();
    // in memory both are nats
    assert_eq!(nats.trials, bits.trials);
    let out = parse_json(&to_json(&bits).unwrap()).unwrap();
    assert_eq!(out.entropy_unit, "bits");
    for (a, b) in nats.trials.iter().zip(&out.trials) {
        let s = num(&a["smin_single_upper"]);
        assert!((num(&b["smin_single_upper"]) - s / std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(a["g_hat"], b["g_hat"]);
    }
}

#[test]
fn emit_writes_json_csv_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&ExperimentConfig {
        command: "singular-window".into(),
        k: vec![2, 3],
        d: vec![16],
        trials: 5,
        ..Default::default()
    })
    .unwrap();
    let json = dir.path().join("w.json");
    emit_report(&r, Some(&json), OutputFormat::Json).unwrap();
    assert_eq!(parse_json(&std::fs::read_to_string(&json).unwrap()).unwrap(), r);

    let csv = dir.path().join("w.csv");
    emit_report(&r, Some(&csv), OutputFormat::Csv).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 11);
    let plot = std::fs::read_to_string(plot_path(&csv)).unwrap();
    assert_eq!(plot.lines().next().unwrap(), "x,y,series");
    assert_eq!(plot.lines().count(), 3);

    let err = emit_report(&r, Some(Path::new("/nonexistent-dir/r.json")), OutputFormat::Json).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("/nonexistent-dir/r.json"));
}

fn chanlab(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chanlab")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let ok = chanlab(&[
        "eigen-window",
        "--k",
        "2",
        "--d",
        "8,16",
        "--trials",
        "4",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 9);

    assert_eq!(chanlab(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(chanlab(&["singular-window", "--k", "0"]).status.code(), Some(1));
    assert_eq!(chanlab(&["singular-window", "--constant", "c_win"]).status.code(), Some(1));
    assert_eq!(chanlab(&["violation", "--k", "2", "--d", "2", "--m", "5"]).status.code(), Some(1));
    assert_eq!(chanlab(&["--bogus-flag"]).status.code(), Some(1));
    // a 10 x 1 unit matrix has operator norm 1 > 3/√10, so Ω is empty
    let empty_omega = chanlab(&["lipschitz-restriction", "--k", "10", "--d", "1", "--trials", "1"]);
    assert_eq!(empty_omega.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&empty_omega.stderr).contains("rejection"));
    let io = chanlab(&["singular-window", "--k", "2", "--d", "4", "--trials", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn config_file_keys_mirror_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(
        &cfg_path,
        "command = \"central-value\"\nk = [3]\nd = [12]\ntrials = 150\nseed = 4\nfamily = \"opnorm\"\n",
    )
    .unwrap();
    let from_file = chanlab(&["--config", cfg_path.to_str().unwrap()]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    let from_flags = chanlab(&[
        "central-value",
        "--k",
        "3",
        "--d",
        "12",
        "--trials",
        "150",
        "--seed",
        "4",
        "--family",
        "opnorm",
    ]);
    let a = parse_json(std::str::from_utf8(&from_file.stdout).unwrap()).unwrap();
    let b = parse_json(std::str::from_utf8(&from_flags.stdout).unwrap()).unwrap();
    assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    // flags override the file
    let over = chanlab(&["--config", cfg_path.to_str().unwrap(), "--trials", "200"]);
    assert_eq!(parse_json(std::str::from_utf8(&over.stdout).unwrap()).unwrap().trials.len(), 200);
}
