use std::path::{Path, PathBuf};
use std::process::Command;

use itframe_cli::output::parse_complex_matrix_csv;
use itframe_cli::{run, ExperimentConfig, RunError, TaskStatus};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_itframe"))
}

const BASE: &str = r#"
[set]
intervals = [[-0.5, 0.5]]
[grid]
nodes_per_unit = 16
[generator]
kind = "indicator"
a = -0.5
b = 0.5
[translates]
kind = "lattice"
step = 1.0
count = 16
"#;

fn with_tasks(tasks: &str) -> String {
    format!("{BASE}[tasks]\nrun = [{tasks}]\n")
}

#[test]
fn onb_config_passes_every_task_with_unit_bounds() {
    let cfg = ExperimentConfig::load(&configs_dir().join("onb.toml")).unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.report.tasks.len(), 7);
    assert!(out.report.tasks.iter().all(|t| t.status == TaskStatus::Pass), "{}", out.report.to_json());
    let fb = &out.report.task("bounds").unwrap().bounds["translates"];
    assert!((fb.a_opt - 1.0).abs() < 1e-10 && (fb.b_opt - 1.0).abs() < 1e-10);
}

#[test]
fn shipped_configs_run_clean() {
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let out = run(&ExperimentConfig::load(&path).unwrap()).unwrap();
            assert!(!out.report.failed(), "{}: {}", path.display(), out.report.to_json());
        }
    }
}

#[test]
fn tasks_run_in_declaration_order_and_all_expands() {
    let cfg = ExperimentConfig::from_toml(&with_tasks(r#""bounds", "gram", "bounds""#)).unwrap();
    let names: Vec<_> = run(&cfg).unwrap().report.tasks.iter().map(|t| t.task.clone()).collect();
    assert_eq!(names, ["bounds", "gram"]);
    let cfg = ExperimentConfig::from_toml(&with_tasks(r#""all""#)).unwrap();
    assert_eq!(run(&cfg).unwrap().report.tasks.len(), 7);
}

#[test]
fn unknown_task_is_a_config_error_naming_the_task() {
    match ExperimentConfig::from_toml(&with_tasks(r#""gram", "foo""#)) {
        Err(RunError::Config(msg)) => assert!(msg.contains("foo"), "{msg}"),
        other => panic!("expected config error, got {other:?}"),
    }
}

#[test]
fn jitter_without_seed_is_rejected() {
    let text = with_tasks(r#""gram""#).replace(
        "kind = \"lattice\"\nstep = 1.0\ncount = 16",
        "kind = \"jittered_lattice\"\nstep = 1.0\ncount = 16\njitter = 0.1",
    );
    assert!(ExperimentConfig::from_toml(&text).and_then(|c| run(&c)).is_err());
}

#[test]
fn nonpositive_tolerance_is_rejected() {
    let text = format!("{}[tolerances]\nrank_cutoff = 0.0\n", with_tasks(r#""gram""#));
    assert!(ExperimentConfig::from_toml(&text).and_then(|c| run(&c)).is_err());
}

#[test]
fn incomplete_exponentials_skip_dual_tasks_with_reason() {
    // 8 exponentials cannot span 16 nodes and Phi is not flat
    let text = with_tasks(r#""dual", "parseval", "reconstruct""#)
        .replace("kind = \"lattice\"\nstep = 1.0\ncount = 16", "kind = \"lattice\"\nstep = 0.5\ncount = 8");
    let cfg = ExperimentConfig::from_toml(
        &text.replace("kind = \"indicator\"\na = -0.5\nb = 0.5", "kind = \"truncated_gaussian\"\nsigma = 0.5"),
    )
    .unwrap();
    let out = run(&cfg).unwrap();
    for t in &out.report.tasks {
        assert_eq!(t.status, TaskStatus::Skipped, "{}", t.task);
        assert!(t.skip_reason.as_deref().is_some_and(|r| !r.is_empty()));
    }
    assert!(!out.report.failed());
}

#[test]
fn reconstruct_frame_element_and_off_span_signal() {
    let base = std::fs::read_to_string(configs_dir().join("jittered_indicator.toml")).unwrap();
    let element = base.replace("kind = \"random\"", "kind = \"element\"\nindex = 3");
    let out = run(&ExperimentConfig::from_toml(&element).unwrap()).unwrap();
    let rec = out.report.task("reconstruct").unwrap().reconstruction.as_ref().unwrap();
    assert!(rec.in_span && rec.relative_error <= 1e-8);
    assert_eq!(rec.evaluations.len(), 3);

    // 40 translates leave part of L2(E) outside the span
    let off = base
        .replace("kind = \"random\"", "kind = \"off_span\"")
        .replace("step = 0.8\ncount = 44", "step = 1.0\ncount = 24");
    let out = run(&ExperimentConfig::from_toml(&off).unwrap()).unwrap();
    let t = out.report.task("reconstruct").unwrap();
    if t.status != TaskStatus::Skipped {
        let rec = t.reconstruction.as_ref().unwrap();
        assert!((rec.relative_error - rec.distance_to_span).abs() <= 1e-8);
    }
}

#[test]
fn binary_writes_report_and_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, format!("{}[output]\nmatrices = true\n", with_tasks(r#""gram", "bounds""#))).unwrap();
    let out = dir.path().join("out");
    let status = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema_version"], "itframe.report/1");
    assert_eq!(report["reproducibility"]["grid_nodes"], 16);
    assert_eq!(report["reproducibility"]["grid_hash"].as_str().unwrap().len(), 64);
    let gram = parse_complex_matrix_csv(&std::fs::read_to_string(out.join("matrices/gram.csv")).unwrap()).unwrap();
    assert_eq!(gram.shape(), (16, 16));
    assert!((gram[(0, 0)].re - 1.0).abs() < 1e-12);
}

#[test]
fn task_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, with_tasks(r#""all""#)).unwrap();
    let out = bin().args(["run", "--task", "gram", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["tasks"].as_array().unwrap().len(), 1);

    let bad = bin().args(["run", "--task", "nope", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("nope"));
}

#[test]
fn corpus_mode_runs_every_config() {
    let out = bin().args(["corpus", "--dir"]).arg(configs_dir()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let bad = bin().args(["corpus", "--dir"]).arg(configs_dir().join("invalid")).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
