//! End-to-end tests of the `dpboost` binary: commands, file formats, and
//! exit codes (0 success, 2 usage, 3 data).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dpboost() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dpboost"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A linearly-separable boolean CSV: label equals f1.
fn write_boolean_csv(path: &Path, n: usize) {
    let mut text = String::from("f1,f2,label\n");
    for i in 0..n {
        let a = i % 2;
        let b = (i / 2) % 2;
        text.push_str(&format!("{a},{b},{}\n", if a == 1 { "+1" } else { "-1" }));
    }
    fs::write(path, text).unwrap();
}

fn write_categorical_csv(path: &Path) {
    let mut text = String::from("color,label\n");
    for i in 0..12 {
        let color = ["red", "green", "blue"][i % 3];
        let label = if i % 3 == 0 { "yes" } else { "no" };
        text.push_str(&format!("{color},{label}\n"));
    }
    fs::write(path, text).unwrap();
}

fn write_color_schema(path: &Path) {
    fs::write(
        path,
        r#"{
  "columns": [
    {"name": "color", "kind": "categorical", "categories": ["red", "green", "blue"]}
  ],
  "label": {"column": "label", "positive": "yes"}
}"#,
    )
    .unwrap();
}

#[test]
fn train_then_predict_reproduces_training_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let model = dir.path().join("model.json");
    let preds = dir.path().join("preds.csv");
    write_boolean_csv(&data, 24);

    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "3",
            "--seed",
            "7",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let train_stdout = stdout(&out);
    assert!(
        train_stdout.contains("training accuracy 1.0000"),
        "{train_stdout}"
    );
    assert!(train_stdout.contains("non-private"), "{train_stdout}");

    let out = dpboost()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--data"])
        .arg(&data)
        .args(["--out"])
        .arg(&preds)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("accuracy 1.000000"),
        "{}",
        stdout(&out)
    );
    let csv = fs::read_to_string(&preds).unwrap();
    assert!(csv.starts_with("row,prediction\n"));
    assert_eq!(csv.lines().count(), 25);
}

#[test]
fn train_prints_privacy_spend_for_dp_learners() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let model = dir.path().join("model.json");
    write_boolean_csv(&data, 16);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "dp-1r",
            "--epsilon",
            "2",
            "--kappa",
            "0.25",
            "--lambda",
            "0.4",
            "--rounds",
            "4",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    // epsilon kappa n / (4 tau) = 2 * 0.25 * 16 / 16 = 0.5
    assert!(text.contains("privacy: epsilon=2.000000"), "{text}");
    assert!(text.contains("eta=0.500000"), "{text}");
}

#[test]
fn zero_rounds_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_boolean_csv(&data, 8);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "0",
            "--out",
        ])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn positive_delta_with_basic_accounting_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    write_boolean_csv(&data, 8);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "dp-1r",
            "--epsilon",
            "1",
            "--delta",
            "1e-5",
            "--accounting",
            "basic",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "2",
            "--out",
        ])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("delta"), "{}", stderr(&out));
}

#[test]
fn advanced_accounting_accepts_positive_delta() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("train.csv");
    let model = dir.path().join("m.json");
    write_boolean_csv(&data, 16);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "dp-1r",
            "--epsilon",
            "1",
            "--delta",
            "1e-5",
            "--accounting",
            "advanced",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "2",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("delta=1e-5"), "{}", stdout(&out));
}

#[test]
fn missing_schema_for_categorical_data_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("cat.csv");
    write_categorical_csv(&data);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
        ])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("schema"), "{}", stderr(&out));
}

#[test]
fn schema_enables_categorical_training() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("cat.csv");
    let schema = dir.path().join("schema.json");
    let model = dir.path().join("m.json");
    write_categorical_csv(&data);
    write_color_schema(&schema);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args(["--schema"])
        .arg(&schema)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    // red/green/blue + missing indicator.
    assert!(stdout(&out).contains("r=4 features"), "{}", stdout(&out));
}

#[test]
fn missing_file_is_a_data_error() {
    let out = dpboost()
        .args([
            "train",
            "--data",
            "/nonexistent/nope.csv",
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
            "/tmp/never.json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn malformed_csv_is_a_data_error_naming_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.csv");
    fs::write(&data, "f1,f2,label\n1,0,+1\n1,-1\n").unwrap();
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
        ])
        .arg(dir.path().join("m.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn predict_rejects_feature_count_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let train_csv = dir.path().join("train.csv");
    let other_csv = dir.path().join("other.csv");
    let model = dir.path().join("m.json");
    write_boolean_csv(&train_csv, 12);
    fs::write(&other_csv, "f1,f2,f3,label\n1,0,1,+1\n0,1,0,-1\n").unwrap();
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&train_csv)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = dpboost()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--data"])
        .arg(&other_csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(
        stderr(&out).contains("feature-count mismatch"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn handwritten_const_true_model_predicts_all_positive() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let model = dir.path().join("m.json");
    write_boolean_csv(&data, 8);
    fs::write(
        &model,
        r#"{
  "config": {"kappa": 0.3, "lambda": 0.3, "rounds": 1, "learner": "1r",
             "tree_nodes": 1, "epsilon": 0.0, "delta": 0.0, "accounting": "basic",
             "beta": 0.1, "seed": 0, "features": 2, "train_n": 8},
  "hypotheses": [{"kind": "const-true"}],
  "trace": [{"round": 1, "advantage": 0.0, "eta": null}]
}"#,
    )
    .unwrap();
    let out = dpboost()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--data"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for line in text.lines().skip(1).filter(|l| l.contains(',')) {
        assert!(line.ends_with(",+1"), "{line}");
    }
}

#[test]
fn grid_is_deterministic_and_reduces_to_cv() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    write_boolean_csv(&data, 16);
    let run = |out_path: &Path| {
        let out = dpboost()
            .env("DPBOOST_THREADS", "2")
            .args(["grid", "--data"])
            .arg(&data)
            .args([
                "--learner",
                "dp-1r",
                "--epsilons",
                "1.0",
                "--taus",
                "2,3",
                "--lambdas",
                "0.3",
                "--kappas",
                "0.3",
                "--folds",
                "2",
                "--repeats",
                "2",
                "--seed",
                "9",
                "--out",
            ])
            .arg(out_path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let a_path = dir.path().join("a.csv");
    let b_path = dir.path().join("b.csv");
    let stdout_a = run(&a_path);
    let stdout_b = run(&b_path);
    assert_eq!(fs::read(&a_path).unwrap(), fs::read(&b_path).unwrap());
    assert_eq!(stdout_a, stdout_b);
    let table = fs::read_to_string(&a_path).unwrap();
    assert!(table.starts_with("epsilon,tau,lambda,kappa,mean_accuracy,std_accuracy\n"));
    assert_eq!(table.lines().count(), 3); // header + 2 cells
    assert!(stdout_a.contains("winners"), "{stdout_a}");
}

#[test]
fn empty_grid_list_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    write_boolean_csv(&data, 8);
    let out = dpboost()
        .args(["grid", "--data"])
        .arg(&data)
        .args(["--epsilons", "", "--taus", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn report_pipeline_over_a_trained_model() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    write_boolean_csv(&data, 24);
    for (seed, path) in [("1", &m1), ("2", &m2)] {
        let out = dpboost()
            .args(["train", "--data"])
            .arg(&data)
            .args([
                "--learner",
                "dp-1r",
                "--epsilon",
                "3",
                "--kappa",
                "0.3",
                "--lambda",
                "0.4",
                "--rounds",
                "3",
                "--seed",
                seed,
                "--out",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
    }

    let sparsity = dpboost()
        .args(["report", "sparsity", "--model"])
        .arg(&m1)
        .args(["--model"])
        .arg(&m2)
        .output()
        .unwrap();
    assert!(sparsity.status.success(), "{}", stderr(&sparsity));
    assert!(
        stdout(&sparsity).contains("features used: mean"),
        "{}",
        stdout(&sparsity)
    );

    let margins = dpboost()
        .args(["report", "margins", "--model"])
        .arg(&m1)
        .args(["--data"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(margins.status.success(), "{}", stderr(&margins));
    let text = stdout(&margins);
    let total: usize = text
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(2))
        .filter_map(|c| c.parse::<usize>().ok())
        .sum();
    assert_eq!(total, 24, "{text}");

    let advantage = dpboost()
        .args(["report", "advantage", "--model"])
        .arg(&m1)
        .output()
        .unwrap();
    assert!(advantage.status.success());
    assert_eq!(
        stdout(&advantage)
            .lines()
            .filter(|l| l.contains(','))
            .count(),
        4
    ); // header + 3

    let rademacher = dpboost()
        .args(["report", "rademacher", "--data"])
        .arg(&data)
        .args(["--model"])
        .arg(&m1)
        .args(["--draws", "150"])
        .output()
        .unwrap();
    assert!(rademacher.status.success(), "{}", stderr(&rademacher));
    assert!(
        stdout(&rademacher).contains("pessimistic"),
        "{}",
        stdout(&rademacher)
    );
}

#[test]
fn audit_command_reports_epsilon_hat() {
    let out = dpboost()
        .args([
            "audit",
            "--mechanism",
            "wem",
            "--trials",
            "100000",
            "--seed",
            "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let eps_hat: f64 = text
        .lines()
        .find(|l| l.contains("empirical epsilon_hat"))
        .and_then(|l| l.split_whitespace().nth(3))
        .and_then(|v| v.parse().ok())
        .unwrap_or(f64::NAN);
    assert!(eps_hat <= 0.05, "{text}");

    let bad = dpboost()
        .args(["audit", "--mechanism", "gauss"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn tree_learner_round_trips_through_the_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let model = dir.path().join("tree.json");
    write_boolean_csv(&data, 32);
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "dp-topdown",
            "--epsilon",
            "40",
            "--tree-nodes",
            "2",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "3",
            "--seed",
            "5",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let train_text = stdout(&out);
    // The budget is generous enough that trees split on the label feature.
    assert!(
        train_text.contains("training accuracy 1.0000"),
        "{train_text}"
    );
    let json = fs::read_to_string(&model).unwrap();
    assert!(json.contains("\"split\""), "{json}");

    let out = dpboost()
        .args(["predict", "--model"])
        .arg(&model)
        .args(["--data"])
        .arg(&data)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("accuracy 1.000000"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn cv_command_reports_mean_and_writes_scores() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let scores = dir.path().join("cv.csv");
    write_boolean_csv(&data, 20);
    let out = dpboost()
        .args(["cv", "--data"])
        .arg(&data)
        .args([
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "2",
            "--folds",
            "4",
            "--repeats",
            "2",
            "--out",
        ])
        .arg(&scores)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("cv accuracy 1.0000"),
        "{}",
        stdout(&out)
    );
    let csv = fs::read_to_string(&scores).unwrap();
    assert!(csv.starts_with("repeat,fold,accuracy\n"));
    assert_eq!(csv.lines().count(), 9); // header + 4 folds x 2 repeats
}

#[test]
fn unknown_flag_exits_with_usage_code() {
    let out = dpboost().args(["train", "--nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_env_is_a_usage_error() {
    let out = dpboost()
        .env("DPBOOST_THREADS", "zero")
        .args(["audit", "--mechanism", "wem", "--trials", "10000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn libsvm_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.libsvm");
    let model = dir.path().join("m.json");
    let mut text = String::new();
    for i in 0..16 {
        // Feature 2 carries the label.
        if i % 2 == 0 {
            text.push_str("+1 2:1\n");
        } else if i % 4 == 1 {
            text.push_str("-1 1:1\n");
        } else {
            text.push_str("-1\n");
        }
    }
    fs::write(&data, text).unwrap();
    let out = dpboost()
        .args(["train", "--data"])
        .arg(&data)
        .args([
            "--format",
            "libsvm",
            "--learner",
            "1r",
            "--kappa",
            "0.3",
            "--lambda",
            "0.4",
            "--rounds",
            "1",
            "--out",
        ])
        .arg(&model)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("training accuracy 1.0000"),
        "{}",
        stdout(&out)
    );
}
