use std::fs;
use std::process::{Command, Output};

use affinor_cli::csv_io::CsvTable;
use serde_json::Value;

fn affinor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affinor"))
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

fn num(table: &CsvTable, row: usize, col: &str) -> f64 {
    table.rows[row][table.column(col).unwrap()].parse().unwrap()
}

#[test]
fn angles_json() {
    let o = affinor(&[
        "angles", "--metric", "3,1,2", "--w", "1,0,0,0", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["cos_q"].as_f64().unwrap() - 0.333333).abs() < 1e-6);
    assert!((v["cos_q2"].as_f64().unwrap() - 0.666667).abs() < 1e-6);
    assert_eq!(v["inputs"]["metric"], serde_json::json!([3.0, 1.0, 2.0]));
    assert_eq!(
        v["inputs"]["vector"],
        serde_json::json!([1.0, 0.0, 0.0, 0.0])
    );
}

#[test]
fn angles_eigenvector_guard() {
    let o = affinor(&["angles", "--metric", "3,1,2", "--w", "1,1,1,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("eigenvector"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn iterate_csv() {
    let o = affinor(&[
        "iterate", "--metric", "3,1,2", "--alpha", "2", "--beta", "1", "--w", "1,0,0,0", "--n",
        "50", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let t = CsvTable::parse(&text).unwrap();
    assert_eq!(
        t.header,
        [
            "n",
            "cos_q_rec",
            "cos_q2_rec",
            "cos_q_dir",
            "cos_q2_dir",
            "abs_dev"
        ]
    );
    assert_eq!(t.rows.len(), 51);
    for col in ["cos_q_rec", "cos_q_dir"] {
        assert!((num(&t, 50, col) - 0.4).abs() < 1e-6);
    }
    for col in ["cos_q2_rec", "cos_q2_dir"] {
        assert!((num(&t, 50, col) - 1.0).abs() < 1e-9);
    }
    let dev: f64 = t.footer_value("max_abs_dev").unwrap().parse().unwrap();
    assert!(dev < 1e-10);
    assert_eq!(t.footer_value("agreement"), Some("true"));
    assert_eq!(t.emit().unwrap(), text);
}

#[test]
fn every_csv_round_trips() {
    let runs: [&[&str]; 7] = [
        &["det", "--metric", "3,1,2"],
        &["posdef", "--metric", "1,2,3"],
        &["angles", "--metric", "3,1,2", "--w", "1,2,0,-1"],
        &[
            "transform",
            "--metric",
            "3,1,2",
            "--w",
            "1,0,0,0",
            "--alpha",
            "2",
            "--beta",
            "1",
        ],
        &["check-fields", "--family", "nonlinear_conformal"],
        &[
            "sweep",
            "--metric",
            "3,1,2",
            "--w",
            "1,0,0,0",
            "--alpha-grid",
            "1,3,3",
            "--beta-grid",
            "0.5,2,3",
        ],
        &["families"],
    ];
    for args in runs {
        let mut full = args.to_vec();
        full.extend(["--format", "csv"]);
        let o = affinor(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let text = stdout(&o);
        assert_eq!(
            CsvTable::parse(&text).unwrap().emit().unwrap(),
            text,
            "{args:?}"
        );
    }
}

#[test]
fn transform_reports_both_paths() {
    let o = affinor(&[
        "transform",
        "--metric",
        "3,1,2",
        "--w",
        "1,0,0,0",
        "--alpha",
        "2",
        "--beta",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["cos_q1_recurrence", "cos_q1_direct"] {
        assert!((v[key].as_f64().unwrap() - 3.0 / 8.0).abs() < 1e-12);
    }
    for key in ["cos_q2_1_recurrence", "cos_q2_1_direct"] {
        assert!((v[key].as_f64().unwrap() - 7.0 / 8.0).abs() < 1e-12);
    }
    assert!(v["max_abs_dev"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["inputs"]["alpha"], 2.0);
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 9] = [
        (&["angles", "--metric", "3,1,2"], 2),
        (&["angles", "--metric", "3,1", "--w", "1,0,0,0"], 2),
        (
            &[
                "transform",
                "--metric",
                "3,1,2",
                "--w",
                "1,0,0,0",
                "--alpha",
                "1",
                "--beta",
                "2",
            ],
            2,
        ),
        (&["check-fields", "--family", "no_such"], 2),
        (
            &["check-fields", "--family", "linear", "--point", "9,9,9,9"],
            2,
        ),
        (&["angles", "--metric", "1,2,3", "--w", "1,0,0,0"], 3),
        (&["angles", "--metric", "3,1,2", "--w", "0,0,0,0"], 3),
        (
            &[
                "iterate", "--metric", "3,1,2", "--alpha", "2", "--beta", "1", "--w", "1,0,0,0",
                "--n", "2000",
            ],
            4,
        ),
        (&["bogus"], 2),
    ];
    for (args, code) in cases {
        let o = affinor(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn renormalize_survives_long_runs() {
    let o = affinor(&[
        "iterate",
        "--metric",
        "3,1,2",
        "--alpha",
        "2",
        "--beta",
        "1",
        "--w",
        "1,0,0,0",
        "--n",
        "2000",
        "--renormalize",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = CsvTable::parse(&stdout(&o)).unwrap();
    assert_eq!(t.rows.len(), 2001);
    assert!((num(&t, 2000, "cos_q_dir") - 0.4).abs() < 1e-9);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"metric":[3,1,2],"params":{"alpha":2,"beta":1},"vector":[1,0,0,0],"steps":5,"output_format":"json"}"#,
    )
    .unwrap();
    let out = dir.path().join("trace.json");
    let o = affinor(&[
        "iterate",
        "--config",
        cfg.to_str().unwrap(),
        "--n",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["inputs"]["steps"], 7);
    assert_eq!(v["rows"].as_array().unwrap().len(), 8);
    assert_eq!(v["summary"]["agreement"], true);

    fs::write(&cfg, r#"{"metric":[3,1,2],"unknown_field":1}"#).unwrap();
    let o = affinor(&["det", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_marks_invalid_cells_in_order() {
    let o = affinor(&[
        "sweep",
        "--metric",
        "3,1,2",
        "--w",
        "1,0,0,0",
        "--alpha-grid",
        "1,2,2",
        "--beta-grid",
        "0.5,1.5,2",
        "--n",
        "60",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = CsvTable::parse(&stdout(&o)).unwrap();
    let status: Vec<&str> = t.rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(status, ["ok", "invalid_params", "ok", "ok"]);
    assert_eq!(num(&t, 0, "alpha"), 1.0);
    assert_eq!(num(&t, 2, "alpha"), 2.0);
    assert!((num(&t, 2, "limit_cos_q") - 0.4).abs() < 1e-6);
}

#[test]
fn check_fields_verdicts() {
    let parallel = affinor(&["check-fields", "--family", "nonlinear", "--format", "json"]);
    let broken = affinor(&["check-fields", "--family", "broken", "--format", "json"]);
    let p: Value = serde_json::from_str(&stdout(&parallel)).unwrap();
    let b: Value = serde_json::from_str(&stdout(&broken)).unwrap();
    assert_eq!(p["gradient_conditions_hold"], true);
    assert_eq!(p["nabla_q_vanishes"], true);
    assert_eq!(b["gradient_conditions_hold"], false);
    assert_eq!(b["nabla_q_vanishes"], false);
    assert_eq!(b["equivalence_consistent"], true);
}

#[test]
fn table_output_uses_six_digits() {
    let o = affinor(&["angles", "--metric", "3,1,2", "--w", "1,0,0,0"]);
    let text = stdout(&o);
    assert!(
        text.contains("0.333333") && !text.contains("0.3333333"),
        "{text}"
    );
}

#[test]
fn in_process_run_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = affinor_cli::run(
        ["affinor", "det", "--metric", "3,1,2", "--format", "json"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["det_closed_form"], 21.0);
    assert_eq!(v["det_cofactor"], 21.0);
}
