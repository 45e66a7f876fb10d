use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nashforge::report::{check_schema, BASE_FIELD_CAVEAT};
use nashforge::{
    parse_variety_file, parse_variety_str, run_task, verdict_from_evidence, Report, TaskKind, TaskOptions,
};
use serde_json::Value;

fn battery(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("battery").join(name)
}

fn nashforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nashforge"))
        .args(args)
        .env_remove("NASHFORGE_BUDGET")
        .output()
        .expect("binary runs")
}

fn run(task: &str, file: &str, extra: &[&str]) -> Output {
    let path = battery(file);
    let mut args = vec![task, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    nashforge(&args)
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nashforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn report_of(out: &Output) -> Report {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn char_two_cusp_is_certified() {
    let r = report_of(&run("nash-check", "cusp_f2.nf", &[]));
    assert_eq!(r.verdict, "ISO_CERTIFIED");
    assert_eq!(r.evidence["free_rank"], 2);
    assert!(r.evidence["minor_ideal"]["principal_witness"].is_string());
}

#[test]
fn rational_cusp_is_obstructed() {
    let r = report_of(&run("nash-check", "cusp_q.nf", &[]));
    assert_eq!(r.verdict, "NOT_ISO");
    assert_eq!(r.evidence["free_rank"], 1);
}

#[test]
fn char_two_cone_is_f_pure() {
    let r = report_of(&run("fpure", "cone_f2.nf", &[]));
    assert_eq!(r.verdict, "F_PURE");
    assert!(r.order.is_none());
}

#[test]
fn translated_point_matches_the_origin_case() {
    let moved = report_of(&run("nash-check", "cusp_q_point.nf", &[]));
    let plain = report_of(&run("nash-check", "cusp_q.nf", &[]));
    assert_eq!(moved.verdict, plain.verdict);
    assert_eq!(moved.evidence["free_rank"], plain.evidence["free_rank"]);
    assert!(moved.caveats.iter().any(|c| c.contains("translated")));
    let input = parse_variety_file(&battery("cusp_q_point.nf")).unwrap();
    assert_eq!(input.ideal.canonical_generators().unwrap(), vec!["x^3 - y^2"]);
}

#[test]
fn order_flag_overrides_the_file() {
    let r = report_of(&run("nash-check", "cusp_f2.nf", &["--order", "2"]));
    assert_eq!(r.order, Some(2));
    assert_eq!(r.evidence["free_rank"], 3);
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.nf", "[variety]\nvariables = x, y\nideal = x^3 -* y\n");
    let out = nashforge(&["smooth", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let mismatch = scratch(
        "mismatch.nf",
        "[variety]\ncharacteristic = 2\nvariables = x, y\nideal = x^3 - 1/2 y^2\n",
    );
    let out = nashforge(&["smooth", "--input", mismatch.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("field mismatch"));

    let off = scratch("off.nf", "[variety]\nvariables = x, y\nideal = x^3 - y^2 - 1\n");
    assert_eq!(
        nashforge(&["smooth", "--input", off.to_str().unwrap()]).status.code(),
        Some(4)
    );

    let out = run("quotient", "reflection_q.nf", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAILS"));
    assert_eq!(run("fpure", "cusp_q.nf", &[]).status.code(), Some(2));

    let out = run("nash-check", "cusp_f2.nf", &["--budget", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hint:"));
    let path = battery("cusp_f2.nf");
    let out = Command::new(env!("CARGO_BIN_EXE_nashforge"))
        .args(["nash-check", "--input", path.to_str().unwrap()])
        .env("NASHFORGE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (task, file) in [
        ("nash-check", "cusp_f2.nf"),
        ("quotient", "minus_id_f5.nf"),
        ("pparts", "cone_q.nf"),
    ] {
        let a = run(task, file, &["--verify"]);
        let b = run(task, file, &["--verify"]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{task} {file}");
    }
}

#[test]
fn text_format_carries_the_verdict() {
    let out = run("kunz", "line_f3.nf", &["--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict:        REGULAR"));
    assert!(text.contains(BASE_FIELD_CAVEAT));
}

#[test]
fn batch_keeps_order_and_reports_the_worst_exit() {
    let files = ["cusp_q.nf", "reflection_q.nf", "plane_f5.nf"].map(battery);
    let mut args = vec!["batch"];
    for f in &files {
        args.push("--input");
        args.push(f.to_str().unwrap());
    }
    let out = nashforge(&args);
    assert_eq!(out.status.code(), Some(2));
    let docs: Vec<Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(docs.len(), 3);
    assert_eq!(docs[0]["report"]["verdict"], "NOT_ISO");
    assert_eq!(docs[1]["exit"], 2);
    assert_eq!(docs[2]["report"]["verdict"], "SMOOTH");
}

#[test]
fn shipped_schema_matches_the_checker() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.v1.json")).unwrap(),
    )
    .unwrap();
    let mut required: Vec<&str> = schema["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    required.sort_unstable();
    let sample = report_of(&run("smooth", "plane_f5.nf", &[]));
    let doc = serde_json::to_value(&sample).unwrap();
    let mut keys: Vec<&str> = doc.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, required);
    let tasks: Vec<&str> = schema["properties"]["task"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(tasks, TaskKind::ALL.map(TaskKind::as_str).to_vec());
}

#[test]
fn every_task_round_trips_through_the_checker() {
    let cases = [
        (TaskKind::NashCheck, "cusp_f2.nf"),
        (TaskKind::NashCheck, "cusp_q.nf"),
        (TaskKind::DiffPower, "line_q.nf"),
        (TaskKind::PParts, "cone_f5.nf"),
        (TaskKind::PParts, "cusp_q.nf"),
        (TaskKind::CoreChain, "cusp_q_chain.nf"),
        (TaskKind::FPure, "cone_f2.nf"),
        (TaskKind::FPure, "cusp_f2.nf"),
        (TaskKind::Kunz, "cusp_f2.nf"),
        (TaskKind::Smooth, "cusp_q.nf"),
        (TaskKind::Quotient, "minus_id_q.nf"),
        (TaskKind::Oracle, "plane_q.nf"),
    ];
    let schema_verdicts: Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.v1.json")).unwrap(),
    )
    .unwrap();
    let verdicts = schema_verdicts["properties"]["verdict"]["enum"]
        .as_array()
        .unwrap()
        .clone();
    for (kind, file) in cases {
        let input = parse_variety_file(&battery(file)).unwrap();
        let opts = TaskOptions {
            verify: true,
            ..TaskOptions::default()
        };
        let report = run_task(&input, kind, &opts).unwrap();
        let doc = serde_json::to_value(&report).unwrap();
        check_schema(&doc).unwrap();
        assert!(
            verdicts.contains(&Value::from(report.verdict.clone())),
            "{}",
            report.verdict
        );
        assert!(report.caveats.iter().any(|c| c == BASE_FIELD_CAVEAT));
        assert!(!report.verification_failed(), "{kind} {file}");
        let back: Report = serde_json::from_value(doc).unwrap();
        assert_eq!(verdict_from_evidence(&back).unwrap(), report.verdict, "{kind} {file}");
    }
}

#[test]
fn verification_failure_is_visible_in_the_report() {
    let input = parse_variety_str("[variety]\nvariables = x, y\nideal = y\n").unwrap();
    let opts = TaskOptions {
        verify: true,
        ..TaskOptions::default()
    };
    let mut r = run_task(&input, TaskKind::DiffPower, &opts).unwrap();
    assert!(!r.verification_failed());
    r.evidence["verify"]["agrees"] = Value::Bool(false);
    assert!(r.verification_failed());
}

#[test]
fn group_sections_are_only_for_quotients() {
    let input = parse_variety_file(&battery("minus_id_q.nf")).unwrap();
    assert!(run_task(&input, TaskKind::Smooth, &TaskOptions::default()).is_err());
}
