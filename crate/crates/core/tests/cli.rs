use std::fs;
use std::path::Path;
use std::process::Command;

use l2euler::cli::{run, Outcome, Output, RunRecord};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus");

fn corpus(name: &str) -> String {
    format!("{CORPUS}/{name}.toml")
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("l2euler").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn records(args: &[&str]) -> (i32, Vec<RunRecord>) {
    let mut full = args.to_vec();
    full.extend(["--format", "records"]);
    let (code, out, _) = invoke(&full);
    (code, out.lines().map(|l| RunRecord::from_line(l).unwrap()).collect())
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn trefoil_record() {
    let (code, recs) = records(&["chi2", &corpus("trefoil")]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 1);
    let Outcome::Ok(Output::Chi2 { result, expected_norm, .. }) = &recs[0].outcome else {
        panic!("unexpected outcome {:?}", recs[0].outcome);
    };
    assert_eq!(result.chi2, -1);
    assert_eq!(result.thurston_lower_bound, 1);
    assert_eq!(*expected_norm, Some(1));
    assert_eq!(recs[0].schema, l2euler::cli::SCHEMA_VERSION);
    assert_eq!(recs[0].version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn malformed_relator_is_a_parse_error_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "generators = [\"x\", \"y\"]\nrelators = [\"x y^ x\"]\n");
    let (code, recs) = records(&["chi2", dir.path().join("bad.toml").to_str().unwrap()]);
    assert_eq!(code, 2);
    let Outcome::Error(e) = &recs[0].outcome else { panic!("expected an error record") };
    assert_eq!(e.kind, "parse");
    assert_eq!(e.exit_code, 2);
}

#[test]
fn directory_records_follow_file_names() {
    let dir = tempfile::tempdir().unwrap();
    let trefoil = fs::read_to_string(corpus("trefoil")).unwrap();
    let hopf = fs::read_to_string(corpus("hopf_link")).unwrap();
    write(dir.path(), "c_trefoil.toml", &trefoil);
    write(dir.path(), "a_hopf.toml", &hopf);
    write(dir.path(), "b_trefoil.toml", &trefoil);
    write(dir.path(), "notes.txt", "ignored");
    let (code, recs) = records(&["chi2", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let names: Vec<String> = recs
        .iter()
        .map(|r| Path::new(&r.input).file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names, ["a_hopf.toml", "b_trefoil.toml", "c_trefoil.toml"]);
}

#[test]
fn records_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "generators = 1\n");
    let bad = dir.path().join("bad.toml");
    let runs: Vec<Vec<String>> = vec![
        vec!["chi2".into(), "--builtin".into(), "--all-columns".into(), "--scaling-sweep".into(), "3".into()],
        vec!["delta".into(), corpus("figure_eight")],
        vec!["polytope".into(), corpus("hopf_link"), corpus("klein_bundle")],
        vec!["seifert".into(), "--boundary".into(), "1".into(), "--cone".into(), "2,3".into(), "--fiber-index".into(), "6".into()],
        vec!["jsj-sum".into(), corpus("trefoil"), corpus("torus_knot_2_5")],
        vec!["compare".into(), corpus("trefoil"), corpus("solid_torus")],
        vec!["chi2".into(), bad.to_str().unwrap().into()],
        vec!["selftest".into(), "--only".into(), "1,11,14".into()],
    ];
    let mut seen = 0;
    for args in runs {
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        full.extend(["--format", "records"]);
        let (_, out, _) = invoke(&full);
        for line in out.lines() {
            let rec = RunRecord::from_line(line).unwrap();
            assert_eq!(rec.to_line(), line);
            seen += 1;
        }
    }
    assert!(seen > 20);
}

#[test]
fn seifert_and_jsj() {
    let (code, recs) = records(&["seifert", "--boundary", "1", "--cone", "2,3", "--fiber-index", "6"]);
    assert_eq!(code, 0);
    assert!(matches!(&recs[0].outcome, Outcome::Ok(Output::Seifert { chi2, .. }) if chi2 == "-1"));
    let (_, recs) = records(&["jsj-sum", &corpus("trefoil"), &corpus("torus_knot_2_5")]);
    assert!(matches!(&recs[0].outcome, Outcome::Ok(Output::JsjSum { result, .. }) if result.chi2 == -4));
}

#[test]
fn compare_reports_direction_and_rejects_mixed_kinds() {
    let (code, recs) = records(&["compare", &corpus("trefoil"), &corpus("trefoil")]);
    assert_eq!(code, 0);
    assert!(matches!(
        &recs[0].outcome,
        Outcome::Ok(Output::Compare { bound_m: 1, bound_n: 1, holds: true, .. })
    ));
    let (_, recs) = records(&["compare", &corpus("trefoil"), &corpus("solid_torus")]);
    let Outcome::Ok(Output::Compare { bound_m, bound_n, holds, note }) = &recs[0].outcome else { panic!() };
    assert_eq!((*bound_m, *bound_n, *holds), (1, -1, true));
    assert!(note.as_deref().unwrap().contains("solid torus"));
    let (code, recs) = records(&["compare", &corpus("trefoil"), &corpus("klein_bundle")]);
    assert_eq!(code, 2);
    assert!(matches!(&recs[0].outcome, Outcome::Error(e) if e.kind == "input"));
}

#[test]
fn polytope_bridge_and_unsupported_shape() {
    let (code, recs) = records(&["polytope", &corpus("trefoil"), &corpus("klein_bundle")]);
    assert_eq!(code, 4);
    let Outcome::Ok(Output::Polytope { agrees, d_eval, vertices, .. }) = &recs[0].outcome else { panic!() };
    assert!(agrees);
    assert_eq!(d_eval, "1");
    assert_eq!(vertices, &vec![vec![0], vec![2]]);
    assert!(matches!(&recs[1].outcome, Outcome::Error(e) if e.kind == "unsupported"));
}

#[test]
fn size_guard_exit_code() {
    let (code, recs) = records(&["chi2", &corpus("torus_knot_6_7"), "--limit-bytes", "8"]);
    assert_eq!(code, 3);
    assert!(matches!(&recs[0].outcome, Outcome::Error(e) if e.kind == "size-guard"));
}

#[test]
fn first_error_decides_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.toml", "generators = [\"x\"]\nrelators = [\"x^\"]\n");
    let (code, recs) = records(&["chi2", dir.path().join("a.toml").to_str().unwrap(), &corpus("trefoil")]);
    assert_eq!(code, 2);
    assert_eq!(recs.len(), 2);
    assert!(matches!(recs[1].outcome, Outcome::Ok(_)));
}

#[test]
fn corrupted_golden_surfaces_both_values() {
    let dir = tempfile::tempdir().unwrap();
    let mut goldens = serde_json::to_value(l2euler::acceptance::Goldens::default()).unwrap();
    goldens["trefoil_chi2"] = serde_json::json!(-2);
    let path = dir.path().join("goldens.json");
    fs::write(&path, goldens.to_string()).unwrap();
    let (code, out, _) = invoke(&["selftest", "--only", "1,14", "--goldens", path.to_str().unwrap()]);
    assert_eq!(code, l2euler::cli::SELFTEST_FAILURE);
    assert!(out.contains("[FAIL]  1 trefoil exterior"), "{out}");
    assert!(out.contains("expected -2, got -1"), "{out}");
    assert!(out.contains("[PASS] 14"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_l2euler");
    let ok = Command::new(bin).args(["chi2", &corpus("trefoil")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("chi2 =   -1"));
    let missing = Command::new(bin).args(["chi2", "/nonexistent/presentation.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let usage = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn non_acyclic_input_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "repeated.toml",
        "generators = [\"x\", \"y\", \"z\"]\nrelators = [\"x y x^-1 y^-1\", \"x y x^-1 y^-1\"]\n",
    );
    let (code, recs) = records(&["chi2", dir.path().join("repeated.toml").to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(matches!(&recs[0].outcome, Outcome::Error(e) if e.kind == "not-acyclic"));
}
