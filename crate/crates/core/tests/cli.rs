use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

use shadowable::cli;
use shadowable::gallery;
use shadowable::io::SystemFile;
use shadowable::rational;
use shadowable::shadow::{self, oracle};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("shadowctl").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn generate(dir: &TempDir, file: &str, args: &[&str]) -> String {
    let path = dir.path().join(file).to_string_lossy().into_owned();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let (code, _, err) = run(&full);
    assert_eq!(code, cli::EXIT_OK, "{err}");
    path
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("JSON output")
}

#[test]
fn generated_systems_validate() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 6] = [
        ("circle.json", &["circle", "--n", "12", "--k", "5"]),
        ("odometer.json", &["odometer", "--levels", "3"]),
        ("cat.json", &["cat-map", "--n", "4"]),
        ("cantor.json", &["cantor-plus-interval", "--level", "2", "--grid", "5"]),
        ("random_e.json", &["random", "--n", "9", "--seed", "3"]),
        ("random_t.json", &["random", "--n", "9", "--seed", "3", "--metric", "tree"]),
    ];
    for (file, args) in cases {
        let path = generate(&dir, file, args);
        let (code, out, _) = run(&["validate", &path]);
        assert_eq!(code, cli::EXIT_OK, "{file}");
        assert_eq!(json(&out)["valid"], true);
    }
}

#[test]
fn generated_random_file_matches_gallery() {
    let dir = tempfile::tempdir().unwrap();
    for (metric, kind) in
        [("euclidean", gallery::RandomMetric::EuclideanSquare), ("tree", gallery::RandomMetric::RandomTree)]
    {
        let path = generate(&dir, "r.json", &["random", "--n", "7", "--seed", "11", "--metric", metric]);
        let loaded = SystemFile::load(Path::new(&path)).unwrap().to_system().unwrap();
        let direct = gallery::random_system(7, 11, kind).unwrap();
        assert_eq!(loaded.space().matrix(), direct.space().matrix());
        assert_eq!(loaded.fwd(), direct.fwd());
    }
}

#[test]
fn validate_reports_errors_with_exit_codes() {
    let (code, out, _) = run(&["validate", fixture("triangle_violation.json").to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["error"], "TriangleViolation");
    assert_eq!(v["indices"], serde_json::json!([0, 1, 2]));

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{").unwrap();
    let (code, out, _) = run(&["validate", junk.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert_eq!(json(&out)["error"], "ParseError");

    let not_perm = dir.path().join("perm.json");
    std::fs::write(&not_perm, r#"{"name":"p","points":["a","b"],"metric":{"kind":"circle","n":2},"map":[1,1]}"#)
        .unwrap();
    let (code, out, _) = run(&["validate", not_perm.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_INPUT);
    assert_eq!(json(&out)["error"], "NotAPermutation");

    let (code, _, err) = run(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_IO);
    assert!(err.contains("IOError"));
}

#[test]
fn shadow_prints_witnesses_that_do_not_lift() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(&dir, "c4.json", &["circle", "--n", "4", "--k", "0"]);
    let (code, out, _) = run(&["shadow", &path, "--eps", "1/4", "--delta", "1/4", "--witness"]);
    assert_eq!(code, cli::EXIT_OK);
    let v = json(&out);
    assert_eq!(v["count"], 0);
    let sys = gallery::circle_rotation(4, 0).unwrap();
    let witnesses = v["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 4);
    for w in witnesses {
        let walk: Vec<usize> =
            w["walk"].as_array().unwrap().iter().map(|l| sys.space().index_of(l.as_str().unwrap()).unwrap()).collect();
        let q = rational::ratio(1, 4);
        assert_eq!(shadow::lift_exists(&sys, &walk, &q, &q).unwrap(), None);
    }

    let (code, out, _) = run(&["shadow", &path, "--eps", "1/2", "--delta", "1/4"]);
    assert_eq!(code, cli::EXIT_OK);
    assert_eq!(json(&out)["count"], 4);
}

#[test]
fn shadow_rejects_bad_scales() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(&dir, "c4.json", &["circle", "--n", "4", "--k", "1"]);
    assert_eq!(run(&["shadow", &path, "--eps", "x", "--delta", "1"]).0, cli::EXIT_INPUT);
    assert_eq!(run(&["shadow", &path, "--eps=-1/2", "--delta", "1"]).0, cli::EXIT_INPUT);
    assert_eq!(run(&["shadow", &path, "--eps", "1/0", "--delta", "1"]).0, cli::EXIT_INPUT);
}

#[test]
fn sweep_matches_golden_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(&dir, "o2.json", &["odometer", "--levels", "2"]);
    let csv = dir.path().join("o2.csv");
    let report = dir.path().join("o2_report.json");
    let (code, _, err) = run(&["sweep", &path, "--out", csv.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_OK, "{err}");
    let produced = std::fs::read_to_string(&csv).unwrap();
    let golden = std::fs::read_to_string(fixture("odometer_l2_sweep.csv")).unwrap();
    assert_eq!(produced, golden);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
}

/// Recomputes each row of the golden report with the window oracle.
#[test]
fn golden_report_agrees_with_oracle() {
    let sys = gallery::odometer(2).unwrap();
    let golden = std::fs::read_to_string(fixture("odometer_l2_sweep.csv")).unwrap();
    for line in golden.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let eps = rational::parse(cols[0]).unwrap();
        let delta = rational::parse(cols[1]).unwrap();
        let count = (0..sys.len())
            .filter(|&x| oracle::oracle_shadowable(&sys, x, &eps, &delta, 64, oracle::DEFAULT_BUDGET).unwrap())
            .count();
        assert_eq!(cols[2], count.to_string(), "row {line}");
        assert_eq!(cols[3], (count == sys.len()).to_string(), "row {line}");
        assert_eq!(cols[4], sys.chain_classes(&delta).classes.len().to_string());
        assert_eq!(cols[5], sys.space().deg_points(&eps).len().to_string());
    }
}

#[test]
fn sweep_records_capped_cells_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(&dir, "c6.json", &["circle", "--n", "6", "--k", "0"]);
    let csv = dir.path().join("c6.csv");
    let (code, out, _) = run(&[
        "sweep",
        &path,
        "--eps-grid",
        "1/6",
        "--delta-grid",
        "0/1,1/6",
        "--out",
        csv.to_str().unwrap(),
        "--state-cap",
        "3",
    ]);
    assert_eq!(code, cli::EXIT_OK);
    assert_eq!(json(&out)["failed"], 1);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "1/6,0/1,6,true,6,0,ok");
    assert_eq!(text.lines().nth(2).unwrap(), "1/6,1/6,,,1,0,StateCapExceeded");
}

#[test]
fn single_cell_sweep_equals_shadow() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate(&dir, "r.json", &["random", "--n", "8", "--seed", "5"]);
    let sys = SystemFile::load(Path::new(&path)).unwrap().to_system().unwrap();
    let cands = sys.space().candidate_distances().to_vec();
    for eps in cands.iter().step_by(5) {
        for delta in cands.iter().step_by(7) {
            let (e, d) = (rational::format(eps), rational::format(delta));
            let csv = dir.path().join("cell.csv");
            let (code, _, _) =
                run(&["sweep", &path, "--eps-grid", &e, "--delta-grid", &d, "--out", csv.to_str().unwrap()]);
            assert_eq!(code, cli::EXIT_OK);
            let row = std::fs::read_to_string(&csv).unwrap().lines().nth(1).unwrap().to_string();
            let (code, out, _) = run(&["shadow", &path, "--eps", &e, "--delta", &d]);
            assert_eq!(code, cli::EXIT_OK);
            let count = json(&out)["count"].as_u64().unwrap();
            assert_eq!(row.split(',').nth(2).unwrap(), count.to_string());
        }
    }
}

#[test]
fn zero_delta_shadows_everything() {
    let dir = tempfile::tempdir().unwrap();
    for (file, args) in
        [("a.json", &["cat-map", "--n", "3"][..]), ("b.json", &["random", "--n", "10", "--seed", "2"][..])]
    {
        let path = generate(&dir, file, args);
        let (code, out, _) = run(&["shadow", &path, "--eps", "0/1", "--delta", "0/1"]);
        assert_eq!(code, cli::EXIT_OK);
        let v = json(&out);
        assert_eq!(v["count"], v["shadowable"].as_array().unwrap().len());
        let n = SystemFile::load(Path::new(&path)).unwrap().points.len();
        assert_eq!(v["count"].as_u64().unwrap() as usize, n);
    }
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(&dir, "a.json", &["random", "--n", "6", "--seed", "1"]);
    let b = generate(&dir, "b.json", &["random", "--n", "6", "--seed", "1"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    // four level-2 Cantor endpoints, the point 1 and four more grid points on [1, 2]
    let c = generate(&dir, "c.json", &["cantor-plus-interval", "--level", "2", "--grid", "5"]);
    assert_eq!(SystemFile::load(Path::new(&c)).unwrap().points.len(), 9);
    assert_eq!(run(&["generate", "circle", "--n", "0", "--k", "0", "--out", &c]).0, cli::EXIT_INPUT);
}

#[test]
fn classify_and_certify() {
    let dir = tempfile::tempdir().unwrap();
    let odo = generate(&dir, "o2.json", &["odometer", "--levels", "2"]);
    let (code, out, _) = run(&["classify", &odo]);
    assert_eq!(code, cli::EXIT_OK);
    let v = json(&out);
    assert_eq!(v["minimal"], true);
    assert_eq!(v["isometry"], true);
    assert_eq!(v["distality_margin"]["value"], "1/2");

    let (code, out, _) = run(&["certify", &odo, "--point", "01", "--eps", "1/2"]);
    assert_eq!(code, cli::EXIT_OK);
    let v = json(&out);
    assert_eq!(v["clopen"], serde_json::json!(["00", "01"]));
    assert_eq!(v["trace_rechecked"], true);
    assert_eq!(v["reverified_by_engine"], true);
    assert!(v["trace"].as_object().unwrap().values().all(|b| b == true));

    let c4 = generate(&dir, "c4.json", &["circle", "--n", "4", "--k", "0"]);
    let (code, out, _) = run(&["certify", &c4, "--point", "0", "--eps", "1/4"]);
    assert_eq!(code, cli::EXIT_NEGATIVE);
    assert_eq!(out.trim(), "none");
    assert_eq!(run(&["certify", &c4, "--point", "zzz", "--eps", "1/4"]).0, cli::EXIT_INPUT);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_shadowctl");
    let ok =
        Command::new(bin).args(["validate", fixture("triangle_violation.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(ok.status.code(), Some(cli::EXIT_INPUT));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(cli::EXIT_OK));
    let bad = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(bad.status.code(), Some(cli::EXIT_INPUT));
}
