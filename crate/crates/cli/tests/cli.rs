use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pdbarv::format::{parse_cone_list, parse_matrix_file, parse_run_record};
use pdbarv::oracle::signed_indicator_check;
use pdbarv::{Sign, Strategy};
use serde_json::Value;
use tempfile::TempDir;

fn pdbarv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdbarv")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const INDEX_17: &str = "# three generators, one per line\n3\n1 0 0\n0 1 0\n3 5 17\n";

#[test]
fn identity_is_a_single_positive_cone() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "id.mat", "3\n1 0 0\n0 1 0\n0 0 1\n");
    let out = pdbarv(&["decompose", s(&m)]);
    assert!(out.status.success(), "{out:?}");
    let rec = parse_run_record(&stdout(&out)).unwrap();
    assert_eq!(rec.cone_count, 1);
    let (dim, cones) = parse_cone_list(&stdout(&out)).unwrap();
    assert_eq!(dim, 3);
    assert_eq!(cones.len(), 1);
    assert_eq!(cones[0].sign, Sign::Plus);
}

#[test]
fn json_output_round_trips_and_is_exact() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.mat", INDEX_17);
    let out_path = dir.path().join("out.json");
    for strategy in ["pbarv", "dbarv", "pdbarv"] {
        let out = pdbarv(&["decompose", s(&m), "--strategy", strategy, "-o", s(&out_path)]);
        assert!(out.status.success(), "{out:?}");
        let text = fs::read_to_string(&out_path).unwrap();
        let rec = parse_run_record(&text).unwrap();
        assert_eq!(rec.dim, 3);
        assert_eq!(rec.strategy.name(), strategy);
        assert_eq!(rec.input.sha256.as_deref().map(str::len), Some(64));
        let (_, cones) = parse_cone_list(&text).unwrap();
        assert_eq!(cones.len() as u64, rec.cone_count);
        let a = parse_matrix_file(INDEX_17).unwrap();
        assert!(signed_indicator_check(&a, &cones, 6, false).unwrap().passed);
        // the record re-serializes to the same document
        assert_eq!(rec.to_json() + "\n", text);
    }
}

#[test]
fn stats_only_and_text_format() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.mat", INDEX_17);
    let out = pdbarv(&["decompose", s(&m), "--stats-only"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.get("sign_cone_pairs").is_none());
    assert!(v["cone_count"].as_u64().unwrap() > 1);

    let out = pdbarv(&["decompose", s(&m), "--format", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let cone_lines = text.lines().filter(|l| l.starts_with('+') || l.starts_with('-')).count();
    assert_eq!(cone_lines as u64, v["cone_count"].as_u64().unwrap());
}

#[test]
fn verify_passes_for_every_strategy_and_norm() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "r.mat", "3\n4 -7 2\n-3 1 9\n5 5 -6\n");
    for strategy in ["pbarv", "dbarv", "pdbarv"] {
        for norm in ["l1", "linf"] {
            let out = pdbarv(&["verify", s(&m), "--strategy", strategy, "--norm", norm]);
            assert!(out.status.success(), "{strategy} {norm}: {out:?}");
            let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
            assert_eq!(v["report"]["passed"], Value::Bool(true));
            assert_eq!(v["report"]["box_radius"], 6);
            assert_eq!(v["strategy"], strategy);
        }
    }
}

#[test]
fn verify_rejects_a_corrupted_cone_list() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "a.mat", INDEX_17);
    let good = dir.path().join("good.json");
    assert!(pdbarv(&["decompose", s(&m), "-o", s(&good)]).status.success());
    let out = pdbarv(&["verify", s(&m), "--cones", s(&good)]);
    assert!(out.status.success(), "{out:?}");

    // flip a cone whose generators are all lexicographically positive: its
    // region contains the origin, so the error shows up inside any box
    let text = fs::read_to_string(&good).unwrap();
    let (_, cones) = parse_cone_list(&text).unwrap();
    let lex_positive = |v: &[num_bigint::BigInt]| v.iter().find(|x| **x != 0.into()).is_some_and(|x| *x > 0.into());
    let k = cones.iter().position(|c| c.generators.columns().all(lex_positive)).expect("a forward cone");
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let sign = &mut doc["sign_cone_pairs"][k]["sign"];
    *sign = Value::from(-sign.as_i64().unwrap());
    let bad = write(&dir, "bad.json", &doc.to_string());
    let out = pdbarv(&["verify", s(&m), "--cones", s(&bad)]);
    assert_eq!(out.status.code(), Some(5));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["report"]["passed"], Value::Bool(false));
    assert!(v["report"]["first_failure"]["point"].is_array());
}

#[test]
fn gen_random_is_deterministic_and_bounded() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        let out = pdbarv(&[
            "gen-random",
            "--dim",
            "4",
            "--count",
            "3",
            "--seed",
            "11",
            "--entry-bound",
            "7",
            "--out-dir",
            s(dir.path()),
        ]);
        assert!(out.status.success(), "{out:?}");
        assert_eq!(stdout(&out).lines().count(), 3);
    }
    for seed in 11..14 {
        let name = format!("rand-d4-seed{seed}.mat");
        let ta = fs::read_to_string(a.path().join(&name)).unwrap();
        assert_eq!(ta, fs::read_to_string(b.path().join(&name)).unwrap());
        let m = parse_matrix_file(&ta).unwrap();
        assert_eq!(m.rows(), 4);
        assert!(m.max_abs() <= 7.into());
        assert!(!pdbarv::linalg::determinant(&m).eq(&0.into()));
    }
}

#[test]
fn bench_writes_one_row_per_run_and_a_summary() {
    let out = pdbarv(&["bench", "--dims", "2", "--trials", "2", "--seed", "3"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dim,seed,strategy,cones,lll_calls,elapsed_ms");
    let rows = &lines[1..];
    assert_eq!(rows.len(), 7);
    for row in &rows[..6] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], "2");
        assert!(Strategy::ALL.iter().any(|st| st.name() == fields[2]));
        assert!(fields[3].parse::<u64>().unwrap() >= 1);
    }
    assert!(rows[6].starts_with("2,all,mean_ratio,"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let garbage = write(&dir, "bad.mat", "2\n1 zero\n0 1\n");
    assert_eq!(pdbarv(&["decompose", s(&garbage)]).status.code(), Some(2));

    let singular = write(&dir, "sing.mat", "2\n1 2\n2 4\n");
    assert_eq!(pdbarv(&["decompose", s(&singular)]).status.code(), Some(3));

    let m = write(&dir, "a.mat", INDEX_17);
    assert_eq!(pdbarv(&["decompose", s(&m), "--max-cones", "1"]).status.code(), Some(4));
    assert_eq!(pdbarv(&["decompose", s(&m), "--delta", "1/5"]).status.code(), Some(2));

    let missing = dir.path().join("missing.mat");
    assert_eq!(pdbarv(&["decompose", s(&missing)]).status.code(), Some(1));

    let not_json = write(&dir, "cones.json", "{ not json");
    assert_eq!(pdbarv(&["verify", s(&m), "--cones", s(&not_json)]).status.code(), Some(2));
}
