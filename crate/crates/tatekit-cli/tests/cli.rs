//! End-to-end runs of the installed binary: the desk-scale examples with
//! known answers, output determinism, and the exit-code contract.

use std::process::{Command, Output};

fn tatekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

#[test]
fn tate_c2_window_is_one_dimensional_everywhere() {
    let out = tatekit(&[
        "tate", "--group", "C2", "--prime", "2", "--module", "trivial", "--degrees", "-6..6",
        "--format", "tsv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 13);
    for row in rows {
        let cols: Vec<&str> = row.split('\t').collect();
        assert_eq!(&cols[1..4], &["1", "1", "1"], "row {}", row);
        assert_eq!(cols[4], "AGREE");
    }
}

#[test]
fn tate_vanishes_on_projectives_and_in_coprime_characteristic() {
    for args in [
        ["tate", "--group", "C2", "--prime", "2", "--module", "regular"],
        ["tate", "--group", "C6", "--prime", "5", "--module", "trivial"],
    ] {
        let out = tatekit(&[&args[..], &["--degrees", "-3..3", "--format", "tsv"]].concat());
        assert!(out.status.success());
        for row in stdout_of(&out).lines().skip(1) {
            let cols: Vec<&str> = row.split('\t').collect();
            assert_eq!(&cols[1..4], &["0", "0", "0"], "row {}", row);
        }
    }
}

#[test]
fn job_count_does_not_change_the_output() {
    let base = ["tate", "--group", "V4", "--prime", "2", "--degrees", "-4..4", "--format", "json"];
    let one = tatekit(&[&base[..], &["--jobs", "1"]].concat());
    let four = tatekit(&[&base[..], &["--jobs", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["ring", "--group", "C3", "--prime", "3", "--degrees", "-2..2", "--format", "json"];
    let a = tatekit(&args);
    let b = tatekit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn ring_json_has_the_documented_fields() {
    let out = tatekit(&["ring", "--group", "C2", "--prime", "2", "--degrees", "-3..3", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid json");
    assert_eq!(doc["group"], "C2");
    assert_eq!(doc["prime"], 2);
    assert_eq!(doc["degrees"], serde_json::json!([-3, 3]));
    assert_eq!(doc["unit"], serde_json::json!(["u0_0"]));
    for (n, d) in doc["dims"].as_object().unwrap() {
        assert_eq!(d.as_u64(), Some(1), "degree {}", n);
    }
    let products = doc["products"].as_array().unwrap();
    assert!(!products.is_empty());
    for p in products {
        let result = p["result"].as_object().unwrap();
        assert_eq!(result.len(), 1, "{:?}", p);
        assert!(result.values().all(|c| c.as_u64() == Some(1)));
    }
}

#[test]
fn pd_verdicts_match_the_classical_cases() {
    let cases = [
        (["--group", "C2", "--prime", "2", "--module", "trivial"], "infinite"),
        (["--group", "C2", "--prime", "2", "--module", "regular"], "finite"),
        (["--group", "C2", "--prime", "3", "--module", "trivial"], "finite"),
    ];
    for (args, verdict) in cases {
        let out = tatekit(&[&["pd"][..], &args, &["--format", "tsv"]].concat());
        assert!(out.status.success());
        let text = stdout_of(&out);
        let row = text.lines().nth(1).expect("data row");
        assert!(row.ends_with(verdict), "expected {} in {:?}", verdict, row);
    }
}

#[test]
fn pd_accepts_a_module_file() {
    let path = std::env::temp_dir().join("tatekit_cli_test_module.json");
    std::fs::write(
        &path,
        r#"{"prime": 2, "group": "C2", "dim": 2, "action": {"1": [[1,1],[0,1]]}}"#,
    )
    .unwrap();
    let out = tatekit(&["pd", "--module", path.to_str().unwrap(), "--format", "tsv"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("finite"));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn shapiro_reports_equal_dimensions() {
    let out = tatekit(&[
        "shapiro", "--group", "C4", "--subgroup", "C2", "--prime", "2", "--degrees", "-3..3",
        "--format", "tsv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.ends_with("EQUAL")));
}

#[test]
fn verify_les_passes_with_the_seeded_sample() {
    let out = tatekit(&["verify", "--suite", "les", "--seed", "7"]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("PASS, 100 sequences"));
}

#[test]
fn resolve_emits_the_known_minimal_ranks() {
    let out = tatekit(&[
        "resolve", "--group", "C2", "--prime", "2", "--module", "trivial", "--length", "5",
        "--minimal", "--format", "tsv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let ranks: Vec<&str> = text.lines().skip(1).map(|r| r.split('\t').nth(1).unwrap()).collect();
    assert_eq!(ranks, ["1"; 6]);

    let out = tatekit(&[
        "resolve", "--group", "V4", "--prime", "2", "--module", "trivial", "--length", "4",
        "--minimal", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["ranks"], serde_json::json!([1, 2, 3, 4, 5]));
    assert_eq!(doc["minimal"], serde_json::json!(true));
}

#[test]
fn exit_codes_follow_the_contract() {
    // input errors
    let unknown_group = tatekit(&["tate", "--group", "NOPE", "--prime", "2"]);
    assert_eq!(unknown_group.status.code(), Some(1));
    let bad_window = tatekit(&["tate", "--group", "C2", "--prime", "2", "--degrees", "3..1"]);
    assert_eq!(bad_window.status.code(), Some(1));
    let not_prime = tatekit(&["tate", "--group", "C2", "--prime", "4"]);
    assert_eq!(not_prime.status.code(), Some(1));
    // resource cap is an input-level failure and names the knob
    let capped = Command::new(env!("CARGO_BIN_EXE_tatekit"))
        .args(["tate", "--group", "V4", "--prime", "2", "--degrees", "0..2"])
        .env("TATEKIT_MAX_DIM", "8")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("TATEKIT_MAX_DIM"));
    // help exits 0
    let help = tatekit(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}
