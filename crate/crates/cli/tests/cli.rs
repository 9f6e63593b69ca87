//! End-to-end checks of the command surface and its exit-code contract.

use std::path::PathBuf;
use std::process::Command;

fn testdata(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latsheaf"))
}

fn json_of(out: &std::process::Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn eta_diagnose_matches_the_documented_counterexample() {
    let out = bin()
        .args(["eta-diagnose", &testdata("lattice_c3.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["injective"], true);
    assert_eq!(v["surjective"], false);
    assert_eq!(v["sections"], 6);
}

#[test]
fn duality_check_over_a_corpus_passes() {
    let out = bin()
        .args(["duality-check", "--corpus", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["all-pass"], true);
    assert_eq!(v["checked"], 16);
}

#[test]
fn validate_rejects_broken_operator_tables_with_exit_2() {
    let dir = tempdir();
    let path = dir.join("bad_blo.json");
    // f(0) = m violates normality on the three-chain
    std::fs::write(
        &path,
        r#"{ "kind": "blo", "size": 3,
             "leq": [[1,1,1],[0,1,1],[0,0,1]],
             "operators": [[1, 1, 2]] }"#,
    )
    .unwrap();
    let out = bin()
        .args(["validate", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FixesBottom"), "stderr: {err}");
}

#[test]
fn validate_accepts_shipped_files() {
    for file in [
        "lattice_b4.json",
        "blo_b4f.json",
        "blo_c3_simple.json",
        "mv_l3.json",
        "site_l3.json",
        "site_chain2.json",
        "name_rank2.json",
        "suite_basic.json",
    ] {
        let out = bin().args(["validate", &testdata(file)]).output().unwrap();
        assert!(out.status.success(), "{file}: {out:?}");
        assert_eq!(json_of(&out)["valid"], true, "{file}");
    }
}

#[test]
fn gratzer_schmidt_biconditional_reported() {
    let out = bin()
        .args(["gratzer-schmidt", &testdata("lattice_n5.json")])
        .output()
        .unwrap();
    // the biconditional holds (N5: no bijection, not distributive), so exit 0
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["bijection"], false);
    assert_eq!(v["distributive"], false);
    assert_eq!(v["biconditional"], true);
}

#[test]
fn epi_search_finds_the_chain_witness() {
    let out = bin()
        .args([
            "epi-search",
            "--source",
            &testdata("lattice_b4.json"),
            "--target",
            &testdata("lattice_b4.json"),
            "--map",
            "0,1,2,3",
            "--bound",
            "3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["verdict"], "no-witness");
}

#[test]
fn kj_force_and_persistence_run_on_the_lukasiewicz_site() {
    let out = bin()
        .args([
            "kj-force",
            "--site",
            &testdata("site_l3.json"),
            "--suite",
            &testdata("suite_kj.json"),
            "--rank",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["points"], 3);

    let out = bin()
        .args([
            "persistence",
            "--site",
            &testdata("site_chain2.json"),
            "--suite",
            &testdata("suite_kj.json"),
            "--rank",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(json_of(&out)["holds"], true);
}

#[test]
fn mv_commands() {
    let out = bin()
        .args(["mv-validate", &testdata("mv_l3.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(json_of(&out)["passed"], true);

    let out = bin()
        .args([
            "mv-eval",
            "--algebra",
            &testdata("mv_l3.json"),
            "--suite",
            &testdata("suite_basic.json"),
            "--rank",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");

    // over the three-valued chain the generic-collapse clauses genuinely
    // fail (a recorded finding), so the exit code flags the counterexample
    let out = bin()
        .args([
            "generic-check",
            "--algebra",
            &testdata("mv_l3.json"),
            "--rank",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["all-hold"], false);

    // over a Boolean algebra they hold for every ultrafilter
    let out = bin()
        .args([
            "generic-check",
            "--algebra",
            &testdata("mv_b4.json"),
            "--rank",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    assert_eq!(json_of(&out)["all-hold"], true);
}

#[test]
fn dot_emits_graphviz() {
    let out = bin()
        .args(["dot", &testdata("lattice_b4.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("digraph"));
    assert!(text.contains("->"));
}

#[test]
fn missing_file_is_exit_2() {
    let out = bin()
        .args(["spectrum", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("latsheaf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
