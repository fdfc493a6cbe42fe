use std::process::{Command, Output};

fn picact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_picact"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lines_as_json() {
    let out = picact(&["lines", "--degree", "4", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["classes"].as_array().unwrap().len(), 16);
}

#[test]
fn roots_csv_rows() {
    let out = picact(&["roots", "--degree", "3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 72);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(picact(&["roots", "--degree", "9"]).status.code(), Some(1));
    assert_eq!(picact(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(picact(&["action", "--census", "no-such-group"]).status.code(), Some(1));
    assert_eq!(picact(&["census"]).status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(picact(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_single_claim() {
    let out = picact(&["verify", "--claim", "dp4.orbits", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["results"][0];
    assert_eq!(r["claim_id"], "dp4.orbits");
    assert_eq!(r["status"], "pass");
    assert!(r["expected"].as_str().unwrap().contains("{4, 12}"));
    assert!(!r["paper_anchor"].as_str().unwrap().is_empty());
}

#[test]
fn verify_failure_exits_two() {
    let out = picact(&["verify", "--claim", "cb.iskovskikh", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["results"][0]["status"], "fail");
}

#[test]
fn unknown_claim_gives_empty_report() {
    let out = picact(&["verify", "--claim", "no.such.claim", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["results"].as_array().unwrap().is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn heavy_claims_reported_not_run() {
    let out = picact(&["verify", "--claim", "weyl.e7", "--format", "json"]);
    let v = json(&out);
    let statuses: Vec<&str> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["status"].as_str().unwrap())
        .collect();
    assert_eq!(statuses, vec!["pass", "not-run"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["action", "--census", "quartic-minimal", "--format", "json"];
    let a = picact(&args);
    let b = picact(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["orbit_sizes"], serde_json::json!([4, 12]));
    assert_eq!(v["invariant_rank"], 1);
}

#[test]
fn weyl_counts_and_cap() {
    let v = json(&picact(&["weyl", "--degree", "4", "--format", "json"]));
    assert_eq!(v["order"], 1920);
    let e = picact(&["weyl", "--degree", "4", "--enumerate", "--format", "json"]);
    assert_eq!(json(&e)["elements"].as_array().unwrap().len(), 1920);
    let capped = picact(&["weyl", "--degree", "3", "--enumerate", "--enumeration-cap", "100"]);
    assert_eq!(capped.status.code(), Some(1));
}

#[test]
fn h1_of_geiser() {
    let v = json(&picact(&["h1", "--census", "geiser", "--all-subgroups", "--format", "json"]));
    assert_eq!(v["h1"], "(Z/2)^6");
    assert_eq!(v["all_subgroups"]["trivial"], false);
}

#[test]
fn census_export_import() {
    let list = picact(&["census", "--list"]);
    assert!(String::from_utf8(list.stdout).unwrap().contains("quartic-minimal"));
    let out = picact(&["census", "--export", "binary-dihedral-3"]);
    assert!(out.status.success());
    let path = std::env::temp_dir().join(format!("picact-census-{}.json", std::process::id()));
    std::fs::write(&path, &out.stdout).unwrap();
    let back = picact(&["census", "--import", path.to_str().unwrap(), "--format", "json"]);
    std::fs::remove_file(&path).ok();
    assert!(back.status.success());
    assert_eq!(json(&back)["order"], 12);
}

#[test]
fn thread_env_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_picact"))
        .args(["verify", "--claim", "roots.counts"])
        .env("PICACT_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
