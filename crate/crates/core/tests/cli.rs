use std::process::Command;

fn bohrlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bohrlab"))
        .args(args)
        .env_remove("BOHRLAB_TOL")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn radius_outputs() {
    let (code, out, _) = bohrlab(&["radius", "--theorem", "ThmD", "--K", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.333333333333333"), "{out}");

    let (code, out, _) = bohrlab(&["radius", "--theorem", "T51", "--K", "1", "--alpha", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    // ((1+r)/(1−r))² = 2
    let want = (2f64.sqrt() - 1.0) / (2f64.sqrt() + 1.0);
    assert!((row[5].parse::<f64>().unwrap() - want).abs() < 1e-8);
    assert_eq!(row[8], "closed_form");
}

#[test]
fn json_certificate_schema() {
    let (code, out, _) = bohrlab(&["radius", "--theorem", "T31", "--K", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["theorem"], "T31");
    assert_eq!(v["params"]["K"], 2.0);
    assert!(v["poly"].as_array().unwrap().iter().all(|c| c.is_string()));
    assert_eq!(v["interval"].as_array().unwrap().len(), 2);
    assert_eq!(v["certificate"], "sturm_count_one");
    assert!(v["residual"].is_number());
}

#[test]
fn exit_codes() {
    assert_eq!(bohrlab(&["radius", "--theorem", "Nope"]).0, 1);
    assert_eq!(bohrlab(&["frobnicate"]).0, 1);
    assert_eq!(bohrlab(&["radius", "--theorem", "ThmH", "--alpha", "3"]).0, 1);
    let (code, _, err) = bohrlab(&["radius", "--theorem", "ThmH", "--verbatim"]);
    assert_eq!(code, 1);
    assert!(err.contains("quotient"), "{err}");
    assert_eq!(bohrlab(&["sharpness", "--theorem", "ThmA"]).0, 1);
    assert_eq!(bohrlab(&["certify"]).0, 0);
    assert_eq!(bohrlab(&["falsify", "--theorem", "ThmD", "--trials", "20"]).0, 0);
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bohrlab"))
        .args(["radius", "--theorem", "ThmF", "--format", "json"])
        .env("BOHRLAB_TOL", "1e-4")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tol"], 1e-4);
}

#[test]
fn sweeps() {
    let (code, out, _) = bohrlab(&["sweep", "--theorem", "T51", "--alpha-grid", "1,2", "--K-grid", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let radii: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert!((radii[0] - 1.0 / 3.0).abs() < 1e-8);
    assert!((radii[1] - (3.0 - 8f64.sqrt())).abs() < 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.svg");
    let (code, out, _) = bohrlab(&["sweep", "--theorem", "T42", "--format", "svg", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let svg = std::fs::read_to_string(path).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
}

#[test]
fn sharpness_transitions() {
    let (code, out, _) = bohrlab(&["sharpness", "--theorem", "T42", "--K", "1", "--mu", "1", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["r0"].as_f64().unwrap() - (7f64.sqrt() - 2.0) / 3.0).abs() < 1e-10);
    assert_eq!(v["transition"], true);

    let (code, out, _) = bohrlab(&["sharpness", "--theorem", "T31", "--K", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("no sharpness claim"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["falsify", "--theorem", "T51", "--alpha", "1.5", "--trials", "64", "--format", "json"];
    assert_eq!(bohrlab(&args).1, bohrlab(&args).1);
}
