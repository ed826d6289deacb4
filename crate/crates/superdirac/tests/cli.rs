use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_superdirac")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn root_data_sl21() {
    let (code, out) = run(&["root-data", "--m", "2", "--n", "1", "--p", "1", "--q", "1"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["even_positive"].as_array().unwrap().len(), 1);
    assert_eq!(v["odd_positive"].as_array().unwrap().len(), 2);
    let keys: Vec<&String> = v.as_object().unwrap().keys().take(3).collect();
    assert_eq!(keys, ["schema", "command", "datum"]);
}

#[test]
fn config_errors_exit_3() {
    assert_eq!(run(&["root-data", "--m", "1", "--n", "1", "--p", "1", "--q", "0"]).0, 3);
    assert_eq!(run(&["root-data", "--m", "2", "--n", "2", "--p", "1", "--q", "1", "--weight", "1,0|0,0"]).0, 3);
    assert_eq!(run(&["verify", "--weight", "0,0|0"]).0, 3);
    assert_eq!(run(&["index", "--weight", "1,2"]).0, 3);
    assert_eq!(run(&["bogus"]).0, 3);
}

#[test]
fn refutation_is_a_valid_verdict() {
    let args = ["verify", "--suite", "unitarity", "--weight", "0,0|-1", "--height", "2"];
    let (code, out) = run(&args);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["certificate"]["verdict"], "refuted-at");
    assert_eq!(v["certificate"]["at_weight"], "0,1|-2");
    assert_eq!(v["certificate"]["weight"], "0,0|-1");
    let mut strict = args.to_vec();
    strict.push("--expect-unitarizable");
    assert_eq!(run(&strict).0, 1);
    let (code, _) = run(&["certify-unitarity", "--weight", "-2,0|1", "--expect-unitarizable"]);
    assert_eq!(code, 0);
}

#[test]
fn trivial_cohomology_suite_passes() {
    let (code, out) = run(&["verify", "--suite", "cohomology", "--height", "3"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["verdicts"][0]["theorem"], "DiracCohomologyTrivial");
}

#[test]
fn square_suite_on_defining_weight() {
    let (code, out) = run(&["verify", "--suite", "square", "--weight", "1,0|0", "--height", "3"]);
    assert_eq!(code, 0);
    assert!(!json(&out)["components"].as_array().unwrap().is_empty());
}

#[test]
fn kostant_suite_reports_the_failed_injection() {
    let (code, out) = run(&["verify", "--suite", "kostant", "--weight", "-2,0|1", "--height", "2"]);
    assert_eq!(code, 2);
    let v = json(&out);
    assert_eq!(v["verdicts"][0]["status"], "pass");
    assert_eq!(v["verdicts"][1]["theorem"], "Injection");
    assert_eq!(v["verdicts"][1]["status"], "fail");
}

#[test]
fn passing_suites() {
    for (suite, w) in [("branching", "-2,0|1"), ("filtration", "1,0|0"), ("index", "-2,0|0"), ("square", "-2,0|1")] {
        let (code, out) = run(&["verify", "--suite", suite, "--weight", w, "--height", "3"]);
        assert_eq!(code, 0, "{suite}: {out}");
        assert_eq!(json(&out)["status"], "pass");
    }
}

#[test]
fn other_commands() {
    for cmd in ["decompose", "dirac-cohomology", "character", "index"] {
        let (code, out) = run(&[cmd, "--weight", "-2,0|1", "--height", "2"]);
        assert_eq!(code, 0, "{cmd}");
        assert_eq!(json(&out)["command"], cmd);
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let args = ["verify", "--suite", "index", "--weight", "-2,0|1", "--height", "2", "--cache-dir", c];
    let (code1, first) = run(&args);
    let (code2, second) = run(&args);
    assert_eq!((code1, code2), (0, 0));
    assert_eq!(first, second);
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let path = entries[0].as_ref().unwrap().path();
    std::fs::write(&path, "{ not json").unwrap();
    let (code3, third) = run(&args);
    assert_eq!(code3, 0);
    assert_eq!(third, first);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stored["output"].as_str().unwrap(), first);
    assert_eq!(stored["engine"].as_str().unwrap(), superdirac::cli::ENGINE_VERSION);
    let key = stored["key"].as_str().unwrap();
    assert!(path.file_name().unwrap().to_str().unwrap().starts_with(key));
}

#[test]
fn unwritable_cache_degrades() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("file");
    std::fs::write(&file, "x").unwrap();
    let bad = file.join("sub");
    let out = Command::new(env!("CARGO_BIN_EXE_superdirac"))
        .args(["index", "--height", "2", "--cache-dir", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("continuing without cache"));
}

#[test]
fn json_out_and_jobs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("o.json");
    let (code, _) = run(&["dirac-cohomology", "--weight", "-2,0|0", "--jobs", "1", "--json-out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (_, par) = run(&["dirac-cohomology", "--weight", "-2,0|0", "--jobs", "4"]);
    assert_eq!(std::fs::read_to_string(&p).unwrap(), par);
}
