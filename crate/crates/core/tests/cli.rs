//! End-to-end tests of the binary: schema handling, exit codes, output
//! determinism, and the term cache.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_newton-lct"));
    cmd.args(args);
    match stdin {
        Some(text) => {
            cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
            let mut child = cmd.spawn().expect("spawn");
            child
                .stdin
                .as_mut()
                .unwrap()
                .write_all(text.as_bytes())
                .expect("write stdin");
            child.wait_with_output().expect("wait")
        }
        None => {
            cmd.stdin(Stdio::null());
            cmd.output().expect("run")
        }
    }
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const CUSP: &str = r#"{"kind":"ideal","dim":2,"generators":[["2","0"],["0","3"]]}"#;

#[test]
fn lct_example_from_stdin() {
    let out = run(&["lct"], Some(CUSP));
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["value"], "5/6");
    assert_eq!(doc["result"]["witness"], serde_json::json!(["3/5", "2/5"]));
    assert_eq!(doc["result"]["alpha"], serde_json::json!(["1/2", "1/3"]));
    // timing must never contaminate stdout
    assert!(!String::from_utf8_lossy(&out.stdout).contains("timing"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("timing"));
}

#[test]
fn lct_example_from_file() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("a.json");
    std::fs::write(&path, CUSP).unwrap();
    let out = run(&["lct", "--input", path.to_str().unwrap()], None);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["result"]["value"], "5/6");
}

#[test]
fn multiplier_and_jump() {
    let doc = r#"{"kind":"ideal","dim":2,"generators":[["2","0"],["0","3"]],"c":"5/6"}"#;
    let out = run(&["multiplier"], Some(doc));
    assert!(out.status.success());
    let gens = stdout_json(&out)["result"]["generators"].clone();
    assert_eq!(gens, serde_json::json!([["0", "1"], ["1", "0"]]));

    let jdoc = r#"{"kind":"ideal","dim":2,"generators":[["1","0"],["0","1"]],"q_generators":[["1","0"]]}"#;
    let out = run(&["jump"], Some(jdoc));
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["result"]["value"], "3");
}

#[test]
fn validation_errors_exit_2() {
    // malformed JSON
    assert_eq!(run(&["lct"], Some("{nope")).status.code(), Some(2));
    // unknown field
    let extra = r#"{"kind":"ideal","dim":1,"generators":[["1"]],"zzz":1}"#;
    assert_eq!(run(&["lct"], Some(extra)).status.code(), Some(2));
    // wrong kind for the subcommand
    let val = r#"{"kind":"valuation","dim":1,"weights":["1"]}"#;
    assert_eq!(run(&["lct"], Some(val)).status.code(), Some(2));
    // missing required field for multiplier
    assert_eq!(run(&["multiplier"], Some(CUSP)).status.code(), Some(2));
    // missing input file
    assert_eq!(run(&["lct", "--input", "/no/such/file.json"], None).status.code(), Some(2));
}

#[test]
fn refused_computations_exit_3() {
    // deterministic quadrature undefined in dimension 3
    let doc = r#"{"kind":"experiment","method":"quadrature","phi":{"dim":3,
        "pieces":[{"c":["1","1","0"]},{"c":["0","0","2"]}]}}"#;
    assert_eq!(run(&["volume"], Some(doc)).status.code(), Some(3));
    // explicit graded presentation has no exact limit: witness refuses
    let seq = r#"{"kind":"graded_sequence","dim":1,
        "presentation":{"type":"explicit","terms":[[["1"]],[["2"]]]}}"#;
    assert_eq!(run(&["witness"], Some(seq)).status.code(), Some(3));
}

#[test]
fn property_check_failure_exits_4() {
    // a_1^2 = (x^2) is not inside a_2 = (x^3): not a graded sequence
    let doc = r#"{"kind":"graded_sequence","dim":1,
        "presentation":{"type":"explicit","terms":[[["1"]],[["3"]]]}}"#;
    let out = run(&["sequence", "--max-index", "4"], Some(doc));
    assert_eq!(out.status.code(), Some(4));
    let report = stdout_json(&out);
    assert_eq!(report["result"]["check"]["violations"][0]["i"], 1);
}

#[test]
fn witness_pipeline_and_determinism() {
    let doc = r#"{"kind":"graded_sequence","dim":2,
        "presentation":{"type":"valuation_family","weights":["1","2"],"threshold":"1"}}"#;
    let a = run(&["witness", "--samples", "50", "--seed", "9"], Some(doc));
    assert!(a.status.success());
    let j = stdout_json(&a);
    assert_eq!(j["result"]["certificate"]["value"], "3");
    assert_eq!(j["result"]["certificate"]["witness"], serde_json::json!(["1", "2"]));
    let b = run(&["witness", "--samples", "50", "--seed", "9"], Some(doc));
    assert_eq!(a.stdout, b.stdout, "same input and seed must be byte-identical");
    let c = run(&["witness", "--samples", "50", "--seed", "10"], Some(doc));
    let jc = stdout_json(&c);
    assert_eq!(jc["seed"], 10);
}

#[test]
fn kiselman_and_valuate() {
    let doc = r#"{"kind":"toric_psh","dim":2,
        "pieces":[{"c":["2","0"]},{"c":["0","3"]}],"alpha":["1","1"]}"#;
    let out = run(&["kiselman"], Some(doc));
    assert!(out.status.success());
    let j = stdout_json(&out);
    assert_eq!(j["result"]["singularity_exponent"]["value"], "5/6");
    assert_eq!(j["result"]["kiselman"]["direct_value"], "2");

    let vdoc = r#"{"kind":"valuation","dim":2,"weights":["1","2"],
        "ideal":[["2","0"],["0","3"]],"s":"2"}"#;
    let out = run(&["valuate"], Some(vdoc));
    assert!(out.status.success());
    let j = stdout_json(&out);
    assert_eq!(j["result"]["log_discrepancy"], "3");
    assert_eq!(j["result"]["value"], "2");
    assert_eq!(
        j["result"]["valuation_ideal"],
        serde_json::json!([["0", "1"], ["2", "0"]])
    );
}

#[test]
fn volume_csv_format() {
    let doc = r#"{"kind":"experiment","method":"quadrature",
        "phi":{"dim":1,"pieces":[{"c":["1"]}]},
        "radii":[0.01,0.001,0.0001]}"#;
    let out = run(&["volume", "--format", "csv", "--delta", "1.0"], Some(doc));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,volume,log_r,log_volume"));
    assert_eq!(lines.count(), 3);
    // json format reports the fitted slope (here exactly 2 up to quadrature)
    let out = run(&["volume", "--delta", "1.0"], Some(doc));
    let j = stdout_json(&out);
    let slope = j["result"]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.01, "slope {slope}");
}

#[test]
fn cache_reuse_and_poisoning() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let doc = r#"{"kind":"graded_sequence","dim":2,
        "presentation":{"type":"valuation_family","weights":["2","3"],"threshold":"1"}}"#;
    let args = ["sequence", "--max-index", "16", "--cache-dir", dir];

    let cold = run(&args, Some(doc));
    assert!(cold.status.success());
    assert!(
        String::from_utf8_lossy(&cold.stderr).contains("computed 16"),
        "cold run computes every term"
    );

    let warm = run(&args, Some(doc));
    assert!(warm.status.success());
    assert!(
        String::from_utf8_lossy(&warm.stderr).contains("reused 16"),
        "warm run reuses every term"
    );
    assert_eq!(cold.stdout, warm.stdout, "cached and uncached results must agree");

    // flip a byte in one entry: detected, recomputed, same result
    let entry = std::fs::read_dir(tmp.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    let mut bytes = std::fs::read(&entry).unwrap();
    let pos = bytes.len() / 2;
    bytes[pos] = bytes[pos].wrapping_add(1);
    std::fs::write(&entry, bytes).unwrap();

    let healed = run(&args, Some(doc));
    assert!(healed.status.success());
    assert_eq!(cold.stdout, healed.stdout, "poisoned entry must be recomputed");

    // unwritable directory: warn and proceed uncached, same result
    let nocache = run(
        &["sequence", "--max-index", "16", "--cache-dir", "/proc/not/writable"],
        Some(doc),
    );
    assert!(nocache.status.success());
    assert!(String::from_utf8_lossy(&nocache.stderr).contains("warning"));
    assert_eq!(cold.stdout, nocache.stdout);
}

#[test]
fn cache_env_var_is_honored() {
    let tmp = tempfile::tempdir().unwrap();
    let doc = r#"{"kind":"subadditive_sequence","dim":2,
        "presentation":{"type":"multiplier_family","points":[["2","0"],["0","3"]]}}"#;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_newton-lct"));
    cmd.args(["sequence", "--max-index", "6"])
        .env("NEWTON_LCT_CACHE", tmp.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    child.stdin.as_mut().unwrap().write_all(doc.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(std::fs::read_dir(tmp.path()).unwrap().count() >= 6);
}

#[test]
fn selftest_passes_and_p102_runs() {
    let out = run(&["selftest"], None);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["result"]["passed"], true);

    let doc = r#"{"kind":"toric_psh","dim":2,
        "pieces":[{"c":["2","0"]},{"c":["0","3"]}]}"#;
    let out = run(&["p102", "--max-index", "8"], Some(doc));
    assert!(out.status.success());
}
