use std::path::{Path, PathBuf};
use std::process::Command;

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_metricomp")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn data(name: &str) -> String {
    here(&format!("data/{name}")).display().to_string()
}

/// Golden comparison ignoring the schema-version line.
fn without_version(s: &str) -> String {
    s.lines().filter(|l| !l.contains("\"schemaVersion\"")).collect::<Vec<_>>().join("\n")
}

fn golden(args: &[&str], file: &str) {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "{stderr}");
    let expected = std::fs::read_to_string(here(&format!("golden/{file}"))).unwrap();
    assert_eq!(without_version(&stdout), without_version(&expected), "output differs from golden/{file}");
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let (code, stdout, _) = run(args);
    (code, serde_json::from_str(&stdout).expect("valid JSON"))
}

#[test]
fn golden_integers_constant() {
    golden(&["--json", "classify", &data("integers_constant.mc")], "integers_constant.json");
    let (_, v) = json(&["--json", "classify", &data("integers_constant.mc")]);
    let r = &v["results"][0];
    assert_eq!(r["case"], "I");
    assert_eq!(r["category"], "D^b(mod Z[1/2])");
}

#[test]
fn golden_integers_tail() {
    golden(&["--json", "classify", &data("integers_tail.mc")], "integers_tail.json");
    let (_, v) = json(&["--json", "classify", &data("integers_tail.mc")]);
    assert_eq!(v["results"][0]["case"], "II");
    assert_eq!(v["results"][0]["category"], "ThickInsideS(Torsion(all))");
}

#[test]
fn golden_kronecker_constant() {
    golden(&["--json", "classify", &data("kronecker_constant.mc")], "kronecker_constant.json");
    let (_, v) = json(&["--json", "classify", &data("kronecker_constant.mc")]);
    assert_eq!(v["results"][0]["case"], "I");
    assert_eq!(v["results"][0]["generators"], serde_json::json!(["E", "tubes != (1:0)"]));
}

#[test]
fn schema_version_is_declared() {
    let (_, v) = json(&["--json", "classify", &data("integers_constant.mc")]);
    assert_eq!(v["schemaVersion"], "1");
    for key in ["case", "kernel", "countablyGenerated", "convergesUniformly", "category", "evidence"] {
        assert!(v["results"][0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn cauchy_build_doubling_chain() {
    golden(&["--json", "cauchy", "build", &data("integers_sequence.mc")], "integers_sequence_build.json");
    let (_, v) = json(&["--json", "cauchy", "build", &data("integers_sequence.mc")]);
    let r = &v["results"][0];
    assert_eq!(r["cauchy"], true);
    assert_eq!(r["maps"], serde_json::json!(["*2", "*2", "*2", "*2"]));
    assert_eq!(r["limit"]["model"], "Z[1/2]");
}

#[test]
fn cauchy_check_reports_counterexample() {
    let (code, v) = json(&["--json", "cauchy", "check", &data("integers_sequence.mc"), "S", "M", "--horizon", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["cauchy"], true);
    assert_eq!(v["results"][0]["horizon"], 2);
    let (code, v) = json(&["--json", "cauchy", "check", &data("non_cauchy.mc")]);
    assert_eq!(code, 0);
    let r = &v["results"][0];
    assert_eq!(r["cauchy"], false);
    assert_eq!(r["counterexample"]["cone"], "Z/3@0");
    assert_eq!(r["counterexample"]["verdict"], "out");
    let (code, out, _) = run(&["cauchy", "build", &data("integers_sequence.mc"), "S", "M"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn cone_of_multiplication() {
    golden(&["--json", "cone", &data("integers_sequence.mc"), "f"], "integers_cone.json");
    let (code, out, _) = run(&["cone", &data("integers_sequence.mc"), "f"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/2 in degree 0"), "{out}");
}

#[test]
fn kronecker_sequences_and_cones() {
    let (code, v) = json(&["--json", "cauchy", "build", &data("kronecker_sequence.mc")]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["limit"]["model"], "E[{(1:0)}]");
    assert_eq!(v["results"][0]["limit"]["inCompletion"], true);
    let (_, v) = json(&["--json", "cone", &data("kronecker_sequence.mc"), "f"]);
    assert_eq!(v["results"][0]["cone"], "R[(1:0),1]@0");
    assert_eq!(v["results"][0]["oracleAgrees"], true);
}

#[test]
fn hom_between_objects() {
    let (code, out, _) = run(&["hom", &data("integers_sequence.mc"), "X", "X"]);
    assert_eq!(code, 0);
    assert!(out.contains("Hom(X, X[0]) = Z + Z/2 + Z/2 + Z/3 + Z/3"), "{out}");
}

#[test]
fn lattice_operations() {
    let (_, v) = json(&["--json", "lattice", "join", &data("lattice.mc"), "A", "C"]);
    assert_eq!(v["results"][0]["equivalentTo"], serde_json::json!(["T"]));
    let (_, v) = json(&["--json", "lattice", "meet", &data("lattice.mc"), "M2", "M3"]);
    assert_eq!(v["results"][0]["equivalentTo"], serde_json::json!(["M"]));
    let (_, v) = json(&["--json", "lattice", "leq", &data("lattice.mc"), "A", "A"]);
    assert_eq!(v["results"][0]["result"], true);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = std::env::temp_dir().join(format!("metricomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.mc");
    std::fs::write(&bad, "ring Z\nmetric M = constant torsion {4}\n").unwrap();
    let (code, v) = json(&["--json", "classify", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["line"], 2);
    assert_eq!(v["error"]["column"], 30);
    assert_eq!(v["error"]["rule"], "prime");

    let unsupported = dir.join("a3.mc");
    std::fs::write(&unsupported, "ring A3\nmetric M = constant all\n").unwrap();
    let (code, v) = json(&["--json", "classify", unsupported.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["name"], "UnsupportedRing");

    let (code, _, _) = run(&["classify", dir.join("missing.mc").to_str().unwrap()]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_small_bounds() {
    let (code, v) = json(&["--json", "selftest", "--max-dimension", "4", "--max-generators", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passed"], true);
}
