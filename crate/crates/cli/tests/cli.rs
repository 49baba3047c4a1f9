use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_logcl")).args(args).output().expect("binary runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let doc: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not one JSON document ({}): {}", e, text));
    (out.status.code().expect("exit code"), doc, text)
}

// Number of reduced primitive forms of discriminant D < 0.
fn reduced_forms(disc: i64) -> u64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) || gcd(gcd(a, b), c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

#[test]
fn reduced_form_counts() {
    assert_eq!(reduced_forms(-3), 1);
    assert_eq!(reduced_forms(-23), 3);
    assert_eq!(reduced_forms(-20), 2);
    assert_eq!(reduced_forms(-56), 4);
}

#[test]
fn malformed_polynomial_is_invalid() {
    let (code, doc, _) = run(&["compute", "--field", "x^2+*3"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "invalid");
    assert!(doc["error"]["message"].is_string());
}

#[test]
fn invalid_specs() {
    assert_eq!(run(&["compute", "--field", "x^2+1", "--ell", "9"]).0, 1);
    assert_eq!(run(&["compute", "--field", "x^2+1", "--prec", "8"]).0, 1);
    assert_eq!(run(&["compute", "--field", "x^2+1", "--caps.box", "0"]).0, 1);
    let (code, doc, _) = run(&["compute", "--no-such-flag"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "invalid");
}

#[test]
fn caps_are_enforced() {
    let (code, doc, _) = run(&["compute", "--field", "x^2+1000003", "--caps.disc", "1000"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "cap_exceeded");
}

#[test]
fn rationals_have_trivial_degree_zero_part() {
    for ell in ["2", "3", "5"] {
        let (code, doc, _) = run(&["compute", "--field", "x", "--ell", ell, "--json"]);
        assert_eq!(code, 0);
        assert_eq!(doc["degree_zero_decomposition"]["torsion"], serde_json::json!([]));
        assert_eq!(doc["degree_zero_decomposition"]["free_at_precision"], 0);
        assert_eq!(doc["full_decomposition"]["free_at_precision"], 1);
    }
}

#[test]
fn compute_agrees_with_table_row() {
    let (code, doc, _) = run(&["compute", "--field", "x^2+31", "--ell", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["degree_zero_decomposition"]["torsion"], serde_json::json!(["3"]));
    assert_eq!(doc["epsilon_tilde"], 1);
    assert_eq!(doc["gross_kuzmin_report"]["status"], "consistent");
    assert_eq!(doc["class_group"], serde_json::json!(["3"]));
    assert_eq!(doc["field_invariants"]["disc"], "-31");
}

#[test]
fn output_is_deterministic() {
    let args = ["compute", "--field", "x^2+23", "--ell", "3"];
    assert_eq!(run(&args).2, run(&args).2);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let status = Command::new(env!("CARGO_BIN_EXE_logcl"))
        .args(["compute", "--field", "x^2+5", "--out", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["ell"], 3);
}

#[test]
fn scan_flags_class_numbers() {
    let (code, doc, _) = run(&["scan", "--range=-50..-2", "--ell", "3", "--json"]);
    assert_eq!(code, 0);
    let rows = doc["rows"].as_array().unwrap();
    let want: Vec<i64> = (-50..=-2).filter(|d: &i64| (2..8).all(|p| d % (p * p) != 0)).collect();
    let got: Vec<i64> = rows.iter().map(|r| r["d"].as_i64().unwrap()).collect();
    assert_eq!(got, want);
    for r in rows {
        let d = r["d"].as_i64().unwrap();
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        let h = reduced_forms(disc);
        assert_eq!(r["class_number"], h.to_string(), "d = {}", d);
        assert_eq!(r["ell_divides_h"], h.is_multiple_of(3), "d = {}", d);
    }
}

#[test]
fn scan_edges() {
    let (code, doc, _) = run(&["scan", "--range", "9..3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["rows"], serde_json::json!([]));
    assert_eq!(run(&["scan", "--range=-3000..3000", "--caps.rows", "50"]).0, 2);
    assert_eq!(run(&["scan", "--range", "3-9"]).0, 1);
}

#[test]
fn selftest_passes_and_repeats() {
    let (code, doc, text) = run(&["selftest", "--seed", "11", "--json"]);
    assert_eq!(code, 0, "{}", text);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["suites"].as_array().unwrap().len(), 6);
    assert_eq!(run(&["selftest", "--seed", "11", "--json"]).2, text);
}

#[test]
fn selftest_at_low_precision() {
    let (code, doc, _) = run(&["selftest", "--prec", "16", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
}

#[test]
fn capitulation_from_fixtures() {
    let fx = fixtures();
    let (code, doc, _) = run(&["capitulate", "--fixtures", fx.join("ext_m31_hilbert_3.json").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["classes"][0]["verdict"], "survives");
    assert_eq!(doc["kernel"]["order"], "1");
    let (code, doc, _) = run(&["capitulate", "--fixtures", fx.join("ext_m35_htilde_2.json").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["classes"][0]["verdict"], "capitulates");
    assert_eq!(doc["certified"], true);
    let (code, _, _) =
        run(&["capitulate", "--ell", "5", "--fixtures", fx.join("ext_m31_hilbert_3.json").to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn identity_pair_has_trivial_kernel() {
    let (code, doc, _) = run(&["capitulate", "--base", "x^2+31", "--ext", "x^2+31", "--ell", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["kernel"]["order"], "1");
    assert_eq!(doc["log_unramified"]["global"], true);
    assert!(doc["classes"].as_array().unwrap().iter().all(|c| c["verdict"] == "survives"));
}

#[test]
fn capitulate_needs_fields() {
    assert_eq!(run(&["capitulate", "--base", "x"]).0, 1);
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

#[test]
fn compare_extension_fixture() {
    let path = fixtures().join("ext_m31_hilbert_3.json");
    let (code, doc, _) = run(&["compare", "--fixtures", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["diff"], serde_json::json!([]));

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["expected"]["kernel_order"] = 3.into();
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &v);
    let (code, doc, _) = run(&["compare", "--fixtures", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    let diff = doc["diff"].as_array().unwrap();
    assert_eq!(diff.len(), 1, "{:?}", diff);
    assert!(diff[0].as_str().unwrap().contains("kernel order"));
}

fn small_table() -> Value {
    let path = fixtures().join("quadratic_logclass.json");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let keep: Vec<Value> = rows
        .iter()
        .filter(|r| r["class_group"].as_array().unwrap().len() > 1 || r["log_torsion"].as_array().unwrap().len() > 1)
        .take(12)
        .chain(rows.iter().step_by(60))
        .cloned()
        .collect();
    v["rows"] = Value::Array(keep);
    v
}

#[test]
fn compare_ignores_generator_order() {
    let mut v = small_table();
    let dir = tempfile::tempdir().unwrap();
    let rows = v["rows"].as_array_mut().unwrap();
    rows.reverse();
    for r in rows.iter_mut() {
        for key in ["class_group", "log_torsion"] {
            r[key].as_array_mut().unwrap().reverse();
        }
    }
    let p = write(dir.path(), "permuted.json", &v);
    let (code, doc, _) = run(&["compare", "--fixtures", p.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["diff"], serde_json::json!([]));
    assert!(doc["compared"].as_u64().unwrap() >= 12);
}

#[test]
fn compare_reports_corrupted_row() {
    let mut v = small_table();
    let dir = tempfile::tempdir().unwrap();
    let row = &mut v["rows"][0];
    let mut t = row["log_torsion"].as_array().unwrap().clone();
    t.push(Value::from(row["ell"].as_u64().unwrap().pow(5)));
    row["log_torsion"] = Value::Array(t);
    let p = write(dir.path(), "corrupt.json", &v);
    let (code, doc, _) = run(&["compare", "--fixtures", p.to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["diff"].as_array().unwrap().len(), 1, "{}", doc["diff"]);
}

#[test]
fn compare_missing_fixture() {
    let (code, doc, _) = run(&["compare", "--fixtures", "/nonexistent/fx.json"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"]["kind"], "invalid");
}
