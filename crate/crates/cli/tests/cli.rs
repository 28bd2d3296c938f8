use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn singlet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singlet")).args(args).output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = singlet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<_> = match s.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name}: {msgs:?}");
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn basis_row_counts() {
    let v = json_out(&["basis", "--group", "su2", "--wmax", "2"]);
    assert_eq!(v["labels"].as_array().unwrap().len(), 4);
    assert_valid("basis.schema.json", &v);
    let v = json_out(&["basis", "--group", "su3", "--wmax", "3"]);
    // vacuum, six single links, p = +-1
    assert_eq!(v["labels"].as_array().unwrap().len(), 9);
    assert_valid("basis.schema.json", &v);
    assert_eq!(v["labels"][7]["norm_sq"], "6/1");
}

#[test]
fn basis_csv_has_header_and_rows() {
    let out = singlet(&["basis", "--group", "su3", "--wmax", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[0].starts_with("l12,l21,l13,l31,l23,l32,p,weight,norm_sq"));
}

#[test]
fn act_examples() {
    let v = json_out(&["act", "--group", "su3", "--op", "a+(1).b+(2)", "{}"]);
    assert_valid("act.schema.json", &v);
    let t = v["transitions"].as_array().unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0]["coeff"]["sign"], 1);
    assert_eq!(t[0]["coeff"]["radicand"], "3/1");
    assert_eq!(t[0]["target"]["l12"], 1);

    let v = json_out(&["act", "--group", "su3", "--op", "a+(1).a(2)", "{}"]);
    assert!(v["transitions"].as_array().unwrap().is_empty());

    let v = json_out(&["act", "--group", "su2", "--op", "N(2)", r#"{"l12":1}"#]);
    assert_valid("act.schema.json", &v);
    let t = v["transitions"].as_array().unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0]["target"], v["source"]);
    assert_eq!(t[0]["coeff"]["radicand"], "1/1");
}

#[test]
fn act_oracle_route_agrees_and_float_is_marked() {
    let label = r#"{"l12":1,"l23":1,"p":1}"#;
    let a = json_out(&["act", "--group", "su3", "--op", "a(1).b(2)", label]);
    let b = json_out(&["act", "--group", "su3", "--op", "a(1).b(2)", label, "--via-oracle"]);
    assert_eq!(a["transitions"], b["transitions"]);

    let v = json_out(&["act", "--group", "su3", "--op", "a+(1).b+(2)", r#"{"l12":1}"#, "--float"]);
    assert_valid("act.schema.json", &v);
    let c = &v["transitions"][0]["coeff"];
    assert_eq!(c["radicand"], "8/1");
    let x = c["approx_lossy"].as_f64().unwrap();
    assert!((x - 8f64.sqrt()).abs() < 1e-14);
}

#[test]
fn act_errors() {
    let out = singlet(&["act", "--group", "su3", "--op", "eps(a+(1),a+(2),b(3))", "{}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--via-oracle"));
    let out = singlet(&["act", "--group", "su3", "--op", "a+(1).b+(2)", r#"{"q":1}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = singlet(&["act", "--group", "su3", "--op", "a+(1).b+(", "{}"]);
    assert_eq!(out.status.code(), Some(2));
}

fn entries(v: &Value) -> Vec<(String, String, Value)> {
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["row"].to_string(), e["col"].to_string(), e["coeff"].clone()))
        .collect()
}

#[test]
fn matrix_truncates_to_cutoff() {
    let v = json_out(&["matrix", "--group", "su3", "--op", "a+(1).b+(2)", "--wmax", "2"]);
    assert_valid("matrix.schema.json", &v);
    // only the vacuum maps inside weight 2
    assert_eq!(entries(&v).len(), 1);
    let v = json_out(&["matrix", "--group", "su3", "--op", "a+(1).b+(2)", "--wmax", "4"]);
    for entry in v["entries"].as_array().unwrap() {
        let w: u64 = ["l12", "l21", "l13", "l31", "l23", "l32"]
            .iter()
            .map(|k| entry["row"][k].as_u64().unwrap())
            .sum::<u64>()
            * 2
            + 3 * entry["row"]["p"].as_i64().unwrap().unsigned_abs();
        assert!(w <= 4);
    }
}

#[test]
fn matrix_adjoint_pair_is_transpose() {
    let up = json_out(&["matrix", "--group", "su3", "--op", "a+(1).b+(2)", "--wmax", "5"]);
    let down = json_out(&["matrix", "--group", "su3", "--op", "a(1).b(2)", "--wmax", "5"]);
    let mut t: Vec<_> = entries(&up).into_iter().map(|(r, c, x)| (c, r, x)).collect();
    let mut d = entries(&down);
    t.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    d.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    assert_eq!(t, d);
}

#[test]
fn su2_number_operator_is_diagonal() {
    let v = json_out(&["matrix", "--group", "su2", "--op", "N(1)", "--wmax", "4"]);
    assert_valid("matrix.schema.json", &v);
    let e = entries(&v);
    assert!(!e.is_empty());
    assert!(e.iter().all(|(r, c, _)| r == c));
}

#[test]
fn matrix_files_are_deterministic() {
    let mut bytes = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let p = tmp(&format!("det_{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_singlet"))
            .env("SINGLET_THREADS", threads)
            .args(["matrix", "--group", "su3", "--op", "eps(a+(1),a+(2),a+(3))", "--wmax", "5"])
            .arg("--out")
            .arg(&p)
            .output()
            .unwrap();
        assert!(out.status.success());
        bytes.push(std::fs::read(&p).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert!(!bytes[0].is_empty());
}

#[test]
fn verify_exit_codes_and_report_schema() {
    let p = tmp("verify_su3_2.json");
    let out = singlet(&["verify", "--group", "su3", "--wmax", "2", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: PASS"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_valid("verify.schema.json", &v);
    assert_valid("discrepancy.schema.json", &v["ledger"]);

    let out = singlet(&["verify", "--group", "su3", "--wmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let out = singlet(&["verify", "--group", "su2", "--wmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn label_and_coefficient_schemas() {
    let v = json_out(&["basis", "--group", "su3", "--wmax", "3"]);
    for row in v["labels"].as_array().unwrap() {
        assert_valid("label.schema.json", &row["label"]);
    }
    let act = json_out(&["act", "--group", "su3", "--op", "a+(1).b+(2)", "{}", "--float"]);
    assert_valid("coefficient.schema.json", &act["transitions"][0]["coeff"]);
    assert!(!schema("label.schema.json").is_valid(&serde_json::json!({"l12": 1})));
}
