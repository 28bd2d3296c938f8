//! Acceptance suite: one PASS/FAIL line per criterion. Criteria 3b and 6 are known to fail
//! (the SU(3) basis is not orthogonal at weight 6, and one of the quoted commutator identities
//! does not hold); the run succeeds only if every other criterion passes and those two fail.

use serde_json::Value;
use singlet_core::opexpr::catalog;
use singlet_core::su2::su2_catalog;
use singlet_core::{parse, Group};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

const KNOWN_FAILURES: [&str; 2] = ["3b", "6"];

struct Verdict {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_singlet"))
}

fn out_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

/// Run `singlet verify` and return (exit code, report, wall time).
fn verify(group: &str, wmax: u32) -> (i32, Value, Duration) {
    let p = out_path(&format!("acceptance_{group}_{wmax}.json"));
    let t = Instant::now();
    let out = bin()
        .args(["verify", "--group", group, "--wmax", &wmax.to_string(), "--out"])
        .arg(&p)
        .output()
        .expect("singlet runs");
    let elapsed = t.elapsed();
    let report = serde_json::from_str(&std::fs::read_to_string(&p).expect("report written")).unwrap();
    (out.status.code().unwrap_or(-1), report, elapsed)
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("report has no check '{name}'"))
}

fn passed(report: &Value, name: &str) -> (bool, String) {
    let c = check(report, name);
    (c["passed"].as_bool().unwrap(), c["detail"].as_str().unwrap().to_string())
}

fn schema_valid(name: &str, v: &Value) -> bool {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&s).unwrap().is_valid(v)
}

fn main() -> ExitCode {
    let mut verdicts = Vec::new();

    let (code2, su2, t2) = verify("su2", 12);
    let (ok, detail) = passed(&su2, "closed-form coefficients vs oracle");
    let (adj, adj_detail) = passed(&su2, "adjoint pairs");
    verdicts.push(Verdict {
        id: "1",
        title: "SU(2) closed forms match the oracle for n1+n2+n3 <= 12",
        passed: code2 == 0 && ok && adj && t2 < Duration::from_secs(60),
        detail: format!("{detail}; conjugates: {adj_detail}; {:.1}s", t2.as_secs_f64()),
    });
    let (ok, detail) = passed(&su2, "norms vs oracle");
    verdicts.push(Verdict { id: "2", title: "SU(2) norm formula for sum l <= 6", passed: ok, detail });

    let (code3, su3, t3) = verify("su3", 6);
    let (ok, detail) = passed(&su3, "Gauss law, k-, same-leg pairs, Casimirs");
    verdicts.push(Verdict {
        id: "3a",
        title: "SU(3) states at weight <= 6 satisfy Gauss law, k- and same-leg constraints",
        passed: ok,
        detail,
    });
    let (ok, detail) = passed(&su3, "basis orthogonality");
    verdicts.push(Verdict { id: "3b", title: "SU(3) Gram matrix at weight <= 6 is diagonal", passed: ok, detail });

    let ledger = &su3["ledger"];
    let ledger_ok = schema_valid("verify.schema.json", &su3)
        && ledger.as_array().unwrap().iter().all(|r| !r["printed_ref"].as_str().unwrap().is_empty());
    verdicts.push(Verdict {
        id: "4",
        title: "verify su3 --wmax 6 exits 0 with every printed deviation ledgered",
        passed: code3 == 0 && ledger_ok,
        detail: format!(
            "exit {code3}, {} mismatches, {} ledger records, {:.1}s",
            su3["mismatches"].as_array().unwrap().len(),
            ledger.as_array().unwrap().len(),
            t3.as_secs_f64()
        ),
    });

    let (chain, chain_detail) = passed(&su3, "norm factor chain vs oracle");
    let (base, base_detail) = passed(&su3, "pure-p base norm vs oracle");
    let base_ledgered = ledger.as_array().unwrap().iter().any(|r| r["formula"] == "S(0,p)");
    verdicts.push(Verdict {
        id: "5",
        title: "norm chain equals the oracle norm at weight <= 6; base case fixed by the oracle",
        passed: chain && base && base_ledgered,
        detail: format!(
            "chain: {chain_detail}; base |p| <= 2: {base_detail}; tabulated base {}",
            if base_ledgered { "ledgered" } else { "confirmed" }
        ),
    });

    let identities: Vec<_> = su3["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["kind"] == "printed" && c["name"].as_str().unwrap().starts_with('['))
        .collect();
    let failing: Vec<_> = identities.iter().filter(|c| c["passed"] == false).collect();
    verdicts.push(Verdict {
        id: "6",
        title: "quoted commutator identities hold on the weight <= 5 basis",
        passed: identities.len() == 3 && failing.is_empty(),
        detail: failing
            .iter()
            .map(|c| format!("{}: {}", c["name"].as_str().unwrap(), c["detail"].as_str().unwrap()))
            .collect::<Vec<_>>()
            .join("; "),
    });

    let (ok, detail) = passed(&su3, "symmetry images vs direct oracle");
    verdicts.push(Verdict { id: "7", title: "symmetry images of 20 random pairs match the oracle", passed: ok, detail });

    let (ok, detail) = passed(&su3, "adjoint pairs");
    verdicts.push(Verdict {
        id: "8",
        title: "annihilation-type matrices are transposes of their partners at weight <= 5",
        passed: ok,
        detail,
    });

    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let p = out_path(&format!("acceptance_matrix_{i}.json"));
            let status = bin()
                .args(["matrix", "--group", "su3", "--op", "a+(1).a(2)", "--wmax", "6", "--out"])
                .arg(&p)
                .status()
                .unwrap();
            assert!(status.success());
            std::fs::read(&p).unwrap()
        })
        .collect();
    let mut round_trips = 0;
    let mut bad = Vec::new();
    for (group, ops) in [(Group::Su3, catalog()), (Group::Su2, su2_catalog())] {
        for op in ops {
            round_trips += 1;
            match parse(&op.to_string(), group) {
                Ok(back) if back == op => {}
                _ => bad.push(op.to_string()),
            }
        }
    }
    verdicts.push(Verdict {
        id: "9",
        title: "matrix export is byte-identical across runs; operator catalog round-trips",
        passed: runs[0] == runs[1] && bad.is_empty(),
        detail: format!("{} bytes, {round_trips} operators, failures {bad:?}", runs[0].len()),
    });

    let mut unexpected = 0;
    for v in &verdicts {
        let known = KNOWN_FAILURES.contains(&v.id);
        let tag = match (v.passed, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if v.passed == known {
            unexpected += 1;
        }
        println!("criterion {:<3} {tag}: {} [{}]", v.id, v.title, v.detail);
    }
    if unexpected == 0 {
        println!("acceptance: every criterion behaves as documented");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} criteria differ from the documented outcome");
        ExitCode::FAILURE
    }
}
