//! Byte-exact JSON for three reference rows, plus closed-form checks of the
//! eigenvalues the golden files contain.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn etaq(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_etaq"))
        .args(args)
        .env_remove(etaq_cli::PRIME_CAP_ENV)
        .output()
        .expect("run etaq");
    assert!(
        out.status.success(),
        "etaq {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn search_line(weight: &str, eta: &str) -> String {
    let all = etaq(&["search", "--weight", weight, "--max-sum", "24"]);
    let needle = format!("{{\"eta\":\"{eta}\",");
    let line = all
        .lines()
        .find(|l| l.starts_with(&needle))
        .unwrap_or_else(|| panic!("{eta} missing from search output"));
    format!("{line}\n")
}

fn kronecker(d: i64, p: i64) -> i64 {
    etaq_core::arith::kronecker(d, p).unwrap() as i64
}

#[test]
fn row_1_eta_24z() {
    assert_eq!(
        etaq(&["invariants", "24:1"]),
        golden("row01_invariants.json")
    );
    assert_eq!(etaq(&["check", "eta(24z)"]), golden("row01_check.json"));
    assert_eq!(search_line("1/2", "24:1"), golden("row01_search.jsonl"));

    // η(24z) = ∑ (12/n) q^{n²}, so λ_p = (12/p)(1 + 1/p).
    let report: Value = serde_json::from_str(&golden("row01_check.json")).unwrap();
    for pair in report["eigenvalues"].as_array().unwrap() {
        let p = pair[0].as_i64().unwrap();
        if 576 % p == 0 {
            continue;
        }
        let s = kronecker(12, p) * (p + 1);
        assert_eq!(pair[1], Value::String(format!("{s}/{p}")), "p = {p}");
    }
}

#[test]
fn row_16_eta_8z_cubed() {
    assert_eq!(
        etaq(&["invariants", "8:3"]),
        golden("row16_invariants.json")
    );
    assert_eq!(etaq(&["check", "eta(8z)^3"]), golden("row16_check.json"));
    assert_eq!(search_line("3/2", "8:3"), golden("row16_search.jsonl"));

    // η(8z)³ = ∑_{m odd} (−4/m) m q^{m²}, so λ_p = (−4/p)(p + 1).
    let report: Value = serde_json::from_str(&golden("row16_check.json")).unwrap();
    let pairs = report["eigenvalues"].as_array().unwrap();
    assert_eq!(pairs.len(), 10);
    for pair in &pairs[1..] {
        let p = pair[0].as_i64().unwrap();
        assert_eq!(
            pair[1].as_i64().unwrap(),
            kronecker(-4, p) * (p + 1),
            "p = {p}"
        );
    }
    assert_eq!(report["R"], "3329/32");
}

#[test]
fn row_43_vacuous() {
    assert_eq!(
        etaq(&["invariants", "1:2,2:7,4:2"]),
        golden("row43_invariants.json")
    );
    assert_eq!(
        etaq(&["check", "eta(z)^2*eta(2z)^7*eta(4z)^2"]),
        golden("row43_check.json")
    );
    assert_eq!(
        search_line("11/2", "1:2,2:7,4:2"),
        golden("row43_search.jsonl")
    );

    let report: Value = serde_json::from_str(&golden("row43_check.json")).unwrap();
    assert_eq!(report["R"], "3/2");
    assert_eq!(report["vacuous"], true);
    assert_eq!(report["verdict"], "eigenform_certified");
}

#[test]
fn key_order_is_fixed() {
    let line = golden("row16_search.jsonl");
    let keys = [
        "eta",
        "weight",
        "level",
        "character",
        "valuation",
        "sturm",
        "R",
        "prime_cap",
        "eigenvalues",
        "verdict",
        "table_row",
    ];
    let mut at = 0;
    for k in keys {
        let pos = line[at..]
            .find(&format!("\"{k}\":"))
            .unwrap_or_else(|| panic!("{k} out of order"));
        at += pos;
    }
}
