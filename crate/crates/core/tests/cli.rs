use std::process::Command;

use congruence_images::cli::{parse_poly, parse_table_csv, render, run, EXIT_OK, EXIT_USAGE};
use congruence_images::{Engine, Family, MethodChoice};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("congruence").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn alpha_plain_and_json() {
    let (code, out, _) = call(&["alpha", "--poly", "x^2+y^2", "--n", "45", "--verify"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().next(), Some("35"));
    assert!(out.contains("closed-form") && out.contains("oracle: agree"));

    let (code, out, _) = call(&["alpha", "--poly", "x^2+y^2", "--n", "45", "--verify", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.trim(),
        r#"{"poly":"x^2+y^2","n":45,"alpha":35,"method":"closed-form","checked":{"against":"oracle","agree":true}}"#
    );
    let (_, out, _) = call(&["alpha", "--poly", "x^3", "--n", "27", "--method", "oracle", "--json"]);
    assert_eq!(out.trim(), r#"{"poly":"x^3","n":27,"alpha":7,"method":"oracle"}"#);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(call(&["alpha", "--poly", "x^^2", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["alpha", "--poly", "x^2"]).0, EXIT_USAGE);
    assert_eq!(call(&["alpha", "--poly", "x^2", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(call(&["alpha", "--poly", "x^2", "--n", "9", "--method", "fast"]).0, EXIT_USAGE);
    assert_eq!(call(&["alpha", "--poly", "3x^2", "--n", "9", "--method", "closed"]).0, EXIT_USAGE);
    assert_eq!(call(&["surjective", "--poly", "x^2"]).0, EXIT_USAGE);
    assert_eq!(call(&["surjective", "--poly", "x^2", "--n", "3", "--max-n", "4"]).0, EXIT_USAGE);
    assert_eq!(call(&["nset", "--poly", "x^2", "--p", "4", "--max-level", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    let (code, _, err) = call(&["set", "--poly", "x² + y²", "--n", "8"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("position 1"), "{err}");
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn surjective_listing() {
    let (code, out, _) = call(&["surjective", "--poly", "x^2+y^2+z^2", "--max-n", "16"]);
    assert_eq!(code, EXIT_OK);
    let listed: Vec<u64> = out.lines().map(|l| l.parse().unwrap()).collect();
    let expected: Vec<u64> = (1..=16).filter(|n| n % 8 != 0).collect();
    assert_eq!(listed, expected);
    assert_eq!(call(&["surjective", "--poly", "x^2-y^2", "--n", "4"]).1.trim(), "false");
}

#[test]
fn nset_levels() {
    let (code, out, _) = call(&["nset", "--poly", "x^2+y^2", "--p", "2", "--max-level", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "2:{3}\n3:{6}\n4:{12}\n");
    let (_, out, _) = call(&["nset", "--poly", "x^2+y^2", "--p", "2", "--max-level", "3", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["levels"][1]["members"], serde_json::json!([6]));
}

#[test]
fn set_formats() {
    let (_, out, _) = call(&["set", "--poly", "x^2+y^2", "--n", "8"]);
    assert_eq!(out.trim(), r#"{"modulus":8,"members":[0,1,2,4,5]}"#);
    let (_, out, _) = call(&["set", "--poly", "x^2+y^2", "--n", "8", "--format", "csv"]);
    assert_eq!(out, "residue\n0\n1\n2\n4\n5\n");
    let (_, out, _) = call(&["set", "--poly", "x^2+y^2", "--n", "8", "--format", "bits"]);
    assert_eq!(out.trim(), "37");
}

#[test]
fn table_roundtrips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, _, _) = call(&["table", "--poly", "x^2+y^2+z^2", "--max-n", "300", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let rows = parse_table_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 300);
    let engine = Engine::default();
    let f = Family::SumOfThreeSquares.into();
    for row in rows {
        let r = engine.alpha(&f, row.n, MethodChoice::Auto, false).unwrap();
        assert_eq!((row.alpha, row.method), (r.value, r.method), "n = {}", row.n);
    }
    let (_, out, _) = call(&["table", "--poly", "x^2", "--max-n", "4"]);
    assert!(out.starts_with("n,alpha,method\n1,1,"));
}

#[test]
fn verify_named_families_to_4096() {
    for poly in ["x^2+y^2", "x^2+y^2+z^2", "x^2-y^2", "x^2", "x^3"] {
        let (code, out, err) = call(&["verify", "--poly", poly, "--max-n", "4096"]);
        assert_eq!(code, EXIT_OK, "{poly}: {out}{err}");
        assert!(out.contains("all agree"));
    }
    let (code, _, _) = call(&["verify", "--poly", "2x^2+3y^2", "--max-n", "500"]);
    assert_eq!(code, EXIT_OK);
}

const CORPUS: [&str; 50] = [
    "x^2+y^2",
    "x^2+y^2+z^2",
    "x^2-y^2",
    "y^2-x^2",
    "-x^2+y^2",
    "x",
    "x^2",
    "x^3",
    "x^10",
    "3x^3-2y^3",
    "3x^3 - 2y^3",
    "  x ^ 2 + y ^ 2 ",
    "5*x^4+7*y^4",
    "-x^5",
    "-7x",
    "a^2+b^2",
    "p^3+q^3+r^3",
    "x1^2+x2^2",
    "x1^2+x2^2+x3^2+x4^2+x5^2",
    "x1+x2+x3+x4+x5+x6",
    "x^2+y^3",
    "x+y^2+z^3",
    "2x^2-3y^5",
    "x^2 - -y^2",
    "x^2+-y^2",
    "--x^2",
    "+x^2+y^2",
    "100x^2+1y^2",
    "x^2+y^2+z^2+w^2",
    "x^4+y^4+z^4+w^4",
    "x^2-y^2-z^2",
    "-x^2-y^2",
    "12a^3+5b^3-7c^3",
    "x^6+y^6",
    "x^7-y^7+z^7",
    "x^1+y^1",
    "9x^9",
    "x^2+2y^2",
    "x^2+3y^2",
    "x^2-2y^2",
    "x^3+y^3",
    "x^3+y^3+z^3",
    "x^3-y^3",
    "2x+3y",
    "x^2+y",
    "u^3+v^2+w",
    "x^12+y^12",
    "1000000x^2",
    "-1x^2+1y^2",
    "m^2 + n^2 + o^2 + q^2 + r^2 + s^2",
];

#[test]
fn parse_render_parse_is_identity() {
    for text in CORPUS {
        let first = parse_poly(text).unwrap_or_else(|e| panic!("{text:?}: {e}"));
        let rendered = render(&first.parsed);
        let second = parse_poly(&rendered).unwrap_or_else(|e| panic!("{rendered:?}: {e}"));
        assert_eq!(first.parsed, second.parsed, "{text:?} -> {rendered:?}");
        assert_eq!(render(&second.parsed), rendered);
        assert_eq!(first.family, second.family);
    }
}

#[test]
fn binary_exit_codes_and_budget() {
    let bin = env!("CARGO_BIN_EXE_congruence");
    let out = Command::new(bin).args(["alpha", "--poly", "x^2+y^2", "--n", "45"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("35\n"));

    let out = Command::new(bin)
        .env("CONGRUENCE_ORACLE_BUDGET", "1000")
        .args(["set", "--poly", "x^2+y^2", "--n", "5000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget of 1000"), "{err}");

    let out = Command::new(bin)
        .env("CONGRUENCE_ORACLE_BUDGET", "lots")
        .args(["alpha", "--poly", "x^2", "--n", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
