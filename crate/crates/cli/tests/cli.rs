//! End-to-end checks of the binary: exit codes, document shape, and byte
//! stability.

use std::process::{Command, Output};

use serde_json::Value;

use coble_forge_core::exact::Rational;
use coble_forge_core::json::{form_from_json, FormJson};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coble-forge"));
    c.env_remove("COBLE_FORGE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should spawn")
}

fn parse(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout should be one JSON document")
}

#[test]
fn invariants_hesse_pencil() {
    let out = run(&["invariants", "--nu", "3", "--g", "1", "--degree", "3"]);
    let doc = parse(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["config"]["command"], "invariants");
    assert_eq!(doc["config"]["nu"], 3);
    assert_eq!(doc["result"]["dim"], 2);
    let forms = doc["result"]["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 2);
    for f in forms {
        let parsed: FormJson = serde_json::from_value(f.clone()).unwrap();
        let form = form_from_json::<Rational>(&parsed).unwrap();
        assert_eq!(form.degree(), 3);
        assert!(!form.is_zero());
    }
}

#[test]
fn verify_prop1_never_holds_at_level_five() {
    let out = run(&["verify-prop1", "--nu", "5", "--g", "1", "--n", "5"]);
    let doc = parse(&out);
    let r = &doc["result"];
    assert_eq!(r["dim_invariant_source"], 6);
    assert_eq!(r["dim_invariant_target"], 14);
    assert_eq!(r["rank"], 6);
    assert_eq!(r["bijective"], false);
}

#[test]
fn intertwiner_matches_quotient() {
    let out = run(&["intertwiner-dim", "--nu", "3", "--g", "2"]);
    let doc = parse(&out);
    assert_eq!(doc["result"]["intertwiner_dim"], 5);
    assert_eq!(doc["result"]["sym_dim_over_n"], 5);
}

#[test]
fn isotypic_csv_is_a_clean_table() {
    let out = run(&[
        "isotypic", "--nu", "3", "--g", "1", "--degree", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# schema_version=1"));
    assert!(lines.next().unwrap().starts_with("# config="));
    assert_eq!(lines.next().unwrap(), "alpha,beta,multiplicity");
    let rows: Vec<_> = lines.collect();
    // S^3 V at (3,1): trivial character twice, eight others once = dim 10.
    assert_eq!(rows.len(), 9);
    let total: usize = rows
        .iter()
        .map(|r| r.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 10);
}

#[test]
fn theta_eval_reproduces_the_classical_value() {
    let dir = tempfile::tempdir().unwrap();
    let omega = dir.path().join("omega.json");
    std::fs::write(&omega, r#"{"g":1,"re":[[0.0]],"im":[[1.0]]}"#).unwrap();
    let out = run(&["theta-eval", "--period", omega.to_str().unwrap()]);
    let doc = parse(&out);
    let v = &doc["result"]["value"];
    assert!((v["re"].as_f64().unwrap() - 1.086_434_811_213_308).abs() < 1e-12);
    assert!(v["im"].as_f64().unwrap().abs() < 1e-15);
    assert_eq!(doc["config"]["period"], omega.to_str().unwrap());
}

#[test]
fn theta_selftest_passes_and_sets_fields() {
    let out = run(&[
        "theta-selftest", "--nu", "2", "--g", "1", "--points", "3", "--seed", "9",
    ]);
    let doc = parse(&out);
    assert_eq!(doc["result"]["pass"], true);
    assert!(doc["result"]["equivariance_max"].as_f64().unwrap() < 1e-9);
    assert!(doc["result"]["quasi_periodicity_max"].as_f64().unwrap() < 1e-9);
}

#[test]
fn coble_cubic_is_byte_stable() {
    let args = ["coble", "--kind", "cubic", "--seed", "7"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let doc = parse(&first);
    assert_eq!(doc["result"]["report"]["nullity"], 1);
    assert_eq!(
        doc["result"]["invariant_coefficients"].as_array().unwrap().len(),
        5
    );
    let parsed: FormJson = serde_json::from_value(doc["result"]["form"].clone()).unwrap();
    assert_eq!(parsed.coeff_kind, "complex");
    assert_eq!(parsed.degree, 3);
}

#[test]
fn dim_report_csv_has_expected_columns() {
    let out = run(&[
        "dim-report", "--n", "3", "--g", "2", "--seed", "3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\nm,1,1\n"), "{text}");
    assert!(text.contains("\ndim_ideal_nm1,9,9\n"), "{text}");
    assert!(text.contains("\ndim_ideal_n_invariant,4,4\n"), "{text}");
    assert!(text.contains("\npolars_span_ideal,true,\n"), "{text}");
}

#[test]
fn output_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = bin()
        .args(["invariants", "--nu", "3", "--g", "1", "--degree", "3"])
        .arg("--output")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["config"]["output"], path.to_str().unwrap());
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal expected")
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    // Unknown flag: usage error.
    assert_eq!(exit_code(&run(&["invariants", "--bogus"])), 2);
    // Parameter: center acts nontrivially on S^2 V at level 3.
    assert_eq!(
        exit_code(&run(&["isotypic", "--nu", "3", "--g", "1", "--degree", "2"])),
        2
    );
    // Parameter: CSV is not available for form output.
    assert_eq!(
        exit_code(&run(&[
            "invariants", "--nu", "3", "--g", "1", "--degree", "3", "--format", "csv",
        ])),
        2
    );
    // Capacity: the degree-3 monomial basis at (3,5) is ~2.4e6 > 2e5.
    assert_eq!(
        exit_code(&run(&["invariants", "--nu", "3", "--g", "5", "--degree", "3"])),
        4
    );
    // Structural: an impossible self-test threshold.
    assert_eq!(
        exit_code(&run(&[
            "theta-selftest", "--nu", "2", "--g", "1", "--points", "2", "--threshold", "1e-18",
        ])),
        3
    );
}

#[test]
fn thread_env_var_is_validated_and_respected() {
    let ok = bin()
        .args(["invariants", "--nu", "3", "--g", "1", "--degree", "3"])
        .env("COBLE_FORGE_THREADS", "2")
        .output()
        .unwrap();
    assert!(ok.status.success());
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["config"]["threads"], 2);

    let bad = bin()
        .args(["invariants", "--nu", "3", "--g", "1", "--degree", "3"])
        .env("COBLE_FORGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));

    // An explicit flag wins over the environment.
    let flag = bin()
        .args(["invariants", "--nu", "3", "--g", "1", "--degree", "3", "--threads", "1"])
        .env("COBLE_FORGE_THREADS", "many")
        .output()
        .unwrap();
    assert!(flag.status.success());
}

#[test]
fn period_file_round_trips_through_coble() {
    // A period written by the library must be accepted back by the CLI.
    let period = coble_forge_core::theta::PeriodMatrix::random_generic(2, 77).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("omega.json");
    std::fs::write(&path, period.to_json_string()).unwrap();
    let out = bin()
        .args(["coble", "--kind", "cubic", "--seed", "5", "--period"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["report"]["nullity"], 1);
    assert_eq!(doc["config"]["period"], path.to_str().unwrap());
    assert!(doc["config"]["period_seed"].is_null());
}
