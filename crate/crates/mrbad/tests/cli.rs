use std::path::PathBuf;

use mrbad::cli::run;
use mrbad::format::{instance_to_file, parse_instance, scalar_from_json, InstanceFile};
use mrbad::fixtures;
use mrbad_core::linalg::{add_into, axpy, basis_vector, sub_vectors};
use mrbad_core::structures::{identity, MrbPair};
use mrbad_core::{Field, Scalar};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn mrbad(args: &[&str]) -> mrbad::cli::Outcome {
    run(std::iter::once("mrbad").chain(args.iter().copied()))
}

fn json_of(out: &mrbad::cli::Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn documented_examples() {
    let out = mrbad(&["verify", data("fixd.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
    let out = mrbad(&["--format", "json", "cohomology", data("fix0.json").to_str().unwrap(), "--degree", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(json_of(&out)["results"]["dim_h"], 1);
    let out = mrbad(&["deform-check", data("fixd-deform.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mrbad(&["frobnicate"]).code, 2);
    assert_eq!(mrbad(&["cohomology"]).code, 2);
    assert_eq!(mrbad(&["verify", "/nonexistent/file.json"]).code, 2);
    let out = mrbad(&["cohomology", data("fixd.json").to_str().unwrap(), "--degree", "9"]);
    assert_eq!(out.code, 2);
    assert_eq!(mrbad(&["--help"]).code, 0);
}

#[test]
fn floats_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"field":"Q","kappa":"0","dim":1,"mu":[[0,0,[0.5]]],"R":[["0"]],"d":[["0"]]}"#;
    let path = dir.path().join("float.json");
    std::fs::write(&path, text).unwrap();
    let out = mrbad(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("inexact-scalar"), "{}", out.stderr);
}

#[test]
fn max_entries_is_enforced() {
    // The cap is process-wide, so this runs the binary.
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_mrbad"))
        .args(["--max-entries", "10", "cohomology", data("fixd.json").to_str().unwrap(), "--degree", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn data_files_match_fixtures_and_round_trip() {
    for name in fixtures::NAMES {
        let text = std::fs::read_to_string(data(&format!("{name}.json"))).unwrap();
        let on_disk: Value = serde_json::from_str(&text).unwrap();
        let expected = serde_json::to_value(fixtures::file(name).unwrap()).unwrap();
        assert_eq!(on_disk, expected, "{name}");
        let inst = parse_instance(text.as_bytes()).unwrap();
        assert_eq!(serde_json::to_value(instance_to_file(&inst)).unwrap(), on_disk, "{name}");
    }
}

/// Recomputes the residual of a pair identity at a witness.
fn replay(pair: &MrbPair, identity_name: &str, w: &[usize]) -> Vec<Scalar> {
    let f = pair.field();
    let n = pair.dim();
    let e = |i: usize| basis_vector(f, n, i);
    let mul = |a: &[Scalar], b: &[Scalar]| pair.mul(a, b);
    match identity_name {
        identity::ASSOCIATIVITY => sub_vectors(
            &mul(&mul(&e(w[0]), &e(w[1])), &e(w[2])),
            &mul(&e(w[0]), &mul(&e(w[1]), &e(w[2]))),
        ),
        identity::MODIFIED_RB => {
            let (a, b) = (e(w[0]), e(w[1]));
            let (ra, rb) = (pair.r.apply(&a), pair.r.apply(&b));
            let mut inner = mul(&ra, &b);
            add_into(&mut inner, &mul(&a, &rb));
            let mut rhs = pair.r.apply(&inner);
            axpy(&mut rhs, &pair.kappa, &mul(&a, &b));
            sub_vectors(&mul(&ra, &rb), &rhs)
        }
        identity::DERIVATION => {
            let (a, b) = (e(w[0]), e(w[1]));
            let mut rhs = mul(&pair.d.apply(&a), &b);
            add_into(&mut rhs, &mul(&a, &pair.d.apply(&b)));
            sub_vectors(&pair.d.apply(&mul(&a, &b)), &rhs)
        }
        identity::COMMUTATION => pair.r.mul(&pair.d).sub(&pair.d.mul(&pair.r)).column(w[0]),
        other => panic!("unexpected identity {other}"),
    }
}

#[test]
fn failure_witnesses_replay() {
    let dir = tempfile::tempdir().unwrap();
    let base = fixtures::file("fixd").unwrap();
    let mut mutants: Vec<InstanceFile> = Vec::new();
    for k in 0..base.mu.len() {
        for c in 0..2 {
            let mut m = base.clone();
            m.mu[k][2][c] = Value::String("7".into());
            mutants.push(m);
        }
    }
    for r in 0..2 {
        for c in 0..2 {
            let mut m = base.clone();
            m.r[r][c] = Value::String("5".into());
            mutants.push(m);
            let mut m = base.clone();
            m.d[r][c] = Value::String("-3".into());
            mutants.push(m);
        }
    }
    let mut m = base.clone();
    m.kappa = Value::String("1".into());
    mutants.push(m);
    let mut failures = 0;
    for (k, m) in mutants.iter().enumerate() {
        let path = write_temp(&dir, &format!("m{k}.json"), m);
        let out = mrbad(&["--format", "json", "verify", &path]);
        if out.code == 0 {
            continue;
        }
        assert_eq!(out.code, 1);
        failures += 1;
        let report = json_of(&out);
        let pair = parse_instance(serde_json::to_string(m).unwrap().as_bytes()).unwrap().pair;
        let witnesses = report["witnesses"].as_array().unwrap();
        assert!(!witnesses.is_empty());
        for w in witnesses {
            let idx: Vec<usize> = w["witness"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect();
            let residual: Vec<Scalar> = w["residual"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| scalar_from_json(Field::Rationals, x).unwrap())
                .collect();
            let again = replay(&pair, w["identity"].as_str().unwrap(), &idx);
            assert_eq!(again, residual);
            assert!(again.iter().any(|x| !x.is_zero()));
        }
    }
    assert!(failures >= mutants.len() - 1, "{failures} of {}", mutants.len());
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["--format", "json", "fuzz", "--field", "fp:5", "--dim", "2", "--count", "12", "--seed", "9"];
    let a = mrbad(&args);
    let b = mrbad(&args);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    let mut threaded = args.to_vec();
    threaded.extend(["--workers", "4"]);
    assert_eq!(mrbad(&threaded).stdout, a.stdout);
    assert_eq!(json_of(&a)["results"]["count"], 12);
}

#[test]
fn extension_commands() {
    let out = mrbad(&["--format", "json", "extend", "extract", data("fixd-extension.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
    let r = json_of(&out);
    assert_eq!(r["results"]["cocycle"]["theta"], serde_json::json!([[0, 0, ["1"]]]));
    assert_eq!(r["results"]["closed"], true);

    let out = mrbad(&["--format", "json", "extend", "build", data("fixd-cocycle.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "{out:?}");
    let built = &json_of(&out)["results"]["extension"];
    assert_eq!(built["dim"], 4);

    let dir = tempfile::tempdir().unwrap();
    let mut bad = fixtures::file("fixd-cocycle").unwrap();
    bad.cocycle.as_mut().unwrap().xi[0][0] = Value::String("1".into());
    let path = write_temp(&dir, "bad.json", &bad);
    let out = mrbad(&["--format", "json", "extend", "build", &path]);
    assert_eq!(out.code, 1);
    let ws = json_of(&out)["witnesses"].as_array().unwrap().clone();
    assert!(!ws.is_empty());
    assert!(ws.iter().all(|w| w["identity"].as_str().unwrap().starts_with("ext")));

    let out = mrbad(&["--format", "json", "extend", "classify", data("fixd-f2.json").to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let r = json_of(&out);
    let k = r["results"]["dim_h2"].as_u64().unwrap();
    assert_eq!(r["results"]["count"].as_u64().unwrap(), 1 << k);
}

#[test]
fn deformation_commands() {
    let out = mrbad(&["--format", "json", "infinitesimal", data("fixd-deform.json").to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(json_of(&out)["results"]["closed"], true);
    let out = mrbad(&["--format", "json", "trivialize", data("fixd-deform.json").to_str().unwrap(), "--max-order", "2"]);
    assert_eq!(out.code, 1);
    let r = json_of(&out);
    assert_eq!(r["results"]["obstructed_order"], 1);
    assert!(!r["witnesses"].as_array().unwrap().is_empty());
    let out = mrbad(&["deform-check", data("fixd.json").to_str().unwrap()]);
    assert_eq!(out.code, 2);
}

#[test]
fn complex_check_on_adjoint() {
    let out = mrbad(&["--format", "json", "complex-check", data("fixd-adjoint.json").to_str().unwrap(), "--max-degree", "3"]);
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(json_of(&out)["results"]["differentials"].as_array().unwrap().len(), 3);
}
