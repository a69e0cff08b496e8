use polydiode::builder::{enumerate_designs, DiodeSpec, FixedRoles};
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn designs(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("designs").join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydiode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn and_gate_truth_table_has_four_rows() {
    let out = run(&["simulate", &designs("and_gate.design")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&["simulate", &designs("and_gate.design"), "--format", "json"]);
    let rows = v["truth_table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let outputs: Vec<u64> = rows.iter().map(|r| r["output"].as_u64().unwrap()).collect();
    assert_eq!(outputs, [0, 0, 0, 1]);
}

#[test]
fn or_gate_truth_table() {
    let v = json(&["simulate", &designs("or_gate.design"), "--format", "json"]);
    let outputs: Vec<u64> = v["truth_table"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["output"].as_u64().unwrap())
        .collect();
    assert_eq!(outputs, [0, 1, 1, 1]);
}

#[test]
fn report_keys() {
    let v = json(&["simulate", &designs("and_gate.design"), "--format", "json"]);
    for key in ["design", "validation", "orbitals", "profile", "diode", "truth_table", "version", "inventory", "config"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["design"]["kind"], "and_gate");
}

#[test]
fn sweep_fixing_donor_gives_eight_rows() {
    let v = json(&["sweep", "--fix", "donor=NH2", &designs("diode.design"), "--format", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["donor"] == "NH2"));
    let text = run(&["sweep", "--fix", "donor=NH2", &designs("diode.design")]);
    let lines = String::from_utf8(text.stdout).unwrap();
    assert_eq!(lines.lines().filter(|l| !l.starts_with('#')).count(), 8);
}

#[test]
fn sweep_rows_match_enumeration() {
    let cases: [&[&str]; 5] = [
        &[],
        &["donor=OH"],
        &["acceptor=CN"],
        &["bridge=CH2CH2", "donor=CH3"],
        &["donor=NH2", "acceptor=NO2", "bridge=CH2"],
    ];
    for fixes in cases {
        let mut args = vec!["sweep", "--format", "json"];
        let mut fixed = FixedRoles::default();
        for f in fixes {
            args.extend(["--fix", f]);
            let (role, name) = f.split_once('=').unwrap();
            let slot = match role {
                "donor" => &mut fixed.donor,
                "acceptor" => &mut fixed.acceptor,
                _ => &mut fixed.bridge,
            };
            *slot = Some(name.to_string());
        }
        let v = json(&args);
        let want = enumerate_designs(&fixed, &DiodeSpec::new("NH2", "NO2", "CH2")).count();
        assert_eq!(v["rows"].as_array().unwrap().len(), want, "{fixes:?}");
    }
}

#[test]
fn aromatic_bridge_is_a_domain_error() {
    let out = run(&["analyze", &designs("aromatic_bridge.design")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("bridge must be aliphatic"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn error_paths_print_one_line() {
    let typo = scratch("typo.design", "[design]\nkind = diode\ndonr = NH2\n");
    let xyz = scratch("xyz.design", "[design]\nkind = diode\ndonor = XYZ\nacceptor = NO2\nbridge = CH2\n");
    let xor = scratch("xor.design", "[design]\nkind = xor_gate\n");
    let bad_cfg = scratch("bad.config", "[params]\nbeta = 2\n");
    let ambiguous = scratch("ambiguous.config", "[levels]\nv_high_min = 3\n[model]\nbase_threshold = 2.6\non_conductance = inf\n");
    let and = designs("and_gate.design");
    let cases: Vec<(Vec<&str>, i32, &str)> = vec![
        (vec!["analyze", &typo], 1, "line 3"),
        (vec!["analyze", &xyz], 1, "NH2, OH, CH3, CH2CH3"),
        (vec!["analyze", &xor], 1, "XOR"),
        (vec!["analyze", "/nonexistent.design"], 1, "cannot read"),
        (vec!["analyze", &and, "--config", &bad_cfg], 1, "beta"),
        (vec!["simulate", &and, "--config", &ambiguous], 1, "between the logic thresholds"),
        (vec!["analyze", "--molecule", "c6(("], 1, "E030"),
        (vec!["validate", "--molecule", "C(C)(C)(C)(C)C"], 1, "valence"),
        (vec!["simulate", "--from", "2", "--to", "1", &and], 2, "--from"),
        (vec!["sweep", "--fix", "donor=NO2"], 1, "expected donor"),
        (vec!["sweep", "--fix", "donor=NH2", "--fix", "donor=OH"], 2, "more than once"),
        (vec!["sweep", "--fix", "colour=NH2"], 2, "unknown role"),
        (vec!["frobnicate"], 2, "frobnicate"),
        (vec!["analyze"], 2, "required"),
        (vec!["analyze", &and, "--molecule", "c6"], 2, "cannot be used"),
        (vec!["analyze", &and, "--units", "kelvin"], 2, "kelvin"),
    ];
    for (args, code, needle) in cases {
        let out = run(&args);
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(out.status.code(), Some(code), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error[E"), "{err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn json_reports_are_byte_identical() {
    for cmd in ["analyze", "simulate"] {
        for d in ["and_gate.design", "or_gate.design", "diode.design"] {
            let args = [cmd, &designs(d), "--format", "json", "--units", "ev"];
            let a = run(&args);
            let b = run(&args);
            assert!(a.status.success());
            assert_eq!(a.stdout, b.stdout, "{cmd} {d}");
        }
    }
}

#[test]
fn printed_defaults_are_a_neutral_config() {
    let defaults = run(&["catalog", "--defaults"]);
    assert!(defaults.status.success());
    let cfg = scratch("defaults.config", &String::from_utf8(defaults.stdout).unwrap());
    let and = designs("and_gate.design");
    let with = run(&["simulate", &and, "--format", "json", "--config", &cfg]);
    let without = run(&["simulate", &and, "--format", "json"]);
    assert!(with.status.success());
    assert_eq!(with.stdout, without.stdout);
}

#[test]
fn config_overrides_reach_the_profile() {
    let cfg = scratch("h.config", "[params]\nh.NO2 = 0.6\n[model]\nbase_threshold = 0.5\n");
    let base = json(&["analyze", &designs("diode.design"), "--format", "json"]);
    let moved = json(&["analyze", &designs("diode.design"), "--format", "json", "--config", &cfg]);
    let d0 = base["profile"][0]["delta_e_lumo"].as_f64().unwrap();
    let d1 = moved["profile"][0]["delta_e_lumo"].as_f64().unwrap();
    assert!(d1 > d0, "{d0} {d1}");
    assert_eq!(moved["diode"][0]["forward_threshold"], 0.5);
    assert_eq!(moved["config"]["params"]["heteroatom_table"]["NO2"]["h"], 0.6);
}

#[test]
fn units_flag_selects_energy_scale() {
    let beta = json(&["analyze", "--molecule", "c6", "--format", "json"]);
    let ev = json(&["analyze", "--molecule", "c6", "--format", "json", "--units", "ev"]);
    let e = |v: &Value| v["orbitals"][0]["orbitals"]["energies"][0].as_f64().unwrap();
    assert!((e(&beta) + 2.0).abs() < 1e-9);
    assert!((e(&ev) + 4.8).abs() < 1e-9);
    assert_eq!(beta["units"], "beta");
    assert_eq!(ev["units"], "ev");
}

#[test]
fn benzene_text_table() {
    let out = run(&["analyze", "--molecule", "c6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let energies: Vec<f64> = text
        .lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f.len() == 5 && f[0].parse::<usize>().is_ok()).then(|| f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(energies, [-2.0, -1.0, -1.0, 1.0, 1.0, 2.0]);
}

#[test]
fn diode_simulation_prints_iv_columns() {
    let out = run(&["simulate", &designs("diode.design"), "--from", "-1", "--to", "1", "--steps", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# bias_volts current_amps"));
    let pts: Vec<(f64, f64)> = lines
        .map(|l| {
            let (v, i) = l.split_once(' ').unwrap();
            (v.parse().unwrap(), i.parse().unwrap())
        })
        .collect();
    assert_eq!(pts.len(), 5);
    assert_eq!(pts[0], (-1.0, 0.0));
    assert!(pts[4].1 > 0.0);
}

#[test]
fn validate_and_build() {
    let v = json(&["validate", &designs("and_gate.design"), "--format", "json"]);
    assert_eq!(v["validation"]["violations"].as_array().unwrap().len(), 0);
    assert!(v.get("orbitals").is_none());
    let g = json(&["build", &designs("diode.design"), "--format", "json"]);
    assert_eq!(g["formula"], "C13H12N2O2");
    assert_eq!(g["diodes"].as_array().unwrap().len(), 1);
    let text = run(&["build", "--molecule", "c6"]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("C6H6"));
}

#[test]
fn catalog_listing() {
    let v = json(&["catalog", "--format", "json"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|g| g["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 11);
    assert_eq!(&names[..4], ["NH2", "OH", "CH3", "CH2CH3"]);
}

#[test]
fn help_and_version_succeed() {
    for args in [&["--help"][..], &["--version"], &["sweep", "--help"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(out.stderr.is_empty());
    }
}
