use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str], config: &str) -> Output {
    let cfg = dir.join("config.json");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_fermisim"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

const ZERO_MODEL: &str = r#"{"model": {"type": "custom", "n_levels": 2}, "pe": {"work_qubits": 4, "e_max": 0.0, "shots": 500}}"#;

#[test]
fn zero_hamiltonian_histogram_has_one_row() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["phase-est"], ZERO_MODEL);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "histogram.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# config-hash: "));
    assert_eq!(lines[1], "bin,phi,energy,count,probability");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("0,0,"), "{}", lines[2]);
    let meta: serde_json::Value = serde_json::from_str(&read(dir.path(), "histogram.json")).unwrap();
    assert_eq!(meta["config_hash"].as_str().unwrap(), &lines[0]["# config-hash: ".len()..]);
}

#[test]
fn outputs_are_reproducible() {
    let config = r#"{"model": {"type": "pairing", "levels": 2, "d": 0.5, "g": 1.0}, "pe": {"work_qubits": 5, "shots": 2000, "seed": 3}}"#;
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for cmd in ["phase-est", "compile"] {
        assert!(run(a.path(), &[cmd], config).status.success());
        assert!(run(b.path(), &[cmd], config).status.success());
    }
    for file in ["histogram.csv", "histogram.json", "gates.txt"] {
        assert_eq!(read(a.path(), file), read(b.path(), file), "{file}");
    }
    let c = TempDir::new().unwrap();
    assert!(run(c.path(), &["phase-est", "--seed", "4"], config).status.success());
    assert_ne!(read(a.path(), "histogram.csv"), read(c.path(), "histogram.csv"));
}

#[test]
fn empty_model_compiles_to_nothing() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["compile"], ZERO_MODEL);
    assert!(out.status.success());
    let text = read(dir.path(), "gates.txt");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 gates, 0 two-qubit"));
}

#[test]
fn compiled_file_parses_back() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"model": {"type": "hubbard", "sites": 2, "eps": 1.0, "t": 1.0, "u": 2.0}, "compile": {"dt": 0.05, "order": 2}}"#;
    assert!(run(dir.path(), &["compile"], config).status.success());
    let seq = fermisim_core::GateSequence::parse_text(&read(dir.path(), "gates.txt")).unwrap();
    assert_eq!(seq.n_qubits(), 4);
    assert!(seq.counts().zz > 0);
}

#[test]
fn exact_lists_diagonal_energies() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"model": {"type": "custom", "n_levels": 2, "e0": 0.5, "one_body": [[1, 1, 1.0], [2, 2, 3.0]]}}"#;
    assert!(run(dir.path(), &["exact"], config).status.success());
    let csv = read(dir.path(), "eigenvalues.csv");
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows, ["0.5,1", "1.5,1", "3.5,1", "4.5,1"]);
}

#[test]
fn gate_count_table() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"model": {"type": "hubbard", "sites": 1, "eps": 1.0, "t": 1.0, "u": 1.0}, "gate_count": {"qubits": [2, 4, 6]}}"#;
    assert!(run(dir.path(), &["gate-count"], config).status.success());
    let csv = read(dir.path(), "gate_counts.csv");
    let rows: Vec<&str> = csv.lines().skip(2).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("2,"));
}

#[test]
fn scan_flags_the_wrapped_level() {
    let dir = TempDir::new().unwrap();
    let config = r#"{"model": {"type": "custom", "n_levels": 1, "e0": -10.0, "one_body": [[1, 1, 10.0]]},
        "pe": {"work_qubits": 6, "dt": 0.7853981633974483, "e_max": 1.0, "shots": 4000}}"#;
    assert!(run(dir.path(), &["scan"], config).status.success());
    let csv = read(dir.path(), "scan.csv");
    let flags: Vec<(f64, bool)> = csv
        .lines()
        .skip(2)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(flags.len(), 2);
    for (e, aliased) in flags {
        assert_eq!(aliased, (e + 2.0).abs() < 0.2, "{e}");
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let unknown = r#"{"model": {"type": "custom", "n_levels": 2}, "colour": 1}"#;
    assert_eq!(run(dir.path(), &["exact"], unknown).status.code(), Some(2));
    let big = r#"{"model": {"type": "pairing", "levels": 7, "g": 1.0}}"#;
    assert_eq!(run(dir.path(), &["exact"], big).status.code(), Some(3));
    let too_wide = r#"{"model": {"type": "pairing", "levels": 10, "g": 1.0}, "pe": {"work_qubits": 6}}"#;
    let out = run(dir.path(), &["phase-est"], too_wide);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
    let bad_override = Command::new(env!("CARGO_BIN_EXE_fermisim"))
        .args(["exact", "--set", "model.levels=oops", "--config"])
        .arg(dir.path().join("config.json"))
        .output()
        .unwrap();
    assert_eq!(bad_override.status.code(), Some(2));
}
