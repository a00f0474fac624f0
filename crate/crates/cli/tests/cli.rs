use std::path::Path;
use std::process::{Command, Output};

fn entangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no '{key}' in\n{text}")).trim()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn ppt_on_werner_states() {
    let o = entangle(&["ppt", "--werner", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "min eigenvalue:"), "-0.1250000000");
    assert!(field(&text, "verdict:").starts_with("inseparable"));
    assert!(text.contains("caveat:"));

    let text = stdout(&entangle(&["ppt", "--werner", "0.25"]));
    assert!(field(&text, "verdict:").starts_with("separable"));
}

#[test]
fn ppt_on_product_state_file_and_larger_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let product = dir.path().join("product.json");
    write(&product, r#"{"dims": [2, 2], "re": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#);
    let text = stdout(&entangle(&["ppt", "--input", product.to_str().unwrap()]));
    assert!(field(&text, "verdict:").starts_with("separable"));

    let mixed = dir.path().join("mixed33.json");
    let re: Vec<Vec<f64>> = (0..9).map(|i| (0..9).map(|j| if i == j { 1.0 / 9.0 } else { 0.0 }).collect()).collect();
    write(&mixed, &serde_json::json!({ "dims": [3, 3], "re": re }).to_string());
    let text = stdout(&entangle(&["ppt", "--input", mixed.to_str().unwrap()]));
    assert!(field(&text, "verdict:").starts_with("inconclusive"));
}

#[test]
fn json_output_round_trips_through_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let o = entangle(&["ppt", "--gisin", "0.6,1,1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let first = stdout(&entangle(&["chsh", "--gisin", "0.6,1,1"]));
    let again = stdout(&entangle(&["chsh", "--input", path.to_str().unwrap()]));
    assert_eq!(first, again);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["ppt"]["is_ppt"], false);
}

#[test]
fn entropy_and_chsh() {
    let text = stdout(&entangle(&["entropy", "--werner", "0.2"]));
    assert_eq!(field(&text, "purity:"), "0.2800000000");
    assert!(field(&text, "verdict:").starts_with("no violation"));
    let text = stdout(&entangle(&["chsh", "--werner", "1"]));
    assert_eq!(field(&text, "chsh_max:"), "2.8284271247");
    let text = stdout(&entangle(&["chsh", "--polarized", "0.75"]));
    assert_eq!(field(&text, "violates CHSH:"), "true");
}

#[test]
fn scan_rows() {
    let o = entangle(&["scan", "--n", "1", "--x", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,x,strategy,chsh_max,success_probability\n1,0.5000000000,xor,1.4142135624,1.0000000000\n");

    let text = stdout(&entangle(&["scan", "--n", "5", "--x", "0.5", "--strategy", "xor"]));
    let value: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((value - 2.0008732305).abs() < 1e-9);

    let o = entangle(&["scan", "--n", "1,2", "--x", "0:1:0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,x,strategy,chsh_max,success_probability\n");
}

#[test]
fn scan_is_sorted_and_reproducible() {
    let args = ["scan", "--n", "3,2", "--x", "0.7,0.5", "--restarts", "3", "--seed", "5"];
    let a = entangle(&args);
    let b = entangle(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let keys: Vec<String> =
        stdout(&a).lines().skip(1).map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(keys, ["2,0.5000000000", "2,0.7000000000", "3,0.5000000000", "3,0.7000000000"]);
    assert!(stdout(&a).lines().nth(4).unwrap().contains("controlled_hadamard"));
}

#[test]
fn collective_strategies() {
    let text = stdout(&entangle(&["collective", "--werner", "0.7", "--n", "3", "--strategy", "chad"]));
    assert_eq!(field(&text, "chsh_max:"), "2.4087345128");
    let text =
        stdout(&entangle(&["collective", "--werner", "0.7", "--n", "2", "--strategy", "optimize", "--restarts", "4"]));
    let xor = stdout(&entangle(&["collective", "--werner", "0.7", "--n", "2"]));
    let best: f64 = field(&text, "chsh_max:").parse().unwrap();
    let base: f64 = field(&xor, "chsh_max:").parse().unwrap();
    assert!((best - base).abs() < 1e-6);
    assert!(text.contains("distinct local maxima"));
}

#[test]
fn examples_table() {
    let o = entangle(&["examples"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert_eq!(text.lines().filter(|l| l.starts_with("NOTE")).count(), 5);
    let csv = stdout(&entangle(&["examples", "--format", "csv"]));
    assert!(csv.starts_with("claim,reference,computed,status\n"));
    assert!(csv.contains("\"Gisin PPT threshold, |ab| = 0.5\",0.5000000000,"));
}

#[test]
fn exit_codes() {
    assert_eq!(entangle(&["ppt", "--werner", "1.5"]).status.code(), Some(1));
    assert_eq!(entangle(&["ppt", "--werner", "0.5", "--polarized", "0.5"]).status.code(), Some(1));
    assert_eq!(entangle(&["ppt", "--input", "/nonexistent/state.json"]).status.code(), Some(1));
    assert_eq!(entangle(&["scan", "--n", "1", "--x", "0:1"]).status.code(), Some(1));
    assert_eq!(entangle(&["collective", "--werner", "0.5", "--n", "2", "--strategy", "chad"]).status.code(), Some(1));
    assert_eq!(entangle(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"dims": [2, 2], "re": [[0.9,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#);
    let o = entangle(&["ppt", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("trace"));

    // |-><-| (x) I/2 on Alice's side has no weight on either controlled-Hadamard row
    let minus = dir.path().join("minus.json");
    write(&minus, r#"{"dims": [2, 2], "re": [[0.25,0,-0.25,0],[0,0.25,0,-0.25],[-0.25,0,0.25,0],[0,-0.25,0,0.25]]}"#);
    let o = entangle(&["collective", "--input", minus.to_str().unwrap(), "--n", "3", "--strategy", "chad"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
