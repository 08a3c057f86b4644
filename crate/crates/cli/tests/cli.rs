use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subminor")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn dimw_example_one_s6() {
    let o = run(&["dimw", "--b", "0,0,0,0", "--a", "1,1,1,3", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    // 2s³ − 10s² + 13s + 48 at s = 6
    assert_eq!(v["value"], 198);
    assert_eq!(v["all_pass"], true);
}

#[test]
fn empty_locus_is_a_validation_error() {
    let o = run(&["validate", "--b", "0,0,0", "--a", "0,1,2"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_input_is_a_validation_error() {
    assert_eq!(code(&run(&["validate", "--b", "0,0,0", "--a", "2,1,1"])), 1);
    assert_eq!(code(&run(&["validate", "--b", "0,0", "--a", "1,1,1"])), 1);
    assert_eq!(code(&run(&["dimw", "--b", "0,0,0", "--a", "1,1,2", "--prime", "32004"])), 1);
}

#[test]
fn unknown_flags_are_rejected() {
    let o = run(&["hilbert", "--b", "0,0,0", "--a", "1,1,2", "--bogus"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn gn_table_serializes_by_homological_degree() {
    let o = run(&["betti", "--b", "0,0,0", "--a", "1,1,2", "--kind", "gn", "--json"]);
    assert_eq!(code(&o), 0);
    let gn = &json(&o)["tables"]["GN"];
    let ranks: Vec<usize> = (0..5).map(|k| gn[k.to_string()].as_array().unwrap().len()).collect();
    assert_eq!(ranks, [1, 9, 16, 9, 1]);
    assert_eq!(gn["4"][0], 8);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["oracle-check", "--b", "0,0,0", "--a", "1,1,2", "--seed", "7", "--json"];
    let (x, y) = (run(&args), run(&args));
    assert_eq!(code(&x), 0);
    assert_eq!(x.stdout, y.stdout);
    assert!(!x.stdout.is_empty());
}

#[test]
fn repro_example_two_matches() {
    let o = run(&["repro", "--example", "2", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["match"], true);
    assert_eq!(v["certified"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn repro_example_one_s5_matches() {
    let o = run(&["repro", "--example", "1", "--s", "5", "--text"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("MATCH [CERTIFIED]"), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn repro_without_golden_row_fails() {
    assert_ne!(code(&run(&["repro", "--example", "2", "--s", "9"])), 0);
    assert_ne!(code(&run(&["repro", "--example", "4"])), 0);
}
