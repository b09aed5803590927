use std::process::{Command, Output};

use krichever_core::geodata::KricheverReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krichever"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn first_flow() {
    let o = run(&["kp", "--n", "1", "--mmax", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "d/dt1 u1 = u1_x");
}

#[test]
fn second_flows() {
    let o = run(&["kp", "--n", "2", "--mmax", "2"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d/dt2 u1 = u1_xx + 2*u2_x");
    assert_eq!(
        lines[1],
        "d/dt2 u2 = a*x^-2*u1_x - 2*a*x^-1*u1_xx - 2*a*x^-1*u2_x + u2_xx + 2*u3_x + 2*u1*u1_x"
    );
}

#[test]
fn classical_kp() {
    let o = run(&["kp", "--final", "--a", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().last().unwrap(),
        "(4*u1_t - u1_xxx - 12*u1*u1_x)_x = 3*u1_yy"
    );
}

#[test]
fn small_truncation_is_a_precision_failure() {
    let o = run(&["kp", "--n", "2", "--mmax", "2", "--trunc-z", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(3));
    assert_eq!(
        run(&["krichever", "circle", "support"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["kp", "--final", "--a", "x"]).status.code(), Some(3));
}

#[test]
fn gamma_coordinates() {
    let text = stdout(&run(&["sato", "gamma", "--alpha", "1", "--beta", "2"]));
    assert!(text.contains("a_{0,1} = -2"), "{text}");
    assert!(text.contains("a_{-1,1} = 0"), "{text}");
    let text = stdout(&run(&["sato", "gamma", "--alpha", "0", "--beta", "1"]));
    assert!(text.contains("a_{-1,1} = -1"), "{text}");
}

#[test]
fn r_operator_report() {
    let o = run(&["sato", "r-op", "--sigma", "2,-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("R V^S = W0: verified (window z^[-12,12])"));
    let o = run(&["sato", "r-op", "--sigma", "1", "--printed"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn quasiregular_witness() {
    let o = run(&["sato", "quasireg", "--alpha", "0", "--beta", "1"]);
    assert_eq!(stdout(&o).trim(), "quasiregular: m = 1, n = 1");
}

#[test]
fn cubic_support_excludes_gap_rows() {
    let o = run(&["krichever", "cubic", "support", "--window", "24", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("match"), "{text}");
    assert!(text.contains("(-1,0),(-10,1),(-19,2)"), "{text}");
}

#[test]
fn quadric_chi_fit() {
    let o = run(&["krichever", "quadric", "chi", "--nmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("a=1 b=-4"));
}

#[test]
fn line_support() {
    let o = run(&["krichever", "line", "support"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("line support: match"));
}

#[test]
fn json_report_round_trips() {
    let o = run(&["--json", "krichever", "cubic", "support"]);
    let text = stdout(&o);
    let report: KricheverReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.support_match, Some(true));
    assert!(report.mismatches.is_empty());
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap(),
        text.trim_end()
    );
}

#[test]
fn seeded_runs_are_identical() {
    let args = [
        "--seed",
        "11",
        "--json",
        "krichever",
        "quadric",
        "stabilizer",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn injected_fault_fails_verification() {
    let o = run(&["--json", "verify", "--inject-fault", "--cases", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 7);
    let failed: Vec<u64> = results
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, vec![3]);
    assert!(results[2]["detail"]
        .as_str()
        .unwrap()
        .contains("elimination failed"));
}
