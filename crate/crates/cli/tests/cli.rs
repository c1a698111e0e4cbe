use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_secantlab"));
    cmd.env_remove("SECANTLAB_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn quadric_scenario_passes_with_expected_failure() {
    let o = run(&["analyze", scenario("quadric_quartic_line.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let h1 = out.lines().find(|l| l.contains("h1_vanishes")).unwrap();
    assert!(h1.contains("h1 = 1") && h1.contains("raw FAIL"), "{h1}");
}

#[test]
fn generated_scenario_passes() {
    let o = run(&["analyze", scenario("generated_c2_type21.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for check in ["colength", "h1_vanishes", "filling"] {
        assert!(stdout(&o).lines().any(|l| l.starts_with("PASS") && l.contains(check)));
    }
}

#[test]
fn failing_check_exits_one() {
    let path = scenario("quadric_quartic_line.json");
    let o = run(&["analyze", path.to_str().unwrap(), "--expect-fail", "colength"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["analyze", "/nonexistent/scenario.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"variety": {"ambient_dim": 3, "codim": 1, "generators": ["x0*x1 +"]}, "line": {"p": [1,0,0,0], "q": [0,1,0,0]}}"#).unwrap();
    let o = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    std::fs::write(&bad, r#"{"variety": {"ambient_dim": 3, "codim": 1, "generators": ["x0*x2"]}, "line": {"p": [1,0,0,0], "q": [0,1,0,0]}}"#).unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, r#"{"variety": {"generate": {"ambient_dim": 4, "codim": 2, "degrees": [3, 4], "cycle_type": [2, 1], "seed": 7}}, "colour": 1}"#).unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let o = run(&["generate", "-N", "4", "--degrees", "3,4", "--cycle-type", "(2,1)", "--seed", "7", "-o", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report = dir.path().join("report.json");
    let o = run(&["analyze", a.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["report"]["colength"]["computed"], 3);
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["generate", "-N", "4", "--degrees", "3,4", "--cycle-type", "(2,1)"];
    let env = bin().args(args).env("SECANTLAB_SEED", "7").output().unwrap();
    let flag = run(&[&args[..], &["--seed", "7"]].concat());
    assert_eq!(env.stdout, flag.stdout);
    let other = run(&[&args[..], &["--seed", "8"]].concat());
    assert_ne!(env.stdout, other.stdout);
}

#[test]
fn impossible_generation_exits_two() {
    let o = run(&["generate", "-N", "4", "--degrees", "2,4", "--cycle-type", "(9)", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn formulas_report_threefold_projections() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.json");
    let o = run(&["formulas", "-m", "7", "-n", "3", "--lambda", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let loci = json["loci"].as_array().unwrap();
    assert_eq!(loci[1]["dim"]["value"], 1);
    assert_eq!(loci[2]["dim"]["empty"], true);

    let o = run(&["formulas", "-m", "6", "-n", "3", "--lambda", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(json["loci"][3]["dim"]["value"], 0);
}

#[test]
fn formulas_validate_parameters() {
    assert_eq!(run(&["formulas", "-m", "3", "-n", "3"]).status.code(), Some(2));
    let o = run(&["formulas", "-m", "5", "-n", "3", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a morphism"));
}

#[test]
fn nested_pairs_table() {
    let o = run(&["nested-pairs", "--k-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
}

#[test]
fn injected_fault_is_detected() {
    let o = run(&["verify-suite", "--quick", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    let o = run(&["verify-suite", "--quick", "--inject-fault", "--expect-fail"]);
    assert_eq!(o.status.code(), Some(0));
}
