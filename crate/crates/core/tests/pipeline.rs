//! End-to-end behaviour across modules: generation, intersection, sheaf
//! analysis, scenarios and the campaign.

use std::path::Path;

use proptest::prelude::*;
use secantlab::incidence::{generate_instance, intersect, GeneratorRequest};
use secantlab::scenario::{run_scenario, RunOptions, Scenario, Status};
use secantlab::sheaf::{analyze, AnalyzeOptions, MarkedSubscheme, SheafContext};
use secantlab::stratify::{codim_thom_boardman, Partition, ProjectionParams};
use secantlab::suite::{run_suite, SuiteConfig};
use secantlab::Error;

fn bundled(name: &str) -> Scenario {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn request(n: usize, degrees: &[usize], parts: &[usize], seed: u64) -> GeneratorRequest {
    GeneratorRequest {
        ambient_dim: n,
        codim: degrees.len(),
        degrees: degrees.to_vec(),
        cycle_type: Partition::new(parts.to_vec()).unwrap(),
        seed,
    }
}

#[test]
fn bundled_quadric_scenario_fails_only_where_expected() {
    let r = run_scenario(&bundled("quadric_quartic_line.json"), &RunOptions::default()).unwrap();
    assert!(r.passed);
    let raw_failures: Vec<&str> =
        r.checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.check.as_str()).collect();
    assert_eq!(raw_failures, ["h1_vanishes", "filling"]);
    assert_eq!(r.report.splitting, vec![1, 0, -2]);
}

#[test]
fn bundled_generated_scenario_passes() {
    let r = run_scenario(&bundled("generated_c2_type21.json"), &RunOptions::default()).unwrap();
    assert!(r.passed, "{:#?}", r.checks);
    for name in ["colength", "h1_vanishes", "filling"] {
        let c = r.checks.iter().find(|c| c.check == name).unwrap();
        assert_eq!(c.verdict, Status::Pass, "{name}");
    }
}

#[test]
fn thom_boardman_codim_is_contact_colength() {
    for (seed, parts) in [(1, vec![2, 1]), (2, vec![3]), (3, vec![1, 1, 1]), (4, vec![2, 2])] {
        let k: usize = parts.iter().sum();
        let req = request(5, &[k, k + 1, k], &parts, seed);
        let inst = generate_instance(&req).unwrap();
        let w = MarkedSubscheme::whole(&inst.scheme).unwrap();
        let ctx = SheafContext::with_marked(&inst.variety, &inst.line, inst.scheme.clone(), w).unwrap();
        let r = analyze(&ctx, true, &AnalyzeOptions::default()).unwrap();
        let p = ProjectionParams::new(5, 2, 0).unwrap();
        assert_eq!(codim_thom_boardman(&req.cycle_type, &p), r.colength.computed as i64);
    }
}

#[test]
fn line_inside_variety_is_reported() {
    let s = Scenario::from_json(
        r#"{"variety": {"ambient_dim": 3, "codim": 1, "generators": ["x0*x2 - x1*x3"]},
            "line": {"p": [1, 0, 0, 0], "q": [0, 1, 0, 0]}}"#,
    )
    .unwrap();
    assert_eq!(run_scenario(&s, &RunOptions::default()).unwrap_err(), Error::LineInsideX);
}

#[test]
fn quick_campaign_is_deterministic_and_detects_faults() {
    let cfg = SuiteConfig { quick: true, ..Default::default() };
    let a = serde_json::to_string(&run_suite(&cfg)).unwrap();
    let b = serde_json::to_string(&run_suite(&cfg)).unwrap();
    assert_eq!(a, b);
    assert!(run_suite(&cfg).passed());
    assert!(!run_suite(&SuiteConfig { inject_fault: true, ..cfg }).passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generated_schemes_have_the_requested_type(seed in any::<u64>(), pick in 0usize..7) {
        let parts = Partition::all_of_weight(3)
            .into_iter()
            .chain(Partition::all_of_weight(4))
            .nth(pick)
            .unwrap();
        let k = parts.weight();
        let req = GeneratorRequest {
            ambient_dim: 4,
            codim: 2,
            degrees: vec![k, k],
            cycle_type: parts.clone(),
            seed,
        };
        let inst = generate_instance(&req).unwrap();
        prop_assert_eq!(&inst.scheme.cycle_type, &parts);
        let again = intersect(&inst.variety, &inst.line).unwrap();
        prop_assert_eq!(again.length, k);
        let w = MarkedSubscheme::whole(&inst.scheme).unwrap();
        let ctx = SheafContext::with_marked(&inst.variety, &inst.line, inst.scheme.clone(), w).unwrap();
        let r = analyze(&ctx, false, &AnalyzeOptions { uniformity_points: 2, ..Default::default() }).unwrap();
        prop_assert_eq!(r.colength.computed, k);
        prop_assert_eq!(r.euler_char.computed, 6 - k as i64);
    }
}
