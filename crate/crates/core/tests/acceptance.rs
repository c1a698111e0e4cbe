//! Acceptance criteria, one PASS/FAIL line each. All comparisons are exact.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use secantlab::scenario::{run_scenario, RunOptions, Scenario};
use secantlab::suite::{run_suite, LawResult, SuiteConfig};

struct Criterion {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn from_law(id: usize, name: &'static str, law: &LawResult, min: usize, limit: Option<Duration>) -> Criterion {
    let in_time = limit.is_none_or(|l| law.elapsed < l);
    let ok = law.passed() && law.instances >= min && law.skipped == 0 && in_time;
    let limit = limit.map_or(String::new(), |l| format!(" (limit {}s)", l.as_secs()));
    Criterion {
        id,
        name,
        ok,
        detail: format!(
            "{} instances, {} failures, {} skipped, {:.2}s{limit}",
            law.instances,
            law.failures,
            law.skipped,
            law.elapsed.as_secs_f64()
        ),
    }
}

fn bundled_control() -> (bool, String, Duration) {
    let clock = Instant::now();
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/quadric_quartic_line.json");
    let result = std::fs::read_to_string(&path)
        .map_err(|e| e.to_string())
        .and_then(|src| Scenario::from_json(&src).map_err(|e| e.to_string()))
        .and_then(|s| run_scenario(&s, &RunOptions::default()).map_err(|e| e.to_string()));
    let (ok, detail) = match result {
        Ok(r) => {
            let rep = &r.report;
            let h1 = r.checks.iter().find(|c| c.check == "h1_vanishes");
            let ok = r.passed
                && rep.colength.computed == 4
                && rep.euler_char.computed == 2
                && rep.h0_image.computed == 3
                && rep.h1 == 1
                && !rep.filling
                && h1.is_some_and(|c| c.expected_fail);
            let detail = format!(
                "bundled scenario: colength {}, χ {}, h0 {}, h1 {}, filling {}",
                rep.colength.computed, rep.euler_char.computed, rep.h0_image.computed, rep.h1, rep.filling
            );
            (ok, detail)
        }
        Err(e) => (false, e),
    };
    (ok, detail, clock.elapsed())
}

fn main() -> ExitCode {
    let report = run_suite(&SuiteConfig::default());
    let law = |id: usize| report.laws.iter().find(|l| l.id == id).expect("every law runs");
    let secs = Duration::from_secs;

    let mut criteria = vec![
        from_law(1, "nested-pair laws", law(1), 45, Some(secs(5))),
        from_law(2, "colength laws", law(2), 200, Some(secs(180))),
        from_law(3, "excess laws", law(3), 100, Some(secs(180))),
        from_law(4, "uniformity principle", law(4), 1, None),
    ];
    let mut control = from_law(5, "negative control", law(5), 1, Some(secs(10)));
    let (ok, detail, elapsed) = bundled_control();
    control.ok &= ok && elapsed < secs(10);
    control.detail = format!("{}; {detail}", control.detail);
    criteria.push(control);
    criteria.push(from_law(6, "consistency identity", law(6), 1, Some(secs(10))));
    criteria.push(from_law(7, "formula calculators", law(7), 1, Some(secs(5))));
    criteria.push(from_law(8, "cycle-type oracle", law(8), 100, Some(secs(5))));

    for c in &criteria {
        println!("{} [{}] {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
        for l in report.laws.iter().filter(|l| l.id == c.id) {
            for e in &l.examples {
                println!("       {e}");
            }
        }
    }
    let failed = criteria.iter().filter(|c| !c.ok).count();
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
