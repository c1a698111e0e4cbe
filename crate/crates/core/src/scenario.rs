//! JSON scenarios: an instance, the sheaf to analyze, and the checks to run
//! on the resulting report.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::incidence::{generate_instance, GeneratedInstance, GeneratorRequest, LineSpec, VarietySpec};
use crate::sheaf::{analyze, AnalyzeOptions, BuildOptions, MarkedSpec, SheafContext, SheafReport};

/// Either explicit generators or a seeded generator request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum VarietySource {
    Generate { generate: GeneratorRequest },
    Inline(VarietySpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenerateJson {
    generate: GeneratorRequest,
}

impl<'de> Deserialize<'de> for VarietySource {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(de)?;
        if value.get("generate").is_some() {
            let g: GenerateJson = serde_json::from_value(value).map_err(D::Error::custom)?;
            Ok(VarietySource::Generate { generate: g.generate })
        } else {
            VarietySpec::deserialize(value).map(VarietySource::Inline).map_err(D::Error::custom)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Colength,
    KernelDim,
    H0Image,
    H0Kernel,
    Euler,
    H1Vanishes,
    Filling,
    Uniformity,
    SplittingNonnegative,
    ExpectedDim,
    SmoothAlong,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::Colength,
        Check::KernelDim,
        Check::H0Image,
        Check::H0Kernel,
        Check::Euler,
        Check::H1Vanishes,
        Check::Filling,
        Check::Uniformity,
        Check::SplittingNonnegative,
        Check::ExpectedDim,
        Check::SmoothAlong,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Colength => "colength",
            Check::KernelDim => "kernel_dim",
            Check::H0Image => "h0_image",
            Check::H0Kernel => "h0_kernel",
            Check::Euler => "euler",
            Check::H1Vanishes => "h1_vanishes",
            Check::Filling => "filling",
            Check::Uniformity => "uniformity",
            Check::SplittingNonnegative => "splitting_nonnegative",
            Check::ExpectedDim => "expected_dim",
            Check::SmoothAlong => "smooth_along",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown check '{s}'")))
    }
}

/// Literal values the report must show. Each present field is checked as
/// `expect.<field>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colength: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_char: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0_image: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filling: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_type: Option<crate::stratify::Partition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub variety: VarietySource,
    /// Required with an inline variety; a generated one brings its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
    /// Omitted means `W = Z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<MarkedSpec>,
    #[serde(default)]
    pub contact: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twists: Vec<i64>,
    /// Empty means every check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect_fail: Vec<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub expect: Expectations,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// The request an inline instance was generated from, kept for reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_from: Option<GeneratorRequest>,
}

fn is_default(e: &Expectations) -> bool {
    *e == Expectations::default()
}

impl Scenario {
    pub fn from_json(src: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(src).map_err(|e| Error::InvalidInput(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if matches!(self.variety, VarietySource::Inline(_)) && self.line.is_none() {
            return Err(Error::InvalidInput("an inline variety needs a line".into()));
        }
        for name in &self.expect_fail {
            if name.strip_prefix("expect.").is_none() {
                name.parse::<Check>()?;
            }
        }
        Ok(())
    }

    /// A self-contained scenario for a generated instance, with every check.
    pub fn from_instance(inst: &GeneratedInstance, req: &GeneratorRequest) -> Self {
        Self {
            name: Some(format!(
                "generated N={} c={} degrees={:?} type={} seed={}",
                req.ambient_dim, req.codim, req.degrees, req.cycle_type, req.seed
            )),
            variety: VarietySource::Inline(inst.variety.clone()),
            line: Some(inst.line.clone()),
            marked: None,
            contact: false,
            twists: Vec::new(),
            checks: Vec::new(),
            expect_fail: Vec::new(),
            expect: Expectations { cycle_type: Some(req.cycle_type.clone()), ..Default::default() },
            output: None,
            generated_from: Some(req.clone()),
        }
    }

    pub fn instance(&self) -> Result<(VarietySpec, LineSpec)> {
        match &self.variety {
            VarietySource::Inline(x) => {
                let line = self.line.clone().ok_or_else(|| Error::InvalidInput("missing line".into()))?;
                Ok((x.clone(), line))
            }
            VarietySource::Generate { generate } => {
                let inst = generate_instance(generate)?;
                Ok((inst.variety, self.line.clone().unwrap_or(inst.line)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    /// Raw outcome of the check.
    pub status: Status,
    pub detail: String,
    pub expected_fail: bool,
    /// `status` after applying `expected_fail`: an expected failure passes,
    /// an unexpected pass fails.
    pub verdict: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub name: Option<String>,
    pub environment: Environment,
    pub report: SheafReport,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

fn outcome(check: String, status: Status, detail: String, expected_fail: bool) -> CheckOutcome {
    let verdict = match (status, expected_fail) {
        (Status::Skipped, _) => Status::Skipped,
        (Status::Pass, false) | (Status::Fail, true) => Status::Pass,
        (Status::Fail, false) | (Status::Pass, true) => Status::Fail,
    };
    CheckOutcome { check, status, detail, expected_fail, verdict }
}

fn compared<T: fmt::Debug>(c: &crate::sheaf::Compared<T>) -> (Status, String) {
    match c.matches {
        Some(true) => (Status::Pass, format!("{:?}", c.computed)),
        Some(false) => (Status::Fail, format!("computed {:?}, predicted {:?}", c.computed, c.predicted)),
        None => (Status::Skipped, format!("computed {:?}, no prediction applies", c.computed)),
    }
}

fn flag(ok: bool, detail: String) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

fn evaluate(check: Check, r: &SheafReport) -> (Status, String) {
    match check {
        Check::Colength => compared(&r.colength),
        Check::KernelDim => compared(&r.kernel_dim),
        Check::H0Image => compared(&r.h0_image),
        Check::H0Kernel => compared(&r.h0_kernel),
        Check::Euler => compared(&r.euler_char),
        Check::H1Vanishes => flag(r.h1 == 0, format!("h1 = {}", r.h1)),
        Check::Filling => flag(r.filling, format!("evaluation at t = {}", r.filling_point)),
        Check::Uniformity => match &r.uniformity {
            Some(u) => flag(u.holds, format!("{} further points, {u:?}", u.points_checked)),
            None => (Status::Skipped, "evaluation not surjective at the first point".into()),
        },
        Check::SplittingNonnegative => {
            flag(r.splitting.iter().all(|&a| a >= 0), format!("splitting {:?}", r.splitting))
        }
        Check::ExpectedDim => match &r.expected_family_dim {
            Some(c) => compared(c),
            None => (Status::Skipped, "only for the contact sheaf with W = Z".into()),
        },
        Check::SmoothAlong => flag(r.smooth_along, format!("smooth along L ∩ X: {}", r.smooth_along)),
    }
}

fn literal<T: PartialEq + fmt::Debug>(want: &Option<T>, got: &T) -> Option<(Status, String)> {
    want.as_ref().map(|w| flag(w == got, format!("expected {w:?}, got {got:?}")))
}

fn expectations(e: &Expectations, r: &SheafReport) -> Vec<(String, (Status, String))> {
    [
        ("colength", literal(&e.colength, &r.colength.computed)),
        ("euler_char", literal(&e.euler_char, &r.euler_char.computed)),
        ("h0_image", literal(&e.h0_image, &r.h0_image.computed)),
        ("h1", literal(&e.h1, &r.h1)),
        ("kernel_dim", literal(&e.kernel_dim, &r.kernel_dim.computed)),
        ("splitting", literal(&e.splitting, &r.splitting)),
        ("filling", literal(&e.filling, &r.filling)),
        ("cycle_type", literal(&e.cycle_type.as_ref().map(ToString::to_string), &r.cycle_type.to_string())),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.map(|v| (format!("expect.{k}"), v)))
    .collect()
}

/// Options that come from the command line rather than the scenario file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    pub expect_fail: Vec<String>,
    pub inject_fault: bool,
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioReport> {
    for name in &opts.expect_fail {
        if name.strip_prefix("expect.").is_none() {
            name.parse::<Check>()?;
        }
    }
    let (x, line) = s.instance()?;
    let ctx = SheafContext::new(&x, &line, s.marked.as_ref())?;
    let aopts = AnalyzeOptions {
        build: BuildOptions { inject_fault: opts.inject_fault },
        seed: opts.seed,
        twists: s.twists.clone(),
        ..Default::default()
    };
    let report = analyze(&ctx, s.contact, &aopts)?;
    let checks: Vec<Check> = if s.checks.is_empty() { Check::ALL.to_vec() } else { s.checks.clone() };
    let mut results: Vec<(String, (Status, String))> =
        checks.iter().map(|&c| (c.name().to_string(), evaluate(c, &report))).collect();
    results.extend(expectations(&s.expect, &report));
    let is_expected_fail = |name: &str| s.expect_fail.iter().chain(&opts.expect_fail).any(|e| e == name);
    let outcomes: Vec<CheckOutcome> = results
        .into_iter()
        .map(|(name, (status, detail))| {
            let ef = is_expected_fail(&name);
            outcome(name, status, detail, ef)
        })
        .collect();
    let passed = outcomes.iter().all(|o| o.verdict != Status::Fail);
    Ok(ScenarioReport {
        name: s.name.clone(),
        environment: Environment { seed: opts.seed, version: env!("CARGO_PKG_VERSION").into() },
        report,
        checks: outcomes,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUADRIC: &str = r#"{
        "variety": {"ambient_dim": 4, "codim": 2, "generators": [
            "x0*x2 + x1*x3 + x4^2",
            "x1^4 - 5*x0^2*x1^2 + 4*x0^4 + x0^3*x4 + 3*x0*x1^2*x2 - 2*x1^3*x3 + x2*x4^3"]},
        "line": {"p": [1, 0, 0, 0, 0], "q": [0, 1, 0, 0, 0]},
        "checks": ["colength", "euler", "h1_vanishes", "filling"],
        "expect_fail": ["h1_vanishes", "filling"],
        "expect": {"colength": 4, "euler_char": 2, "h0_image": 3, "h1": 1}
    }"#;

    #[test]
    fn expected_failures_pass() {
        let s = Scenario::from_json(QUADRIC).unwrap();
        let r = run_scenario(&s, &RunOptions::default()).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
        let h1 = r.checks.iter().find(|c| c.check == "h1_vanishes").unwrap();
        assert_eq!((h1.status, h1.verdict), (Status::Fail, Status::Pass));
        assert_eq!(r.checks.len(), 8);
    }

    #[test]
    fn unexpected_pass_fails() {
        let mut s = Scenario::from_json(QUADRIC).unwrap();
        s.expect_fail.push("colength".into());
        let r = run_scenario(&s, &RunOptions::default()).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = QUADRIC.replacen("\"checks\"", "\"chekcs\"", 1);
        assert!(matches!(Scenario::from_json(&bad), Err(Error::InvalidInput(_))));
        let bad = QUADRIC.replacen("\"colength\": 4", "\"colenght\": 4", 1);
        assert!(Scenario::from_json(&bad).is_err());
        let bad = QUADRIC.replacen("\"filling\"]", "\"filing\"]", 1);
        assert!(Scenario::from_json(&bad).is_err());
    }

    #[test]
    fn inline_variety_needs_line() {
        let src = r#"{"variety": {"ambient_dim": 3, "codim": 1, "generators": ["x0*x1*x2 + x3^3"]}}"#;
        assert!(Scenario::from_json(src).is_err());
    }

    #[test]
    fn generated_round_trip() {
        let req = GeneratorRequest {
            ambient_dim: 4,
            codim: 2,
            degrees: vec![3, 4],
            cycle_type: "(2,1)".parse().unwrap(),
            seed: 7,
        };
        let inst = generate_instance(&req).unwrap();
        let s = Scenario::from_instance(&inst, &req);
        let json = serde_json::to_string_pretty(&s).unwrap();
        let back = Scenario::from_json(&json).unwrap();
        assert_eq!(back, s);
        let r = run_scenario(&back, &RunOptions { seed: 1, ..Default::default() }).unwrap();
        assert!(r.passed, "{:#?}", r.checks);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let s = Scenario::from_json(
            r#"{"variety": {"generate": {"ambient_dim": 4, "codim": 2, "degrees": [3, 4],
                "cycle_type": [2, 1], "seed": 7}}, "contact": true}"#,
        )
        .unwrap();
        let opts = RunOptions { seed: 9, ..Default::default() };
        let a = serde_json::to_string(&run_scenario(&s, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_scenario(&s, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
