//! The verification campaign: eight laws, each checked exactly over
//! exhaustive sweeps or seeded random instances.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvilinear::{construct_form, cycle_type, Block};
use crate::exact::{rat, BinForm, Rat};
use crate::incidence::{generate_instance, GeneratedInstance, GeneratorRequest, LineSpec, VarietySpec};
use crate::nested::tangent_space;
use crate::sheaf::{analyze, AnalyzeOptions, BuildOptions, MarkedSubscheme, SheafContext, SheafReport};
use crate::stratify::{
    codim_planar, expected_dim_secant, genericity_inequality, line_projection_locus_empty,
    planarity_bound, Partition, ProjectionParams, SecantFamilyParams,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub quick: bool,
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, quick: false, inject_fault: false }
    }
}

impl SuiteConfig {
    fn colength_instances(&self) -> usize {
        if self.quick { 60 } else { 240 }
    }

    fn excess_instances(&self) -> usize {
        if self.quick { 40 } else { 120 }
    }

    fn build(&self) -> BuildOptions {
        BuildOptions { inject_fault: self.inject_fault }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub id: usize,
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    /// Instances that could not be set up (generation gave up).
    pub skipped: usize,
    /// The first few failures, for diagnosis.
    pub examples: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub quick: bool,
    pub inject_fault: bool,
    pub laws: Vec<LawResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawResult::passed)
    }
}

/// Collects per-instance verdicts into a [`LawResult`].
struct Tally {
    id: usize,
    name: &'static str,
    instances: usize,
    failures: usize,
    skipped: usize,
    examples: Vec<String>,
    start: Instant,
}

impl Tally {
    fn new(id: usize, name: &'static str) -> Self {
        Self { id, name, instances: 0, failures: 0, skipped: 0, examples: Vec::new(), start: Instant::now() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    fn finish(self) -> LawResult {
        LawResult {
            id: self.id,
            name: self.name.into(),
            instances: self.instances,
            failures: self.failures,
            skipped: self.skipped,
            examples: self.examples,
            elapsed: self.start.elapsed(),
        }
    }
}

pub fn law_nested_pairs() -> LawResult {
    let mut t = Tally::new(1, "nested pairs");
    for k in 2..=10 {
        for d in 1..k {
            let ok = tangent_space(d, k).is_ok_and(|ts| {
                let t0 = crate::nested::t0_subspace(d, k).expect("valid dims");
                ts.dim() == k
                    && ts.image_basis().len() == d.max(k - d)
                    && ts.dim() - t0.dim() == d - 1
                    && ts.projection_to_vd_rank() == d
            });
            t.check(ok, || format!("d={d}, k={k}"));
        }
    }
    t.finish()
}

/// A random generator request with weight at most 5.
fn sample_request(rng: &mut ChaCha8Rng, min_weight: usize) -> GeneratorRequest {
    let n = rng.gen_range(3..=6);
    let c = rng.gen_range(2..n);
    let k = rng.gen_range(min_weight..=5);
    let parts = Partition::all_of_weight(k);
    let target = parts.choose(rng).expect("k >= 1").clone();
    let mut degrees: Vec<usize> = (0..c).map(|_| k + rng.gen_range(0..=1)).collect();
    // sometimes one generator vanishes on L
    if k >= 2 && rng.gen_bool(0.2) {
        let j = rng.gen_range(0..c);
        let carriers: Vec<usize> =
            degrees.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &d)| d).collect();
        if carriers.len() >= 2 || carriers == [k] {
            degrees[j] = k - 1;
        }
    }
    GeneratorRequest { ambient_dim: n, codim: c, degrees, cycle_type: target, seed: rng.gen() }
}

fn whole_context(inst: &GeneratedInstance) -> SheafContext {
    let w = MarkedSubscheme::whole(&inst.scheme).expect("g divides g");
    SheafContext::with_marked(&inst.variety, &inst.line, inst.scheme.clone(), w)
        .expect("generated instances are well formed")
}

/// Outcome of one analyzed instance: secant and contact reports.
struct Analyzed {
    label: String,
    req: GeneratorRequest,
    scheme_type: Partition,
    secant: crate::Result<SheafReport>,
    contact: crate::Result<SheafReport>,
    marked_degree: usize,
    marked_support: usize,
    overlap: usize,
}

fn label(req: &GeneratorRequest) -> String {
    format!(
        "N={} c={} degrees={:?} type={} seed={}",
        req.ambient_dim, req.codim, req.degrees, req.cycle_type, req.seed
    )
}

fn run_colength_instances(cfg: &SuiteConfig) -> (Vec<Analyzed>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC0_1E_46);
    let reqs: Vec<GeneratorRequest> =
        (0..cfg.colength_instances()).map(|_| sample_request(&mut rng, 1)).collect();
    let results: Vec<Option<Analyzed>> = reqs
        .into_par_iter()
        .enumerate()
        .map(|(i, req)| {
            let inst = generate_instance(&req).ok()?;
            let ctx = whole_context(&inst);
            let opts = AnalyzeOptions { build: cfg.build(), seed: cfg.seed.wrapping_add(i as u64), ..Default::default() };
            Some(Analyzed {
                label: label(&req),
                scheme_type: inst.scheme.cycle_type.clone(),
                secant: analyze(&ctx, false, &opts),
                contact: analyze(&ctx, true, &opts),
                marked_degree: inst.scheme.length,
                marked_support: inst.scheme.support(),
                overlap: 0,
                req,
            })
        })
        .collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    (results.into_iter().flatten().collect(), skipped)
}

fn run_excess_instances(cfg: &SuiteConfig) -> (Vec<Analyzed>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xE8_CE_55);
    let reqs: Vec<(GeneratorRequest, u64)> = (0..cfg.excess_instances())
        .map(|_| (sample_request(&mut rng, 2), rng.gen()))
        .collect();
    let results: Vec<Option<Analyzed>> = reqs
        .into_par_iter()
        .enumerate()
        .map(|(i, (req, wseed))| {
            let inst = generate_instance(&req).ok()?;
            let (w, _) = proper_marking(&inst.roots, wseed);
            let marked = MarkedSubscheme::from_divisor(&inst.scheme, w).ok()?;
            let (d, supp, overlap) = (marked.degree(), marked.support(), marked.overlap());
            let ctx = SheafContext::with_marked(&inst.variety, &inst.line, inst.scheme.clone(), marked).ok()?;
            let opts = AnalyzeOptions { build: cfg.build(), seed: cfg.seed.wrapping_add(i as u64), ..Default::default() };
            Some(Analyzed {
                label: label(&req),
                scheme_type: inst.scheme.cycle_type.clone(),
                secant: analyze(&ctx, false, &opts),
                contact: analyze(&ctx, true, &opts),
                marked_degree: d,
                marked_support: supp,
                overlap,
                req,
            })
        })
        .collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    (results.into_iter().flatten().collect(), skipped)
}

/// Random `0 <= d_i <= k_i` with `0 < Σ d_i < Σ k_i`; `w = Π (t - a_i s)^d_i`.
pub fn proper_marking(roots: &[(Rat, usize)], seed: u64) -> (BinForm, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k: usize = roots.iter().map(|(_, m)| m).sum();
    loop {
        let ds: Vec<usize> = roots.iter().map(|(_, m)| rng.gen_range(0..=*m)).collect();
        let d: usize = ds.iter().sum();
        if d == 0 || d == k {
            continue;
        }
        let w = roots
            .iter()
            .zip(&ds)
            .fold(BinForm::one(), |acc, ((a, _), &di)| acc.mul(&BinForm::root_factor(a).pow(di)));
        return (w, ds);
    }
}

fn law_colength(runs: &[Analyzed], skipped: usize) -> LawResult {
    let mut t = Tally::new(2, "colength (secant k(c-1), contact kc-r)");
    t.skipped = skipped;
    for a in runs {
        let k = a.scheme_type.weight();
        let r = a.scheme_type.blocks();
        let c = a.req.codim;
        let sec = a.secant.as_ref().map(|x| x.colength.computed);
        let con = a.contact.as_ref().map(|x| x.colength.computed);
        let ok = sec == Ok(k * (c - 1)) && con == Ok(k * c - r);
        t.check(ok, || format!("{}: secant {sec:?} contact {con:?}", a.label));
    }
    t.finish()
}

fn law_excess(runs: &[Analyzed], skipped: usize) -> LawResult {
    let mut t = Tally::new(3, "excess (colength, kernel, h0 with h1 = 0)");
    t.skipped = skipped;
    for a in runs {
        let nn = a.req.ambient_dim - 1;
        let c = a.req.codim;
        let d = a.marked_degree;
        let ok = match (&a.secant, &a.contact) {
            (Ok(s), Ok(ct)) => {
                let sec_ok = s.colength.computed == (c - 1) * d + a.overlap
                    && s.kernel_dim.computed == a.overlap
                    && (s.h1 != 0 || s.h0_kernel.computed == (2 * nn) as i64 - ((c - 1) * d) as i64);
                let con_ok = ct.colength.matches == Some(true)
                    && ct.kernel_dim.matches == Some(true)
                    && (ct.h1 != 0 || ct.h0_kernel.computed + (c * d) as i64 == (2 * nn + a.marked_support) as i64);
                sec_ok && con_ok
            }
            _ => false,
        };
        t.check(ok, || {
            format!(
                "{} d={d}: secant {:?} contact {:?}",
                a.label,
                a.secant.as_ref().map(|s| (s.colength.computed, s.kernel_dim.computed, s.h1, s.h0_kernel.computed)),
                a.contact.as_ref().map(|s| (s.colength.computed, s.kernel_dim.computed, s.h1, s.h0_kernel.computed)),
            )
        });
    }
    t.finish()
}

fn law_uniformity(runs: &[&Analyzed]) -> LawResult {
    let mut t = Tally::new(4, "uniformity (one surjective point forces a_i >= 0)");
    for a in runs {
        for rep in [&a.secant, &a.contact].into_iter().flatten() {
            if let Some(u) = &rep.uniformity {
                t.check(u.holds && u.points_checked >= 20, || format!("{}: {u:?}", a.label));
            }
        }
    }
    t.finish()
}

/// `X = V(Q, F) ⊂ P⁴` with `Q = x0 x2 + x1 x3 + x4²` and a quartic `F`,
/// `L = span(e_0, e_1)` inside the quadric.
pub fn quadric_line_control() -> (VarietySpec, LineSpec) {
    let x = VarietySpec::parse(
        4,
        2,
        &[
            "x0*x2 + x1*x3 + x4^2".into(),
            "x1^4 - 5*x0^2*x1^2 + 4*x0^4 + x0^3*x4 + 3*x0*x1^2*x2 - 2*x1^3*x3 + x2*x4^3".into(),
        ],
    )
    .expect("valid control");
    (x, LineSpec::coordinate(4))
}

pub fn law_negative_control(cfg: &SuiteConfig) -> LawResult {
    let mut t = Tally::new(5, "quadric-line negative control");
    let (x, l) = quadric_line_control();
    let opts = AnalyzeOptions { build: cfg.build(), seed: cfg.seed, ..Default::default() };
    let rep = SheafContext::new(&x, &l, None).and_then(|ctx| analyze(&ctx, false, &opts));
    let ok = rep.as_ref().is_ok_and(|r| {
        r.colength.computed == 4
            && r.euler_char.computed == 2
            && r.euler_char.predicted == Some(2)
            && r.h0_image.computed == 3
            && r.h1 == 1
            && !r.filling
            // lines in a smooth quadric threefold: a 3-dimensional family
            && r.h0_image.computed == 2 * 2 - 1
    });
    t.check(ok, || format!("{:?}", rep.map(|r| (r.colength.computed, r.h0_image.computed, r.h1, r.filling))));
    t.finish()
}

fn law_consistency(runs: &[Analyzed]) -> LawResult {
    let mut t = Tally::new(6, "expected dimension = 2N-2 - contact colength");
    for n in 2..=10i64 {
        for c in 1..n {
            for k in 0..=6 {
                for kt in Partition::all_of_weight(k) {
                    let r = kt.blocks() as i64;
                    let p = SecantFamilyParams::lines_in_projective_space(n, c, kt);
                    let ok = expected_dim_secant(&p).value == (2 * n - 2) - (k as i64 * c - r);
                    t.check(ok, || format!("N={n} c={c} k={k}"));
                }
            }
        }
    }
    for a in runs {
        let ok = a.contact.as_ref().is_ok_and(|r| {
            r.expected_family_dim.as_ref().is_some_and(|e| e.matches == Some(true))
        });
        t.check(ok, || a.label.clone());
    }
    t.finish()
}

pub fn law_formulas() -> LawResult {
    let mut t = Tally::new(7, "projection formula calculators");
    for n in 1..=6 {
        for c in 1..=20 {
            t.check(planarity_bound(n, c, 2) == rat(c), || format!("planarity n={n} c={c}"));
        }
    }
    for n in 1..=20i64 {
        for c in 1..=20i64 {
            for lambda in 2..c {
                let threshold = rat(c + 2) - Rat::new(n.into(), 3.into());
                let ok = genericity_inequality(n, c, lambda) == (rat(lambda) < threshold);
                t.check(ok, || format!("genericity n={n} c={c} λ={lambda}"));
            }
        }
    }
    for m in 3..=20i64 {
        for n in 1..m - 1 {
            let Ok(p) = ProjectionParams::new(m, n, 1) else { continue };
            for k in 1..=12 {
                // the locus is empty once its codimension exceeds the target dimension
                let ok = line_projection_locus_empty(k, &p)
                    == (codim_planar(k, &p) > p.target_dim());
                t.check(ok, || format!("emptiness m={m} n={n} k={k}"));
            }
        }
    }
    t.finish()
}

pub fn law_cycle_types(seed: u64) -> LawResult {
    let mut t = Tally::new(8, "cycle-type oracle on constructed forms");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC7_C1E);
    let squarefree_free: [i64; 6] = [2, 3, 5, 6, 7, -1];
    for _ in 0..100 {
        let mut roots: Vec<i64> = (-6..=6).collect();
        roots.shuffle(&mut rng);
        let mut quads = squarefree_free.to_vec();
        quads.shuffle(&mut rng);
        let mut blocks: Vec<(Block, usize)> = Vec::new();
        for &a in roots.iter().take(rng.gen_range(0..=3)) {
            blocks.push((Block::Linear(Rat::new(a.into(), rng.gen_range(1i64..=3).into())), rng.gen_range(1..=4)));
        }
        for &n in quads.iter().take(rng.gen_range(1..=2)) {
            blocks.push((Block::Quadratic(rat(n)), rng.gen_range(1..=3)));
        }
        if rng.gen_bool(0.3) {
            blocks.push((Block::Infinity, rng.gen_range(1..=3)));
        }
        // distinct rational roots may coincide after reduction; keep the first
        let mut seen: Vec<Block> = Vec::new();
        blocks.retain(|(b, _)| {
            let fresh = !seen.contains(b);
            seen.push(b.clone());
            fresh
        });
        let unit = Rat::new(rng.gen_range(1i64..=9).into(), rng.gen_range(1i64..=5).into());
        let c = construct_form(&unit, &blocks);
        let got = cycle_type(&c.form);
        t.check(got.as_ref() == Ok(&c.cycle_type), || format!("{blocks:?}: {got:?} vs {}", c.cycle_type));
    }
    t.finish()
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let nested = law_nested_pairs();
    let clock = Instant::now();
    let (col_runs, col_skipped) = run_colength_instances(cfg);
    let col_time = clock.elapsed();
    let mut colength = law_colength(&col_runs, col_skipped);
    colength.elapsed += col_time;
    let clock = Instant::now();
    let (exc_runs, exc_skipped) = run_excess_instances(cfg);
    let mut excess = law_excess(&exc_runs, exc_skipped);
    excess.elapsed += clock.elapsed();
    let all: Vec<&Analyzed> = col_runs.iter().chain(&exc_runs).collect();
    let uniformity = law_uniformity(&all);
    let control = law_negative_control(cfg);
    let consistency = law_consistency(&col_runs);
    let formulas = law_formulas();
    let cycles = law_cycle_types(cfg.seed);
    SuiteReport {
        seed: cfg.seed,
        quick: cfg.quick,
        inject_fault: cfg.inject_fault,
        laws: vec![nested, colength, excess, uniformity, control, consistency, formulas, cycles],
    }
}
