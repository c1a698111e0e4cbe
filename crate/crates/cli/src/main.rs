use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use secantlab::incidence::{generate_instance, GeneratorRequest};
use secantlab::nested::nested_table;
use secantlab::scenario::{run_scenario, RunOptions, Scenario, Status};
use secantlab::stratify::{
    codim_thom_boardman, expected_dim_secant, genericity_inequality, planarity_bound,
    projection_table, ExpectedDim, LocusRow, Partition, ProjectionParams, SecantFamilyParams,
};
use secantlab::suite::{run_suite, SuiteConfig, DEFAULT_SEED};

/// Exact secant and contact sheaves of lines meeting projective varieties.
#[derive(Parser)]
#[command(name = "secantlab", version)]
struct Cli {
    /// Master seed.
    #[arg(long, global = true, env = "SECANTLAB_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the result as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and its checks.
    Analyze(AnalyzeArgs),
    /// Generate an instance with a prescribed cycle type as a scenario file.
    Generate(GenerateArgs),
    /// Run the verification campaign.
    VerifySuite(SuiteArgs),
    /// Evaluate the dimension and codimension formulas.
    Formulas(FormulaArgs),
    /// Tabulate nested-pair tangent spaces.
    NestedPairs(NestedArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    scenario: PathBuf,
    /// Treat this check as expected to fail (repeatable).
    #[arg(long, value_name = "CHECK")]
    expect_fail: Vec<String>,
    /// Perturb the condition matrix.
    #[arg(long)]
    inject_fault: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Ambient dimension N.
    #[arg(long = "ambient-dim", short = 'N')]
    ambient_dim: usize,
    /// Codimension c; defaults to the number of degrees.
    #[arg(long)]
    codim: Option<usize>,
    /// Generator degrees, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    /// Target cycle type, e.g. "(2,1)".
    #[arg(long = "cycle-type")]
    cycle_type: Partition,
    /// Write the scenario here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Smaller instance counts.
    #[arg(long)]
    quick: bool,
    /// Perturb the condition matrices; the campaign should then fail.
    #[arg(long)]
    inject_fault: bool,
    /// Exit 0 only if some law fails.
    #[arg(long)]
    expect_fail: bool,
}

#[derive(Args)]
struct FormulaArgs {
    /// Ambient dimension m.
    #[arg(short)]
    m: i64,
    /// Dimension n of X.
    #[arg(short)]
    n: i64,
    /// Dimension of the projection center.
    #[arg(long, short, default_value_t = 0)]
    lambda: i64,
    /// Cycle type for the secant count and the Thom–Boardman codimension.
    #[arg(long, short, default_value = "(2)")]
    partition: Partition,
}

#[derive(Args)]
struct NestedArgs {
    #[arg(long, default_value_t = 10)]
    k_max: usize,
}

enum Failure {
    Input(String),
    Checks,
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Outcome {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).map_err(input)?;
        fs::write(path, text + "\n").map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn analyze(cli: &Cli, args: &AnalyzeArgs) -> Outcome {
    let src = fs::read_to_string(&args.scenario)
        .map_err(|e| input(format!("{}: {e}", args.scenario.display())))?;
    let scenario = Scenario::from_json(&src).map_err(input)?;
    let opts = RunOptions {
        seed: cli.seed,
        expect_fail: args.expect_fail.clone(),
        inject_fault: args.inject_fault,
    };
    let report = run_scenario(&scenario, &opts).map_err(input)?;
    let r = &report.report;
    println!("{}", report.name.as_deref().unwrap_or(&args.scenario.display().to_string()));
    println!(
        "  {} sheaf, Z = V({}) type {}, colength {}, splitting {:?}, h0 {}, h1 {}, filling {}",
        if r.contact { "contact" } else { "secant" },
        r.g,
        r.cycle_type,
        r.colength.computed,
        r.splitting,
        r.h0_image.computed,
        r.h1,
        r.filling
    );
    for c in &report.checks {
        let note = if c.expected_fail { format!(" (expected fail, raw {})", c.status) } else { String::new() };
        println!("{:<8} {:<22} {}{note}", c.verdict, c.check, c.detail);
    }
    let verdict = if report.passed { Status::Pass } else { Status::Fail };
    println!("verdict: {verdict}");
    let path = cli.json.as_deref().or(scenario.output.as_deref());
    write_json(path, &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Outcome {
    let req = GeneratorRequest {
        ambient_dim: args.ambient_dim,
        codim: args.codim.unwrap_or(args.degrees.len()),
        degrees: args.degrees.clone(),
        cycle_type: args.cycle_type.clone(),
        seed: cli.seed,
    };
    let inst = generate_instance(&req).map_err(input)?;
    let scenario = Scenario::from_instance(&inst, &req);
    let text = serde_json::to_string_pretty(&scenario).map_err(input)? + "\n";
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    write_json(cli.json.as_deref(), &scenario)
}

fn verify_suite(cli: &Cli, args: &SuiteArgs) -> Outcome {
    let cfg = SuiteConfig { seed: cli.seed, quick: args.quick, inject_fault: args.inject_fault };
    let report = run_suite(&cfg);
    println!("seed {}{}", cfg.seed, if cfg.quick { " (quick)" } else { "" });
    println!("{:<3} {:<52} {:>9} {:>8} {:>7} {:>9}", "id", "law", "instances", "failures", "skipped", "seconds");
    for l in &report.laws {
        println!(
            "{:<3} {:<52} {:>9} {:>8} {:>7} {:>9.2}  {}",
            l.id,
            l.name,
            l.instances,
            l.failures,
            l.skipped,
            l.elapsed.as_secs_f64(),
            if l.passed() { Status::Pass } else { Status::Fail }
        );
        for e in &l.examples {
            println!("      {e}");
        }
    }
    write_json(cli.json.as_deref(), &report)?;
    if report.passed() != args.expect_fail {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[derive(Serialize)]
struct FormulaReport {
    params: ProjectionParams,
    partition: Partition,
    is_morphism: bool,
    expected_dim_secant: ExpectedDim,
    codim_thom_boardman: i64,
    thom_boardman_empty: bool,
    planarity_bounds: Vec<(i64, String)>,
    genericity_inequality: Option<bool>,
    loci: Vec<LocusRow>,
}

fn formulas(cli: &Cli, args: &FormulaArgs) -> Outcome {
    let p = ProjectionParams::new(args.m, args.n, args.lambda).map_err(input)?;
    if args.partition.weight() == 0 {
        return Err(input("the cycle type must be nonempty"));
    }
    if !p.is_morphism() {
        eprintln!(
            "warning: λ = {} >= c = {}: the projection is not a morphism on X, the loci below are formal",
            p.center,
            p.codim()
        );
    }
    let secant = SecantFamilyParams::lines_in_projective_space(p.ambient, p.codim(), args.partition.clone());
    let tb = codim_thom_boardman(&args.partition, &p);
    let report = FormulaReport {
        params: p,
        partition: args.partition.clone(),
        is_morphism: p.is_morphism(),
        expected_dim_secant: expected_dim_secant(&secant),
        codim_thom_boardman: tb,
        thom_boardman_empty: tb > p.target_dim(),
        planarity_bounds: (1..=3)
            .map(|e| (e, secantlab::exact::fmt_rat(&planarity_bound(p.dim, p.codim(), e))))
            .collect(),
        genericity_inequality: (p.center >= 2).then(|| genericity_inequality(p.dim, p.codim(), p.center)),
        loci: projection_table(&p, p.ambient + 1),
    };
    println!(
        "X^{} in P^{} (c = {}), center of dimension {}, target P^{}",
        p.dim,
        p.ambient,
        p.codim(),
        p.center,
        p.target_dim()
    );
    let e = report.expected_dim_secant;
    println!(
        "expected dimension of {}-secant lines: {}{}",
        args.partition,
        e.value,
        if e.empty { " (empty)" } else { "" }
    );
    println!(
        "Thom–Boardman locus {}: codimension {}{}",
        args.partition,
        tb,
        if report.thom_boardman_empty { " (empty)" } else { "" }
    );
    for (e, b) in &report.planarity_bounds {
        println!("planarity bound e = {e}: λ < {b}");
    }
    if let Some(g) = report.genericity_inequality {
        println!("genericity inequality: {g}");
    }
    println!("{:>3} {:>7} {:>5} {:>6}", "k", "codim", "dim", "empty");
    for row in &report.loci {
        let empty = row.dim.empty || row.line_center_empty;
        println!("{:>3} {:>7} {:>5} {:>6}", row.k, row.codim, row.dim.value, empty);
    }
    write_json(cli.json.as_deref(), &report)
}

fn nested_pairs(cli: &Cli, args: &NestedArgs) -> Outcome {
    if args.k_max < 2 {
        return Err(input("k-max must be at least 2"));
    }
    let rows = nested_table(args.k_max).map_err(input)?;
    println!("{:>3} {:>3} {:>6} {:>8} {:>9}", "d", "k", "dim T", "dim img", "codim T0");
    for r in &rows {
        println!("{:>3} {:>3} {:>6} {:>8} {:>9}", r.d, r.k, r.dim_t, r.dim_image, r.codim_t0);
    }
    write_json(cli.json.as_deref(), &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => analyze(&cli, a),
        Command::Generate(a) => generate(&cli, a),
        Command::VerifySuite(a) => verify_suite(&cli, a),
        Command::Formulas(a) => formulas(&cli, a),
        Command::NestedPairs(a) => nested_pairs(&cli, a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
