use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use claw_mwis::analysis::{
    classify, compute_charges, compute_contributions, verify_charge_bound, verify_constants, Label,
    LemmaStatus, Verdict,
};
use claw_mwis::generators::{
    berman_tight, clique_union, random_claw_free, random_clique_union, random_set_packing,
    SampleOutcome, WeightRange,
};
use claw_mwis::oracle::{
    exact_mwis, exhaustive_claw_improvement_with_limits, exhaustive_improvement_with_limits,
    OracleLimits,
};
use claw_mwis::scaling::{solve_scaled, ScalingConfig};
use claw_mwis::search::default_size_bound;
use claw_mwis::setpacking::SetSystem;
use claw_mwis::{
    format_weight, greedy, parse_weight, run_local_search, Error, PivotRule, ProblemInstance,
    SearchConfig, Solution, Strategy, VertexSet, Weight,
};
use num_traits::Zero;
use serde::Serialize;

use crate::format::{
    parse_document, parse_set_system, write_graph, write_set_system, Annotations, Document,
};
use crate::record::{CertificateStatus, ConfigEcho, ExactValue, InstanceInfo, RunRecord};

#[derive(Debug, Parser)]
#[command(
    name = "claw-mwis",
    version,
    about = "Local improvement for weighted independent set in d-claw free graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a solver and print a JSON run record.
    Solve(SolveArgs),
    /// Solve exactly by branch and bound (small instances only).
    Oracle(OracleArgs),
    /// Check a solution for improvements by exhaustive enumeration.
    VerifyLocalOpt(VerifyArgs),
    /// Charges, contributions and vertex classification against the optimum.
    Analyze(AnalyzeArgs),
    /// Verify the analysis constants in exact arithmetic.
    CheckConstants(ConstantsArgs),
    /// Convert a set system into its conflict graph.
    Reduce(ReduceArgs),
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run several algorithms over a seeded instance family and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Squareimp,
    Bounded,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::Squareimp => "squareimp",
            Algorithm::Bounded => "bounded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pivot {
    First,
    Best,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WarmStart {
    Empty,
    ASide,
    File,
}

#[derive(Clone, Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = Algorithm::Bounded)]
    algorithm: Algorithm,
    /// Largest improvement considered; defaults to (d-1)^2 + (d-1).
    #[arg(long)]
    size_bound: Option<usize>,
    #[arg(long, value_enum, default_value_t = Pivot::First)]
    pivot: Pivot,
    /// Scale-and-truncate constant N > 1 (rational).
    #[arg(long = "scale-N", visible_alias = "scale-n")]
    scale_n: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    max_iterations: u64,
    /// Worker threads for the bounded search; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Attach the ratio against the exact optimum.
    #[arg(long)]
    oracle: bool,
    /// Record wall-clock time (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    input: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long, value_enum, default_value_t = WarmStart::Empty)]
    warm_start: WarmStart,
    /// Whitespace-separated vertex ids for `--warm-start file`.
    #[arg(long)]
    warm_file: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolutionSource {
    /// JSON run record produced by `solve`.
    #[arg(long, conflicts_with = "set")]
    record: Option<PathBuf>,
    /// Vertex ids separated by commas or spaces.
    #[arg(long)]
    set: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    input: PathBuf,
    #[command(flatten)]
    solution: SolutionSource,
    /// Defaults to the record's size bound, else (d-1)^2 + (d-1).
    #[arg(long)]
    size_bound: Option<usize>,
    /// Only look for improving claws.
    #[arg(long)]
    claw: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[command(flatten)]
    solution: SolutionSource,
    #[arg(long, default_value = "1/5308416")]
    epsilon: String,
    #[arg(long, default_value = "1/6")]
    delta: String,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long, default_value = "1/5308416")]
    epsilon: String,
    #[arg(long, default_value = "1/6")]
    delta: String,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Check every d from `--d` up to this value.
    #[arg(long)]
    d_max: Option<usize>,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
struct WeightArgs {
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 1)]
    wmax: u64,
    /// Weights are m / wden with m drawn from wmin..=wmax.
    #[arg(long, default_value_t = 1)]
    wden: u64,
}

impl WeightArgs {
    fn range(&self) -> WeightRange {
        WeightRange {
            min: self.wmin,
            max: self.wmax,
            denominator: self.wden,
        }
    }
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// The bipartite instance with A = {1..d-1} and B = singletons and pairs.
    Tight {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "1")]
        weight: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random weighted k-set system.
    Setpack {
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        weights: WeightArgs,
        /// Emit the conflict graph instead of the set system.
        #[arg(long)]
        graph: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disjoint union of cliques (d = 2).
    Cliques {
        /// Comma-separated clique sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rejection-sampled G(n, p) graph that is d-claw free.
    Clawfree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: usize,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Setpack,
    Cliques,
    Clawfree,
    Tight,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Instance i is generated from seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "greedy,squareimp,bounded"
    )]
    algorithms: Vec<Algorithm>,
    /// Sets per instance (setpack), vertices (clawfree), or the largest d (tight).
    #[arg(long, default_value_t = 12)]
    size: usize,
    /// k for setpack, d for clawfree.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Edge probability for clawfree.
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    #[command(flatten)]
    weights: WeightArgs,
    #[command(flatten)]
    search: SearchArgs,
}

pub fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Oracle(a) => oracle(a, out),
        Command::VerifyLocalOpt(a) => verify(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::CheckConstants(a) => check_constants(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Gen(g) => generate(g, out),
        Command::Bench(a) => bench(a, out),
    }
}

fn rational(text: &str, what: &str) -> Result<Weight> {
    parse_weight(text).ok_or_else(|| anyhow!("invalid {what} '{text}'"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> Result<()> {
    match target {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => out
            .write_all(text.as_bytes())
            .context("cannot write output"),
    }
}

struct Loaded {
    instance: ProblemInstance,
    notes: Annotations,
    sets: Option<SetSystem>,
}

fn load(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    let doc = parse_document(&text).with_context(|| format!("cannot parse {}", path.display()))?;
    Ok(match doc {
        Document::Graph(instance, notes) => Loaded {
            instance,
            notes,
            sets: None,
        },
        Document::Sets(system) => Loaded {
            instance: system.conflict_graph(),
            notes: Annotations::default(),
            sets: Some(system),
        },
    })
}

fn instance_info(source: String, inst: &ProblemInstance) -> InstanceInfo {
    InstanceInfo {
        source,
        vertices: inst.n(),
        edges: inst.edge_count(),
        d: inst.d(),
    }
}

fn parse_ids(text: &str) -> Result<VertexSet> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| anyhow!("invalid vertex id '{t}'"))
        })
        .collect()
}

/// Outcome of one solver run, independent of how it is reported.
struct SolveOutcome {
    pub solution: VertexSet,
    pub weight: Weight,
    pub iterations: usize,
    pub certificate: CertificateStatus,
    pub config: ConfigEcho,
}

fn pivot_rule(p: Pivot) -> PivotRule {
    match p {
        Pivot::First => PivotRule::FirstCanonical,
        Pivot::Best => PivotRule::BestGain,
    }
}

fn run_algorithm(
    inst: &ProblemInstance,
    args: &SearchArgs,
    warm: Option<(&str, &VertexSet)>,
) -> Result<SolveOutcome> {
    if args.algorithm == Algorithm::Greedy {
        let sol = greedy(inst);
        return Ok(SolveOutcome {
            weight: sol.weight().clone(),
            solution: sol.into_vertices(),
            iterations: 0,
            certificate: CertificateStatus::NotApplicable,
            config: ConfigEcho::default(),
        });
    }
    let cfg = SearchConfig {
        strategy: match args.algorithm {
            Algorithm::Squareimp => Strategy::ClawOnly,
            _ => Strategy::Bounded,
        },
        size_bound: args.size_bound,
        pivot: pivot_rule(args.pivot),
        max_iterations: Some(args.max_iterations),
        threads: args.threads,
    };
    let mut config = ConfigEcho {
        size_bound: (cfg.strategy == Strategy::Bounded).then(|| cfg.effective_size_bound(inst.d())),
        pivot: Some(format!("{:?}", args.pivot).to_lowercase()),
        scale_n: None,
        warm_start: Some(warm.map_or("empty", |(name, _)| name).to_string()),
        max_iterations: Some(args.max_iterations),
    };
    if let Some(n) = &args.scale_n {
        if warm.is_some() {
            bail!("--scale-N cannot be combined with a warm start");
        }
        let scaling = ScalingConfig::new(rational(n, "scaling constant")?)?;
        config.scale_n = Some(format_weight(&scaling.n));
        let (sol, stats) = solve_scaled(inst, &scaling, &cfg)?;
        let certificate = match stats.trace.certificate {
            claw_mwis::Certificate::IterationCapped => CertificateStatus::IterationCapped,
            claw_mwis::Certificate::LocallyOptimal => CertificateStatus::NotApplicable,
        };
        return Ok(SolveOutcome {
            weight: sol.weight().clone(),
            solution: sol.into_vertices(),
            iterations: stats.iterations,
            certificate,
            config,
        });
    }
    let (sol, trace) = run_local_search(inst, &cfg, warm.map(|(_, s)| s))?;
    Ok(SolveOutcome {
        weight: sol.weight().clone(),
        solution: sol.into_vertices(),
        iterations: trace.iterations(),
        certificate: trace.certificate.into(),
        config,
    })
}

fn oracle_ratio(inst: &ProblemInstance, weight: &Weight) -> Result<Option<ExactValue>> {
    if weight.is_zero() {
        return Ok(None);
    }
    let opt = exact_mwis(inst)?;
    Ok(Some(ExactValue::new(&(opt.weight / weight))))
}

/// Runs one algorithm and builds its record.
fn solve_record(
    inst: &ProblemInstance,
    source: String,
    args: &SearchArgs,
    warm: Option<(&str, &VertexSet)>,
    sets: Option<&SetSystem>,
) -> Result<RunRecord> {
    let start = Instant::now();
    let outcome = run_algorithm(inst, args, warm)?;
    let elapsed = start.elapsed();
    let oracle_ratio = if args.oracle {
        oracle_ratio(inst, &outcome.weight)?
    } else {
        None
    };
    let packing = sets
        .map(|s| s.lift_solution(&outcome.solution))
        .transpose()?;
    Ok(RunRecord {
        instance: instance_info(source, inst),
        algorithm: args.algorithm.name().to_string(),
        config: outcome.config,
        solution: outcome.solution.into_vec(),
        weight: ExactValue::new(&outcome.weight),
        iterations: outcome.iterations,
        certificate: outcome.certificate,
        oracle_ratio,
        packing,
        wall_time_ms: args.timing.then_some(elapsed.as_secs_f64() * 1000.0),
    })
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&args.input)?;
    let warm =
        match args.warm_start {
            WarmStart::Empty => None,
            WarmStart::ASide => Some((
                "a-side",
                loaded.notes.a_side.clone().ok_or_else(|| {
                    anyhow!("{} has no 'c a-side' annotation", args.input.display())
                })?,
            )),
            WarmStart::File => {
                let path = args
                    .warm_file
                    .as_ref()
                    .ok_or_else(|| anyhow!("--warm-start file needs --warm-file <path>"))?;
                Some(("file", parse_ids(&read(path)?)?))
            }
        };
    let record = solve_record(
        &loaded.instance,
        args.input.display().to_string(),
        &args.search,
        warm.as_ref().map(|(n, s)| (*n, s)),
        loaded.sets.as_ref(),
    )?;
    emit(out, args.output.as_deref(), &(record.to_json() + "\n"))?;
    Ok(0)
}

fn oracle(args: OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let loaded = load(&args.input)?;
    let res = exact_mwis(&loaded.instance)?;
    let packing = loaded
        .sets
        .as_ref()
        .map(|s| s.lift_solution(res.optimum.vertices()))
        .transpose()?;
    let record = RunRecord {
        instance: instance_info(args.input.display().to_string(), &loaded.instance),
        algorithm: "oracle".into(),
        config: ConfigEcho::default(),
        solution: res.optimum.vertices().as_slice().to_vec(),
        weight: ExactValue::new(&res.weight),
        iterations: 0,
        certificate: CertificateStatus::NotApplicable,
        oracle_ratio: None,
        packing,
        wall_time_ms: None,
    };
    emit(out, args.output.as_deref(), &(record.to_json() + "\n"))?;
    Ok(0)
}

fn load_solution(src: &SolutionSource) -> Result<(VertexSet, Option<RunRecord>)> {
    match (&src.record, &src.set) {
        (Some(path), _) => {
            let record: RunRecord = serde_json::from_str(&read(path)?)
                .with_context(|| format!("cannot parse run record {}", path.display()))?;
            Ok((record.solution.iter().copied().collect(), Some(record)))
        }
        (None, Some(ids)) => Ok((parse_ids(ids)?, None)),
        (None, None) => bail!("pass the solution with --record <file> or --set <ids>"),
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load(&args.input)?.instance;
    let (a, record) = load_solution(&args.solution)?;
    inst.validate_set(&a)?;
    if let Some((u, v)) = inst.independence_conflict(&a) {
        writeln!(out, "not independent: {u} and {v} are adjacent")?;
        return Ok(1);
    }
    let claw = args.claw || record.as_ref().is_some_and(|r| r.algorithm == "squareimp");
    let limits = OracleLimits {
        max_size_bound: OracleLimits::default().max_improvement_vertices,
        ..OracleLimits::default()
    };
    let found = if claw {
        writeln!(
            out,
            "checking claws with at most {} talons",
            inst.d().saturating_sub(1).max(1)
        )?;
        exhaustive_claw_improvement_with_limits(&inst, &a, &limits)?
    } else {
        let bound = args
            .size_bound
            .or(record.as_ref().and_then(|r| r.config.size_bound))
            .unwrap_or_else(|| default_size_bound(inst.d()));
        writeln!(out, "checking independent sets of at most {bound} vertices")?;
        exhaustive_improvement_with_limits(&inst, &a, bound.min(inst.n()), &limits)?
    };
    match found {
        Some(x) => {
            let displaced = inst.neighborhood(&x, &a)?;
            let gain = inst.weight_sq(&x)? - inst.weight_sq(&displaced)?;
            writeln!(
                out,
                "improvement found: {x} displaces {displaced}, gain {}",
                format_weight(&gain)
            )?;
            Ok(1)
        }
        None => {
            writeln!(out, "locally optimal")?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct LabelEntry {
    u: usize,
    label: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    v1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v2: Option<usize>,
}

#[derive(Serialize)]
struct AnalysisReport {
    solution: Vec<usize>,
    optimum: Vec<usize>,
    solution_weight: ExactValue,
    optimum_weight: ExactValue,
    charge_bound_violations: Vec<usize>,
    decomposition_holds: bool,
    first_step_bound_holds: bool,
    contribution_received_violations: Vec<usize>,
    contribution_sent_violations: Vec<usize>,
    payback: Vec<usize>,
    labels: Vec<LabelEntry>,
    near_tight: Vec<usize>,
    all_double: Vec<usize>,
    double_senders: Vec<usize>,
    with_single: Vec<usize>,
    partners: Vec<(usize, usize)>,
    lemma: String,
}

fn analyze(args: AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load(&args.input)?.instance;
    let (a, record) = load_solution(&args.solution)?;
    let epsilon = rational(&args.epsilon, "epsilon")?;
    let delta = rational(&args.delta, "delta")?;
    let a = Solution::new(&inst, a)?;
    let opt = exact_mwis(&inst)?.optimum;
    let charges = match compute_charges(&inst, &a, &opt) {
        Err(Error::NotMaximal { vertex }) => {
            writeln!(
                out,
                "solution is not maximal: vertex {vertex} has no neighbor in it"
            )?;
            return Ok(1);
        }
        other => other?,
    };
    let contributions = compute_contributions(&inst, &a, &opt)?;
    let locally_optimal = record
        .as_ref()
        .is_some_and(|r| r.certificate == CertificateStatus::LocallyOptimal);
    let claw_optimal = locally_optimal
        && record.as_ref().is_some_and(|r| {
            r.algorithm == "squareimp"
                || r.config.size_bound.unwrap_or(0) >= inst.d().saturating_sub(1)
        });
    let certified = locally_optimal
        && record.as_ref().is_some_and(|r| {
            r.algorithm == "bounded"
                && r.config.size_bound.unwrap_or(0) >= default_size_bound(inst.d())
        });
    let class = classify(&inst, &a, &opt, &epsilon, &delta, certified)?;
    let violations: Vec<usize> = verify_charge_bound(&inst, &charges)
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.v)
        .collect();
    let received: Vec<usize> = contributions
        .received
        .iter()
        .filter(|r| !r.holds)
        .map(|r| r.v)
        .collect();
    let sent: Vec<usize> = contributions
        .sent
        .iter()
        .filter(|s| !s.holds)
        .map(|s| s.u)
        .collect();
    let lemma = match &class.lemma {
        LemmaStatus::NotApplicable => "not-applicable".to_string(),
        LemmaStatus::Holds => "holds".to_string(),
        LemmaStatus::Violated(vs) => format!("violated at {}", VertexSet::from(vs.clone())),
    };
    let failed = (claw_optimal
        && !(violations.is_empty() && received.is_empty() && sent.is_empty()))
        || matches!(class.lemma, LemmaStatus::Violated(_));
    let report = AnalysisReport {
        solution: a.vertices().as_slice().to_vec(),
        optimum: opt.vertices().as_slice().to_vec(),
        solution_weight: ExactValue::new(a.weight()),
        optimum_weight: ExactValue::new(opt.weight()),
        charge_bound_violations: violations,
        decomposition_holds: charges.decomposition_holds(),
        first_step_bound_holds: charges.first_step_bound_holds(),
        contribution_received_violations: received,
        contribution_sent_violations: sent,
        payback: class.payback.as_slice().to_vec(),
        labels: class
            .labels
            .iter()
            .map(|&(u, l)| match l {
                Label::Single => LabelEntry {
                    u,
                    label: "single",
                    v1: None,
                    v2: None,
                },
                Label::Double { v1, v2 } => LabelEntry {
                    u,
                    label: "double",
                    v1: Some(v1),
                    v2: Some(v2),
                },
                Label::Neither => LabelEntry {
                    u,
                    label: "neither",
                    v1: None,
                    v2: None,
                },
            })
            .collect(),
        near_tight: class.near_tight.as_slice().to_vec(),
        all_double: class.all_double.as_slice().to_vec(),
        double_senders: class.double_senders.as_slice().to_vec(),
        with_single: class.with_single.as_slice().to_vec(),
        partners: class.partners.clone(),
        lemma,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if failed { 1 } else { 0 })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
        Verdict::Undecided => "undecided",
        Verdict::NotApplicable => "n/a",
    }
}

fn check_constants(args: ConstantsArgs, out: &mut dyn Write) -> Result<i32> {
    let epsilon = rational(&args.epsilon, "epsilon")?;
    let delta = rational(&args.delta, "delta")?;
    let last = args.d_max.unwrap_or(args.d);
    if last < args.d {
        bail!("--d-max {last} is below --d {}", args.d);
    }
    let mut ok = true;
    for d in args.d..=last {
        let report = verify_constants(&epsilon, &delta, d)?;
        if !report.sqrt_epsilon.is_exact() {
            writeln!(
                out,
                "note: sqrt(epsilon) is irrational; using a certified enclosure"
            )?;
        }
        for c in &report.checks {
            writeln!(
                out,
                "d={d} ({:>2}) {:<9} {}",
                c.index,
                verdict_name(c.verdict),
                c.statement
            )?;
        }
        let applicable = report
            .checks
            .iter()
            .filter(|c| c.verdict != Verdict::NotApplicable)
            .count();
        writeln!(
            out,
            "d={d}: {}/{applicable} pass; ratio d/2 - eps*delta/2 = {}/2 - {}",
            report.passed(),
            d,
            format_weight(&report.additive_gain)
        )?;
        ok &= report.all_pass();
    }
    Ok(if ok { 0 } else { 1 })
}

fn reduce(args: ReduceArgs, out: &mut dyn Write) -> Result<i32> {
    let system = parse_set_system(&read(&args.input)?)
        .with_context(|| format!("cannot parse {}", args.input.display()))?;
    let comments: Vec<String> = system
        .sets()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let labels: Vec<&str> = s
                .elements
                .iter()
                .map(|&e| system.labels()[e].as_str())
                .collect();
            format!("set {i} {}", labels.join(" "))
        })
        .collect();
    emit(
        out,
        args.output.as_deref(),
        &write_graph(&system.conflict_graph(), &comments),
    )?;
    Ok(0)
}

fn generate(cmd: GenCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        GenCommand::Tight { d, weight, output } => {
            let t = berman_tight(d, rational(&weight, "weight")?)?;
            let comments = vec![
                format!("tight instance d={d}"),
                format!("a-side {}", join(&t.a_side)),
            ];
            emit(out, output.as_deref(), &write_graph(&t.instance, &comments))?;
        }
        GenCommand::Setpack {
            sets,
            universe,
            k,
            seed,
            weights,
            graph,
            output,
        } => {
            let system = random_set_packing(sets, universe, k, weights.range(), seed)?;
            let text = if graph {
                write_graph(
                    &system.conflict_graph(),
                    &[format!("conflict graph of setpack sets={sets} universe={universe} k={k} seed={seed}")],
                )
            } else {
                write_set_system(&system)
            };
            emit(out, output.as_deref(), &text)?;
        }
        GenCommand::Cliques {
            sizes,
            seed,
            weights,
            output,
        } => {
            let inst = clique_union(&sizes, weights.range(), seed)?;
            emit(
                out,
                output.as_deref(),
                &write_graph(&inst, &[format!("cliques seed={seed}")]),
            )?;
        }
        GenCommand::Clawfree {
            n,
            p,
            d,
            seed,
            max_attempts,
            weights,
            output,
        } => match random_claw_free(n, p, d, weights.range(), seed, max_attempts)? {
            SampleOutcome::Found { instance, attempts } => {
                let comment = format!("clawfree n={n} p={p} d={d} seed={seed} attempts={attempts}");
                emit(out, output.as_deref(), &write_graph(&instance, &[comment]))?;
            }
            SampleOutcome::Exhausted { attempts } => {
                bail!("no {d}-claw free graph found in {attempts} attempts");
            }
        },
    }
    Ok(0)
}

fn join(set: &VertexSet) -> String {
    set.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct BenchRow {
    instance: String,
    vertices: usize,
    edges: usize,
    d: usize,
    algorithm: String,
    weight: String,
    weight_decimal: f64,
    iterations: usize,
    certificate: &'static str,
    oracle_ratio: Option<String>,
    wall_time_ms: Option<f64>,
}

fn bench_instance(args: &BenchArgs, i: usize) -> Result<Option<(String, ProblemInstance)>> {
    let seed = args.seed.wrapping_add(i as u64);
    let range = args.weights.range();
    Ok(match args.family {
        Family::Setpack => {
            let universe = 3 * args.k;
            let g = random_set_packing(args.size, universe, args.k, range, seed)?.conflict_graph();
            Some((
                format!("setpack sets={} k={} seed={seed}", args.size, args.k),
                g,
            ))
        }
        Family::Cliques => {
            let g = random_clique_union(4, args.size.max(1), range, seed)?;
            Some((format!("cliques max-size={} seed={seed}", args.size), g))
        }
        Family::Clawfree => random_claw_free(args.size, args.p, args.k, range, seed, 10_000)?
            .instance()
            .map(|g| {
                (
                    format!(
                        "clawfree n={} p={} d={} seed={seed}",
                        args.size, args.p, args.k
                    ),
                    g,
                )
            }),
        Family::Tight => {
            let d = 3 + i;
            if d > args.size.max(3) {
                None
            } else {
                Some((
                    format!("tight d={d}"),
                    berman_tight(d, Weight::from_integer(1.into()))?.instance,
                ))
            }
        }
    })
}

fn bench(args: BenchArgs, out: &mut dyn Write) -> Result<i32> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for i in 0..args.count {
        let Some((name, inst)) = bench_instance(&args, i)? else {
            continue;
        };
        for &algorithm in &args.algorithms {
            let search = SearchArgs {
                algorithm,
                ..args.search.clone()
            };
            let record = solve_record(&inst, name.clone(), &search, None, None)?;
            writer.serialize(BenchRow {
                instance: name.clone(),
                vertices: inst.n(),
                edges: inst.edge_count(),
                d: inst.d(),
                algorithm: record.algorithm,
                weight: record.weight.exact,
                weight_decimal: record.weight.decimal,
                iterations: record.iterations,
                certificate: record.certificate.as_str(),
                oracle_ratio: record.oracle_ratio.map(|r| r.exact),
                wall_time_ms: record.wall_time_ms,
            })?;
        }
    }
    out.write_all(
        &writer
            .into_inner()
            .map_err(|e| anyhow!("csv flush failed: {e}"))?,
    )?;
    Ok(0)
}
