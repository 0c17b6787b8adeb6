use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};

use frlp_core::covering::instance_covers;
use frlp_core::feasibility::{SearchOptions, ServiceChecker, TraceStep};
use frlp_core::generators::{gen_example, gen_prop5a, gen_prop5b, gen_random, RandomConfig, EXAMPLE_NAMES};
use frlp_core::lp::bounds::{TightEvaluator, TIGHT_NODE_CAP};
use frlp_core::lp::{build_model, lp_bound, Formulation, ModelInputs};
use frlp_core::network::load_instance;
use frlp_core::oracle::brute_force_solve;
use frlp_core::routes::shortest_route_length;
use frlp_core::solver::{reevaluate, solve, Limits, Objective, Solution, SolveRequest};
use frlp_core::{enumerate_routes, parse_instance, serialize_instance, FrlpError, Instance, NodeSet, Variant};

#[derive(Parser, Debug)]
#[command(name = "frlp", version, about = "Station placement for the original and cyclic flow refueling location problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve max-cover or min-stations by branch-and-cut
    Solve(SolveArgs),
    /// LP relaxation bounds of the aggregated, disaggregated and tight models
    Bounds(BoundsArgs),
    /// List admissible routes with length and deviation
    Enumerate(VariantArgs),
    /// Per-route cut sets and the minimal aggregated family
    Cutsets(VariantArgs),
    /// Servedness of one demand under a station set
    Check(CheckArgs),
    /// Write a generated instance
    Generate(GenerateArgs),
    /// Load an instance and report every violated invariant
    Validate(SourceArgs),
    /// Both variants over a grid of deviation factors
    Sweep(SweepArgs),
    /// Brute-force optimum over all station sets
    #[command(hide = true)]
    Oracle(SolveArgs),
}

#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// Instance file (JSON)
    instance: Option<PathBuf>,
    /// Built-in instance instead of a file: fig2, fig7, fig8, prop5a, prop5b or random
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    gen: GenParams,
}

#[derive(Args, Debug, Clone)]
struct GenParams {
    /// Size parameter of prop5a/prop5b
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// prop5b offset; defaults to d/(2n^2)
    #[arg(long)]
    delta: Option<f64>,
    /// Volume of the single demand of prop5a/prop5b
    #[arg(long, default_value_t = 1.0)]
    f1: f64,
    #[arg(long, default_value_t = 10.0)]
    range: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Node count of a random instance
    #[arg(long, default_value_t = 8)]
    nodes: usize,
    /// Demand count of a random instance
    #[arg(long, default_value_t = 4)]
    demands: usize,
    /// Extra-edge probability of a random instance
    #[arg(long, default_value_t = 0.4)]
    density: f64,
}

#[derive(Args, Debug)]
struct VariantArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Defaults to the instance's own variant
    #[arg(long)]
    variant: Option<VariantArg>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Minstations)]
    objective: ObjectiveArg,
    /// Station budget for maxcover; falls back to the instance budget
    #[arg(long)]
    budget: Option<usize>,
    /// Fraction of the volume to serve for minstations
    #[arg(long, default_value_t = 1.0)]
    coverage: f64,
    /// Replace every demand's deviation factor
    #[arg(long)]
    alpha_override: Option<f64>,
    /// Seconds
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
    /// Append run statistics to this CSV file
    #[arg(long)]
    stats_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    variant: Option<VariantArg>,
    /// Override the instance budget
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    variant: Option<VariantArg>,
    /// Comma-separated node names carrying a station
    #[arg(long, value_delimiter = ',')]
    stations: Vec<String>,
    /// 1-based demand index
    #[arg(long, default_value_t = 1)]
    demand: usize,
    /// Print the label extractions of the cycle search
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    name: String,
    #[command(flatten)]
    gen: GenParams,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_delimiter = ',', default_value = "1.0,1.2,1.5")]
    alphas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Maxcover)]
    objective: ObjectiveArg,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    coverage: f64,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Per-run detail CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum VariantArg {
    Original,
    Cyclic,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Original => Variant::Original,
            VariantArg::Cyclic => Variant::Cyclic,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum ObjectiveArg {
    Maxcover,
    Minstations,
}

/// Failure of a subcommand, split by exit code.
enum Failure {
    /// Bad input: unreadable, malformed or invalid instance, bad flag values.
    Input(String),
    /// The instance loaded but solving it failed.
    Solve(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Solve(_) => 2,
        }
    }
}

type Outcome = Result<(), Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn solving(e: impl std::fmt::Display) -> Failure {
    Failure::Solve(e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FRLP_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Cutsets(a) => cmd_cutsets(&a),
        Command::Check(a) => cmd_check(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Validate(a) => cmd_validate(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Input(msg) | Failure::Solve(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn generate(name: &str, g: &GenParams) -> Result<Instance, FrlpError> {
    match name {
        "prop5a" => gen_prop5a(g.n, g.f1, g.range),
        "prop5b" => {
            let delta = g.delta.unwrap_or(g.range / (2 * g.n * g.n) as f64);
            gen_prop5b(g.n, delta, g.f1, g.range)
        }
        "random" => gen_random(&RandomConfig {
            seed: g.seed,
            nodes: g.nodes,
            density: g.density,
            demands: g.demands,
            range: g.range,
            ..RandomConfig::default()
        }),
        other if EXAMPLE_NAMES.contains(&other) => gen_example(other),
        other => Err(FrlpError::InvalidArgument(format!(
            "unknown instance name '{other}' (expected {}, prop5a, prop5b or random)",
            EXAMPLE_NAMES.join(", ")
        ))),
    }
}

/// Loads the instance and a label for reports.
fn load(source: &SourceArgs) -> Result<(Instance, String), Failure> {
    match (&source.instance, &source.name) {
        (Some(_), Some(_)) => Err(input("give either an instance file or --name, not both")),
        (None, None) => Err(input("no instance: give a file or --name")),
        (Some(path), None) => {
            let parsed = load_instance(path).map_err(input)?;
            for p in &parsed.pruned {
                info!("{p}");
            }
            Ok((parsed.instance, path.display().to_string()))
        }
        (None, Some(name)) => Ok((generate(name, &source.gen).map_err(input)?, name.clone())),
    }
}

fn pick_variant(inst: &Instance, flag: Option<VariantArg>) -> Variant {
    flag.map_or(inst.variant, Variant::from)
}

fn objective_of(kind: ObjectiveArg, budget: Option<usize>, coverage: f64, inst: &Instance) -> Result<Objective, Failure> {
    match kind {
        ObjectiveArg::Maxcover => {
            let b = budget
                .or(inst.placement.budget)
                .ok_or_else(|| input("maxcover needs --budget (the instance has none)"))?;
            Ok(Objective::MaxCover { budget: b })
        }
        ObjectiveArg::Minstations => {
            if !(coverage > 0.0 && coverage <= 1.0) {
                return Err(input(format!("--coverage must lie in (0, 1], got {coverage}")));
            }
            Ok(Objective::MinStations { coverage })
        }
    }
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, Failure> {
    s.map(|v| Duration::try_from_secs_f64(v).map_err(|_| input(format!("bad time limit {v}"))))
        .transpose()
}

fn stations_line(inst: &Instance, s: &NodeSet) -> String {
    inst.network.format_set(s)
}

fn served_line(inst: &Instance, served: &[bool]) -> String {
    let list: Vec<String> = served
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(q, _)| {
            let d = &inst.demands[q];
            format!("{}:{}->{}", q + 1, inst.network.name(d.origin), inst.network.name(d.destination))
        })
        .collect();
    if list.is_empty() {
        "none".into()
    } else {
        list.join(" ")
    }
}

const STATS_HEADER: [&str; 7] = ["instance", "routing", "alpha", "time_s", "separation_time_s", "bb_nodes", "cuts"];

fn stats_record(label: &str, variant: Variant, alpha: Option<f64>, sol: &Solution) -> Vec<String> {
    vec![
        label.to_string(),
        variant.to_string(),
        alpha.map_or_else(String::new, |a| a.to_string()),
        format!("{:.6}", sol.stats.total_time.as_secs_f64()),
        format!("{:.6}", sol.stats.separation_time.as_secs_f64()),
        sol.stats.nodes.to_string(),
        sol.stats.cuts.to_string(),
    ]
}

fn write_stats(path: &Path, rows: &[Vec<String>]) -> Outcome {
    let mut w = csv::Writer::from_path(path).map_err(input)?;
    w.write_record(STATS_HEADER).map_err(input)?;
    for r in rows {
        w.write_record(r).map_err(input)?;
    }
    w.flush().map_err(input)
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let (mut inst, label) = load(&a.source)?;
    if let Some(alpha) = a.alpha_override {
        if !(alpha >= 1.0 && alpha.is_finite()) {
            return Err(input(format!("--alpha-override must be >= 1, got {alpha}")));
        }
        inst = inst.with_alpha(alpha);
    }
    let variant = pick_variant(&inst, a.variant);
    let objective = objective_of(a.objective, a.budget, a.coverage, &inst)?;
    let limits = Limits {
        time: seconds(a.time_limit)?,
        nodes: a.node_limit,
    };
    info!("solving {label} ({variant}, {objective:?})");
    let sol = solve(&SolveRequest {
        instance: &inst,
        variant,
        objective,
        limits,
        seed: a.source.gen.seed,
    })
    .map_err(solving)?;
    println!("instance   {label}");
    println!("variant    {variant}");
    println!("objective  {}", sol.objective);
    println!("bound      {}", sol.bound);
    println!("status     {}", if sol.optimal { "optimal" } else { "limit reached" });
    println!("stations   {}", stations_line(&inst, &sol.stations));
    println!("served     {}", served_line(&inst, &sol.served));
    println!(
        "stats      time {:.3}s, separation {:.3}s, nodes {}, cuts {}",
        sol.stats.total_time.as_secs_f64(),
        sol.stats.separation_time.as_secs_f64(),
        sol.stats.nodes,
        sol.stats.cuts
    );
    if let Some(path) = &a.stats_out {
        write_stats(path, &[stats_record(&label, variant, a.alpha_override, &sol)])?;
    }
    Ok(())
}

fn cmd_oracle(a: &SolveArgs) -> Outcome {
    let (mut inst, label) = load(&a.source)?;
    if let Some(alpha) = a.alpha_override {
        inst = inst.with_alpha(alpha);
    }
    let variant = pick_variant(&inst, a.variant);
    let objective = objective_of(a.objective, a.budget, a.coverage, &inst)?;
    let res = brute_force_solve(&inst, variant, objective).map_err(solving)?;
    println!("instance   {label}");
    println!("variant    {variant}");
    println!("objective  {}", res.objective);
    for (set, served) in res.optimal_sets.iter().zip(&res.served) {
        println!("optimal    {}  served {}", stations_line(&inst, set), served_line(&inst, served));
    }
    Ok(())
}

fn cmd_bounds(a: &BoundsArgs) -> Outcome {
    let (mut inst, label) = load(&a.source)?;
    if a.budget.is_some() {
        inst.placement.budget = a.budget;
    }
    let variant = pick_variant(&inst, a.variant);
    let covers = instance_covers(&inst, variant).map_err(solving)?;
    let per_route: Vec<_> = covers.iter().map(|c| c.per_route.clone()).collect();
    let agg: Vec<_> = covers.iter().map(|c| c.aggregated.clone()).collect();
    let v_agg = build_model(&inst, Formulation::Agg, ModelInputs::Aggregated(&agg))
        .and_then(|m| lp_bound(&m))
        .map_err(solving)?;
    let v_dis = build_model(&inst, Formulation::Disagg, ModelInputs::PerRoute(&per_route))
        .and_then(|m| lp_bound(&m))
        .map_err(solving)?;
    let v_tight = if inst.node_count() <= TIGHT_NODE_CAP {
        let t = TightEvaluator::new(&inst, variant).map_err(solving)?;
        Some(t.max_over_placement(&inst.placement, None).map_err(solving)?)
    } else {
        None
    };
    let budget = inst.placement.budget.map_or("none".to_string(), |b| b.to_string());
    println!("instance {label}, variant {variant}, budget {budget}, total volume {}", inst.total_volume());
    println!("agg-LP     {v_agg:.6}");
    println!("disagg-LP  {v_dis:.6}");
    match v_tight {
        Some(t) => println!("tight-LP   {t:.6}"),
        None => println!("tight-LP   skipped ({} nodes > {TIGHT_NODE_CAP})", inst.node_count()),
    }
    let ratio = |num: f64, den: f64| {
        if den > 0.0 {
            format!("{:.4}", num / den)
        } else {
            "undefined".into()
        }
    };
    println!("disagg/agg {}", ratio(v_dis, v_agg));
    if let Some(t) = v_tight {
        println!("tight/agg  {}", ratio(t, v_agg));
        println!("tight/disagg {}", ratio(t, v_dis));
    }
    Ok(())
}

fn cmd_enumerate(a: &VariantArgs) -> Outcome {
    let (inst, label) = load(&a.source)?;
    let variant = pick_variant(&inst, a.variant);
    let dist = inst.network.distances();
    println!("instance {label}, variant {variant}");
    for (q, d) in inst.demands.iter().enumerate() {
        let routes = enumerate_routes(&inst, q, variant).map_err(solving)?;
        let shortest = shortest_route_length(&dist, d.origin, d.destination, variant);
        println!(
            "demand {} {}->{}: {} routes, shortest {}",
            q + 1,
            inst.network.name(d.origin),
            inst.network.name(d.destination),
            routes.len(),
            shortest
        );
        for r in &routes {
            let dev = 100.0 * (r.length / shortest - 1.0);
            println!("  {:<32} length {:<10} deviation {dev:.1}%", r.display(&inst.network).to_string(), r.length);
        }
    }
    Ok(())
}

fn sorted_names(inst: &Instance, sets: &[NodeSet]) -> Vec<String> {
    let mut lists: Vec<Vec<usize>> = sets.iter().map(NodeSet::to_vec).collect();
    lists.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    lists.dedup();
    lists
        .iter()
        .map(|l| {
            let names: Vec<&str> = l.iter().map(|&j| inst.network.name(j)).collect();
            format!("{{{}}}", names.join(", "))
        })
        .collect()
}

fn cmd_cutsets(a: &VariantArgs) -> Outcome {
    let (inst, label) = load(&a.source)?;
    let variant = pick_variant(&inst, a.variant);
    let covers = instance_covers(&inst, variant).map_err(solving)?;
    println!("instance {label}, variant {variant}");
    for (q, c) in covers.iter().enumerate() {
        let d = &inst.demands[q];
        println!(
            "demand {} {}->{}",
            q + 1,
            inst.network.name(d.origin),
            inst.network.name(d.destination)
        );
        for (r, fam) in c.per_route.iter().enumerate() {
            let head = match c.routes.get(r) {
                Some(route) => route.display(&inst.network).to_string(),
                None => "covering family".into(),
            };
            println!("  D {head}: {}", sorted_names(&inst, &fam.sets).join(" "));
        }
        println!("  H ({} sets): {}", c.aggregated.len(), sorted_names(&inst, &c.aggregated.sets).join(" "));
    }
    Ok(())
}

fn parse_stations(inst: &Instance, names: &[String]) -> Result<NodeSet, Failure> {
    let mut s = NodeSet::empty(inst.node_count());
    for name in names.iter().map(|n| n.trim()).filter(|n| !n.is_empty()) {
        let j = inst
            .network
            .node_by_name(name)
            .ok_or_else(|| input(format!("unknown node '{name}'")))?;
        s.insert(j);
    }
    Ok(s)
}

fn format_label(inst: &Instance, l: &frlp_core::feasibility::Label) -> String {
    let (c, d, ls, lc, g) = l.tuple();
    format!("{}:({c}, {d}, {ls}, {lc}, {g})", inst.network.name(l.node))
}

fn format_trace(inst: &Instance, trace: &[TraceStep]) -> String {
    let mut out = String::new();
    for (k, step) in trace.iter().enumerate() {
        let _ = write!(out, "  {:>3}  {}", k + 1, format_label(inst, &step.label));
        if step.sink {
            out.push_str("  sink");
        }
        out.push('\n');
        for c in &step.created {
            let _ = writeln!(out, "         -> {}", format_label(inst, c));
        }
    }
    out
}

fn cmd_check(a: &CheckArgs) -> Outcome {
    let (inst, _) = load(&a.source)?;
    let variant = pick_variant(&inst, a.variant);
    let stations = parse_stations(&inst, &a.stations)?;
    if a.demand == 0 || a.demand > inst.demands.len() {
        return Err(input(format!(
            "--demand must lie in 1..={}, got {}",
            inst.demands.len(),
            a.demand
        )));
    }
    let q = a.demand - 1;
    let checker = ServiceChecker::new(&inst, variant).map_err(solving)?;
    let served = checker.is_served(q, &stations);
    let d = &inst.demands[q];
    println!(
        "demand {} {}->{} ({variant}) with stations {}: {}",
        a.demand,
        inst.network.name(d.origin),
        inst.network.name(d.destination),
        stations_line(&inst, &stations),
        if served { "served" } else { "not served" }
    );
    if let Some(w) = checker.witness(q, &stations) {
        println!("witness {} length {}", w.display(&inst.network), w.length);
    }
    if a.trace {
        if variant != Variant::Cyclic || checker.tau(q).is_none() {
            return Err(input("--trace needs a cyclic deviation demand"));
        }
        let search = checker
            .cycle_search(q, &stations, SearchOptions { dominance: true, trace: true })
            .map_err(solving)?;
        println!("labels (delta_charge, delta_dest, l_start, l_charge, gamma_end), in extraction order:");
        print!("{}", format_trace(&inst, &search.trace));
        println!("labels created: {}", search.labels_created);
    }
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Outcome {
    let inst = generate(&a.name, &a.gen).map_err(input)?;
    let doc = serialize_instance(&inst);
    match &a.out {
        Some(path) => {
            std::fs::write(path, doc + "\n").map_err(input)?;
            info!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{doc}").map_err(input)?;
        }
    }
    Ok(())
}

fn cmd_validate(a: &SourceArgs) -> Outcome {
    let (inst, label) = match &a.instance {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(input)?;
            let parsed = parse_instance(&text).map_err(input)?;
            for p in &parsed.pruned {
                println!("pruned: {p}");
            }
            (parsed.instance, path.display().to_string())
        }
        None => load(a)?,
    };
    let violations = inst.validate();
    if !violations.is_empty() {
        return Err(input(FrlpError::Validation(violations)));
    }
    println!(
        "{label}: ok ({} nodes, {} edges, {} demands, range {})",
        inst.node_count(),
        inst.network.edges().len(),
        inst.demands.len(),
        inst.range
    );
    Ok(())
}

struct SweepRow {
    alpha: f64,
    original: Solution,
    cyclic: Solution,
    /// Volume served when the original stations are reevaluated under cyclic routing.
    reeval: f64,
}

fn cmd_sweep(a: &SweepArgs) -> Outcome {
    let (base, label) = load(&a.source)?;
    if a.alphas.is_empty() {
        return Err(input("--alphas is empty"));
    }
    if let Some(&bad) = a.alphas.iter().find(|&&x| !(x >= 1.0 && x.is_finite())) {
        return Err(input(format!("alpha must be >= 1, got {bad}")));
    }
    let objective = objective_of(a.objective, a.budget, a.coverage, &base)?;
    let limits = Limits {
        time: seconds(a.time_limit)?,
        nodes: None,
    };
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let start = Instant::now();
    for &alpha in &a.alphas {
        let inst = base.with_alpha(alpha);
        let run = |variant| {
            solve(&SolveRequest {
                instance: &inst,
                variant,
                objective,
                limits,
                seed: a.source.gen.seed,
            })
            .map_err(|e| solving(format!("alpha {alpha}, {variant}: {e}")))
        };
        let original = run(Variant::Original)?;
        let cyclic = run(Variant::Cyclic)?;
        let reeval = reevaluate(&inst, &original.stations, Variant::Cyclic).map_err(solving)?;
        debug!("alpha {alpha}: original {} cyclic {}", original.objective, cyclic.objective);
        records.push(stats_record(&label, Variant::Original, Some(alpha), &original));
        records.push(stats_record(&label, Variant::Cyclic, Some(alpha), &cyclic));
        rows.push(SweepRow {
            alpha,
            original,
            cyclic,
            reeval,
        });
    }
    let what = match objective {
        Objective::MaxCover { budget } => format!("max cover, budget {budget}"),
        Objective::MinStations { coverage } => format!("min stations, coverage {coverage}"),
    };
    println!("instance {label}: {what}, total volume {}", base.total_volume());
    println!(
        "{:>6}  {:>12} {:>14} {:>10}  {:>12} {:>10}  {:>8}",
        "alpha", "original", "orig@cyclic", "time_s", "cyclic", "time_s", "diff"
    );
    for r in &rows {
        println!(
            "{:>6}  {:>12} {:>14} {:>10.3}  {:>12} {:>10.3}  {:>8}",
            r.alpha,
            r.original.objective,
            r.reeval,
            r.original.stats.total_time.as_secs_f64(),
            r.cyclic.objective,
            r.cyclic.stats.total_time.as_secs_f64(),
            r.cyclic.objective - r.original.objective
        );
    }
    println!("orig@cyclic: volume served by the original stations under cyclic routing");
    info!("sweep finished in {:.3}s", start.elapsed().as_secs_f64());
    if let Some(path) = &a.csv {
        write_stats(path, &records)?;
    }
    Ok(())
}
