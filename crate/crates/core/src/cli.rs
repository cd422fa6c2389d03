//! Command-line front end: solve, generate, oracle, compare and bench.

use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::harness::format::{
    instance_to_string, parse_instance, solution_to_string, InstanceBody, ParsedInstance,
};
use crate::harness::generate::{generate_instance, generated_name};
use crate::harness::multistart::{multistart_solve, MultistartOutcome, SolverParams};
use crate::harness::report::{self, compare_report, parse_baselines, parse_results, ResultRow};
use crate::model::{Instance, TwoRouteSolution};
use crate::oracle::{brute_force, OracleOptions};
use crate::two_period::{build_instance, check_balance, extract_tours, TwoPeriodInstance};

#[derive(Parser)]
#[command(name = "twovrp", about = "Two-vehicle rich VRP solver toolkit", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance file with the multistart heuristic.
    Solve(SolveArgs),
    /// Generate benchmark-style 2-period TSP instances.
    Generate(GenerateArgs),
    /// Exhaustively solve a tiny instance for verification.
    Oracle(OracleArgs),
    /// Join a results CSV with a baseline CSV into a report.
    Compare(CompareArgs),
    /// Solve every instance in a directory and report against baselines.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct HeuristicArgs {
    /// Heuristic parameters S,L (window size and sliding step).
    #[arg(long, default_value = "3,1", value_parser = parse_heuristic)]
    heuristic: (usize, usize),
    /// Number of multistart repetitions.
    #[arg(long, default_value_t = 48)]
    restarts: usize,
    /// Base seed; restart r uses stream r of this seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Maximum customers (switch included) per exact sub-solve.
    #[arg(long, default_value_t = 20)]
    dp_cap: usize,
    /// Worker threads for restarts (1 = sequential).
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Soft wall-clock limit in seconds; finishes the running restart.
    #[arg(long)]
    time_limit: Option<u64>,
    /// Skip the sliding-subsets phase (random allocation plus route
    /// improvement only); ablation baseline.
    #[arg(long)]
    no_sliding: bool,
}

impl HeuristicArgs {
    fn params(&self) -> SolverParams {
        SolverParams {
            s: self.heuristic.0,
            l: self.heuristic.1,
            restarts: self.restarts,
            seed: self.seed,
            dp_cap: self.dp_cap,
            time_limit: self.time_limit.map(Duration::from_secs),
            parallel: self.parallel,
            skip_sliding: self.no_sliding,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (2VRP or 2TSP format).
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    /// Write the best solution to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-restart trace records to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Total number of points, depot included.
    #[arg(long, default_value_t = 48)]
    n: usize,
    /// Customers visited in both periods (depot included).
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of instances; seeds are consecutive from --seed.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 10_000)]
    coord_range: i64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Maximum customer count accepted by the enumeration.
    #[arg(long, default_value_t = 9)]
    cap: usize,
}

#[derive(Args)]
struct CompareArgs {
    /// CSV with `instance,cost[,time_s]` rows.
    #[arg(long)]
    results: PathBuf,
    /// CSV with `instance,pc[,pc_manual]` rows.
    #[arg(long)]
    baseline: PathBuf,
    /// Write the report CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance files (*.2tsp, *.2vrp).
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    heuristic: HeuristicArgs,
    /// Baseline CSV for the comparison columns.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Write raw results (instance,cost,time_s) here.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Write the comparison report CSV here.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_heuristic(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected S,L")?;
    let s: usize = a.trim().parse().map_err(|_| "bad window size")?;
    let l: usize = b.trim().parse().map_err(|_| "bad step")?;
    if s < 1 || l < 1 {
        return Err("window size and step must be at least 1".into());
    }
    Ok((s, l))
}

pub fn run() -> Result<(), Box<dyn Error>> {
    match Cli::parse().command {
        Command::Solve(args) => solve_cmd(args),
        Command::Generate(args) => generate_cmd(args),
        Command::Oracle(args) => oracle_cmd(args),
        Command::Compare(args) => compare_cmd(args),
        Command::Bench(args) => bench_cmd(args),
    }
}

/// The solvable 2VRP of a parsed file plus the 2TSP view when present.
fn solvable(parsed: &ParsedInstance) -> Result<(Instance, Option<&TwoPeriodInstance>), Box<dyn Error>> {
    match &parsed.body {
        InstanceBody::Vrp(inst) => Ok((inst.clone(), None)),
        InstanceBody::Tsp(tp) => Ok((build_instance(tp)?, Some(tp))),
    }
}

fn trace_lines(outcome: &MultistartOutcome) -> String {
    let mut out = String::new();
    for r in &outcome.records {
        let _ = writeln!(
            out,
            "RESTART {} init={} final={} rounds={} solves={} accepted={}",
            r.restart, r.initial_cost, r.final_cost, r.rounds, r.small_solves, r.accepted
        );
    }
    let _ = writeln!(out, "BEST restart={} cost={}", outcome.best_restart, outcome.best.cost);
    out
}

fn print_solution(name: &str, sol: &TwoRouteSolution, tp: Option<&TwoPeriodInstance>, elapsed: f64) {
    println!("instance {name}");
    println!("cost {}", sol.cost);
    println!("loads {} {}", sol.loads[0], sol.loads[1]);
    println!("time_s {elapsed:.1}");
    if let Some(tp) = tp {
        let tours = extract_tours(sol, tp);
        for (k, tour) in tours.iter().enumerate() {
            let cells: Vec<String> = tour.iter().map(|n| n.to_string()).collect();
            println!("period_{} {}", k + 1, cells.join(" "));
        }
        println!("balanced {}", check_balance(&tours, tp));
    }
}

fn solve_cmd(args: SolveArgs) -> Result<(), Box<dyn Error>> {
    let parsed = parse_instance(&args.instance)?;
    let (inst, tp) = solvable(&parsed)?;
    let params = args.heuristic.params();
    let started = Instant::now();
    let outcome = multistart_solve(&inst, &params)?;
    let elapsed = started.elapsed().as_secs_f64();
    print_solution(&parsed.name, &outcome.best, tp, elapsed);
    if let Some(path) = &args.out {
        let tours = tp.map(|tp| extract_tours(&outcome.best, tp));
        fs::write(path, solution_to_string(&parsed.name, &outcome.best, tours.as_ref()))?;
    }
    if let Some(path) = &args.trace {
        fs::write(path, trace_lines(&outcome))?;
    }
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), Box<dyn Error>> {
    fs::create_dir_all(&args.out_dir)?;
    for k in 0..args.count {
        let seed = args.seed + k as u64;
        let tp = generate_instance(args.n, args.m, seed, args.coord_range);
        let name = generated_name(args.n, args.m, seed);
        let path = args.out_dir.join(format!("{name}.2tsp"));
        let parsed = ParsedInstance { name: name.clone(), body: InstanceBody::Tsp(tp) };
        fs::write(&path, instance_to_string(&parsed))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn oracle_cmd(args: OracleArgs) -> Result<(), Box<dyn Error>> {
    let parsed = parse_instance(&args.instance)?;
    let (inst, tp) = solvable(&parsed)?;
    let started = Instant::now();
    let sol = brute_force(&inst, &OracleOptions { cap: args.cap, ..OracleOptions::default() })?;
    print_solution(&parsed.name, &sol, tp, started.elapsed().as_secs_f64());
    println!("visits {}", solution_visits(&sol));
    Ok(())
}

fn solution_visits(sol: &TwoRouteSolution) -> String {
    sol.visits
        .iter()
        .map(|&(id, o)| if id == 0 { "0".into() } else { format!("{id}:{o}") })
        .collect::<Vec<_>>()
        .join(" ")
}

fn compare_cmd(args: CompareArgs) -> Result<(), Box<dyn Error>> {
    let results = parse_results(&fs::read_to_string(&args.results)?)?;
    let baselines = parse_baselines(&fs::read_to_string(&args.baseline)?)?;
    let report = compare_report(&results, &baselines);
    print!("{}", report.to_text());
    if let Some(path) = &args.out {
        fs::write(path, report.to_csv())?;
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<(), Box<dyn Error>> {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .is_some_and(|e| e == "2tsp" || e == "2vrp")
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("no instance files in {}", args.dir.display()).into());
    }

    let params = args.heuristic.params();
    let mut rows: Vec<ResultRow> = Vec::new();
    for path in &files {
        let parsed = parse_instance(path)?;
        let (inst, _) = solvable(&parsed)?;
        let started = Instant::now();
        let outcome = multistart_solve(&inst, &params)?;
        let elapsed = started.elapsed().as_secs_f64();
        println!(
            "{}: cost {} in {:.1}s ({} restarts)",
            parsed.name,
            outcome.best.cost,
            elapsed,
            outcome.records.len()
        );
        rows.push(ResultRow { instance: parsed.name.clone(), cost: outcome.best.cost.value(), time_s: elapsed });
    }

    if let Some(path) = &args.out_csv {
        fs::write(path, report::results_to_csv(&rows))?;
    }
    let baselines = match &args.baseline {
        Some(path) => parse_baselines(&fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    let report = compare_report(&rows, &baselines);
    println!();
    print!("{}", report.to_text());
    if let Some(path) = &args.report {
        fs::write(path, report.to_csv())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::format;

    #[test]
    fn heuristic_parser() {
        assert_eq!(parse_heuristic("3,1").unwrap(), (3, 1));
        assert_eq!(parse_heuristic("6, 3").unwrap(), (6, 3));
        assert!(parse_heuristic("0,1").is_err());
        assert!(parse_heuristic("3").is_err());
    }

    #[test]
    fn format_helpers_are_deterministic() {
        let _ = format::parse_visit_token("4:R").unwrap();
    }
}
