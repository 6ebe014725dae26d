//! `expocolor` command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage, 3 odd fixed-point
//! parity, 4 isolated function, 5 capacity exceeded.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expocolor::arith::{Assignment, OddCycleCtx};
use expocolor::colorize::{self, CycleCache};
use expocolor::expo::{self, Target, DEFAULT_CAP};
use expocolor::graph::{self, Graph};
use expocolor::oracle::{self, bench, Fault, VerificationReport};
use expocolor::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "expocolor", version, about = "Explicit colorings of exponential graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Build the exponential graph of a host graph.
    Expo(ExpoArgs),
    /// Color functions with the per-vertex routine.
    Color(ColorArgs),
    /// Run exhaustive verification suites.
    Verify(VerifyArgs),
    /// Time the per-vertex routine or the bipartition baseline.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    kind: GenKind,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: GraphFormat,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Odd cycle C_len.
    Cycle {
        #[arg(long)]
        len: usize,
    },
    /// Complete graph K_k.
    Complete {
        #[arg(long)]
        k: usize,
    },
    /// Mycielski construction of a graph read from a JSON file.
    Mycielski {
        #[arg(long)]
        of: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpoFormat {
    Json,
    Table,
}

#[derive(Args)]
struct ExpoArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Target size: 3 for K_3, odd k >= 5 for C_k.
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: ExpoFormat,
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct ColorArgs {
    /// Host graph (JSON); switches to general-host mode with a cycle cache.
    #[arg(long, conflicts_with_all = ["cycle_len", "edge"])]
    graph: Option<PathBuf>,
    /// Cycle cache file for general-host mode, read if present and rewritten.
    #[arg(long, env = "EXPO_CACHE", requires = "graph")]
    cache: Option<PathBuf>,
    /// Odd cycle length 2n+1 for single-cycle mode.
    #[arg(long, alias = "len")]
    cycle_len: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Context edge as two 0-based vertex ids, e.g. `0,4`.
    #[arg(long, value_parser = parse_edge)]
    edge: Option<(usize, usize)>,
    /// Colors in 1..=k, comma separated.
    #[arg(long, conflicts_with = "input")]
    assignment: Option<String>,
    /// File of JSON arrays, one assignment per line (`-` for stdin).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Observations,
    ClaimMap,
    LabelInvariance,
    LittlePath,
    ProperK3,
    ProperCk,
    HittingSet,
    Baseline,
    EndToEnd,
    SampledEndToEnd,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Cycle half-length; the cycle is C_{2n+1}.
    #[arg(long, conflicts_with_all = ["n_max", "cycle_len"])]
    n: Option<usize>,
    /// Run n = 1..=n_max.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, alias = "len")]
    cycle_len: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: u32,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// Host graph for the end-to-end suites (default K_4, or the Groetzsch
    /// graph when sampling).
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Keep wall-clock times in the JSON reports.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchMode {
    Explicit,
    Baseline,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "explicit")]
    mode: BenchMode,
    /// Sizes to time; defaults to 10^3..10^6 (explicit) or 1..3 (baseline).
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, default_value_t = 11)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
    Violations(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Lib(Error::Argument(_)) => 2,
            Failure::Lib(Error::OddParity { .. }) => 3,
            Failure::Lib(Error::Isolated(_)) => 4,
            Failure::Lib(Error::Capacity { .. }) => 5,
            _ => 1,
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

fn parse_assignment(s: &str) -> CliResult<Vec<u32>> {
    let trimmed = s.trim();
    if trimmed.starts_with('[') {
        return serde_json::from_str(trimmed).map_err(|e| Failure::Usage(format!("bad assignment {s:?}: {e}")));
    }
    trimmed
        .split(',')
        .map(|t| t.trim().parse().map_err(|e| Failure::Usage(format!("bad color {t:?}: {e}"))))
        .collect()
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(Graph::from_json(&text)?)
}

fn target_for(k: u32) -> CliResult<Target> {
    let t = if k == 3 { Target::K3 } else { Target::Cycle(k) };
    t.validate()?;
    Ok(t)
}

fn set_threads(threads: usize) {
    if threads > 0 {
        // Fails only if the pool was already built, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let g = match args.kind {
        GenKind::Cycle { len } => graph::make_cycle(len)?,
        GenKind::Complete { k } => graph::make_complete(k)?,
        GenKind::Mycielski { of } => graph::make_mycielski(&read_graph(&of)?),
    };
    let text = match args.format {
        GraphFormat::Json => g.to_json() + "\n",
        GraphFormat::Dot => g.to_dot(),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_expo(args: ExpoArgs) -> CliResult {
    set_threads(args.threads);
    let h = read_graph(&args.graph)?;
    let e = expo::build_exponential(&h, target_for(args.k)?, args.cap)?;
    match args.format {
        ExpoFormat::Json => emit(None, &(e.to_json() + "\n")),
        ExpoFormat::Table => {
            let mut out = String::from("component\tsize\tclass\n");
            for (i, comp) in e.components().iter().enumerate() {
                let class = e.classify_component(comp)?;
                out += &format!("{i}\t{}\t{class:?}\n", comp.len());
            }
            out += &format!("# functions={} edges={} loops={}\n", e.len(), e.edge_count(), e.loop_count());
            emit(None, &out)
        }
    }
}

fn color_inputs(args: &ColorArgs) -> CliResult<Vec<Vec<u32>>> {
    match (&args.assignment, &args.input) {
        (Some(a), _) => Ok(vec![parse_assignment(a)?]),
        (None, Some(path)) => {
            let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
                Box::new(io::stdin().lock())
            } else {
                Box::new(io::BufReader::new(fs::File::open(path)?))
            };
            let mut out = Vec::new();
            for line in reader.lines() {
                let line = line?;
                if !line.trim().is_empty() {
                    out.push(parse_assignment(&line)?);
                }
            }
            Ok(out)
        }
        (None, None) => Err(Failure::Usage("give --assignment or --input".into())),
    }
}

fn cmd_color(args: ColorArgs) -> CliResult {
    let inputs = color_inputs(&args)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Some(path) = &args.graph {
        if args.k != 3 {
            return Err(Failure::Usage("general-host mode colors K_3^H only".into()));
        }
        let h = read_graph(path)?;
        let mut cache = match &args.cache {
            Some(p) if p.exists() => {
                let c = CycleCache::from_json(&fs::read_to_string(p)?)?;
                c.check_in(&h)?;
                c
            }
            _ => CycleCache::new(),
        };
        let mut result = Ok(());
        for values in inputs {
            let f = Assignment::new(values, 3)?;
            match colorize::color_in_kh(&h, &f, &mut cache) {
                Ok(kc) => {
                    let v = &kc.verdict;
                    let line = json!({
                        "color": v.color,
                        "branch": v.branch,
                        "ell2": v.ell.doubled(),
                        "p2": v.p.doubled(),
                        "cycle": cache.entries()[kc.cycle_index].cycle,
                    });
                    writeln!(out, "{line}")?;
                }
                Err(e) => {
                    result = Err(e.into());
                    break;
                }
            }
        }
        if let Some(p) = &args.cache {
            fs::write(p, cache.to_json() + "\n")?;
        }
        return result;
    }
    let len = args
        .cycle_len
        .ok_or_else(|| Failure::Usage("give --cycle-len (single-cycle mode) or --graph".into()))?;
    if len < 3 || len % 2 == 0 {
        return Err(Failure::Usage(format!("cycle length must be odd and >= 3, got {len}")));
    }
    let n = len / 2;
    let ctx = match args.edge {
        Some(edge) => OddCycleCtx::new(n, args.k, edge)?,
        None => OddCycleCtx::canonical(n, args.k)?,
    };
    for values in inputs {
        let f = Assignment::new(values, args.k)?;
        let verdict = if args.k == 3 {
            colorize::color_vertex(&f, &ctx)?
        } else {
            colorize::color_vertex_ck(&f, &ctx)?
        };
        writeln!(out, "{}", verdict.to_json())?;
    }
    Ok(())
}

fn suites_for(suite: Suite, k: u32) -> Vec<Suite> {
    match suite {
        Suite::All if k == 3 => vec![
            Suite::Observations,
            Suite::ClaimMap,
            Suite::LabelInvariance,
            Suite::LittlePath,
            Suite::ProperK3,
            Suite::HittingSet,
            Suite::Baseline,
            Suite::EndToEnd,
        ],
        Suite::All => vec![Suite::LabelInvariance, Suite::LittlePath, Suite::ProperCk],
        s => vec![s],
    }
}

fn run_suite(suite: Suite, n: usize, args: &VerifyArgs) -> CliResult<VerificationReport> {
    let (cap, k) = (args.cap, args.k);
    let host = |default: Graph| -> CliResult<Graph> {
        match &args.graph {
            Some(p) => read_graph(p),
            None => Ok(default),
        }
    };
    let k3_only = || -> CliResult {
        if k == 3 {
            Ok(())
        } else {
            Err(Failure::Usage(format!("this suite runs on K_3 only, got --k {k}")))
        }
    };
    let report = match suite {
        Suite::Observations => {
            k3_only()?;
            oracle::verify_observations(n, cap, Fault::None)?
        }
        Suite::ClaimMap => {
            k3_only()?;
            oracle::verify_claim_map(n, cap, Fault::None)?
        }
        Suite::LabelInvariance => oracle::verify_label_invariance(n, k, cap, Fault::None)?,
        Suite::LittlePath => oracle::verify_little_path_bound(n, k, cap, Fault::None)?,
        Suite::ProperK3 => {
            k3_only()?;
            oracle::verify_proper_k3(n, cap, Fault::None)?
        }
        Suite::ProperCk => oracle::verify_proper_ck(n, k, cap, Fault::None)?,
        Suite::HittingSet => {
            k3_only()?;
            oracle::verify_hitting_set(n, cap, Fault::None)?
        }
        Suite::Baseline => {
            k3_only()?;
            oracle::verify_baseline(n, cap, Fault::None)?
        }
        Suite::EndToEnd => {
            k3_only()?;
            oracle::verify_end_to_end(&host(graph::make_complete(4)?)?, cap, Fault::None)?
        }
        Suite::SampledEndToEnd => {
            k3_only()?;
            let grotzsch = graph::make_mycielski(&graph::make_cycle(5)?);
            oracle::verify_sampled_end_to_end(&host(grotzsch)?, args.samples, args.seed, Fault::None)?
        }
        Suite::All => unreachable!("expanded by suites_for"),
    };
    Ok(report)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    set_threads(args.threads);
    let ns: Vec<usize> = match (args.n, args.n_max, args.cycle_len) {
        (Some(n), _, _) => vec![n],
        (_, Some(max), _) => (1..=max).collect(),
        (_, _, Some(len)) if len >= 3 && len % 2 == 1 => vec![len / 2],
        (_, _, Some(len)) => return Err(Failure::Usage(format!("cycle length must be odd and >= 3, got {len}"))),
        _ => vec![1],
    };
    if ns.contains(&0) {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let mut lines = String::new();
    let mut failed = 0;
    eprintln!("{:<20} {:>4} {:>3} {:>10} {:>10} {:>10} {:>10}  status", "suite", "n", "k", "functions", "pairs", "violations", "ms");
    for suite in suites_for(args.suite, args.k) {
        let per_n = !matches!(suite, Suite::EndToEnd | Suite::SampledEndToEnd);
        let runs: &[usize] = if per_n { &ns } else { &ns[..1] };
        for &n in runs {
            let report = run_suite(suite, n, &args)?;
            let status = if report.passed() { "ok" } else { "FAIL" };
            failed += usize::from(!report.passed());
            eprintln!(
                "{:<20} {:>4} {:>3} {:>10} {:>10} {:>10} {:>10.1}  {status}",
                report.statement,
                report.n.map_or("-".to_string(), |n| n.to_string()),
                report.k,
                report.functions,
                report.pairs,
                report.violation_count,
                report.wall_ms,
            );
            let mut value = serde_json::to_value(&report).expect("report serializes");
            if !args.timing {
                value.as_object_mut().expect("object").remove("wall_ms");
            }
            lines += &value.to_string();
            lines.push('\n');
        }
    }
    emit(args.out.as_deref(), &lines)?;
    if failed > 0 {
        return Err(Failure::Violations(failed));
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let sizes = if !args.n.is_empty() {
        args.n.clone()
    } else {
        match args.mode {
            BenchMode::Explicit => vec![1_000, 10_000, 100_000, 1_000_000],
            BenchMode::Baseline => vec![1, 2, 3],
        }
    };
    let mut timings = Vec::new();
    for &n in &sizes {
        timings.push(match args.mode {
            BenchMode::Explicit => bench::time_color_vertex(n, args.reps, args.seed)?,
            BenchMode::Baseline => bench::time_baseline(n, args.reps, args.cap)?,
        });
    }
    let mut out = format!(
        "{:<9} {:>9} {:>5} {:>12} {:>12} {:>12} {:>14} {:>6}\n",
        "mode", "n", "reps", "median_ms", "min_ms", "max_ms", "touched", "draws"
    );
    for t in &timings {
        out += &format!(
            "{:<9} {:>9} {:>5} {:>12.4} {:>12.4} {:>12.4} {:>14} {:>6}\n",
            t.mode, t.n, t.reps, t.median_ms, t.min_ms, t.max_ms, t.assignments_touched, t.sampling_draws
        );
    }
    if timings.len() >= 2 {
        out += &format!("# log-log slope {:.3}\n", bench::loglog_slope(&timings));
    }
    emit(None, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Expo(a) => cmd_expo(a),
        Command::Color(a) => cmd_color(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Usage(m) => eprintln!("usage error: {m}"),
                Failure::Io(m) => eprintln!("io error: {m}"),
                Failure::Violations(k) => eprintln!("{k} suite run(s) reported violations"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
