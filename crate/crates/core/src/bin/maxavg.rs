use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use maxavg::asymptotics::{
    estimate_constant_a, geometric_grid, sweep, two_point_estimate, write_csv, SweepRecord,
};
use maxavg::io::{parse_radii, parse_subsets, parse_tuple_exact, parse_tuple_f64};
use maxavg::oracle::{brute_force_oracle, ORACLE_MAX_N};
use maxavg::reduced::{minimize_chain, OptimizerConfig, ReducedSolution};
use maxavg::structure::build_poset;
use maxavg::sums::{diananda_sum, generalized_max_sum, max_avg_sum, sum_with_radii};
use maxavg::table::analyze;
use maxavg::verify::{run_all, run_suite, Suite, DEFAULT_SEED};
use maxavg::{BigRational, Error, PeriodicTuple, Scalar};

#[derive(Parser)]
#[command(name = "maxavg", version, about = "Cyclic sums with maximal forward averages")]
struct Cli {
    /// Arithmetic for tuple commands; optimization always runs in floating point.
    #[arg(long, value_enum, global = true, default_value = "float")]
    backend: Backend,
    /// Output format; each command has its own default.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Optimizer stationarity tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Float,
    Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Averages table, M-intervals, full maximal interval, poset and rotation.
    Analyze {
        /// Tuple file `{"values": [...]}`.
        input: PathBuf,
        /// Also test that short-interval averages are pairwise distinct (O(n^3)).
        #[arg(long)]
        check_independence: bool,
    },
    /// `S_n(x, r)` for given radii, or the Diananda sum with constant `k`.
    Sum {
        input: PathBuf,
        /// Radii file `{"radii": [...]}`.
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        radii: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// `S^max(x)` with its radii, or the sum for a subset system.
    Maxsum {
        input: PathBuf,
        /// Subset system file `{"collections": [[[...], ...], ...]}`.
        #[arg(long)]
        subsets: Option<PathBuf>,
    },
    /// Minimizes the chain objective over the simplex.
    Minimize(MinimizeArgs),
    /// `inf S_n^max` over a geometric grid of `n`.
    Sweep {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Fit `deficit = a - c / ln n` and report the intercept.
        #[arg(long)]
        estimate_a: bool,
    },
    /// Runs the property suites.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Option<Suite>,
    },
}

#[derive(Args)]
struct MinimizeArgs {
    /// Period length: `N = n`, `p = 1/n`.
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    n: Option<usize>,
    /// Weight `p > 0` of the last term.
    #[arg(long)]
    p: Option<f64>,
    /// Vector length when `--p` is given; defaults to `ceil(1/p)`.
    #[arg(long = "N", requires = "p")]
    big_n: Option<usize>,
    /// Cross-check against a grid search.
    #[arg(long)]
    oracle: bool,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Input(String),
    NonConvergence,
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn rational_text(v: &BigRational) -> String {
    if v.is_integer() { v.numer().to_string() } else { format!("{}/{}", v.numer(), v.denom()) }
}

fn config(tol: Option<f64>) -> Result<OptimizerConfig, Failure> {
    match tol {
        Some(t) => Ok(OptimizerConfig::with_tolerance(t)?),
        None => Ok(OptimizerConfig::default()),
    }
}

fn cmd_analyze<T: Scalar>(x: PeriodicTuple<T>, check: bool, format: Format) -> CmdResult {
    let a = analyze(&x, check);
    for w in a.warnings() {
        eprintln!("warning: {w}");
    }
    match format {
        Format::Text => print!("{}", a.render_text()),
        Format::Csv => print!("{}", a.table_csv()),
        Format::Json => print_json(&serde_json::to_value(a.to_report()).expect("serializable")),
        Format::Dot => match build_poset(&x) {
            Ok(p) => print!("{}", p.to_dot()),
            Err(e) => println!("// {e}\ndigraph mintervals {{\n}}"),
        },
    }
    Ok(())
}

fn cmd_sum<T: Scalar>(x: PeriodicTuple<T>, radii: Option<&Path>, k: Option<usize>, exact: Option<fn(&T) -> String>) -> CmdResult {
    let (value, label) = match (radii, k) {
        (Some(path), _) => (sum_with_radii(&x, &parse_radii(&read(path)?)?)?, "radii"),
        (None, Some(k)) => (diananda_sum(&x, k)?, "diananda"),
        (None, None) => return Err(Failure::Input("give --radii or --k".into())),
    };
    let mut out = json!({ "n": x.len(), "kind": label, "value": value.to_f64() });
    if let Some(f) = exact {
        out["exact"] = json!(f(&value));
    }
    print_json(&out);
    Ok(())
}

fn cmd_maxsum<T: Scalar>(x: PeriodicTuple<T>, subsets: Option<&Path>, exact: Option<fn(&T) -> String>) -> CmdResult {
    let out = match subsets {
        Some(path) => {
            let system = parse_subsets(&read(path)?, x.len())?;
            let value = generalized_max_sum(&x, &system)?;
            let m: Vec<f64> = system.maximal_averages(&x).iter().map(Scalar::to_f64).collect();
            let mut o = json!({ "n": x.len(), "value": value.to_f64(), "maximal_averages": m });
            if let Some(f) = exact {
                o["exact"] = json!(f(&value));
            }
            o
        }
        None => {
            let s = max_avg_sum(&x);
            let m: Vec<f64> = (1..=x.len() as i64).map(|i| x.forward_max_average(i).to_f64()).collect();
            let mut o = json!({
                "n": x.len(),
                "value": s.value.to_f64(),
                "radii": s.radii.as_slice(),
                "forward_max_averages": m,
            });
            if let Some(f) = exact {
                o["exact"] = json!(f(&s.value));
            }
            o
        }
    };
    print_json(&out);
    Ok(())
}

/// Grid resolution per dimension: `(steps, refinements)`.
fn oracle_grid(n: usize) -> (usize, usize) {
    match n {
        0..=3 => (400, 6),
        4 => (60, 10),
        5 => (24, 14),
        _ => (14, 18),
    }
}

fn print_solution(s: &ReducedSolution, format: Format) {
    match format {
        Format::Csv => {
            println!("n,p,value,support,residual");
            println!("{},{},{},{},{:.16e}", s.n, s.p, maxavg::asymptotics::format_sig17(s.value), s.support, s.residual);
        }
        _ => print_json(&serde_json::to_value(s.to_json()).expect("serializable")),
    }
}

fn cmd_minimize(args: &MinimizeArgs, cfg: &OptimizerConfig, format: Format) -> CmdResult {
    let (n, p) = match (args.n, args.p) {
        (Some(n), None) if n >= 1 => (n, 1.0 / n as f64),
        (Some(_), None) => return Err(Failure::Input("--n must be at least 1".into())),
        (None, Some(p)) if p > 0.0 && p.is_finite() => {
            (args.big_n.unwrap_or_else(|| (1.0 / p).ceil().max(1.0) as usize), p)
        }
        _ => return Err(Failure::Input("--p must be positive and finite".into())),
    };
    if args.oracle && n > ORACLE_MAX_N {
        return Err(Failure::Input(format!("--oracle supports N <= {ORACLE_MAX_N}")));
    }
    let (mut solution, converged) = match minimize_chain(n, p, cfg) {
        Ok(s) => (s, true),
        Err(Error::NonConvergence { best }) => (*best, false),
        Err(e) => return Err(e.into()),
    };
    if args.oracle {
        let (steps, refinements) = oracle_grid(n);
        solution.oracle_gap = Some(brute_force_oracle(n, p, steps, refinements)? - solution.value);
    }
    print_solution(&solution, format);
    if converged {
        Ok(())
    } else {
        eprintln!("error: optimizer did not converge (residual {:e})", solution.residual);
        Err(Failure::NonConvergence)
    }
}

fn cmd_sweep(from: f64, to: f64, points: usize, estimate: bool, cfg: &OptimizerConfig, format: Format) -> CmdResult {
    let grid = geometric_grid(from, to, points)?;
    let records = sweep(&grid, cfg)?;
    let fit = estimate.then(|| estimate_constant_a(&records));
    let two_point = (estimate && records.len() >= 2)
        .then(|| two_point_estimate(&records[records.len() - 2], &records[records.len() - 1]).ok())
        .flatten();
    if format == Format::Json {
        let rows: Vec<Value> = records.iter().map(record_json).collect();
        let mut out = json!({ "records": rows });
        match &fit {
            Some(Ok(f)) => {
                out["fit"] = json!({ "a_hat": f.a_hat, "c": f.c, "residual_norm": f.residual_norm, "points": f.points });
            }
            Some(Err(e)) => out["fit_error"] = json!(e.to_string()),
            None => {}
        }
        if let Some(t) = two_point {
            out["two_point_a"] = json!(t);
        }
        print_json(&out);
    } else {
        let stdout = std::io::stdout();
        write_csv(&records, stdout.lock()).map_err(|e| Failure::Input(e.to_string()))?;
        for r in records.iter().filter(|r| !r.converged) {
            println!("# not converged: n={} residual={:e}", r.n, r.residual);
        }
        match &fit {
            Some(Ok(f)) => {
                println!("# a_hat={}", maxavg::asymptotics::format_sig17(f.a_hat));
                println!("# c={}", maxavg::asymptotics::format_sig17(f.c));
                println!("# fit_points={} residual_norm={:e}", f.points, f.residual_norm);
            }
            Some(Err(e)) => println!("# a_hat unavailable: {e}"),
            None => {}
        }
        if let Some(t) = two_point {
            println!("# two_point_a={}", maxavg::asymptotics::format_sig17(t));
        }
    }
    for r in records.iter().filter(|r| !r.converged) {
        eprintln!("warning: n = {} did not converge", r.n);
    }
    Ok(())
}

fn record_json(r: &SweepRecord) -> Value {
    json!({
        "n": r.n,
        "s_star": r.s_star,
        "deficit": r.deficit,
        "support": r.support,
        "residual": r.residual,
        "converged": r.converged,
    })
}

fn cmd_verify(suite: Option<Suite>, seed: u64, format: Format) -> CmdResult {
    let reports = match suite {
        Some(s) => vec![run_suite(s, seed)],
        None => run_all(seed),
    };
    if format == Format::Json {
        let rows: Vec<Value> = reports
            .iter()
            .flat_map(|r| {
                r.checks.iter().map(move |c| {
                    json!({ "suite": r.suite.name(), "check": c.name, "passed": c.passed, "detail": c.detail })
                })
            })
            .collect();
        print_json(&json!({ "seed": seed, "checks": rows }));
    } else {
        for r in &reports {
            for c in &r.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {} ({})", r.suite, c.name, c.detail);
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} of {} suites passed", reports.len() - failed, reports.len());
    if failed == 0 { Ok(()) } else { Err(Failure::Verification) }
}

fn run(cli: Cli) -> CmdResult {
    let cfg = config(cli.tol)?;
    let exact_text: fn(&BigRational) -> String = rational_text;
    match &cli.command {
        Command::Analyze { input, check_independence } => {
            let text = read(input)?;
            let format = cli.format.unwrap_or(Format::Text);
            match cli.backend {
                Backend::Float => cmd_analyze(parse_tuple_f64(&text)?, *check_independence, format),
                Backend::Rational => cmd_analyze(parse_tuple_exact(&text)?, *check_independence, format),
            }
        }
        Command::Sum { input, radii, k } => {
            let text = read(input)?;
            match cli.backend {
                Backend::Float => cmd_sum(parse_tuple_f64(&text)?, radii.as_deref(), *k, None),
                Backend::Rational => cmd_sum(parse_tuple_exact(&text)?, radii.as_deref(), *k, Some(exact_text)),
            }
        }
        Command::Maxsum { input, subsets } => {
            let text = read(input)?;
            match cli.backend {
                Backend::Float => cmd_maxsum(parse_tuple_f64(&text)?, subsets.as_deref(), None),
                Backend::Rational => cmd_maxsum(parse_tuple_exact(&text)?, subsets.as_deref(), Some(exact_text)),
            }
        }
        Command::Minimize(args) => cmd_minimize(args, &cfg, cli.format.unwrap_or(Format::Json)),
        Command::Sweep { from, to, points, estimate_a } => {
            cmd_sweep(*from, *to, *points, *estimate_a, &cfg, cli.format.unwrap_or(Format::Csv))
        }
        Command::Verify { suite } => cmd_verify(*suite, cli.seed, cli.format.unwrap_or(Format::Text)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NonConvergence) => ExitCode::from(2),
        Err(Failure::Verification) => ExitCode::from(3),
    }
}
