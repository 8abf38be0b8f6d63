//! The `blm` command line.
//!
//! Exit codes: 0 success, 1 invalid instance, 2 usage error, 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, BenchConfig, Mode};
use crate::fptas::{solve, solve_exact, Epsilon};
use crate::generate::{generate, GenParams, Kind};
use crate::io::{parse_file, parse_instance, ParseError, SolveReport};
use crate::matroid::LaminarInstance;
use crate::oracle::{enumerate_opt, OracleConfig, DEFAULT_LIMIT};

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "blm", version, about = "Budgeted laminar matroid solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Args)]
struct Input {
    /// Instance file (JSON)
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Approximate solution within a (1 - epsilon) factor of optimal
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal solution by the exact pseudo-polynomial algorithm
    Exact {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Optimal solution by exhaustive enumeration
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Refuse instances with more elements than this
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check an instance file and report every violation
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Generate a seeded instance
    Gen(GenArgs),
    /// Sweep sizes and epsilons on generated instances, printing CSV
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct GenCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cost range, e.g. 1:100
    #[arg(long, default_value = "1:100", value_parser = parse_range)]
    costs: (u64, u64),
    /// Profit range, e.g. 1:100
    #[arg(long, default_value = "1:100", value_parser = parse_range)]
    profits: (u64, u64),
    /// Budget; defaults to half the total cost
    #[arg(long)]
    budget: Option<u64>,
    /// Nesting depth for random_laminar
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// Maximum children per set for random_laminar
    #[arg(long, default_value_t = 3)]
    branching: usize,
    /// Maximum capacity for random_laminar
    #[arg(long)]
    cap_max: Option<u64>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    /// Cardinality bound for the cardinality kind
    #[arg(long)]
    k: Option<u64>,
    /// Group sizes, e.g. 2,2,3
    #[arg(long, value_delimiter = ',')]
    groups: Vec<usize>,
    /// Group capacities for the partition kind
    #[arg(long, value_delimiter = ',')]
    capacities: Vec<u64>,
    #[command(flatten)]
    common: GenCommon,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.1")]
    epsilons: Vec<String>,
    #[arg(long, default_value = "fptas")]
    mode: String,
    #[arg(long, default_value = "random_laminar")]
    kind: String,
    #[command(flatten)]
    common: GenCommon,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: u64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// A failed command: exit code plus message for stderr.
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl ToString) -> Self {
        Failure(EXIT_USAGE, msg.to_string())
    }

    fn internal(msg: impl ToString) -> Self {
        Failure(EXIT_INTERNAL, msg.to_string())
    }
}

fn read_instance(path: &Path) -> Result<LaminarInstance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::internal(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Failure::internal)
        }
    }
}

fn render(report: &SolveReport, output: &Output) -> Result<(), Failure> {
    let text = match output.format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_json(),
    };
    emit(output.out.as_deref(), &text)
}

fn gen_params(common: &GenCommon) -> GenParams {
    GenParams {
        seed: common.seed,
        costs: common.costs.0..=common.costs.1,
        profits: common.profits.0..=common.profits.1,
        budget: common.budget,
        depth: common.depth,
        branching: common.branching,
        cap_max: common.cap_max,
        ..GenParams::default()
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            input,
            epsilon,
            output,
        } => {
            let eps: Epsilon = epsilon.parse().map_err(Failure::usage)?;
            if eps.is_vacuous() {
                eprintln!("warning: epsilon {epsilon} >= 1 gives no approximation guarantee");
            }
            let instance = read_instance(&input.instance)?;
            let start = Instant::now();
            let answer = solve(&instance, &eps).map_err(Failure::usage)?;
            let report =
                SolveReport::from_answer("fptas", &instance, &answer, Some(epsilon), millis(start));
            render(&report, &output)
        }
        Command::Exact { input, output } => {
            let instance = read_instance(&input.instance)?;
            let start = Instant::now();
            let answer = solve_exact(&instance);
            let report = SolveReport::from_answer("exact", &instance, &answer, None, millis(start));
            render(&report, &output)
        }
        Command::Oracle {
            input,
            limit,
            output,
        } => {
            let instance = read_instance(&input.instance)?;
            let start = Instant::now();
            let solution =
                enumerate_opt(&instance, &OracleConfig { limit }).map_err(Failure::usage)?;
            let report = SolveReport {
                mode: "oracle".into(),
                solution: solution
                    .ids(&instance)
                    .into_iter()
                    .map(str::to_string)
                    .collect(),
                profit: solution.profit,
                cost: solution.cost,
                budget: instance.budget(),
                rounded_profit: None,
                epsilon: None,
                alpha: None,
                table_rows: 0,
                table_columns: 0,
                table_cells: 0,
                recursive_calls: 0,
                wall_ms: millis(start),
            };
            render(&report, &output)
        }
        Command::Validate { input } => {
            let text = fs::read_to_string(&input.instance).map_err(|e| {
                Failure::internal(format!("cannot read {}: {e}", input.instance.display()))
            })?;
            let name = input.instance.display();
            let file =
                parse_file(&text).map_err(|e| Failure(EXIT_INVALID, format!("{name}: {e}")))?;
            let strict = crate::matroid::validate_laminar(&file.to_raw());
            match file.into_instance() {
                Ok(instance) => {
                    for v in &strict.violations {
                        eprintln!("note: {v} (merged on load)");
                    }
                    println!(
                        "{name}: valid ({} elements, {} sets after canonicalization)",
                        instance.len(),
                        instance.family().len()
                    );
                    Ok(())
                }
                Err(report) => Err(Failure(
                    EXIT_INVALID,
                    format!("{name}: {}", ParseError::Invalid(report)),
                )),
            }
        }
        Command::Gen(args) => {
            let kind: Kind = args.kind.parse().map_err(Failure::usage)?;
            let params = GenParams {
                n: args.n,
                k: args.k,
                groups: args.groups,
                group_capacities: args.capacities,
                ..gen_params(&args.common)
            };
            let file = generate(kind, &params).map_err(Failure::usage)?;
            emit(args.out.as_deref(), &file.to_json())
        }
        Command::Bench(args) => {
            let mode = match args.mode.as_str() {
                "fptas" => Mode::Fptas,
                "exact" => Mode::Exact,
                other => return Err(Failure::usage(format!("unknown mode '{other}'"))),
            };
            let epsilons = args
                .epsilons
                .iter()
                .map(|e| e.parse::<Epsilon>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::usage)?;
            let config = BenchConfig {
                sizes: args.sizes,
                epsilons,
                mode,
                kind: args.kind.parse().map_err(Failure::usage)?,
                params: gen_params(&args.common),
            };
            let result = match &args.out {
                Some(path) => {
                    let file = fs::File::create(path).map_err(|e| {
                        Failure::internal(format!("cannot write {}: {e}", path.display()))
                    })?;
                    run_bench(&config, file)
                }
                None => run_bench(&config, io::stdout().lock()),
            };
            result.map(|_| ()).map_err(Failure::internal)
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            code
        }
    }
}
