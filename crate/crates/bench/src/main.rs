use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use paradiag_bench::config::{read_json, OutputPaths, ProblemConfig, RunConfig, SolverParams, TableauSource};
use paradiag_bench::output::{history_csv, method_csv, to_file};
use paradiag_bench::shifts::{shifts, PlanKind, ShiftsConfig};
use paradiag_bench::table::{default_ds, default_rhos, run_table, TableConfig};
use paradiag_bench::{in_pool, run, thread_count, BenchError, Method, RunOutput};

#[derive(Parser)]
#[command(name = "paradiag-bench", version, about = "All-at-once space-time solver benchmarks")]
struct Cli {
    /// Worker threads for the parallel maps (default: PARADIAG_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem with one method.
    Solve(SolveArgs),
    /// Produce a result table as CSV.
    Table(TableArgs),
    /// Print a shift plan and the decay bound as JSON.
    Shifts(ShiftsArgs),
    /// Run several methods on one problem, one CSV row each.
    Compare(CompareArgs),
}

#[derive(Args, Clone, Default)]
struct ProblemArgs {
    /// Problem family: heat1d, convdiff2d, frac-space, frac-time, wave2d, rk-heat.
    #[arg(long)]
    problem: Option<String>,
    /// Space size: n for 1D families, points per direction for 2D ones.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nt: Option<usize>,
    /// Fractional order of frac-time.
    #[arg(long)]
    gamma: Option<f64>,
    /// Builtin tableau name or JSON file for rk-heat.
    #[arg(long)]
    tableau: Option<String>,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
}

impl ParamArgs {
    fn params(&self) -> SolverParams {
        SolverParams {
            tol: self.tol,
            rho: self.rho,
            d: self.d,
            alpha: self.alpha,
            sigma: self.sigma,
            max_iter: self.max_iter,
            max_dim: self.max_dim,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// JSON run configuration; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    params: ParamArgs,
    /// Write the full report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the table row here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the residual history here.
    #[arg(long)]
    history: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    EvintGrid,
    Methods,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "evint-grid")]
    kind: TableKind,
    /// Grid size n = n_t of the evint grid.
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    rhos: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    ds: Option<Vec<usize>>,
    #[arg(long)]
    problem: Option<String>,
    /// Sizes as SIZExNT, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<String>,
    #[arg(long, value_delimiter = ',', value_enum)]
    methods: Vec<Method>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShiftsArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<PlanKind>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    cycle: Option<usize>,
    #[command(flatten)]
    problem: ProblemArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', value_enum, required = true, num_args = 1..)]
    methods: Vec<Method>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    history: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> BenchError {
    BenchError::Usage(msg.into())
}

fn problem_from_args(a: &ProblemArgs, base: Option<ProblemConfig>) -> Result<ProblemConfig, BenchError> {
    let mut cfg = match (&a.problem, base) {
        (Some(name), _) => {
            let n = a.n.ok_or_else(|| usage("--n is required with --problem"))?;
            let nt = a.nt.ok_or_else(|| usage("--nt is required with --problem"))?;
            ProblemConfig::from_family(name, n, nt)?
        }
        (None, Some(b)) => b,
        (None, None) => return Err(usage("no problem given (use --problem or --config)")),
    };
    match &mut cfg {
        ProblemConfig::Heat1d { n, nt } | ProblemConfig::FracTime { n, nt, .. } | ProblemConfig::RkHeat { n, nt, .. } => {
            *n = a.n.unwrap_or(*n);
            *nt = a.nt.unwrap_or(*nt);
        }
        ProblemConfig::Convdiff2d { n_side, nt } | ProblemConfig::FracSpace { n_side, nt } | ProblemConfig::Wave2d { n_side, nt } => {
            *n_side = a.n.unwrap_or(*n_side);
            *nt = a.nt.unwrap_or(*nt);
        }
    }
    if let (Some(g), ProblemConfig::FracTime { gamma, .. }) = (a.gamma, &mut cfg) {
        *gamma = g;
    }
    if let (Some(t), ProblemConfig::RkHeat { tableau, .. }) = (&a.tableau, &mut cfg) {
        *tableau = if std::path::Path::new(t).is_file() {
            TableauSource::Inline(read_json(std::path::Path::new(t))?)
        } else {
            TableauSource::Builtin(t.clone())
        };
    }
    Ok(cfg)
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), BenchError> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    match writeln!(out) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(BenchError::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn write_outputs(outs: &[RunOutput], paths: &OutputPaths, json_to_stdout: bool) -> Result<(), BenchError> {
    if let Some(p) = &paths.json {
        to_file(p, |f| Ok(serde_json::to_writer_pretty(f, &outs[0])?))?;
    } else if json_to_stdout {
        print_json(&outs[0])?;
    }
    if let Some(p) = &paths.csv {
        to_file(p, |f| method_csv(f, outs))?;
    }
    if let Some(p) = &paths.history {
        to_file(p, |f| history_csv(f, outs))?;
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs) -> Result<(), BenchError> {
    let base: Option<RunConfig> = a.config.as_deref().map(read_json).transpose()?;
    let problem = problem_from_args(&a.problem, base.as_ref().map(|b| b.problem.clone()))?;
    let method = a.method.or(base.as_ref().map(|b| b.method)).ok_or_else(|| usage("no method given"))?;
    let params = base.as_ref().map(|b| b.params.clone()).unwrap_or_default().overlay(&a.params.params());
    let mut paths = base.map(|b| b.output).unwrap_or_default();
    paths.json = a.json.or(paths.json);
    paths.csv = a.csv.or(paths.csv);
    paths.history = a.history.or(paths.history);
    let out = run(&problem, method, &params)?;
    write_outputs(&[out], &paths, true)
}

fn parse_size(s: &str) -> Result<(usize, usize), BenchError> {
    let (a, b) = s.split_once('x').ok_or_else(|| usage(format!("size '{s}' is not SIZExNT")))?;
    let p = |v: &str| v.trim().parse::<usize>().map_err(|_| usage(format!("size '{s}' is not SIZExNT")));
    Ok((p(a)?, p(b)?))
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| BenchError::Io(format!("{}: {e}", p.display())))?),
        None => Box::new(std::io::stdout()),
    })
}

fn cmd_table(a: TableArgs) -> Result<(), BenchError> {
    let cfg = match &a.config {
        Some(p) => read_json::<TableConfig>(p)?,
        None => match a.kind {
            TableKind::EvintGrid => TableConfig::EvintGrid {
                n: a.n,
                rhos: a.rhos.clone().unwrap_or_else(default_rhos),
                ds: a.ds.clone().unwrap_or_else(default_ds),
            },
            TableKind::Methods => TableConfig::Methods {
                problem: a.problem.clone().ok_or_else(|| usage("--problem is required for the methods table"))?,
                sizes: a.sizes.iter().map(|s| parse_size(s)).collect::<Result<_, _>>()?,
                methods: a.methods.clone(),
                params: a.params.params(),
            },
        },
    };
    run_table(&cfg, out_writer(&a.out)?)
}

fn cmd_shifts(a: ShiftsArgs) -> Result<(), BenchError> {
    let base: Option<ShiftsConfig> = a.config.as_deref().map(read_json).transpose()?;
    let kind = a.kind.or(base.as_ref().map(|b| b.kind)).ok_or_else(|| usage("no plan kind given"))?;
    let count = a.count.or(base.as_ref().map(|b| b.count)).ok_or_else(|| usage("no count given"))?;
    let cycle = a.cycle.or(base.as_ref().map(|b| b.cycle)).unwrap_or(4);
    let default = base.map(|b| b.problem).unwrap_or(ProblemConfig::Heat1d { n: 64, nt: 64 });
    let problem = problem_from_args(&a.problem, Some(default))?;
    let out = shifts(&ShiftsConfig { kind, count, cycle, problem })?;
    print_json(&out)
}

fn cmd_compare(a: CompareArgs) -> Result<(), BenchError> {
    if a.methods.len() < 2 {
        return Err(usage("compare needs at least two methods"));
    }
    let problem = problem_from_args(&a.problem, None)?;
    let params = a.params.params();
    let outs = a.methods.iter().map(|&m| run(&problem, m, &params)).collect::<Result<Vec<_>, _>>()?;
    method_csv(out_writer(&a.out)?, &outs)?;
    if let Some(p) = &a.history {
        to_file(p, |f| history_csv(f, &outs))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = thread_count(cli.threads).and_then(|threads| {
        in_pool(threads, move || match cli.cmd {
            Command::Solve(a) => cmd_solve(a),
            Command::Table(a) => cmd_table(a),
            Command::Shifts(a) => cmd_shifts(a),
            Command::Compare(a) => cmd_compare(a),
        })?
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
