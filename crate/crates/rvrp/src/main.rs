//! Command-line interface: solve single instances, sweep alpha/beta
//! values, run the scale experiment, and generate random instances.

use std::fs::{self, File};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rvrp::annealing::SaConfig;
use rvrp::bench::{self, run_exact, run_sa_best_of, RunRecord, SolverChoice};
use rvrp::exact::DEFAULT_SYMBOL_LIMIT;
use rvrp::generator::{generate, GenSpec};
use rvrp::model::{load_instance, reference_instance, save_instance, Instance, ObjectiveSpec};

#[derive(Parser)]
#[command(
    name = "rvrp",
    about = "Robust capacitated vehicle routing under arc interdiction risk",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with the exact enumerator or simulated annealing.
    Solve(SolveArgs),
    /// Sweep a list of alpha (or beta) values and emit a CSV plus chart data.
    Sweep(SweepArgs),
    /// Generate random instances of increasing size and compare the three
    /// solve configurations (classical, alpha-constrained, beta-budgeted).
    Scale(ScaleArgs),
    /// Generate a random instance file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Use the built-in 8-customer reference instance.
    #[arg(long)]
    reference: bool,
    /// Path to an instance file (see docs/instance_format.md).
    #[arg(long)]
    instance: Option<PathBuf>,
}

impl InstanceArgs {
    fn load(&self) -> Result<(Instance, String)> {
        match (&self.instance, self.reference) {
            (Some(path), false) => {
                let instance = load_instance(path)?;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                Ok((instance, id))
            }
            (None, true) => Ok((reference_instance(), "reference".to_string())),
            _ => bail!("specify exactly one of --reference or --instance <path>"),
        }
    }
}

#[derive(Args)]
struct ModeArgs {
    /// Minimize total cost subject to a per-customer success floor.
    #[arg(long)]
    min_cost: bool,
    /// Maximize total fulfillment success subject to a cost budget.
    #[arg(long)]
    max_success: bool,
    /// Success floor as a percentage (e.g. 90 for 90%).
    #[arg(long)]
    alpha: Option<f64>,
    /// Cost budget.
    #[arg(long)]
    beta: Option<f64>,
}

impl ModeArgs {
    fn spec(&self) -> Result<ObjectiveSpec> {
        match (self.min_cost, self.max_success) {
            (true, false) => {
                let alpha = self
                    .alpha
                    .context("--min-cost requires --alpha <percent>")?;
                Ok(ObjectiveSpec::min_cost(alpha / 100.0)?)
            }
            (false, true) => {
                let beta = self.beta.context("--max-success requires --beta <budget>")?;
                Ok(ObjectiveSpec::max_success(beta)?)
            }
            _ => bail!("specify exactly one of --min-cost or --max-success"),
        }
    }
}

#[derive(Args)]
struct SaArgs {
    /// Base RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON file overriding SA parameters (delta, outer_iterations,
    /// inner_iterations, init_samples, penalty.big_m).
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SaArgs {
    fn config(&self) -> Result<SaConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("failed to read {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("failed to parse {}", path.display()))?
            }
            None => SaConfig::default(),
        };
        config.seed = self.seed;
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Use the exhaustive exact solver.
    #[arg(long)]
    exact: bool,
    /// Use the simulated-annealing solver.
    #[arg(long)]
    sa: bool,
    #[command(flatten)]
    mode: ModeArgs,
    #[command(flatten)]
    sa_args: SaArgs,
    /// SA runs per solve; the best is reported.
    #[arg(long, default_value_t = 5)]
    sa_seeds: u64,
    /// Symbol-count limit for the exact enumerator.
    #[arg(long, default_value_t = DEFAULT_SYMBOL_LIMIT)]
    limit: usize,
    /// Result file path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Solver(s) to run: exact, sa, or both.
    #[arg(long, default_value = "exact")]
    solver: String,
    /// Sweep over these alpha percentages (comma-separated).
    #[arg(long)]
    alphas: Option<String>,
    /// Sweep over these beta budgets (comma-separated).
    #[arg(long)]
    betas: Option<String>,
    #[command(flatten)]
    sa_args: SaArgs,
    #[arg(long, default_value_t = 5)]
    sa_seeds: u64,
    #[arg(long, default_value_t = DEFAULT_SYMBOL_LIMIT)]
    limit: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Chart-data output path (value vs objective).
    #[arg(long)]
    chart: Option<PathBuf>,
}

#[derive(Args)]
struct ScaleArgs {
    /// Instance sizes as comma-separated NxK pairs, e.g. "10x2,20x2,30x3".
    #[arg(long)]
    sizes: String,
    /// Success floor percentage applied to every size.
    #[arg(long, default_value_t = 75.0)]
    alpha: f64,
    /// Cost budgets, one per size (comma-separated).
    #[arg(long)]
    betas: String,
    #[command(flatten)]
    sa_args: SaArgs,
    #[arg(long, default_value_t = 5)]
    sa_seeds: u64,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Chart data: total cost per configuration.
    #[arg(long)]
    chart_cost: Option<PathBuf>,
    /// Chart data: total success per configuration.
    #[arg(long)]
    chart_success: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Customer count.
    #[arg(long)]
    n: usize,
    /// Fleet size.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instance file output path.
    #[arg(long)]
    out: PathBuf,
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid {what} value {part:?}"))
        })
        .collect()
}

fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>> {
    let sizes: Vec<(usize, usize)> = text
        .split(',')
        .map(|part| {
            let (n, k) = part
                .trim()
                .split_once(['x', 'X'])
                .with_context(|| format!("size {part:?} is not of the form NxK"))?;
            Ok((
                n.parse().with_context(|| format!("invalid N in {part:?}"))?,
                k.parse().with_context(|| format!("invalid K in {part:?}"))?,
            ))
        })
        .collect::<Result<_>>()?;
    if sizes.is_empty() {
        bail!("at least one NxK size is required");
    }
    Ok(sizes)
}

fn write_result(record: &RunRecord, instance: &Instance, out: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        let mut file =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        bench::write_result_file(record, instance, &mut file)?;
    }
    println!("{}", record.summary());
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let (instance, id) = args.instance.load()?;
    let spec = args.mode.spec()?;
    let record = match (args.exact, args.sa) {
        (true, false) => run_exact(&instance, &id, &spec, args.limit)?,
        (false, true) => {
            let config = args.sa_args.config()?;
            run_sa_best_of(&instance, &id, &spec, &config, args.sa_seeds.max(1))?
        }
        _ => bail!("specify exactly one of --exact or --sa"),
    };
    write_result(&record, &instance, args.out.as_ref())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let (instance, id) = args.instance.load()?;
    let choice = match args.solver.as_str() {
        "exact" => SolverChoice::Exact,
        "sa" => SolverChoice::Sa,
        "both" => SolverChoice::Both,
        other => bail!("unknown solver {other:?}; expected exact, sa, or both"),
    };
    let specs: Vec<(f64, ObjectiveSpec)> = match (&args.alphas, &args.betas) {
        (Some(alphas), None) => parse_list(alphas, "alpha")?
            .into_iter()
            .map(|pct| Ok((pct, ObjectiveSpec::min_cost(pct / 100.0)?)))
            .collect::<Result<_>>()?,
        (None, Some(betas)) => parse_list(betas, "beta")?
            .into_iter()
            .map(|beta| Ok((beta, ObjectiveSpec::max_success(beta)?)))
            .collect::<Result<_>>()?,
        _ => bail!("specify exactly one of --alphas or --betas"),
    };
    let config = args.sa_args.config()?;
    let rows = bench::sweep(
        &instance,
        &id,
        &specs,
        choice,
        &config,
        args.sa_seeds.max(1),
        args.limit,
    )?;
    let mut csv = File::create(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    bench::write_sweep_csv(&rows, &mut csv)?;
    if let Some(path) = &args.chart {
        let mut chart =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        bench::write_sweep_chart(&rows, &mut chart)?;
    }
    for row in &rows {
        for record in [&row.exact, &row.sa].into_iter().flatten() {
            println!("{}", record.summary());
        }
    }
    Ok(())
}

fn cmd_scale(args: ScaleArgs) -> Result<()> {
    let sizes = parse_sizes(&args.sizes)?;
    let betas = parse_list(&args.betas, "beta")?;
    if !(0.0..=100.0).contains(&args.alpha) {
        bail!("--alpha must be a percentage in [0, 100]");
    }
    let config = args.sa_args.config()?;
    let rows = bench::scale(
        &sizes,
        args.alpha / 100.0,
        &betas,
        args.sa_args.seed,
        &config,
        args.sa_seeds.max(1),
    )?;
    let mut csv = File::create(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    bench::write_scale_csv(&rows, &mut csv)?;
    if let Some(path) = &args.chart_cost {
        let mut out =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        bench::write_scale_cost_chart(&rows, &mut out)?;
    }
    if let Some(path) = &args.chart_success {
        let mut out =
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        bench::write_scale_success_chart(&rows, &mut out)?;
    }
    for row in &rows {
        println!(
            "N={} K={}: C0={} Ca={} Cb={}",
            row.n,
            row.k,
            row.base.total_cost.map(|c| format!("{c:.2}")).unwrap_or_default(),
            row.constrained
                .total_cost
                .map(|c| format!("{c:.2}"))
                .unwrap_or_default(),
            row.budget.total_cost.map(|c| format!("{c:.2}")).unwrap_or_default(),
        );
    }
    Ok(())
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let spec = GenSpec::new(args.n, args.k, args.seed)?;
    let instance = generate(&spec);
    save_instance(&instance, &args.out)?;
    println!(
        "wrote {} ({} customers, {} vehicles, capacity {})",
        args.out.display(),
        instance.n_customers(),
        instance.fleet_size(),
        instance.capacity()
    );
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Scale(args) => cmd_scale(args),
        Command::Generate(args) => cmd_generate(args),
    }
}
