use clap::{Args, Parser, Subcommand};
use lblab::harness::{
    run_experiment, summarize, write_results, Algorithm, ExperimentConfig,
};
use lblab::oracle::brute_force_solve;
use lblab::weights::{
    generate_weights, WeightDistribution, LARGE_STD_DEV, MEDIUM_STD_DEV, SMALL_STD_DEV,
    STUDY_MEAN,
};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Load-balancing algorithm study over synthetic block-structured domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an efficiency/timing sweep and write trials.csv, summary.csv,
    /// config.json
    Run(RunArgs),
    /// Exhaustive brute-force solve of one instance
    Oracle(OracleArgs),
    /// Run the full study configuration (nodes 1..512, 250 trials, all
    /// distributions and algorithms)
    PaperPreset(PaperPresetArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Node counts to sweep, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256,512")]
    nodes: Vec<usize>,

    #[arg(long, default_value_t = 4)]
    ranks_per_node: usize,

    /// Boxes per rank to sweep, comma separated
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    boxes_per_rank: Vec<usize>,

    /// Weight std deviations: small|medium|large or a number, comma separated
    #[arg(long, value_delimiter = ',', default_value = "small,medium,large")]
    std_dev: Vec<String>,

    /// Mean of the weight distribution
    #[arg(long, default_value_t = STUDY_MEAN)]
    mean: f64,

    #[arg(long, default_value_t = 250)]
    trials: usize,

    #[arg(long, default_value_t = 20240901)]
    seed: u64,

    /// Algorithms to run, comma separated:
    /// knapsack|sfc|painters|combined-sfc|combined-painters
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "knapsack,sfc,painters,combined-sfc,combined-painters"
    )]
    algorithms: Vec<Algorithm>,

    /// Domain extent in cells, comma separated x,y,z
    #[arg(long, value_delimiter = ',', default_value = "256,256,256", num_args = 3)]
    domain: Vec<u32>,

    /// Output directory
    #[arg(long)]
    out: PathBuf,

    /// Run trials strictly sequentially for clean timing columns
    #[arg(long)]
    serial: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of boxes N
    #[arg(long)]
    boxes: usize,

    /// Number of ranks P
    #[arg(long)]
    ranks: usize,

    #[arg(long, default_value_t = 1)]
    threads: usize,

    /// Enumerate all P^N assignments instead of the first half
    #[arg(long)]
    no_symmetry: bool,

    /// Std deviation of the generated weights
    #[arg(long, default_value_t = SMALL_STD_DEV)]
    std_dev: f64,

    #[arg(long, default_value_t = 20240901)]
    seed: u64,
}

#[derive(Args)]
struct PaperPresetArgs {
    #[arg(long)]
    out: PathBuf,

    #[arg(long, default_value_t = 20240901)]
    seed: u64,

    #[arg(long)]
    serial: bool,
}

fn parse_std_dev(s: &str) -> Result<f64, String> {
    match s {
        "small" => Ok(SMALL_STD_DEV),
        "medium" => Ok(MEDIUM_STD_DEV),
        "large" => Ok(LARGE_STD_DEV),
        other => other
            .parse::<f64>()
            .map_err(|_| format!("std-dev must be small|medium|large or a number, got '{other}'")),
    }
}

fn run(args: RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    let std_devs = args
        .std_dev
        .iter()
        .map(|s| parse_std_dev(s))
        .collect::<Result<Vec<_>, _>>()?;
    let config = ExperimentConfig {
        node_counts: args.nodes,
        ranks_per_node: args.ranks_per_node,
        boxes_per_rank: args.boxes_per_rank,
        std_devs,
        mean: args.mean,
        trials: args.trials,
        base_seed: args.seed,
        algorithms: args.algorithms,
        domain_extent: [args.domain[0], args.domain[1], args.domain[2]],
        serial: args.serial,
    };
    let records = run_experiment(&config)?;
    let summaries = summarize(&records);
    write_results(&records, &summaries, &config, &args.out)?;
    eprintln!(
        "wrote {} trial records and {} summary rows to {}",
        records.len(),
        summaries.len(),
        args.out.display()
    );
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), Box<dyn std::error::Error>> {
    let dist = WeightDistribution {
        mean: STUDY_MEAN,
        std_dev: args.std_dev,
        seed: args.seed,
    };
    let weights = generate_weights(&dist, args.boxes);
    let t0 = Instant::now();
    let result = brute_force_solve(&weights, args.ranks, args.threads, !args.no_symmetry)?;
    let elapsed = t0.elapsed().as_secs_f64();
    let total: u64 = weights.iter().sum();
    let eff = total as f64 / args.ranks as f64 / result.best_max_load as f64;
    println!("best_max_load: {}", result.best_max_load);
    println!("efficiency: {eff}");
    println!("combinations_checked: {}", result.combinations_checked);
    println!("wall_time_s: {elapsed}");
    Ok(())
}

fn paper_preset(args: PaperPresetArgs) -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ExperimentConfig::paper_preset(args.seed);
    config.serial = args.serial;
    let records = run_experiment(&config)?;
    let summaries = summarize(&records);
    write_results(&records, &summaries, &config, &args.out)?;
    eprintln!(
        "wrote {} trial records and {} summary rows to {}",
        records.len(),
        summaries.len(),
        args.out.display()
    );
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Oracle(args) => oracle(args),
        Command::PaperPreset(args) => paper_preset(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
