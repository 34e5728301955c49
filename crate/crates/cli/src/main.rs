use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kronreg::synthdata::{gen_dataset, DatasetSpec};
use kronreg::{GraphKind, Pairing, RngStream};
use kronreg_cli::config::parse_size;
use kronreg_cli::{run_suite, write_outputs, Model, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "kronreg", version, about = "GCRF regression on Kronecker product graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark suite and write runs.csv, summary.csv and plotdata/.
    Bench(BenchArgs),
    /// Generate one synthetic instance and write it as CSV files.
    Dataset(DatasetArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fitness,
    Robustness,
    Timing,
    Nkp,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphArg {
    Er,
    Ba,
    Ws,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Sorted,
    VertexOrder,
}

impl From<GraphArg> for GraphKind {
    fn from(g: GraphArg) -> Self {
        match g {
            GraphArg::Er => GraphKind::ErdosRenyi,
            GraphArg::Ba => GraphKind::BarabasiAlbert,
            GraphArg::Ws => GraphKind::WattsStrogatz,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(value_enum)]
    suite: SuiteArg,
    #[arg(long, value_enum, default_value = "er")]
    graph: GraphArg,
    /// Comma-separated factor sizes, e.g. 30x50,50x100.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    densities: Option<Vec<f64>>,
    /// Output noise standard deviations.
    #[arg(long, value_delimiter = ',')]
    noises: Option<Vec<f64>>,
    /// Fractions of added off-pattern edges (nkp suite).
    #[arg(long, value_delimiter = ',')]
    nkp_noises: Option<Vec<f64>>,
    /// Subset of base, base_svd, laplace_vec, norm_laplace_vec, msn.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "sorted")]
    pairing: PairingArg,
    /// Largest matrix order the exact model may materialize.
    #[arg(long)]
    dense_cap: Option<usize>,
    /// Watts-Strogatz rewiring probability.
    #[arg(long)]
    rewire: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Fit with beta fixed at zero (unstructured predictor only).
    #[arg(long)]
    beta_zero: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DatasetArgs {
    #[arg(long, value_enum, default_value = "er")]
    graph: GraphArg,
    #[arg(long, default_value = "30x50")]
    size: String,
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = kronreg::synthdata::DEFAULT_OUTPUT_NOISE)]
    noise: f64,
    /// Fraction of added off-pattern edges; omit for an exact Kronecker product.
    #[arg(long)]
    violation: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    rep: u64,
    #[arg(long)]
    out: PathBuf,
}

fn bench_config(a: &BenchArgs) -> kronreg_cli::Result<SuiteConfig> {
    let suite = match a.suite {
        SuiteArg::Fitness => Suite::Fitness,
        SuiteArg::Robustness => Suite::Robustness,
        SuiteArg::Timing => Suite::Timing,
        SuiteArg::Nkp => Suite::Nkp,
    };
    let mut cfg = SuiteConfig::new(suite, a.graph.into());
    if let Some(sizes) = &a.sizes {
        cfg.sizes = sizes.iter().map(|s| parse_size(s)).collect::<Result<_, _>>()?;
    }
    if let Some(d) = &a.densities {
        cfg.densities = d.clone();
    }
    if let Some(n) = &a.noises {
        cfg.output_noises = n.clone();
    }
    if let Some(n) = &a.nkp_noises {
        cfg.nkp_noises = n.clone();
    }
    if let Some(m) = &a.models {
        cfg.models = m.iter().map(|s| s.parse()).collect::<Result<Vec<Model>, _>>()?;
    }
    if let Some(r) = a.reps {
        cfg.reps = r;
    }
    if let Some(c) = a.dense_cap {
        cfg.dense_cap = c;
    }
    if let Some(p) = a.rewire {
        cfg.rewire = p;
    }
    cfg.base_seed = a.seed;
    cfg.pairing = match a.pairing {
        PairingArg::Sorted => Pairing::Sorted,
        PairingArg::VertexOrder => Pairing::VertexOrder,
    };
    cfg.workers = a.workers;
    cfg.beta_zero = a.beta_zero;
    cfg.validate()?;
    Ok(cfg)
}

fn bench(a: &BenchArgs) -> kronreg_cli::Result<bool> {
    let cfg = bench_config(a)?;
    let records = run_suite(&cfg)?;
    let rows = write_outputs(&a.out, &records)?;
    for r in &rows {
        let mse = r.trimmed_mse.map_or("-".to_string(), |m| format!("{m:.4}"));
        let t = r.mean_runtime_s.map_or("-".to_string(), |t| format!("{t:.3}s"));
        println!(
            "{} {} {}x{} rho={} sigma={} frac={} {:<16} mse={} time={} failed={}/{}",
            r.suite, r.graph_type, r.n1, r.n2, r.rho1, r.sigma, r.nkp_noise, r.model, mse, t, r.failed, r.runs
        );
    }
    Ok(records.iter().all(|r| !r.failed))
}

fn dataset(a: &DatasetArgs) -> kronreg_cli::Result<()> {
    let (n1, n2) = parse_size(&a.size)?;
    let mut spec = DatasetSpec::new(a.graph.into(), n1, n2, a.density);
    spec.output_noise = a.noise;
    spec.violation = a.violation;
    let d = gen_dataset(&spec, RngStream::new(a.seed, a.rep))?;
    d.write_dir(&a.out)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bench(a) => bench(a).map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::from(2) }),
        Command::Dataset(a) => dataset(a).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}
