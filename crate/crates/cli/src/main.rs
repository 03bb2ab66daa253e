use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use chaoskit_cli::{parse_operator_spec, run_scenario, CliError, ScenarioConfig};
use chaoskit_core::numerics::singular_values;
use chaoskit_core::spectral::{spectral_radius_estimate, RadiusMode};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "chaoskit", version, about = "Finite-dimensional chaos diagnostics for linear operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a named scenario and write its result bundle.
    Run(RunArgs),
    /// Build an operator from a JSON spec and print a short report.
    Inspect {
        /// Path to the operator spec.
        spec: PathBuf,
    },
    /// List scenario names.
    List,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Scenario name; may instead come from --config.
    scenario: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    /// lo:hi:step
    #[arg(long)]
    grid: Option<String>,
    /// 1/n, const:<v> or pow:<p>
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: bool,
    #[arg(long)]
    seed: Option<u64>,
}

fn resolve(args: RunArgs) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_json(&fs::read_to_string(path)?)?,
        None => {
            let name = args
                .scenario
                .clone()
                .ok_or_else(|| CliError::InvalidConfig("no scenario given".into()))?;
            ScenarioConfig::new(&name)
        }
    };
    if let Some(s) = args.scenario {
        cfg.scenario = s;
    }
    let p = &mut cfg.parameters;
    p.dim = args.dim.or(p.dim);
    p.horizon = args.horizon.or(p.horizon);
    p.grid = args.grid.or(p.grid.take());
    p.eps = args.eps.or(p.eps.take());
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.output.dir = Some(out);
    }
    cfg.output.plot |= args.plot;
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<bool, CliError> {
    let cfg = resolve(args)?;
    let bundle = run_scenario(&cfg)?;
    print!("{}", bundle.summary());
    if let Some(dir) = &cfg.output.dir {
        let written = bundle.write(dir, cfg.output.plot)?;
        println!("  wrote {} files to {}", written.len(), dir.display());
    }
    Ok(bundle.all_pass())
}

fn inspect(path: PathBuf) -> Result<(), CliError> {
    let t = parse_operator_spec(&fs::read_to_string(path)?)?;
    let sv = singular_values(&t)?;
    println!("dim {}", t.dim());
    println!("spectral_radius {}", spectral_radius_estimate(&t, RadiusMode::Eigen)?);
    println!("sigma_max {}", sv.first().copied().unwrap_or(0.0));
    println!("sigma_min {}", sv.last().copied().unwrap_or(0.0));
    Ok(())
}

fn init_threads() {
    if let Some(n) = std::env::var("CHAOSKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Inspect { spec } => inspect(spec).map(|_| true),
        Command::List => {
            for s in chaoskit_cli::Scenario::ALL {
                println!("{s}");
            }
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
