use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use delta_squeeze::lab::{run_scenario, RunOptions, Scenario};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Converge,
    Stargraph,
    Cusp,
    WedgeF,
    Wedge,
    Spectrum,
    Oracle1d,
    CuspB,
}

impl From<Command> for Scenario {
    fn from(c: Command) -> Self {
        match c {
            Command::Converge => Scenario::Converge,
            Command::Stargraph => Scenario::Stargraph,
            Command::Cusp => Scenario::Cusp,
            Command::WedgeF => Scenario::WedgeF,
            Command::Wedge => Scenario::Wedge,
            Command::Spectrum => Scenario::Spectrum,
            Command::Oracle1d => Scenario::Oracle1d,
            Command::CuspB => Scenario::CuspB,
        }
    }
}

/// Squeezed potentials versus δ-interactions on planar curve networks.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Write the assembled matrices in Matrix Market format here.
    #[arg(long)]
    dump_mm: Option<PathBuf>,
    /// Output directory for report.json and data.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for assembly and ε-points.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: &Cli) -> delta_squeeze::Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| delta_squeeze::Error::Config(format!("thread pool: {e}")))?;
    }
    faer::set_global_parallelism(faer::Par::Seq);
    let text = std::fs::read_to_string(&cli.config)?;
    let config: serde_json::Value = serde_json::from_str(&text)?;
    let opts = RunOptions {
        dump_mm: cli.dump_mm.clone(),
    };
    let report = run_scenario(cli.command.into(), config, cli.seed, &opts)?;
    report.write(&cli.out)?;
    for f in &report.flags {
        log::warn!("flag: {f}");
    }
    println!("{}", cli.out.join("report.json").display());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
