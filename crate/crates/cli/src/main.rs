use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semichain_cli::presets::list_presets;
use semichain_cli::{load_config, preset_config, run, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "semichain", version, about = "Chain recurrence, mixing and entropy of finite semigroup actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for word sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for report.json and the CSV curves.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Largest point count a space may have
    #[arg(long, global = true)]
    budget_points: Option<NonZeroUsize>,
    /// Most words averaged exhaustively per length before sampling
    #[arg(long, global = true)]
    budget_words: Option<NonZeroUsize>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses described by a JSON or TOML config.
    Run { config: PathBuf },
    /// Run analyses on a built-in system with default tolerances.
    Preset {
        name: String,
        /// entropy, recurrence, mixing, decompose, ladder or verify-all
        #[arg(required = true)]
        analyses: Vec<String>,
        /// Size parameter (points per circle, point count).
        #[arg(long)]
        n: Option<usize>,
        /// Depth parameter (word length, odometer digits).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// List the built-in systems.
    ListPresets,
}

fn apply_flags(cli: &Cli, config: &mut RunConfig) {
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        config.output.dir = Some(dir.clone());
    }
    if let Some(p) = cli.budget_points {
        config.budget.points = Some(p);
    }
    if let Some(w) = cli.budget_words {
        config.budget.words = Some(w);
    }
    if let Some(f) = cli.format {
        config.output.format = Some(f);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match &cli.command {
        Command::ListPresets => {
            for p in list_presets() {
                println!("{:<18} {}", p.name, p.description);
            }
            return ExitCode::SUCCESS;
        }
        Command::Run { config } => load_config(config),
        Command::Preset { name, analyses, n, depth } => preset_config(name, analyses, *n, *depth),
    };
    let mut config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    apply_flags(&cli, &mut config);
    match run(&config) {
        Ok((result, written)) => {
            for (name, a) in &result.report.analyses {
                match &a.error {
                    Some(e) => println!("{name}: error: {e}"),
                    None => println!("{name}: {}", serde_json::to_value(a.status).expect("status").as_str().unwrap_or("?")),
                }
            }
            for p in written {
                println!("wrote {}", p.display());
            }
            ExitCode::from(result.report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
