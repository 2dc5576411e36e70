use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diachron::commands::{self, FitSummary};
use diachron::{Overrides, Result, RunConfig};

#[derive(Parser)]
#[command(
    version,
    about = "Contrast topic prevalence and word-list frequency between two dated text sources"
)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "diachron.toml")]
    config: PathBuf,
    /// Sampler seed, overriding `lda.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory, overriding `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tokenize, filter and stem the corpus.
    Preprocess,
    /// Fit the topic model and write the top-word table.
    Fit,
    /// Compute prevalence, frequency and significance tables.
    Analyze,
    /// Draw charts and write the summary document.
    Report,
    /// Run all four stages in order.
    Pipeline,
}

fn print_topics(fit: &FitSummary) {
    for (k, words) in fit.top_words.iter().enumerate() {
        println!("{k:>4}  {}", words.join(" "));
    }
}

fn run(cli: &Cli) -> Result<()> {
    let overrides = Overrides {
        seed: cli.seed,
        output_dir: cli.out.clone(),
    };
    let cfg = RunConfig::load(&cli.config, &overrides)?;
    match cli.command {
        Command::Preprocess => {
            commands::preprocess(&cfg)?;
        }
        Command::Fit => {
            let fit = commands::fit(&cfg)?;
            if !cli.quiet {
                print_topics(&fit);
            }
        }
        Command::Analyze => {
            commands::analyze(&cfg)?;
        }
        Command::Report => {
            commands::report(&cfg)?;
        }
        Command::Pipeline => {
            let (fit, _, _) = commands::pipeline(&cfg)?;
            if !cli.quiet {
                print_topics(&fit);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Info
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("DIACHRON_LOG")
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
