use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use seqchar::harness::{
    self, default_config_text, parse_trace_csv, plot_trace_svg, ExperimentConfig, HarnessError,
};

#[derive(Parser)]
#[command(
    name = "seqchar",
    about = "Setup/hold-time characterization: bracketing search, effort-based intervals, GP active learning",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characterize every configured sample with one method and policy.
    Characterize {
        /// Experiment configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare method/policy combinations on identical samples.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the active-learning pipeline and write its reports.
    AlRun {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a trace CSV as an SVG convergence plot.
    TracePlot {
        /// Trace CSV produced by characterize.
        #[arg(long)]
        input: PathBuf,
        /// SVG file to write.
        #[arg(long)]
        output: PathBuf,
    },
    /// Print the documented default configuration.
    PrintDefaultConfig,
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig, HarnessError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                HarnessError::Config(harness::ConfigError::at(
                    0,
                    format!("cannot read {}: {e}", p.display()),
                ))
            })?;
            Ok(ExperimentConfig::parse(&text)?)
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn out_dir(cfg: &ExperimentConfig, out: &Option<PathBuf>) -> PathBuf {
    out.clone()
        .unwrap_or_else(|| PathBuf::from(&cfg.output.directory))
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Characterize { config, out } => {
            let cfg = load_config(&config)?;
            let dir = out_dir(&cfg, &out);
            let summary = harness::run_characterize(&cfg, &dir)?;
            println!(
                "characterized {} samples, mean oracle calls {:.3}",
                summary.outcomes.len(),
                summary.mean_calls
            );
            println!("results: {}", summary.results_path.display());
            for p in &summary.trace_paths {
                println!("trace:   {}", p.display());
            }
        }
        Command::Bench { config, out } => {
            let cfg = load_config(&config)?;
            let dir = out_dir(&cfg, &out);
            let summary = harness::run_bench(&cfg, &dir)?;
            for row in summary.rows.iter().filter(|r| r.corner == "all") {
                println!(
                    "{:>12} {:>7}: mean {:>7.3} calls, p95 {:>3}",
                    row.method.as_str(),
                    row.policy,
                    row.mean_calls,
                    row.p95_calls
                );
            }
            println!("report:  {}", summary.report_path.display());
            println!("summary: {}", summary.summary_path.display());
        }
        Command::AlRun { config, out } => {
            let cfg = load_config(&config)?;
            let dir = out_dir(&cfg, &out);
            let summary = harness::run_al(&cfg, &dir)?;
            for it in &summary.al_iterations {
                println!(
                    "{:>8}: {:>5} samples, mean calls {:.3}",
                    it.phase.label(),
                    it.batch_size,
                    it.mean_calls
                );
            }
            println!("results: {}", summary.results_path.display());
        }
        Command::TracePlot { input, output } => {
            let text = std::fs::read_to_string(&input)
                .map_err(HarnessError::io(input.display().to_string()))?;
            let rows = parse_trace_csv(&text)?;
            let svg = plot_trace_svg(&rows)?;
            std::fs::write(&output, svg)
                .map_err(HarnessError::io(output.display().to_string()))?;
            println!("wrote {}", output.display());
        }
        Command::PrintDefaultConfig => {
            print!("{}", default_config_text());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
