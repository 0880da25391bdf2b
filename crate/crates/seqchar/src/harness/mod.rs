//! Experiment configuration, orchestration, and report generation.

mod config;
mod corners;
mod plot;
mod run;
mod tracefile;

pub use config::{
    default_config_text, AlSettings, BenchCombo, ExperimentConfig, IntervalPolicy, OutputSettings,
    QmcSettings,
};
pub use corners::{corner_csv, parse_corner_csv, table_corners};
pub use plot::{plot_trace_svg, TracePlot};
pub use run::{
    build_samples, run_al, run_bench, run_characterize, BenchSummary, CharacterizeSummary,
    ModelSource, ReportRow, SampleOutcome, SampleSet,
};
pub use tracefile::{parse_trace_csv, trace_csv, TraceRow};

use thiserror::Error;

/// Configuration problems carry the offending line (0 = whole file) so CLI
/// errors point somewhere useful.
#[derive(Debug, Error)]
#[error("config error at line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Search(#[from] crate::search::SearchError),
    #[error(transparent)]
    Gp(#[from] crate::gp::GpError),
    #[error(transparent)]
    Sampling(#[from] crate::sampling::SamplingError),
    #[error("active learning failed: {0}")]
    Al(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> HarnessError {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }

    /// CLI exit code: 2 for configuration problems, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            _ => 3,
        }
    }
}
