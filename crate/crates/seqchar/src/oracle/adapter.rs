//! Adapter that runs an external simulator command per evaluation.
//!
//! The command template carries a `{skew}` placeholder; stdout is scanned
//! with a two-token rule: a failure token anywhere marks a failed capture,
//! otherwise the first line containing the delay prefix is parsed as the
//! delay. Evaluations are serialized through a mutex unless the config
//! declares the command safe to run concurrently.

use std::process::Command;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use super::{OracleError, SimOutcome, SkewDelayOracle};

/// How to read the command's stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputParseRule {
    /// Prefix immediately preceding the delay number, e.g. `delay=`.
    pub delay_prefix: String,
    /// Token whose presence marks a failed capture, e.g. `FAIL`.
    pub failure_token: String,
}

impl OutputParseRule {
    /// Parse one captured stdout. Public so the rule can be exercised (and
    /// fuzzed) without spawning processes.
    pub fn parse(&self, stdout: &str) -> Result<SimOutcome, OracleError> {
        if !self.failure_token.is_empty() && stdout.contains(&self.failure_token) {
            return Ok(SimOutcome::Failure);
        }
        for line in stdout.lines() {
            if let Some(pos) = line.find(&self.delay_prefix) {
                let rest = &line[pos + self.delay_prefix.len()..];
                let token = rest.split_whitespace().next().unwrap_or("");
                return match token.parse::<f64>() {
                    Ok(d) if d.is_finite() => Ok(SimOutcome::Delay(d)),
                    _ => Err(OracleError::Adapter(format!(
                        "cannot parse delay from {rest:?}"
                    ))),
                };
            }
        }
        Err(OracleError::Adapter(format!(
            "no {:?} or {:?} in simulator output",
            self.delay_prefix, self.failure_token
        )))
    }
}

#[derive(Debug, Clone)]
pub struct AdapterConfig {
    /// Shell command with a `{skew}` placeholder.
    pub command_template: String,
    pub parse_rule: OutputParseRule,
    pub concurrent: bool,
}

pub struct ExternalAdapter {
    config: AdapterConfig,
    calls: AtomicU64,
    lock: Mutex<()>,
}

impl ExternalAdapter {
    pub fn new(config: AdapterConfig) -> Result<Self, OracleError> {
        if !config.command_template.contains("{skew}") {
            return Err(OracleError::Adapter(
                "command template has no {skew} placeholder".into(),
            ));
        }
        Ok(ExternalAdapter {
            config,
            calls: AtomicU64::new(0),
            lock: Mutex::new(()),
        })
    }

    fn run(&self, skew: f64) -> Result<SimOutcome, OracleError> {
        let cmd = self.config.command_template.replace("{skew}", &skew.to_string());
        let output = Command::new("/bin/sh")
            .arg("-c")
            .arg(&cmd)
            .output()
            .map_err(|e| OracleError::Adapter(format!("spawn failed: {e}")))?;
        if !output.status.success() {
            return Err(OracleError::Adapter(format!(
                "command exited with {}",
                output.status
            )));
        }
        let stdout = String::from_utf8_lossy(&output.stdout);
        self.config.parse_rule.parse(&stdout)
    }
}

impl SkewDelayOracle for ExternalAdapter {
    fn evaluate(&self, skew: f64) -> Result<SimOutcome, OracleError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        if self.config.concurrent {
            self.run(skew)
        } else {
            let _guard = self.lock.lock().unwrap();
            self.run(skew)
        }
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    fn concurrent_safe(&self) -> bool {
        self.config.concurrent
    }
}
