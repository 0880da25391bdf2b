//! The skew → delay black box.
//!
//! Every search method in this crate is measured in oracle calls, because in
//! production each call is one transient SPICE simulation. This module ships
//! an analytic metastability model whose constraint root is known in closed
//! form (so correctness is checkable without a simulator), a deterministic
//! PVT-to-model map for multi-corner benchmarks, and an adapter that shells
//! out to a real simulator command.

mod adapter;
mod pvt;

pub use adapter::{AdapterConfig, ExternalAdapter, OutputParseRule};
pub use pvt::{model_from_pvt, PvtModelMap, TIME_UNITS_PER_EFFORT_UNIT};

use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

/// Result of one oracle evaluation: a clock-to-output delay, or a failed
/// capture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimOutcome {
    Delay(f64),
    Failure,
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("external adapter failed: {0}")]
    Adapter(String),
}

/// The unit of characterization cost.
///
/// Implementations must keep an exact call counter; the harness reconciles
/// per-sample reported calls against these counters. `concurrent_safe`
/// declares whether distinct evaluations may run at the same time.
pub trait SkewDelayOracle {
    fn evaluate(&self, skew: f64) -> Result<SimOutcome, OracleError>;
    fn calls(&self) -> u64;
    fn concurrent_safe(&self) -> bool {
        false
    }
}

/// Register topology, used by the effort estimates and the PVT model map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Latch,
    Dff,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Latch => "latch",
            Topology::Dff => "dff",
        }
    }

    pub fn parse(s: &str) -> Option<Topology> {
        match s.trim().to_ascii_lowercase().as_str() {
            "latch" => Some(Topology::Latch),
            "dff" => Some(Topology::Dff),
            _ => None,
        }
    }
}

/// Optional non-monotone term: adds `d0 * coef * max(0, u - onset)^2` where
/// `u` is the distance from the failure boundary. Reproduces the large-skew
/// delay rise some cells show; must stay `None` for correctness tests since
/// it invalidates the closed-form root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailTerm {
    pub coef: f64,
    pub onset: f64,
}

/// Analytic metastability model.
///
/// On the passing side of the failure boundary `x_c` the delay decays
/// exponentially toward the nominal `d0`:
///
/// ```text
/// delay(u) = d0 * (1 + alpha * exp(-u / lambda)),   u = signed margin > 0
/// ```
///
/// at or past the boundary (`u <= 0`) the capture fails. `fail_below`
/// selects the setup orientation (failure at small skew); hold-style cells
/// flip the axis so the same expression serves both.
#[derive(Debug)]
pub struct AnalyticCellModel {
    pub d0: f64,
    pub x_c: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub tail: Option<TailTerm>,
    pub fail_below: bool,
    calls: AtomicU64,
}

impl AnalyticCellModel {
    pub fn new(d0: f64, x_c: f64, lambda: f64, alpha: f64) -> Self {
        assert!(d0 > 0.0 && lambda > 0.0 && alpha > 0.0, "invalid model");
        AnalyticCellModel {
            d0,
            x_c,
            lambda,
            alpha,
            tail: None,
            fail_below: true,
            calls: AtomicU64::new(0),
        }
    }

    pub fn with_tail(mut self, tail: TailTerm) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn with_fail_below(mut self, fail_below: bool) -> Self {
        self.fail_below = fail_below;
        self
    }

    /// Signed distance from the failure boundary, positive on the passing side.
    fn margin(&self, skew: f64) -> f64 {
        if self.fail_below {
            skew - self.x_c
        } else {
            self.x_c - skew
        }
    }

    /// Closed-form skew at which `delay == threshold_ratio * d0`.
    ///
    /// Used only by tests and reports, never by search code. Ignores the
    /// optional tail term.
    pub fn true_root(&self, threshold_ratio: f64) -> f64 {
        assert!(threshold_ratio > 1.0, "threshold ratio must exceed 1");
        let offset = self.lambda * (self.alpha / (threshold_ratio - 1.0)).ln();
        if self.fail_below {
            self.x_c + offset
        } else {
            self.x_c - offset
        }
    }

    /// Degradation threshold delay for a given ratio.
    pub fn threshold_delay(&self, threshold_ratio: f64) -> f64 {
        threshold_ratio * self.d0
    }
}

impl SkewDelayOracle for AnalyticCellModel {
    fn evaluate(&self, skew: f64) -> Result<SimOutcome, OracleError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let u = self.margin(skew);
        if u <= 0.0 {
            return Ok(SimOutcome::Failure);
        }
        let mut delay = self.d0 * (1.0 + self.alpha * (-u / self.lambda).exp());
        if let Some(tail) = self.tail {
            let over = (u - tail.onset).max(0.0);
            delay += self.d0 * tail.coef * over * over;
        }
        Ok(SimOutcome::Delay(delay))
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    fn concurrent_safe(&self) -> bool {
        true
    }
}

/// Global process corner. The process letter carries the numeric code used
/// as a regression feature: TT → 0, FF → +1, SS → -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvtCorner {
    pub process: Process,
    pub voltage: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    Tt,
    Ff,
    Ss,
}

impl Process {
    pub fn code(self) -> f64 {
        match self {
            Process::Tt => 0.0,
            Process::Ff => 1.0,
            Process::Ss => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Process::Tt => "TT",
            Process::Ff => "FF",
            Process::Ss => "SS",
        }
    }

    pub fn parse(s: &str) -> Option<Process> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TT" => Some(Process::Tt),
            "FF" => Some(Process::Ff),
            "SS" => Some(Process::Ss),
            _ => None,
        }
    }
}

impl PvtCorner {
    pub fn new(process: Process, voltage: f64, temperature: f64) -> Self {
        PvtCorner {
            process,
            voltage,
            temperature,
        }
    }

    /// The nominal corner the synthetic model map is anchored at.
    pub fn nominal() -> Self {
        PvtCorner::new(Process::Tt, 0.8, 25.0)
    }
}

/// One characterization point: a global corner plus a local-variation vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PvtSample {
    pub corner: PvtCorner,
    pub local_vars: Vec<f64>,
}

impl PvtSample {
    pub fn new(corner: PvtCorner, local_vars: Vec<f64>) -> Self {
        PvtSample { corner, local_vars }
    }

    /// A sample at the given corner with nominal (zero) local variations.
    pub fn nominal_at(corner: PvtCorner, dimension: usize) -> Self {
        PvtSample::new(corner, vec![0.0; dimension])
    }

    /// Total feature dimension: 3 corner features plus the local vector.
    pub fn feature_dimension(&self) -> usize {
        3 + self.local_vars.len()
    }
}
