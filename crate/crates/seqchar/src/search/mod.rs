//! Bracketing-interval root finding over a skew → delay oracle.
//!
//! The constraint value is the skew at which the oracle's delay crosses a
//! degradation threshold. A [`Bracket`] pins the crossing between two skews
//! whose classifications disagree; [`expand_bracket`] builds one from an
//! initial test location and step by doubling outward, and the `search_*`
//! functions shrink it to the target tolerance. Every oracle call lands in a
//! trace so methods can be compared call-for-call.

mod bias;
mod expand;
mod methods;

pub use bias::{
    expected_interval_length, expected_interval_length_slope, solve_bias, CLOSED_FORM_MIN_LOG_ARG,
    CLOSED_FORM_SIGMA_MAX,
};
pub use expand::{expand_bracket, expand_bracket_with_limit, Expansion, SlopeHint};
pub use methods::{
    characterize_from_interval, search, search_beira, search_bisection, search_brent,
    search_quadratic, search_regula_falsi, CharacterizationRun,
};

use crate::oracle::{OracleError, SimOutcome, SkewDelayOracle};
use thiserror::Error;

/// Which side of the degradation threshold an evaluation landed on.
///
/// `Failure` (no capture at all) sits on the same side as `AboveThreshold`
/// for bracketing: a failed capture is worse than a degraded one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    BelowThreshold,
    AboveThreshold,
    Failure,
}

impl Classification {
    /// True for the passing side of the threshold.
    pub fn is_below(self) -> bool {
        matches!(self, Classification::BelowThreshold)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::BelowThreshold => "below",
            Classification::AboveThreshold => "above",
            Classification::Failure => "failure",
        }
    }

    pub fn parse(s: &str) -> Option<Classification> {
        match s.trim() {
            "below" => Some(Classification::BelowThreshold),
            "above" => Some(Classification::AboveThreshold),
            "failure" => Some(Classification::Failure),
            _ => None,
        }
    }
}

/// An interval guaranteed to contain the constraint root: the endpoint
/// classifications disagree (exactly one is `BelowThreshold`).
///
/// Endpoint delays are carried along when known — bracket expansion already
/// paid for them — so interpolating searches do not re-evaluate endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub lo_class: Classification,
    pub hi_class: Classification,
    pub lo_delay: Option<f64>,
    pub hi_delay: Option<f64>,
}

impl Bracket {
    pub fn new(
        lo: f64,
        hi: f64,
        lo_class: Classification,
        hi_class: Classification,
    ) -> Result<Self, SearchError> {
        let b = Bracket {
            lo,
            hi,
            lo_class,
            hi_class,
            lo_delay: None,
            hi_delay: None,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_delays(mut self, lo_delay: Option<f64>, hi_delay: Option<f64>) -> Self {
        self.lo_delay = lo_delay;
        self.hi_delay = hi_delay;
        self
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(SearchError::InvalidBracket(format!(
                "need finite lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.lo_class.is_below() == self.hi_class.is_below() {
            return Err(SearchError::InvalidBracket(
                "endpoint classifications must straddle the threshold".into(),
            ));
        }
        Ok(())
    }
}

/// Search parameters. `tau` is the interval tolerance in oracle time units;
/// `sigma0` and `beta` drive the self-adaptive uncertainty of the biased
/// interpolation; `threshold_ratio` scales the nominal delay into the
/// degradation threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub tau: f64,
    pub sigma0: f64,
    pub beta: f64,
    pub max_iter: usize,
    pub threshold_ratio: f64,
    pub safeguard_window: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            tau: 0.01,
            sigma0: 0.001,
            beta: 5.0,
            max_iter: 1000,
            threshold_ratio: 1.10,
            safeguard_window: 2,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(SearchError::InvalidConfig(format!("tau = {}", self.tau)));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(SearchError::InvalidConfig(format!(
                "sigma0 = {}",
                self.sigma0
            )));
        }
        if !(self.beta > 1.0 && self.beta.is_finite()) {
            return Err(SearchError::InvalidConfig(format!("beta = {}", self.beta)));
        }
        if !(self.threshold_ratio > 1.0) {
            return Err(SearchError::InvalidConfig(format!(
                "threshold_ratio = {}",
                self.threshold_ratio
            )));
        }
        if self.safeguard_window == 0 {
            return Err(SearchError::InvalidConfig("safeguard_window = 0".into()));
        }
        Ok(())
    }
}

/// One oracle call. `interval_length_after` is `None` for expansion calls
/// made before a bracket exists, and 0 when the call hit the threshold
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub iter: usize,
    pub test_point: f64,
    pub classification: Classification,
    pub delay: Option<f64>,
    pub interval_length_after: Option<f64>,
}

pub type SearchTrace = Vec<TraceEntry>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Bisection,
    RegulaFalsi,
    Quadratic,
    Brent,
    Beira,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Bisection,
        Method::RegulaFalsi,
        Method::Quadratic,
        Method::Brent,
        Method::Beira,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bisection => "bisection",
            Method::RegulaFalsi => "regula_falsi",
            Method::Quadratic => "quadratic",
            Method::Brent => "brent",
            Method::Beira => "beira",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bisection" => Some(Method::Bisection),
            "regula_falsi" | "regula-falsi" | "falsi" => Some(Method::RegulaFalsi),
            "quadratic" => Some(Method::Quadratic),
            "brent" => Some(Method::Brent),
            "beira" => Some(Method::Beira),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub root: f64,
    pub oracle_calls: u64,
    pub trace: SearchTrace,
    pub method: Method,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no bracket found after {doublings} doublings from l0={l0}, s0={s0}")]
    BracketNotFound { l0: f64, s0: f64, doublings: usize },
    #[error("search exceeded {0} iterations without reaching tolerance")]
    MaxIterExceeded(usize),
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// An oracle paired with the degradation threshold it is searched against.
pub struct Probe<'a> {
    oracle: &'a dyn SkewDelayOracle,
    threshold_delay: f64,
}

impl<'a> Probe<'a> {
    pub fn new(oracle: &'a dyn SkewDelayOracle, threshold_delay: f64) -> Self {
        assert!(
            threshold_delay > 0.0 && threshold_delay.is_finite(),
            "threshold delay must be positive"
        );
        Probe {
            oracle,
            threshold_delay,
        }
    }

    pub fn threshold_delay(&self) -> f64 {
        self.threshold_delay
    }

    pub fn classify(&self, skew: f64) -> Result<(Classification, Option<f64>), SearchError> {
        match self.oracle.evaluate(skew)? {
            SimOutcome::Delay(d) if d < self.threshold_delay => {
                Ok((Classification::BelowThreshold, Some(d)))
            }
            SimOutcome::Delay(d) => Ok((Classification::AboveThreshold, Some(d))),
            SimOutcome::Failure => Ok((Classification::Failure, None)),
        }
    }

    /// Delay-minus-threshold residual used by the interpolating methods.
    /// Failure points substitute twice the threshold so interpolation stays
    /// defined near the boundary; unmeasured non-failure points yield `None`.
    pub fn residual(&self, class: Classification, delay: Option<f64>) -> Option<f64> {
        match (class, delay) {
            (Classification::Failure, _) => Some(self.threshold_delay),
            (_, Some(d)) => Some(d - self.threshold_delay),
            (_, None) => None,
        }
    }
}
