//! Setup/hold-time characterization toolkit.
//!
//! Characterizing a register's setup or hold time is a scalar root-finding
//! problem: a black-box skew → clock-to-output delay function crosses a
//! degradation threshold at the constraint value, and every probe of that
//! function costs one transient simulation. This crate bundles the pieces
//! needed to run that search with as few probes as possible:
//!
//! - [`search`] — bracket expansion from an initial test location and step,
//!   plus five bracketing search methods including a bias-enhanced
//!   interpolation that statistically models interpolation error to escape
//!   endpoint stagnation
//! - [`oracle`] — analytic metastability models with closed-form ground
//!   truth, a per-model call counter, and an adapter for external simulators
//! - [`effort`] — logical-effort estimates of nominal delay and setup/hold
//!   paths, used to seed search intervals without any simulation
//! - [`gp`] — Gaussian-process regression over PVT features yielding a
//!   predictive mean and uncertainty per sample
//! - [`al`] — the active-learning loop that spends the simulation budget on
//!   the most informative corner samples and predicts intervals for the rest
//! - [`sampling`] — Sobol / stratified generation of local process-variation
//!   vectors in standard-normal space
//! - [`harness`] — experiment configuration, orchestration, and CSV/SVG
//!   report generation
//!
//! The `seqchar` binary exposes the harness as CLI subcommands; see the
//! README for usage.

pub mod al;
pub mod effort;
pub mod gp;
pub mod harness;
pub mod oracle;
pub mod sampling;
pub mod search;
pub mod stats;

pub use oracle::{AnalyticCellModel, PvtCorner, PvtSample, SimOutcome, SkewDelayOracle, Topology};
pub use search::{
    expand_bracket, search_beira, search_bisection, search_brent, search_quadratic,
    search_regula_falsi, Bracket, Classification, Method, Probe, SearchConfig, SearchResult,
};
