//! The five bracketing search methods.
//!
//! All methods run through one engine that owns the bracket, the evaluation
//! history, and the trace, so their costs are comparable call-for-call:
//!
//! - `bisection` — halves the interval, ignores delay values
//! - `regula_falsi` — secant through the endpoints, bisection fallback when
//!   the proposal leaves the bracket or sticks to an endpoint
//! - `quadratic` — inverse-quadratic through the three most recent
//!   evaluations inside the bracket, same fallback
//! - `brent` — the classic hybrid with its acceptance bookkeeping
//! - `beira` — interpolation whose test point is shifted by the optimal bias
//!   from the statistical error model; repeated landings on one bracket side
//!   inflate the model uncertainty by `beta` per iteration, sliding the test
//!   point toward the midpoint, and a shrink safeguard forces a bisection
//!   step whenever the window shrink ratio degrades below 25%
//!
//! A test point whose delay equals the threshold exactly ends the search
//! with a zero-length information interval; otherwise the search stops once
//! the bracket is no longer than `tau` and returns its midpoint.

use super::{
    expand_bracket, expand_bracket_with_limit, solve_bias, Bracket, Classification, Expansion,
    Method, Probe, SearchConfig, SearchError, SearchResult, SlopeHint, TraceEntry,
};

pub fn search(
    method: Method,
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    config.validate()?;
    bracket.validate()?;
    let mut engine = Engine::new(probe, bracket, config);
    match method {
        Method::Brent => engine.run_brent(),
        _ => engine.run_simple(method),
    }
}

pub fn search_bisection(
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    search(Method::Bisection, probe, bracket, config)
}

pub fn search_regula_falsi(
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    search(Method::RegulaFalsi, probe, bracket, config)
}

pub fn search_quadratic(
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    search(Method::Quadratic, probe, bracket, config)
}

pub fn search_brent(
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    search(Method::Brent, probe, bracket, config)
}

pub fn search_beira(
    probe: &Probe,
    bracket: Bracket,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    search(Method::Beira, probe, bracket, config)
}

/// Bracket expansion followed by a search, with the traces kept separate so
/// reports can split the cost.
#[derive(Debug, Clone)]
pub struct CharacterizationRun {
    pub result: SearchResult,
    pub bracket: Bracket,
    pub expansion_trace: Vec<TraceEntry>,
    pub expansion_calls: u64,
}

impl CharacterizationRun {
    pub fn total_calls(&self) -> u64 {
        self.expansion_calls + self.result.oracle_calls
    }

    /// Expansion and search trace concatenated with a continuous iteration
    /// index.
    pub fn merged_trace(&self) -> Vec<TraceEntry> {
        let mut out = Vec::with_capacity(self.expansion_trace.len() + self.result.trace.len());
        for e in self.expansion_trace.iter().chain(&self.result.trace) {
            let mut e = e.clone();
            e.iter = out.len();
            out.push(e);
        }
        out
    }
}

pub fn characterize_from_interval(
    probe: &Probe,
    l0: f64,
    s0: f64,
    hint: SlopeHint,
    method: Method,
    config: &SearchConfig,
    max_doublings: Option<usize>,
) -> Result<CharacterizationRun, SearchError> {
    let Expansion {
        bracket,
        trace,
        oracle_calls,
    } = match max_doublings {
        Some(limit) => expand_bracket_with_limit(probe, l0, s0, hint, config, limit)?,
        None => expand_bracket(probe, l0, s0, hint, config)?,
    };
    let result = search(method, probe, bracket.clone(), config)?;
    Ok(CharacterizationRun {
        result,
        bracket,
        expansion_trace: trace,
        expansion_calls: oracle_calls,
    })
}

#[derive(Debug, Clone, Copy)]
struct HistoryPoint {
    x: f64,
    class: Classification,
    delay: Option<f64>,
}

struct Engine<'a, 'b> {
    probe: &'b Probe<'a>,
    cfg: &'b SearchConfig,
    lo: f64,
    hi: f64,
    lo_class: Classification,
    hi_class: Classification,
    lo_delay: Option<f64>,
    hi_delay: Option<f64>,
    history: Vec<HistoryPoint>,
    trace: Vec<TraceEntry>,
    calls: u64,
    iterations: usize,
    same_side_run: u32,
    last_below: Option<bool>,
    lengths: Vec<f64>,
    exact_root: Option<f64>,
}

impl<'a, 'b> Engine<'a, 'b> {
    fn new(probe: &'b Probe<'a>, bracket: Bracket, cfg: &'b SearchConfig) -> Self {
        let mut history = Vec::new();
        history.push(HistoryPoint {
            x: bracket.lo,
            class: bracket.lo_class,
            delay: bracket.lo_delay,
        });
        history.push(HistoryPoint {
            x: bracket.hi,
            class: bracket.hi_class,
            delay: bracket.hi_delay,
        });
        let lengths = vec![bracket.len()];
        Engine {
            probe,
            cfg,
            lo: bracket.lo,
            hi: bracket.hi,
            lo_class: bracket.lo_class,
            hi_class: bracket.hi_class,
            lo_delay: bracket.lo_delay,
            hi_delay: bracket.hi_delay,
            history,
            trace: Vec::new(),
            calls: 0,
            iterations: 0,
            same_side_run: 0,
            last_below: None,
            lengths,
            exact_root: None,
        }
    }

    fn len(&self) -> f64 {
        self.hi - self.lo
    }

    fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn residual_lo(&self) -> Option<f64> {
        self.probe.residual(self.lo_class, self.lo_delay)
    }

    fn residual_hi(&self) -> Option<f64> {
        self.probe.residual(self.hi_class, self.hi_delay)
    }

    fn finish(&mut self, method: Method, root: f64) -> SearchResult {
        SearchResult {
            root,
            oracle_calls: self.calls,
            trace: std::mem::take(&mut self.trace),
            method,
        }
    }

    /// Clamp a proposal into the open interval; anything unusable becomes a
    /// bisection step.
    fn interior_or_mid(&self, x: f64) -> f64 {
        if x.is_finite() && x > self.lo && x < self.hi {
            x
        } else {
            self.mid()
        }
    }

    /// Evaluate the endpoints whose delay is unknown (failure endpoints use
    /// the substituted residual and need no call).
    fn ensure_endpoint_values(&mut self) -> Result<(), SearchError> {
        if self.lo_delay.is_none() && self.lo_class != Classification::Failure {
            let (class, delay) = self.eval_endpoint(self.lo)?;
            if class.is_below() != self.lo_class.is_below() {
                return Err(SearchError::InvalidBracket(
                    "lo endpoint classification changed under evaluation".into(),
                ));
            }
            self.lo_class = class;
            self.lo_delay = delay;
        }
        if self.hi_delay.is_none() && self.hi_class != Classification::Failure {
            let (class, delay) = self.eval_endpoint(self.hi)?;
            if class.is_below() != self.hi_class.is_below() {
                return Err(SearchError::InvalidBracket(
                    "hi endpoint classification changed under evaluation".into(),
                ));
            }
            self.hi_class = class;
            self.hi_delay = delay;
        }
        for residual in [self.residual_lo(), self.residual_hi()] {
            if residual == Some(0.0) {
                let x = if self.residual_lo() == Some(0.0) {
                    self.lo
                } else {
                    self.hi
                };
                self.exact_root = Some(x);
            }
            let _ = residual;
        }
        Ok(())
    }

    fn eval_endpoint(&mut self, x: f64) -> Result<(Classification, Option<f64>), SearchError> {
        let (class, delay) = self.probe.classify(x)?;
        self.calls += 1;
        self.history.push(HistoryPoint { x, class, delay });
        let exact = self.probe.residual(class, delay) == Some(0.0);
        if exact {
            self.exact_root = Some(x);
        }
        self.trace.push(TraceEntry {
            iter: self.trace.len(),
            test_point: x,
            classification: class,
            delay,
            interval_length_after: Some(if exact { 0.0 } else { self.len() }),
        });
        Ok((class, delay))
    }

    /// Evaluate an interior point and shrink the bracket around the sign
    /// change. `counts_for_stagnation` is false for safeguard-forced
    /// bisection steps: where such a point lands says nothing about the
    /// interpolation, so it must not reset the uncertainty ramp.
    fn step(
        &mut self,
        x: f64,
        counts_for_stagnation: bool,
    ) -> Result<(Classification, Option<f64>), SearchError> {
        debug_assert!(x > self.lo && x < self.hi, "test point must be interior");
        let (class, delay) = self.probe.classify(x)?;
        self.calls += 1;
        self.history.push(HistoryPoint { x, class, delay });
        let below = class.is_below();
        if below == self.lo_class.is_below() {
            self.lo = x;
            self.lo_class = class;
            self.lo_delay = delay;
        } else {
            self.hi = x;
            self.hi_class = class;
            self.hi_delay = delay;
        }
        debug_assert!(self.lo_class.is_below() != self.hi_class.is_below());
        let exact = self.probe.residual(class, delay) == Some(0.0);
        if exact {
            self.exact_root = Some(x);
        }
        self.trace.push(TraceEntry {
            iter: self.trace.len(),
            test_point: x,
            classification: class,
            delay,
            interval_length_after: Some(if exact { 0.0 } else { self.len() }),
        });
        if counts_for_stagnation {
            match self.last_below {
                Some(prev) if prev == below => self.same_side_run += 1,
                Some(_) => self.same_side_run = 0,
                None => {}
            }
            self.last_below = Some(below);
        }
        self.lengths.push(self.len());
        self.iterations += 1;
        Ok((class, delay))
    }

    fn run_simple(&mut self, method: Method) -> Result<SearchResult, SearchError> {
        if matches!(
            method,
            Method::RegulaFalsi | Method::Quadratic | Method::Beira
        ) {
            self.ensure_endpoint_values()?;
        }
        loop {
            if let Some(root) = self.exact_root {
                return Ok(self.finish(method, root));
            }
            if self.len() <= self.cfg.tau {
                let mid = self.mid();
                return Ok(self.finish(method, mid));
            }
            if self.iterations >= self.cfg.max_iter {
                return Err(SearchError::MaxIterExceeded(self.cfg.max_iter));
            }
            let (proposal, counts) = match method {
                Method::Bisection => (self.mid(), true),
                Method::RegulaFalsi => (self.guard_interpolant(self.secant_endpoints()), true),
                Method::Quadratic => (self.propose_quadratic(), true),
                Method::Beira => {
                    if self.stalled() {
                        (self.mid(), false)
                    } else {
                        (self.propose_beira(), true)
                    }
                }
                Method::Brent => unreachable!("brent runs its own loop"),
            };
            let x = self.interior_or_mid(proposal);
            self.step(x, counts)?;
        }
    }

    /// Secant through the bracket endpoints.
    fn secant_endpoints(&self) -> f64 {
        let (Some(gl), Some(gh)) = (self.residual_lo(), self.residual_hi()) else {
            return self.mid();
        };
        let denom = gh - gl;
        if denom == 0.0 || !denom.is_finite() {
            return self.mid();
        }
        (self.lo * gh - self.hi * gl) / denom
    }

    /// Interpolation proposals that leave the bracket or coincide with an
    /// endpoint within tau/4 degrade to bisection.
    fn guard_interpolant(&self, x: f64) -> f64 {
        let quarter = 0.25 * self.cfg.tau;
        if !x.is_finite() || x <= self.lo || x >= self.hi {
            return self.mid();
        }
        if x - self.lo < quarter || self.hi - x < quarter {
            return self.mid();
        }
        x
    }

    /// Most recent distinct evaluations carrying a usable residual, newest
    /// first. Points just outside the bracket stay eligible: the adjacent
    /// outside point carries the local curvature that the two endpoints
    /// alone cannot.
    fn recent_points(&self, want: usize) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(want);
        for p in self.history.iter().rev() {
            if out.iter().any(|(x, _)| *x == p.x) {
                continue;
            }
            if let Some(g) = self.probe.residual(p.class, p.delay) {
                out.push((p.x, g));
                if out.len() == want {
                    break;
                }
            }
        }
        out
    }

    fn propose_quadratic(&self) -> f64 {
        let pts = self.recent_points(3);
        if pts.len() == 3 {
            if let Some(x) = inverse_quadratic(pts[0], pts[1], pts[2]) {
                if x > self.lo && x < self.hi {
                    return self.guard_interpolant(x);
                }
            }
        }
        self.guard_interpolant(self.secant_endpoints())
    }

    /// Interpolation estimate for the biased method: inverse quadratic
    /// through the three most recent points when it lands inside the
    /// bracket, else the endpoint secant.
    fn interpolation_estimate(&self) -> f64 {
        let pts = self.recent_points(3);
        if pts.len() == 3 {
            if let Some(x) = inverse_quadratic(pts[0], pts[1], pts[2]) {
                if x > self.lo && x < self.hi {
                    return x;
                }
            }
        }
        self.secant_endpoints()
    }

    /// True when the bracket failed to shrink by at least 25% over the last
    /// `safeguard_window` iterations.
    fn stalled(&self) -> bool {
        let w = self.cfg.safeguard_window;
        let n = self.lengths.len();
        if n <= w {
            return false;
        }
        self.lengths[n - 1] > 0.75 * self.lengths[n - 1 - w]
    }

    fn propose_beira(&self) -> f64 {
        let len = self.len();
        let estimate = self.interpolation_estimate();
        let t0 = ((estimate - self.lo) / len).clamp(1e-9, 1.0 - 1e-9);
        let sigma = self.cfg.sigma0 * self.cfg.beta.powi(self.same_side_run.min(64) as i32);
        let eps = solve_bias(t0, sigma);
        let margin = (self.cfg.tau / len).max(1e-6).min(0.49);
        let t = (t0 + eps).clamp(margin, 1.0 - margin);
        self.lo + t * len
    }

    /// Classic Brent loop sharing the engine's bracket bookkeeping; the
    /// structure follows the standard zbrent formulation.
    fn run_brent(&mut self) -> Result<SearchResult, SearchError> {
        self.ensure_endpoint_values()?;
        let gl = self.residual_lo();
        let gh = self.residual_hi();
        let (Some(gl), Some(gh)) = (gl, gh) else {
            return Err(SearchError::InvalidBracket(
                "brent needs endpoint residuals".into(),
            ));
        };
        let (mut b, mut fb, mut c, mut fc) = if gl.abs() <= gh.abs() {
            (self.lo, gl, self.hi, gh)
        } else {
            (self.hi, gh, self.lo, gl)
        };
        let (mut a, mut fa) = (c, fc);
        let mut d = b - a;
        let mut e = d;
        loop {
            if let Some(root) = self.exact_root {
                return Ok(self.finish(Method::Brent, root));
            }
            if self.len() <= self.cfg.tau {
                let mid = self.mid();
                return Ok(self.finish(Method::Brent, mid));
            }
            if self.iterations >= self.cfg.max_iter {
                return Err(SearchError::MaxIterExceeded(self.cfg.max_iter));
            }

            if (fb > 0.0) == (fc > 0.0) {
                c = a;
                fc = fa;
                d = b - a;
                e = d;
            }
            if fc.abs() < fb.abs() {
                a = b;
                b = c;
                c = a;
                fa = fb;
                fb = fc;
                fc = fa;
            }
            let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.25 * self.cfg.tau;
            let xm = 0.5 * (c - b);
            if e.abs() >= tol1 && fa.abs() > fb.abs() {
                // inverse quadratic / secant attempt
                let s = fb / fa;
                let (mut p, mut q);
                if a == c {
                    p = 2.0 * xm * s;
                    q = 1.0 - s;
                } else {
                    let r1 = fa / fc;
                    let r2 = fb / fc;
                    p = s * (2.0 * xm * r1 * (r1 - r2) - (b - a) * (r2 - 1.0));
                    q = (r1 - 1.0) * (r2 - 1.0) * (s - 1.0);
                }
                if p > 0.0 {
                    q = -q;
                }
                p = p.abs();
                let min1 = 3.0 * xm * q - (tol1 * q).abs();
                let min2 = (e * q).abs();
                if 2.0 * p < min1.min(min2) {
                    e = d;
                    d = p / q;
                } else {
                    d = xm;
                    e = d;
                }
            } else {
                d = xm;
                e = d;
            }
            a = b;
            fa = fb;
            let proposal = if d.abs() > tol1 {
                b + d
            } else {
                b + tol1.copysign(xm)
            };
            let x = self.interior_or_mid(proposal);
            let (class, delay) = self.step(x, true)?;
            b = x;
            fb = self
                .probe
                .residual(class, delay)
                .expect("evaluated point has a residual");
        }
    }
}

/// Inverse quadratic interpolation: x as a Lagrange polynomial in the
/// residual, evaluated at residual zero. Sidesteps the two-root ambiguity of
/// fitting the parabola in x. `None` when residuals collide.
fn inverse_quadratic(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64)) -> Option<f64> {
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let (x3, y3) = p3;
    if y1 == y2 || y1 == y3 || y2 == y3 {
        return None;
    }
    let x = x1 * y2 * y3 / ((y1 - y2) * (y1 - y3))
        + x2 * y1 * y3 / ((y2 - y1) * (y2 - y3))
        + x3 * y1 * y2 / ((y3 - y1) * (y3 - y2));
    x.is_finite().then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{AnalyticCellModel, OracleError, SimOutcome, SkewDelayOracle};
    use std::sync::atomic::{AtomicU64, Ordering};

    /// Delay is an arbitrary function of skew; only for tests.
    struct FnOracle<F: Fn(f64) -> f64> {
        f: F,
        calls: AtomicU64,
    }

    impl<F: Fn(f64) -> f64> FnOracle<F> {
        fn new(f: F) -> Self {
            FnOracle {
                f,
                calls: AtomicU64::new(0),
            }
        }
    }

    impl<F: Fn(f64) -> f64> SkewDelayOracle for FnOracle<F> {
        fn evaluate(&self, skew: f64) -> Result<SimOutcome, OracleError> {
            self.calls.fetch_add(1, Ordering::Relaxed);
            Ok(SimOutcome::Delay((self.f)(skew)))
        }

        fn calls(&self) -> u64 {
            self.calls.load(Ordering::Relaxed)
        }
    }

    fn linear_bracket() -> Bracket {
        Bracket::new(
            0.0,
            1.0,
            Classification::BelowThreshold,
            Classification::AboveThreshold,
        )
        .unwrap()
        .with_delays(Some(0.0), Some(1.0))
    }

    #[test]
    fn bisection_takes_exactly_the_halving_count() {
        let oracle = FnOracle::new(|x| x);
        let probe = Probe::new(&oracle, 0.3);
        let cfg = SearchConfig::default(); // tau = 0.01, L0/tau = 100
        let r = search_bisection(&probe, linear_bracket(), &cfg).unwrap();
        assert_eq!(r.oracle_calls, 7); // ceil(log2(100))
        assert!((r.root - 0.3).abs() <= cfg.tau);
        assert_eq!(r.oracle_calls, oracle.calls());
    }

    #[test]
    fn exact_secant_hit_ends_the_search() {
        let oracle = FnOracle::new(|x| x);
        let probe = Probe::new(&oracle, 0.3);
        let cfg = SearchConfig::default();
        // endpoint delays attached: the secant through (0,0),(1,1) hits 0.3
        // exactly, so brent stops on the first interior evaluation
        let r = search_brent(&probe, linear_bracket(), &cfg).unwrap();
        assert!(r.oracle_calls <= 3, "calls = {}", r.oracle_calls);
        assert!((r.root - 0.3).abs() <= cfg.tau);
        assert_eq!(r.trace.last().unwrap().interval_length_after, Some(0.0));
    }

    #[test]
    fn beira_converges_fast_on_the_linear_oracle() {
        let oracle = FnOracle::new(|x| x);
        let probe = Probe::new(&oracle, 0.3);
        let r = search_beira(&probe, linear_bracket(), &SearchConfig::default()).unwrap();
        assert!(r.oracle_calls <= 3, "calls = {}", r.oracle_calls);
        assert!((r.root - 0.3).abs() <= 0.01);
    }

    #[test]
    fn brent_and_bisection_agree_within_tau() {
        let oracle = FnOracle::new(|x| x);
        let probe = Probe::new(&oracle, 0.3);
        let cfg = SearchConfig::default();
        let a = search_brent(&probe, linear_bracket(), &cfg).unwrap();
        let b = search_bisection(&probe, linear_bracket(), &cfg).unwrap();
        assert!((a.root - b.root).abs() <= cfg.tau);
    }

    #[test]
    fn regula_falsi_stagnates_one_sided_on_convex_delay() {
        // decreasing convex delay, root near the left endpoint
        let oracle = FnOracle::new(|x: f64| (-3.0 * x).exp());
        let threshold = (-0.3f64).exp(); // root at x = 0.1
        let probe = Probe::new(&oracle, threshold);
        let bracket = Bracket::new(
            0.0,
            1.0,
            Classification::AboveThreshold,
            Classification::BelowThreshold,
        )
        .unwrap();
        let r = search_regula_falsi(&probe, bracket, &SearchConfig::default()).unwrap();
        assert!((r.root - 0.1).abs() <= 0.01);
        // the stagnation detector: a run of >= 3 identical classifications
        let mut run = 1usize;
        let mut best = 1usize;
        for w in r.trace.windows(2) {
            if w[0].classification == w[1].classification {
                run += 1;
                best = best.max(run);
            } else {
                run = 1;
            }
        }
        assert!(best >= 3, "longest same-side run was {best}");
    }

    #[test]
    fn beira_respects_the_safeguard_bound_on_a_step_like_oracle() {
        // nearly flat plateaus with the crossing at 0.99 of the bracket
        let oracle = FnOracle::new(|x: f64| {
            if x < 0.99 {
                2.0 - 0.2 * x
            } else {
                1.0 - (x - 0.99)
            }
        });
        let probe = Probe::new(&oracle, 1.5);
        let bracket = Bracket::new(
            0.0,
            1.0,
            Classification::AboveThreshold,
            Classification::BelowThreshold,
        )
        .unwrap();
        let cfg = SearchConfig::default(); // L0/tau = 100
        let r = search_beira(&probe, bracket, &cfg).unwrap();
        let bound = 2 * (100f64.log2().ceil() as u64) + 2; // +2 endpoint evaluations
        assert!(
            r.oracle_calls <= bound,
            "calls = {} exceeds safeguard bound {bound}",
            r.oracle_calls
        );
        assert!((r.root - 0.99).abs() <= cfg.tau);
    }

    #[test]
    fn beira_beats_ten_calls_on_the_analytic_dff_bracket() {
        let model = AnalyticCellModel::new(10.0, 4.0, 1.0, 0.1 * 3f64.exp());
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        // a length-10 bracket straddling the root at 7, endpoint delays
        // attached the way bracket expansion would leave them
        let (hi_class, hi_delay) = probe.classify(10.0).unwrap();
        let bracket = Bracket::new(0.0, 10.0, Classification::Failure, hi_class)
            .unwrap()
            .with_delays(None, hi_delay);
        let r = search_beira(&probe, bracket, &SearchConfig::default()).unwrap();
        assert!(r.oracle_calls <= 10, "calls = {}", r.oracle_calls);
        assert!((r.root - 7.0).abs() <= 0.01);
    }

    #[test]
    fn every_method_holds_the_bracket_invariants() {
        let model = AnalyticCellModel::new(10.0, 4.0, 1.0, 0.1 * 3f64.exp());
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        for method in Method::ALL {
            let bracket = Bracket::new(
                0.0,
                10.0,
                Classification::Failure,
                Classification::BelowThreshold,
            )
            .unwrap();
            let r = search(method, &probe, bracket, &SearchConfig::default()).unwrap();
            assert!((r.root - 7.0).abs() <= 0.01, "{method}: root {}", r.root);
            // interval lengths never grow, and shrink strictly once below L0
            let mut prev = 10.0f64;
            for e in &r.trace {
                let len = e.interval_length_after.expect("search entries have lengths");
                assert!(len <= prev + 1e-12, "{method}: {len} after {prev}");
                if len < 10.0 && prev < 10.0 {
                    assert!(len < prev, "{method}: stalled at {len}");
                }
                prev = len;
            }
            let last = r.trace.last().unwrap().interval_length_after.unwrap();
            assert!(last <= 0.01);
        }
    }

    #[test]
    fn max_iter_exceeded_on_a_hostile_oracle() {
        // oscillating delay inside the bracket: no stable sign structure
        let oracle = FnOracle::new(|x: f64| 1.0 + 0.5 * (200.0 * x).sin());
        let probe = Probe::new(&oracle, 1.0);
        let bracket = Bracket::new(
            0.0,
            1.0,
            Classification::BelowThreshold,
            Classification::AboveThreshold,
        )
        .unwrap();
        let cfg = SearchConfig {
            max_iter: 4,
            tau: 1e-12,
            ..SearchConfig::default()
        };
        let err = search_bisection(&probe, bracket, &cfg).unwrap_err();
        assert!(matches!(err, SearchError::MaxIterExceeded(4)));
    }

    #[test]
    fn characterize_from_interval_merges_traces() {
        let model = AnalyticCellModel::new(10.0, 4.0, 1.0, 0.1 * 3f64.exp());
        let probe = Probe::new(&model, model.threshold_delay(1.1));
        let run = characterize_from_interval(
            &probe,
            7.5,
            7.0,
            SlopeHint::Decreasing,
            Method::Beira,
            &SearchConfig::default(),
            None,
        )
        .unwrap();
        assert_eq!(run.total_calls(), model.calls());
        let merged = run.merged_trace();
        assert_eq!(merged.len() as u64, run.total_calls());
        for (i, e) in merged.iter().enumerate() {
            assert_eq!(e.iter, i);
        }
        assert!((run.result.root - 7.0).abs() <= 0.01);
    }
}
