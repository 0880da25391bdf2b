//! Bracket expansion from an initial test location and step.
//!
//! The first test lands at `l0`; subsequent tests step toward the side that
//! should hold the root at `l0 ± 2^n * s0` until the classification flips.
//! The bracket is the last two test points, so a good (l0, s0) pair — from
//! circuit analysis or a regression — brackets the root in two or three
//! calls.

use super::{Bracket, Classification, Probe, SearchConfig, SearchError, TraceEntry};

/// Which way the delay moves as skew grows near the root. Setup-style cells
/// (failure at small skew) are `Decreasing`; hold-style cells are
/// `Increasing`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeHint {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub bracket: Bracket,
    pub trace: Vec<TraceEntry>,
    pub oracle_calls: u64,
}

/// Expand with the doubling budget taken from `config.max_iter`.
pub fn expand_bracket(
    probe: &Probe,
    l0: f64,
    s0: f64,
    hint: SlopeHint,
    config: &SearchConfig,
) -> Result<Expansion, SearchError> {
    // 2^60 * s0 already dwarfs any sane search range
    expand_bracket_with_limit(probe, l0, s0, hint, config, config.max_iter.min(60))
}

/// Expand with an explicit doubling budget (the active-learning loop retries
/// with the circuit-analysis interval after a few failed doublings).
pub fn expand_bracket_with_limit(
    probe: &Probe,
    l0: f64,
    s0: f64,
    hint: SlopeHint,
    config: &SearchConfig,
    max_doublings: usize,
) -> Result<Expansion, SearchError> {
    config.validate()?;
    if !l0.is_finite() {
        return Err(SearchError::InvalidConfig(format!("l0 = {l0}")));
    }
    if !(s0 > 0.0 && s0.is_finite()) {
        return Err(SearchError::InvalidConfig(format!("s0 = {s0}")));
    }

    let mut trace = Vec::new();
    let mut calls = 0u64;
    let mut eval = |x: f64, trace: &mut Vec<TraceEntry>| -> Result<(Classification, Option<f64>), SearchError> {
        let (class, delay) = probe.classify(x)?;
        calls += 1;
        trace.push(TraceEntry {
            iter: trace.len(),
            test_point: x,
            classification: class,
            delay,
            interval_length_after: None,
        });
        Ok((class, delay))
    };

    let (first_class, first_delay) = eval(l0, &mut trace)?;
    // walk toward the root: a passing first point steps toward the failing
    // side and vice versa, with the hint fixing which direction that is
    let step_sign = match (first_class.is_below(), hint) {
        (true, SlopeHint::Decreasing) => -1.0,
        (true, SlopeHint::Increasing) => 1.0,
        (false, SlopeHint::Decreasing) => 1.0,
        (false, SlopeHint::Increasing) => -1.0,
    };

    let mut prev = (l0, first_class, first_delay);
    for n in 0..=max_doublings {
        let x = l0 + step_sign * 2f64.powi(n as i32) * s0;
        if !x.is_finite() {
            break;
        }
        let (class, delay) = eval(x, &mut trace)?;
        if class.is_below() != first_class.is_below() {
            let (lo, hi) = if prev.0 < x {
                (prev, (x, class, delay))
            } else {
                ((x, class, delay), prev)
            };
            let bracket = Bracket::new(lo.0, hi.0, lo.1, hi.1)?.with_delays(lo.2, hi.2);
            trace.last_mut().expect("just pushed").interval_length_after = Some(bracket.len());
            return Ok(Expansion {
                bracket,
                trace,
                oracle_calls: calls,
            });
        }
        prev = (x, class, delay);
    }
    Err(SearchError::BracketNotFound {
        l0,
        s0,
        doublings: max_doublings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::AnalyticCellModel;

    fn probe_for(model: &AnalyticCellModel) -> Probe<'_> {
        Probe::new(model, model.threshold_delay(1.1))
    }

    #[test]
    fn immediate_sign_change_gives_two_call_bracket() {
        // root at 5.0; l0 on the failing side, one step to the passing side
        let model = AnalyticCellModel::new(1.0, 5.0 - 10f64.ln(), 1.0, 1.0);
        assert!((model.true_root(1.1) - 5.0).abs() < 1e-12);
        let probe = probe_for(&model);
        let exp = expand_bracket(&probe, 4.9, 0.5, SlopeHint::Decreasing, &SearchConfig::default())
            .unwrap();
        assert_eq!(exp.oracle_calls, 2);
        assert_eq!(exp.bracket.lo, 4.9);
        assert_eq!(exp.bracket.hi, 5.4);
        assert!(!exp.bracket.lo_class.is_below());
        assert!(exp.bracket.hi_class.is_below());
    }

    #[test]
    fn expansion_from_passing_side_walks_down() {
        let model = AnalyticCellModel::new(1.0, 5.0 - 10f64.ln(), 1.0, 1.0);
        let probe = probe_for(&model);
        let exp = expand_bracket(&probe, 5.5, 0.5, SlopeHint::Decreasing, &SearchConfig::default())
            .unwrap();
        // points 5.5, 5.0, 4.5, ... until the classification flips; the
        // bracket must contain the true root and each endpoint is a tested
        // point (the root sits exactly on a test point, so which side it
        // classifies to is a rounding race)
        assert!(exp.bracket.lo >= 4.5 && exp.bracket.hi <= 5.5);
        assert!(exp.bracket.lo <= 5.0 && 5.0 <= exp.bracket.hi);
        assert!(exp.oracle_calls <= 4);
        for e in &exp.trace {
            assert!(e.delay.is_some() || e.classification == Classification::Failure);
        }
    }

    #[test]
    fn doubling_reaches_a_distant_root_in_logarithmic_calls() {
        // root at 100, l0 = 0 (failure region), s0 = 1
        let model = AnalyticCellModel::new(1.0, 100.0 - 10f64.ln(), 1.0, 1.0);
        assert!((model.true_root(1.1) - 100.0).abs() < 1e-9);
        let probe = probe_for(&model);
        let exp = expand_bracket(&probe, 0.0, 1.0, SlopeHint::Decreasing, &SearchConfig::default())
            .unwrap();
        assert_eq!(exp.oracle_calls, 9); // ceil(log2(100)) + 2
        assert!(exp.bracket.lo <= 100.0 && 100.0 <= exp.bracket.hi);
    }

    #[test]
    fn hopeless_interval_reports_bracket_not_found() {
        let model = AnalyticCellModel::new(1.0, 0.0, 1.0, 1.0);
        let probe = probe_for(&model);
        let err = expand_bracket_with_limit(
            &probe,
            1e6,
            1e-9,
            SlopeHint::Decreasing,
            &SearchConfig::default(),
            6,
        )
        .unwrap_err();
        match err {
            SearchError::BracketNotFound { doublings, .. } => assert_eq!(doublings, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trace_marks_only_the_final_call_with_an_interval() {
        let model = AnalyticCellModel::new(1.0, 5.0, 1.0, 1.0);
        let probe = probe_for(&model);
        let exp = expand_bracket(&probe, 20.0, 1.0, SlopeHint::Decreasing, &SearchConfig::default())
            .unwrap();
        let n = exp.trace.len();
        for (i, e) in exp.trace.iter().enumerate() {
            if i + 1 == n {
                assert_eq!(e.interval_length_after, Some(exp.bracket.len()));
            } else {
                assert_eq!(e.interval_length_after, None);
            }
        }
    }
}
