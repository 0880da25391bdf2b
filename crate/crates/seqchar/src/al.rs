//! Uncertainty-budgeted active learning across PVT corners.
//!
//! The loop spends its simulation budget where the regression is least
//! certain: a uniform initial batch is characterized from circuit-analysis
//! intervals, a GP is fitted on everything simulated so far, and each later
//! batch splits the budget over corners proportionally to their summed
//! predictive uncertainty, taking the most uncertain samples inside each
//! corner. After `k_max` refinement batches the remaining samples are swept
//! using the predicted (mean, uncertainty) as their initial intervals.
//!
//! Every oracle call is charged to its sample, including the one large-skew
//! call that measures the nominal delay for circuit-analysis intervals and
//! any doublings wasted before a mispredicted interval falls back.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::effort::{self, Constraint};
use crate::gp::{self, GpError, Prediction};
use crate::oracle::{PvtCorner, PvtSample, SimOutcome, SkewDelayOracle, Topology};
use crate::search::{
    characterize_from_interval, Method, Probe, SearchConfig, SearchError, SlopeHint, TraceEntry,
};

#[derive(Debug, Clone, PartialEq)]
pub struct AlConfig {
    /// Batch size M.
    pub batch: usize,
    /// Refinement iterations after the initial batch.
    pub k_max: usize,
    /// Floor for initial steps and locations.
    pub s_min: f64,
    /// Magnitude of the skew used to measure the nominal delay (applied on
    /// the passing side of the constraint orientation).
    pub nominal_probe_skew: f64,
    /// Doubling budget for predicted intervals before falling back to the
    /// circuit-analysis interval.
    pub fallback_doublings: usize,
    /// Keep per-sample traces in the records (memory for reportability).
    pub keep_traces: bool,
}

impl Default for AlConfig {
    fn default() -> Self {
        AlConfig {
            batch: 200,
            k_max: 5,
            s_min: 0.1,
            nominal_probe_skew: 1000.0,
            fallback_doublings: 6,
            keep_traces: false,
        }
    }
}

impl AlConfig {
    /// Shrink the batch to the sample count so degenerate runs (one corner,
    /// a handful of samples) still work.
    pub fn clamped_to(mut self, n_samples: usize) -> Self {
        self.batch = self.batch.min(n_samples).max(1);
        self
    }

    pub fn validate(&self, n_samples: usize) -> Result<(), AlError> {
        if self.batch == 0 || self.batch > n_samples {
            return Err(AlError::InvalidConfig(format!(
                "batch must be in 1..={n_samples}, got {}",
                self.batch
            )));
        }
        if !(self.s_min > 0.0) {
            return Err(AlError::InvalidConfig(format!("s_min = {}", self.s_min)));
        }
        if !(self.nominal_probe_skew > 0.0) {
            return Err(AlError::InvalidConfig(format!(
                "nominal_probe_skew = {}",
                self.nominal_probe_skew
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum AlError {
    #[error("sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: SearchError,
    },
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error("invalid active-learning configuration: {0}")]
    InvalidConfig(String),
    #[error("sample {sample}: nominal delay probe hit the failure region")]
    NominalProbeFailed { sample: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlPhase {
    Batch(usize),
    FinalSweep,
}

impl AlPhase {
    pub fn label(&self) -> String {
        match self {
            AlPhase::Batch(k) => format!("batch{k}"),
            AlPhase::FinalSweep => "sweep".into(),
        }
    }

    /// Value for the `k` column of the iteration report.
    pub fn k_key(&self) -> String {
        match self {
            AlPhase::Batch(k) => k.to_string(),
            AlPhase::FinalSweep => "sweep".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub id: usize,
    pub corner_index: usize,
    pub phase: AlPhase,
    pub predicted: Option<Prediction>,
    pub constraint_time: f64,
    pub oracle_calls: u64,
    pub expansion_calls: u64,
    pub used_fallback: bool,
    pub trace: Option<Vec<TraceEntry>>,
}

#[derive(Debug, Clone)]
pub struct AlIterationStats {
    pub phase: AlPhase,
    pub batch_size: usize,
    pub mean_calls: f64,
    /// Mean predictive standard deviation over unsimulated samples at fit
    /// time (absent for the initial batch, which has no regression yet).
    pub mean_pred_std: Option<f64>,
    pub rmse_pred_vs_actual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct AlOutcome {
    pub records: Vec<SampleRecord>,
    pub iterations: Vec<AlIterationStats>,
    pub corners: Vec<PvtCorner>,
}

impl AlOutcome {
    pub fn mean_calls(&self, phase: AlPhase) -> Option<f64> {
        let (mut n, mut total) = (0u64, 0u64);
        for r in self.records.iter().filter(|r| r.phase == phase) {
            n += 1;
            total += r.oracle_calls;
        }
        (n > 0).then(|| total as f64 / n as f64)
    }

    pub fn total_calls(&self) -> u64 {
        self.records.iter().map(|r| r.oracle_calls).sum()
    }
}

/// Uniform initial pick: 1-based indices floor(jN/M) for j = 1..=M,
/// deduplicated by advancing to the next unused index.
pub fn initial_selection(n_samples: usize, batch: usize) -> Vec<usize> {
    assert!(batch >= 1 && batch <= n_samples);
    let mut used = BTreeSet::new();
    let mut out = Vec::with_capacity(batch);
    for j in 1..=batch {
        let mut idx = (j * n_samples / batch).saturating_sub(1);
        while used.contains(&idx) {
            idx = (idx + 1) % n_samples;
        }
        used.insert(idx);
        out.push(idx);
    }
    out
}

/// Unsimulated predictions of one corner.
#[derive(Debug, Clone)]
pub struct CornerGroup {
    pub corner_index: usize,
    /// (sample id, predictive standard deviation)
    pub entries: Vec<(usize, f64)>,
}

/// Split the batch over corners proportionally to their summed uncertainty
/// (largest-remainder rounding, so quotas sum exactly to the budget), then
/// take the most uncertain samples within each corner, ties by id.
pub fn select_batch(groups: &[CornerGroup], batch: usize) -> Vec<usize> {
    let available: usize = groups.iter().map(|g| g.entries.len()).sum();
    let budget = batch.min(available);
    if budget == 0 {
        return Vec::new();
    }
    let sums: Vec<f64> = groups
        .iter()
        .map(|g| g.entries.iter().map(|(_, v)| v.max(0.0)).sum::<f64>())
        .collect();
    let total: f64 = sums.iter().sum();
    let quotas: Vec<f64> = if total > 0.0 {
        sums.iter().map(|v| budget as f64 * v / total).collect()
    } else {
        // fully certain everywhere: fall back to capacity-proportional
        groups
            .iter()
            .map(|g| budget as f64 * g.entries.len() as f64 / available as f64)
            .collect()
    };
    let caps: Vec<usize> = groups.iter().map(|g| g.entries.len()).collect();
    let mut counts: Vec<usize> = quotas
        .iter()
        .zip(&caps)
        .map(|(q, cap)| (q.floor() as usize).min(*cap))
        .collect();
    let mut assigned: usize = counts.iter().sum();
    // distribute the remainder, largest fractional part first
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|a, b| {
        let ra = quotas[*a] - quotas[*a].floor();
        let rb = quotas[*b] - quotas[*b].floor();
        rb.total_cmp(&ra).then(a.cmp(b))
    });
    while assigned < budget {
        let mut gave = false;
        for &g in &order {
            if assigned == budget {
                break;
            }
            if counts[g] < caps[g] {
                counts[g] += 1;
                assigned += 1;
                gave = true;
            }
        }
        if !gave {
            break;
        }
    }

    let mut picked = Vec::with_capacity(budget);
    for (g, take) in groups.iter().zip(&counts) {
        let mut entries = g.entries.clone();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        picked.extend(entries.iter().take(*take).map(|(id, _)| *id));
    }
    picked.sort_unstable();
    picked
}

/// Initial interval from a prediction: test at the mean, step by the
/// uncertainty (floored).
pub fn predicted_interval(p: &Prediction, s_min: f64) -> (f64, f64) {
    (p.mu, p.v.max(s_min))
}

/// Per-sample oracle source: returns the oracle and its degradation
/// threshold delay.
pub trait OracleSource {
    fn oracle_for(&self, sample: usize) -> (Box<dyn SkewDelayOracle>, f64);
}

impl<F> OracleSource for F
where
    F: Fn(usize) -> (Box<dyn SkewDelayOracle>, f64),
{
    fn oracle_for(&self, sample: usize) -> (Box<dyn SkewDelayOracle>, f64) {
        self(sample)
    }
}

pub struct AlInputs<'a> {
    pub samples: &'a [PvtSample],
    pub topology: Topology,
    pub constraint: Constraint,
    pub method: Method,
    /// Fraction of the measured nominal delay used for circuit-analysis
    /// intervals (see [`effort::interval_fraction`]).
    pub effort_fraction: f64,
}

impl<'a> AlInputs<'a> {
    pub fn new(
        samples: &'a [PvtSample],
        topology: Topology,
        constraint: Constraint,
        method: Method,
    ) -> Self {
        AlInputs {
            samples,
            topology,
            constraint,
            method,
            effort_fraction: effort::interval_fraction(topology, constraint),
        }
    }
}

pub fn run(
    inputs: &AlInputs,
    oracles: &dyn OracleSource,
    search_cfg: &SearchConfig,
    al_cfg: &AlConfig,
) -> Result<AlOutcome, AlError> {
    let n = inputs.samples.len();
    al_cfg.validate(n)?;
    search_cfg
        .validate()
        .map_err(|e| AlError::InvalidConfig(e.to_string()))?;

    let driver = Driver {
        inputs,
        oracles,
        search_cfg,
        al_cfg,
        hint: match inputs.constraint {
            Constraint::Setup => SlopeHint::Decreasing,
            Constraint::Hold => SlopeHint::Increasing,
        },
    };

    let (corners, corner_of) = corner_index(inputs.samples);
    let features: Vec<Vec<f64>> = inputs.samples.iter().map(gp::encode_features).collect();

    let mut records: Vec<SampleRecord> = Vec::with_capacity(n);
    let mut iterations = Vec::new();
    let mut simulated: BTreeMap<usize, f64> = BTreeMap::new();

    // initial uniform batch from circuit-analysis intervals
    let first = initial_selection(n, al_cfg.batch);
    for &id in &first {
        let rec = driver.characterize_effort(id, AlPhase::Batch(0), corner_of[id])?;
        simulated.insert(id, rec.constraint_time);
        records.push(rec);
    }
    iterations.push(stats_for(&records, AlPhase::Batch(0), None, None));

    for k in 1..=al_cfg.k_max {
        if simulated.len() == n {
            break;
        }
        let (preds, mean_std) = fit_predict(&features, &simulated)?;
        let groups = group_unsimulated(&preds, &corner_of, corners.len());
        let batch = select_batch(&groups, al_cfg.batch);
        let mut sq_err = 0.0;
        for &id in &batch {
            let pred = preds[&id];
            let rec = driver.characterize_predicted(id, pred, AlPhase::Batch(k), corner_of[id])?;
            sq_err += (pred.mu - rec.constraint_time).powi(2);
            simulated.insert(id, rec.constraint_time);
            records.push(rec);
        }
        let rmse = (!batch.is_empty()).then(|| (sq_err / batch.len() as f64).sqrt());
        iterations.push(stats_for(&records, AlPhase::Batch(k), Some(mean_std), rmse));
    }

    // final sweep with the latest regression's predicted intervals
    if simulated.len() < n {
        let (preds, mean_std) = fit_predict(&features, &simulated)?;
        let rest: Vec<usize> = (0..n).filter(|id| !simulated.contains_key(id)).collect();
        let mut sq_err = 0.0;
        for &id in &rest {
            let pred = preds[&id];
            let rec = driver.characterize_predicted(id, pred, AlPhase::FinalSweep, corner_of[id])?;
            sq_err += (pred.mu - rec.constraint_time).powi(2);
            simulated.insert(id, rec.constraint_time);
            records.push(rec);
        }
        let rmse = (!rest.is_empty()).then(|| (sq_err / rest.len() as f64).sqrt());
        iterations.push(stats_for(&records, AlPhase::FinalSweep, Some(mean_std), rmse));
    }

    debug_assert_eq!(simulated.len(), n, "every sample characterized once");
    debug_assert_eq!(records.len(), n);
    Ok(AlOutcome {
        records,
        iterations,
        corners,
    })
}

struct Driver<'a> {
    inputs: &'a AlInputs<'a>,
    oracles: &'a dyn OracleSource,
    search_cfg: &'a SearchConfig,
    al_cfg: &'a AlConfig,
    hint: SlopeHint,
}

impl Driver<'_> {
    fn probe_skew(&self) -> f64 {
        match self.inputs.constraint {
            Constraint::Setup => self.al_cfg.nominal_probe_skew,
            Constraint::Hold => -self.al_cfg.nominal_probe_skew,
        }
    }

    fn measure_nominal(
        &self,
        id: usize,
        oracle: &dyn SkewDelayOracle,
    ) -> Result<f64, AlError> {
        match oracle.evaluate(self.probe_skew()) {
            Ok(SimOutcome::Delay(d)) => Ok(d),
            Ok(SimOutcome::Failure) => Err(AlError::NominalProbeFailed { sample: id }),
            Err(e) => Err(AlError::Sample {
                sample: id,
                source: e.into(),
            }),
        }
    }

    fn characterize_effort(
        &self,
        id: usize,
        phase: AlPhase,
        corner_index: usize,
    ) -> Result<SampleRecord, AlError> {
        let (oracle, threshold) = self.oracles.oracle_for(id);
        let d0 = self.measure_nominal(id, oracle.as_ref())?;
        let (l0, s0) =
            effort::initial_interval_with_fraction(self.inputs.effort_fraction, d0, self.al_cfg.s_min);
        let probe = Probe::new(oracle.as_ref(), threshold);
        let run = characterize_from_interval(
            &probe,
            l0,
            s0,
            self.hint,
            self.inputs.method,
            self.search_cfg,
            None,
        )
        .map_err(|source| AlError::Sample { sample: id, source })?;
        Ok(self.record(id, phase, corner_index, None, false, run, oracle.as_ref()))
    }

    fn characterize_predicted(
        &self,
        id: usize,
        pred: Prediction,
        phase: AlPhase,
        corner_index: usize,
    ) -> Result<SampleRecord, AlError> {
        let (oracle, threshold) = self.oracles.oracle_for(id);
        let probe = Probe::new(oracle.as_ref(), threshold);
        let (l0, s0) = predicted_interval(&pred, self.al_cfg.s_min);
        let attempt = characterize_from_interval(
            &probe,
            l0,
            s0,
            self.hint,
            self.inputs.method,
            self.search_cfg,
            Some(self.al_cfg.fallback_doublings),
        );
        match attempt {
            Ok(run) => {
                Ok(self.record(id, phase, corner_index, Some(pred), false, run, oracle.as_ref()))
            }
            Err(SearchError::BracketNotFound { .. }) => {
                // mispredicted interval: fall back to circuit analysis, all
                // calls so far stay on this sample's bill
                let d0 = self.measure_nominal(id, oracle.as_ref())?;
                let (l0, s0) = effort::initial_interval_with_fraction(
                    self.inputs.effort_fraction,
                    d0,
                    self.al_cfg.s_min,
                );
                let run = characterize_from_interval(
                    &probe,
                    l0,
                    s0,
                    self.hint,
                    self.inputs.method,
                    self.search_cfg,
                    None,
                )
                .map_err(|source| AlError::Sample { sample: id, source })?;
                Ok(self.record(id, phase, corner_index, Some(pred), true, run, oracle.as_ref()))
            }
            Err(source) => Err(AlError::Sample { sample: id, source }),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &self,
        id: usize,
        phase: AlPhase,
        corner_index: usize,
        predicted: Option<Prediction>,
        used_fallback: bool,
        run: crate::search::CharacterizationRun,
        oracle: &dyn SkewDelayOracle,
    ) -> SampleRecord {
        SampleRecord {
            id,
            corner_index,
            phase,
            predicted,
            constraint_time: run.result.root,
            oracle_calls: oracle.calls(),
            expansion_calls: run.expansion_calls,
            used_fallback,
            trace: self.al_cfg.keep_traces.then(|| run.merged_trace()),
        }
    }
}

fn corner_index(samples: &[PvtSample]) -> (Vec<PvtCorner>, Vec<usize>) {
    let mut corners: Vec<PvtCorner> = Vec::new();
    let mut of = Vec::with_capacity(samples.len());
    for s in samples {
        let idx = corners
            .iter()
            .position(|c| *c == s.corner)
            .unwrap_or_else(|| {
                corners.push(s.corner);
                corners.len() - 1
            });
        of.push(idx);
    }
    (corners, of)
}

fn fit_predict(
    features: &[Vec<f64>],
    simulated: &BTreeMap<usize, f64>,
) -> Result<(BTreeMap<usize, Prediction>, f64), AlError> {
    let train_x: Vec<Vec<f64>> = simulated.keys().map(|id| features[*id].clone()).collect();
    let train_y: Vec<f64> = simulated.values().copied().collect();
    let model = gp::fit(&train_x, &train_y)?;
    let mut preds = BTreeMap::new();
    let mut total_std = 0.0;
    let mut count = 0usize;
    for (id, feat) in features.iter().enumerate() {
        if simulated.contains_key(&id) {
            continue;
        }
        let p = model.predict_one(feat)?;
        total_std += p.v;
        count += 1;
        preds.insert(id, p);
    }
    let mean_std = if count > 0 { total_std / count as f64 } else { 0.0 };
    Ok((preds, mean_std))
}

fn group_unsimulated(
    preds: &BTreeMap<usize, Prediction>,
    corner_of: &[usize],
    n_corners: usize,
) -> Vec<CornerGroup> {
    let mut groups: Vec<CornerGroup> = (0..n_corners)
        .map(|corner_index| CornerGroup {
            corner_index,
            entries: Vec::new(),
        })
        .collect();
    for (&id, p) in preds {
        groups[corner_of[id]].entries.push((id, p.v));
    }
    groups
}

fn stats_for(
    records: &[SampleRecord],
    phase: AlPhase,
    mean_pred_std: Option<f64>,
    rmse: Option<f64>,
) -> AlIterationStats {
    let phase_records: Vec<&SampleRecord> =
        records.iter().filter(|r| r.phase == phase).collect();
    let mean_calls = if phase_records.is_empty() {
        0.0
    } else {
        phase_records.iter().map(|r| r.oracle_calls as f64).sum::<f64>()
            / phase_records.len() as f64
    };
    AlIterationStats {
        phase,
        batch_size: phase_records.len(),
        mean_calls,
        mean_pred_std,
        rmse_pred_vs_actual: rmse,
    }
}
