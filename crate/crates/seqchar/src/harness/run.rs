//! Experiment orchestration: characterize, bench, and AL runs with CSV and
//! markdown outputs.
//!
//! Every output file is written atomically (temp + rename). Wall-clock times
//! appear only in the markdown summary; the CSV reports carry call counts
//! exclusively, so fixed seeds reproduce them byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::config::{ExperimentConfig, IntervalPolicy};
use super::{tracefile, HarnessError};
use crate::al::{self, AlInputs, AlPhase, OracleSource};
use crate::effort;
use crate::gp::Prediction;
use crate::oracle::{PvtModelMap, PvtSample, SimOutcome, SkewDelayOracle};
use crate::sampling;
use crate::search::{
    characterize_from_interval, Method, Probe, SearchError, SlopeHint, TraceEntry,
};

/// One characterized sample, whichever pipeline produced it.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub id: usize,
    pub corner_index: usize,
    pub constraint_time: f64,
    pub oracle_calls: u64,
    pub expansion_calls: u64,
    pub predicted: Option<Prediction>,
    pub phase: Option<AlPhase>,
    pub trace: Option<Vec<TraceEntry>>,
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub method: Method,
    pub policy: &'static str,
    pub corner: String,
    pub samples: usize,
    pub mean_calls: f64,
    pub p95_calls: u64,
    pub max_expansion_calls: u64,
    pub wall_seconds: f64,
}

#[derive(Debug)]
pub struct CharacterizeSummary {
    pub outcomes: Vec<SampleOutcome>,
    pub mean_calls: f64,
    pub results_path: PathBuf,
    pub trace_paths: Vec<PathBuf>,
    pub al_iterations: Vec<al::AlIterationStats>,
}

#[derive(Debug)]
pub struct BenchSummary {
    pub rows: Vec<ReportRow>,
    pub report_path: PathBuf,
    pub summary_path: PathBuf,
    pub results_paths: Vec<PathBuf>,
}

/// Samples laid out corner-major: id = corner_index * per_corner + local.
pub struct SampleSet {
    pub samples: Vec<PvtSample>,
    pub corner_of: Vec<usize>,
}

pub fn build_samples(cfg: &ExperimentConfig) -> Result<SampleSet, HarnessError> {
    let per_corner = cfg.qmc.samples_per_corner;
    let locals: Vec<Vec<f64>> = if per_corner == 0 {
        vec![vec![0.0; cfg.qmc.dimension]]
    } else {
        sampling::generate(&cfg.qmc.to_qmc_config())?
    };
    let mut samples = Vec::with_capacity(cfg.corners.len() * locals.len());
    let mut corner_of = Vec::with_capacity(samples.capacity());
    for (ci, corner) in cfg.corners.iter().enumerate() {
        for lv in &locals {
            samples.push(PvtSample::new(*corner, lv.clone()));
            corner_of.push(ci);
        }
    }
    Ok(SampleSet { samples, corner_of })
}

/// Oracle factory over the seeded synthetic PVT map.
pub struct ModelSource {
    map: PvtModelMap,
    samples: Vec<PvtSample>,
    threshold_ratio: f64,
}

impl ModelSource {
    pub fn new(cfg: &ExperimentConfig, samples: &[PvtSample]) -> Self {
        let dimension = samples.first().map_or(0, |s| s.local_vars.len());
        ModelSource {
            map: PvtModelMap::new(cfg.topology, cfg.constraint, cfg.seed, dimension),
            samples: samples.to_vec(),
            threshold_ratio: cfg.search.threshold_ratio,
        }
    }
}

impl OracleSource for ModelSource {
    fn oracle_for(&self, sample: usize) -> (Box<dyn SkewDelayOracle>, f64) {
        let model = self.map.model(&self.samples[sample]);
        let threshold = model.threshold_delay(self.threshold_ratio);
        (Box::new(model), threshold)
    }
}

fn slope_hint(cfg: &ExperimentConfig) -> SlopeHint {
    match cfg.constraint {
        effort::Constraint::Setup => SlopeHint::Decreasing,
        effort::Constraint::Hold => SlopeHint::Increasing,
    }
}

fn effort_fraction(cfg: &ExperimentConfig) -> f64 {
    match &cfg.custom_paths {
        Some(paths) => match cfg.constraint {
            effort::Constraint::Setup => paths.setup_fraction,
            effort::Constraint::Hold => paths.hold_fraction,
        },
        None => effort::interval_fraction(cfg.topology, cfg.constraint),
    }
}

/// Characterize one sample with a fixed or circuit-analysis interval.
fn characterize_plain(
    cfg: &ExperimentConfig,
    source: &dyn OracleSource,
    method: Method,
    policy: IntervalPolicy,
    id: usize,
    corner_index: usize,
    keep_trace: bool,
) -> Result<SampleOutcome, HarnessError> {
    let (oracle, threshold) = source.oracle_for(id);
    let probe_err = |source: SearchError| HarnessError::Search(source);
    let (l0, s0) = match policy {
        IntervalPolicy::Fixed { l0, s0 } => (l0, s0),
        IntervalPolicy::Effort => {
            let probe_skew = match cfg.constraint {
                effort::Constraint::Setup => cfg.al.nominal_probe_skew,
                effort::Constraint::Hold => -cfg.al.nominal_probe_skew,
            };
            let d0 = match oracle.evaluate(probe_skew).map_err(SearchError::from) {
                Ok(SimOutcome::Delay(d)) => d,
                Ok(SimOutcome::Failure) => {
                    return Err(probe_err(SearchError::InvalidConfig(format!(
                        "sample {id}: nominal probe hit the failure region"
                    ))))
                }
                Err(e) => return Err(probe_err(e)),
            };
            effort::initial_interval_with_fraction(effort_fraction(cfg), d0, cfg.al.s_min)
        }
        IntervalPolicy::ActiveLearning => {
            unreachable!("active learning runs through al::run")
        }
    };
    let probe = Probe::new(oracle.as_ref(), threshold);
    let run = characterize_from_interval(
        &probe,
        l0,
        s0,
        slope_hint(cfg),
        method,
        &cfg.search,
        None,
    )?;
    Ok(SampleOutcome {
        id,
        corner_index,
        constraint_time: run.result.root,
        oracle_calls: oracle.calls(),
        expansion_calls: run.expansion_calls,
        predicted: None,
        phase: None,
        trace: keep_trace.then(|| run.merged_trace()),
    })
}

/// Run one (method, policy) combination over a sample set.
fn run_combo(
    cfg: &ExperimentConfig,
    set: &SampleSet,
    source: &ModelSource,
    method: Method,
    policy: IntervalPolicy,
    keep_traces: bool,
) -> Result<(Vec<SampleOutcome>, Vec<al::AlIterationStats>), HarnessError> {
    match policy {
        IntervalPolicy::ActiveLearning => {
            let al_cfg = cfg
                .al
                .to_al_config(keep_traces)
                .clamped_to(set.samples.len());
            let inputs = AlInputs {
                samples: &set.samples,
                topology: cfg.topology,
                constraint: cfg.constraint,
                method,
                effort_fraction: effort_fraction(cfg),
            };
            let outcome = al::run(&inputs, source, &cfg.search, &al_cfg)
                .map_err(|e| HarnessError::Al(e.to_string()))?;
            let iterations = outcome.iterations.clone();
            let mut outcomes: Vec<SampleOutcome> = outcome
                .records
                .into_iter()
                .map(|r| SampleOutcome {
                    id: r.id,
                    corner_index: r.corner_index,
                    constraint_time: r.constraint_time,
                    oracle_calls: r.oracle_calls,
                    expansion_calls: r.expansion_calls,
                    predicted: r.predicted,
                    phase: Some(r.phase),
                    trace: r.trace,
                })
                .collect();
            outcomes.sort_by_key(|o| o.id);
            Ok((outcomes, iterations))
        }
        _ => {
            let mut outcomes = Vec::with_capacity(set.samples.len());
            for id in 0..set.samples.len() {
                outcomes.push(characterize_plain(
                    cfg,
                    source,
                    method,
                    policy,
                    id,
                    set.corner_of[id],
                    keep_traces && id < cfg.output.traces,
                )?);
            }
            Ok((outcomes, Vec::new()))
        }
    }
}

fn corner_label(cfg: &ExperimentConfig, index: usize) -> String {
    let c = &cfg.corners[index];
    format!("{}_{}V_{}C", c.process.as_str(), c.voltage, c.temperature)
}

fn results_csv(cfg: &ExperimentConfig, method: Method, policy: &str, outcomes: &[SampleOutcome]) -> String {
    let mut out = String::from("sample_id,corner,constraint_time,oracle_calls,method,policy\n");
    for o in outcomes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            o.id,
            corner_label(cfg, o.corner_index),
            o.constraint_time,
            o.oracle_calls,
            method.as_str(),
            policy,
        );
    }
    out
}

fn mean_calls(outcomes: &[SampleOutcome]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().map(|o| o.oracle_calls as f64).sum::<f64>() / outcomes.len() as f64
}

fn report_row(
    method: Method,
    policy: &'static str,
    corner: String,
    outcomes: &[&SampleOutcome],
    wall_seconds: f64,
) -> ReportRow {
    let mut calls: Vec<u64> = outcomes.iter().map(|o| o.oracle_calls).collect();
    calls.sort_unstable();
    let n = calls.len();
    let mean = calls.iter().sum::<u64>() as f64 / n.max(1) as f64;
    let p95 = if n == 0 {
        0
    } else {
        calls[(((n as f64) * 0.95).ceil() as usize).clamp(1, n) - 1]
    };
    ReportRow {
        method,
        policy,
        corner,
        samples: n,
        mean_calls: mean,
        p95_calls: p95,
        max_expansion_calls: outcomes.iter().map(|o| o.expansion_calls).max().unwrap_or(0),
        wall_seconds,
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(HarnessError::io(dir.display().to_string()))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    fs::write(&tmp, contents).map_err(HarnessError::io(tmp.display().to_string()))?;
    fs::rename(&tmp, path).map_err(HarnessError::io(path.display().to_string()))?;
    Ok(())
}

/// Characterize every sample with the configured method and interval policy.
pub fn run_characterize(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<CharacterizeSummary, HarnessError> {
    cfg.validate()?;
    let set = build_samples(cfg)?;
    let source = ModelSource::new(cfg, &set.samples);
    let keep = cfg.output.traces > 0;
    let (outcomes, al_iterations) =
        run_combo(cfg, &set, &source, cfg.method, cfg.policy, keep)?;

    let results_path = out_dir.join("results.csv");
    write_atomic(
        &results_path,
        &results_csv(cfg, cfg.method, cfg.policy.label(), &outcomes),
    )?;
    let mut trace_paths = Vec::new();
    for o in outcomes.iter().filter(|o| o.trace.is_some()).take(cfg.output.traces) {
        let path = out_dir.join(format!("trace_{}.csv", o.id));
        write_atomic(&path, &tracefile::trace_csv(o.trace.as_ref().expect("kept")))?;
        trace_paths.push(path);
    }
    if !al_iterations.is_empty() {
        write_al_reports(out_dir, &al_iterations, &outcomes)?;
    }
    Ok(CharacterizeSummary {
        mean_calls: mean_calls(&outcomes),
        outcomes,
        results_path,
        trace_paths,
        al_iterations,
    })
}

fn write_al_reports(
    out_dir: &Path,
    iterations: &[al::AlIterationStats],
    outcomes: &[SampleOutcome],
) -> Result<(), HarnessError> {
    let mut report = String::from("k,batch_size,mean_calls,mean_pred_std,rmse_pred_vs_actual\n");
    for s in iterations {
        let _ = writeln!(
            report,
            "{},{},{},{},{}",
            s.phase.k_key(),
            s.batch_size,
            s.mean_calls,
            s.mean_pred_std.map(|v| v.to_string()).unwrap_or_default(),
            s.rmse_pred_vs_actual
                .map(|v| v.to_string())
                .unwrap_or_default(),
        );
    }
    write_atomic(&out_dir.join("al_report.csv"), &report)?;

    let mut scatter = String::from("sample_id,predicted,actual\n");
    for o in outcomes {
        if let Some(p) = o.predicted {
            let _ = writeln!(scatter, "{},{},{}", o.id, p.mu, o.constraint_time);
        }
    }
    write_atomic(&out_dir.join("al_scatter.csv"), &scatter)?;
    Ok(())
}

/// Run the active-learning pipeline alone and write its reports.
pub fn run_al(cfg: &ExperimentConfig, out_dir: &Path) -> Result<CharacterizeSummary, HarnessError> {
    let mut cfg = cfg.clone();
    cfg.policy = IntervalPolicy::ActiveLearning;
    run_characterize(&cfg, out_dir)
}

/// Run every configured (method, policy) combination on identical samples
/// and write the comparison report.
pub fn run_bench(cfg: &ExperimentConfig, out_dir: &Path) -> Result<BenchSummary, HarnessError> {
    cfg.validate()?;
    let set = build_samples(cfg)?;
    let source = ModelSource::new(cfg, &set.samples);

    let mut rows: Vec<ReportRow> = Vec::new();
    let mut results_paths = Vec::new();
    let mut aggregate: Vec<(Method, &'static str, f64)> = Vec::new();
    for combo in &cfg.combos {
        let policy = cfg.policy_for(combo.policy_kind);
        let started = Instant::now();
        let (outcomes, _) = run_combo(cfg, &set, &source, combo.method, policy, false)?;
        let wall = started.elapsed().as_secs_f64();
        let label = combo.policy_kind.label();

        let path = out_dir.join(format!("results_{}_{}.csv", combo.method.as_str(), label));
        write_atomic(&path, &results_csv(cfg, combo.method, label, &outcomes))?;
        results_paths.push(path);

        for (ci, _) in cfg.corners.iter().enumerate() {
            let of_corner: Vec<&SampleOutcome> =
                outcomes.iter().filter(|o| o.corner_index == ci).collect();
            if !of_corner.is_empty() {
                rows.push(report_row(
                    combo.method,
                    label,
                    corner_label(cfg, ci),
                    &of_corner,
                    wall,
                ));
            }
        }
        let all: Vec<&SampleOutcome> = outcomes.iter().collect();
        let row = report_row(combo.method, label, "all".into(), &all, wall);
        aggregate.push((combo.method, label, row.mean_calls));
        rows.push(row);
    }

    // deterministic CSV: no wall-clock column
    let mut report = String::from(
        "method,policy,corner,samples,mean_calls,p95_calls,max_expansion_calls\n",
    );
    for r in &rows {
        let _ = writeln!(
            report,
            "{},{},{},{},{},{},{}",
            r.method.as_str(),
            r.policy,
            r.corner,
            r.samples,
            r.mean_calls,
            r.p95_calls,
            r.max_expansion_calls,
        );
    }
    let report_path = out_dir.join("report.csv");
    write_atomic(&report_path, &report)?;

    let summary_path = out_dir.join("bench_summary.md");
    write_atomic(&summary_path, &bench_markdown(cfg, &rows, &aggregate))?;

    Ok(BenchSummary {
        rows,
        report_path,
        summary_path,
        results_paths,
    })
}

fn bench_markdown(
    cfg: &ExperimentConfig,
    rows: &[ReportRow],
    aggregate: &[(Method, &'static str, f64)],
) -> String {
    let mut md = String::from("# Method / interval-policy comparison\n\n");
    let _ = writeln!(
        md,
        "{} corners, {} samples per corner, seed {}. The fixed interval \
         (l0 = s0 = {}) is ten times the circuit-analysis estimate, standing \
         in for a conservative tool default.\n",
        cfg.corners.len(),
        cfg.qmc.samples_per_corner.max(1),
        cfg.seed,
        cfg.fixed_l0,
    );
    md.push_str("| method | policy | mean calls | speedup vs bisection:fixed | wall s |\n");
    md.push_str("|---|---|---|---|---|\n");
    let baseline = aggregate
        .iter()
        .find(|(m, p, _)| *m == Method::Bisection && *p == "fixed")
        .map(|(_, _, mean)| *mean);
    for (method, policy, mean) in aggregate {
        let speedup = match baseline {
            Some(b) if *mean > 0.0 => format!("{:.2}x", b / mean),
            _ => "-".into(),
        };
        let wall = rows
            .iter()
            .find(|r| r.method == *method && r.policy == *policy && r.corner == "all")
            .map(|r| format!("{:.2}", r.wall_seconds))
            .unwrap_or_default();
        let _ = writeln!(md, "| {method} | {policy} | {mean:.3} | {speedup} | {wall} |");
    }
    md.push_str(
        "\nWall-clock seconds are informational only; oracle call counts are\nthe portable cost metric.\n",
    );
    md
}
