//! Flat key-value experiment configuration with `[section]` headers.
//!
//! The format is deliberately small: `#`/`;` comments, one `key = value` per
//! line, sections group related keys. `print-default-config` emits the full
//! documented default, which also serves as the format reference.

use std::collections::BTreeMap;

use super::{corners, ConfigError};
use crate::al::AlConfig;
use crate::effort::{Constraint, EffortParams, GateKind, Stage, TopologyPaths};
use crate::oracle::{PvtCorner, Topology};
use crate::sampling::{Generator, QmcConfig};
use crate::search::{Method, SearchConfig};

/// How each method obtains its initial interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalPolicy {
    Fixed { l0: f64, s0: f64 },
    Effort,
    ActiveLearning,
}

impl IntervalPolicy {
    pub fn label(&self) -> &'static str {
        match self {
            IntervalPolicy::Fixed { .. } => "fixed",
            IntervalPolicy::Effort => "effort",
            IntervalPolicy::ActiveLearning => "al",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchCombo {
    pub method: Method,
    pub policy_kind: PolicyKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Fixed,
    Effort,
    ActiveLearning,
}

impl PolicyKind {
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Fixed => "fixed",
            PolicyKind::Effort => "effort",
            PolicyKind::ActiveLearning => "al",
        }
    }

    fn parse(s: &str) -> Option<PolicyKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fixed" => Some(PolicyKind::Fixed),
            "effort" => Some(PolicyKind::Effort),
            "al" | "active_learning" => Some(PolicyKind::ActiveLearning),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmcSettings {
    pub dimension: usize,
    pub samples_per_corner: usize,
    pub scramble_seed: Option<u64>,
    pub generator: Generator,
}

impl QmcSettings {
    pub fn to_qmc_config(&self) -> QmcConfig {
        QmcConfig {
            dimension: self.dimension,
            count: self.samples_per_corner,
            scramble_seed: self.scramble_seed,
            generator: self.generator,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlSettings {
    pub batch: usize,
    pub k_max: usize,
    pub s_min: f64,
    pub nominal_probe_skew: f64,
    pub fallback_doublings: usize,
}

impl AlSettings {
    pub fn to_al_config(&self, keep_traces: bool) -> AlConfig {
        AlConfig {
            batch: self.batch,
            k_max: self.k_max,
            s_min: self.s_min,
            nominal_probe_skew: self.nominal_probe_skew,
            fallback_doublings: self.fallback_doublings,
            keep_traces,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub directory: String,
    /// How many per-sample traces to write (samples in id order).
    pub traces: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub topology: Topology,
    pub constraint: Constraint,
    pub corners: Vec<PvtCorner>,
    pub search: SearchConfig,
    pub qmc: QmcSettings,
    pub al: AlSettings,
    pub method: Method,
    pub policy: IntervalPolicy,
    pub combos: Vec<BenchCombo>,
    pub fixed_l0: f64,
    pub fixed_s0: f64,
    pub output: OutputSettings,
    pub custom_paths: Option<TopologyPaths>,
    pub effort_params: EffortParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let est = crate::effort::estimate_topology(Topology::Dff, &EffortParams::default());
        // conservative fixed interval: ten times the circuit-analysis one,
        // in oracle time units
        let fixed = 10.0
            * est.setup_fraction
            * est.nominal_delay_units
            * crate::oracle::TIME_UNITS_PER_EFFORT_UNIT;
        ExperimentConfig {
            seed: 1,
            topology: Topology::Dff,
            constraint: Constraint::Setup,
            corners: vec![PvtCorner::nominal()],
            search: SearchConfig::default(),
            qmc: QmcSettings {
                dimension: 168,
                samples_per_corner: 0,
                scramble_seed: None,
                generator: Generator::Sobol,
            },
            al: AlSettings {
                batch: 20,
                k_max: 5,
                s_min: 0.1,
                nominal_probe_skew: 1000.0,
                fallback_doublings: 6,
            },
            method: Method::Beira,
            policy: IntervalPolicy::Effort,
            combos: vec![
                BenchCombo {
                    method: Method::Bisection,
                    policy_kind: PolicyKind::Fixed,
                },
                BenchCombo {
                    method: Method::Bisection,
                    policy_kind: PolicyKind::ActiveLearning,
                },
                BenchCombo {
                    method: Method::Beira,
                    policy_kind: PolicyKind::Fixed,
                },
                BenchCombo {
                    method: Method::Beira,
                    policy_kind: PolicyKind::ActiveLearning,
                },
            ],
            fixed_l0: fixed,
            fixed_s0: fixed,
            output: OutputSettings {
                directory: "out".into(),
                traces: 4,
            },
            custom_paths: None,
            effort_params: EffortParams::default(),
        }
    }
}

impl ExperimentConfig {
    /// The desk-scale benchmark: the full corner table, 100 local samples
    /// per corner, batch 20, five refinement iterations.
    pub fn desk_benchmark(seed: u64) -> Self {
        let mut cfg = ExperimentConfig::default();
        cfg.seed = seed;
        cfg.corners = corners::table_corners();
        cfg.qmc.samples_per_corner = 100;
        cfg
    }

    pub fn policy_for(&self, kind: PolicyKind) -> IntervalPolicy {
        match kind {
            PolicyKind::Fixed => IntervalPolicy::Fixed {
                l0: self.fixed_l0,
                s0: self.fixed_s0,
            },
            PolicyKind::Effort => IntervalPolicy::Effort,
            PolicyKind::ActiveLearning => IntervalPolicy::ActiveLearning,
        }
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let raw = RawConfig::parse(text)?;
        let mut cfg = ExperimentConfig::default();

        if let Some(sec) = raw.section("experiment") {
            sec.take_parse(&mut cfg.seed, "seed", |v| v.parse().ok())?;
            sec.take_parse(&mut cfg.topology, "topology", Topology::parse)?;
            sec.take_parse(&mut cfg.constraint, "constraint", Constraint::parse)?;
        }
        if let Some(sec) = raw.section("search") {
            sec.take_parse(&mut cfg.search.tau, "tau", parse_f64)?;
            sec.take_parse(&mut cfg.search.sigma0, "sigma0", parse_f64)?;
            sec.take_parse(&mut cfg.search.beta, "beta", parse_f64)?;
            sec.take_parse(&mut cfg.search.max_iter, "max_iter", |v| v.parse().ok())?;
            sec.take_parse(&mut cfg.search.threshold_ratio, "threshold_ratio", parse_f64)?;
            sec.take_parse(
                &mut cfg.search.safeguard_window,
                "safeguard_window",
                |v| v.parse().ok(),
            )?;
        }
        if let Some(sec) = raw.section("qmc") {
            sec.take_parse(&mut cfg.qmc.dimension, "dimension", |v| v.parse().ok())?;
            sec.take_parse(
                &mut cfg.qmc.samples_per_corner,
                "samples_per_corner",
                |v| v.parse().ok(),
            )?;
            if let Some((line, value)) = sec.get("scramble_seed") {
                if value.eq_ignore_ascii_case("none") {
                    cfg.qmc.scramble_seed = None;
                } else {
                    let seed = value
                        .parse()
                        .map_err(|_| ConfigError::at(line, format!("bad scramble_seed {value:?}")))?;
                    cfg.qmc.scramble_seed = Some(seed);
                }
            }
            sec.take_parse(&mut cfg.qmc.generator, "generator", Generator::parse)?;
        }
        if let Some(sec) = raw.section("al") {
            sec.take_parse(&mut cfg.al.batch, "batch", |v| v.parse().ok())?;
            sec.take_parse(&mut cfg.al.k_max, "k_max", |v| v.parse().ok())?;
            sec.take_parse(&mut cfg.al.s_min, "s_min", parse_f64)?;
            sec.take_parse(
                &mut cfg.al.nominal_probe_skew,
                "nominal_probe_skew",
                parse_f64,
            )?;
            sec.take_parse(
                &mut cfg.al.fallback_doublings,
                "fallback_doublings",
                |v| v.parse().ok(),
            )?;
        }
        if let Some(sec) = raw.section("characterize") {
            sec.take_parse(&mut cfg.method, "method", Method::parse)?;
            let mut kind = match cfg.policy {
                IntervalPolicy::Fixed { .. } => PolicyKind::Fixed,
                IntervalPolicy::Effort => PolicyKind::Effort,
                IntervalPolicy::ActiveLearning => PolicyKind::ActiveLearning,
            };
            sec.take_parse(&mut kind, "policy", PolicyKind::parse)?;
            sec.take_parse(&mut cfg.fixed_l0, "fixed_l0", parse_f64)?;
            sec.take_parse(&mut cfg.fixed_s0, "fixed_s0", parse_f64)?;
            cfg.policy = match kind {
                PolicyKind::Fixed => IntervalPolicy::Fixed {
                    l0: cfg.fixed_l0,
                    s0: cfg.fixed_s0,
                },
                PolicyKind::Effort => IntervalPolicy::Effort,
                PolicyKind::ActiveLearning => IntervalPolicy::ActiveLearning,
            };
        }
        if let Some(sec) = raw.section("bench") {
            if let Some((line, value)) = sec.get("combos") {
                cfg.combos = parse_combos(line, value)?;
            }
        }
        if let Some(sec) = raw.section("output") {
            if let Some((_, value)) = sec.get("directory") {
                cfg.output.directory = value.to_string();
            }
            sec.take_parse(&mut cfg.output.traces, "traces", |v| v.parse().ok())?;
        }
        if let Some(sec) = raw.section("corners") {
            let mut listed = Vec::new();
            for (line, key, value) in &sec.entries {
                match key.as_str() {
                    "corner" => {
                        let fields: Vec<&str> = value.split(',').map(str::trim).collect();
                        if fields.len() != 3 {
                            return Err(ConfigError::at(*line, "corner needs process,voltage,temperature"));
                        }
                        let process = crate::oracle::Process::parse(fields[0]).ok_or_else(|| {
                            ConfigError::at(*line, format!("unknown process {:?}", fields[0]))
                        })?;
                        let voltage = parse_f64(fields[1])
                            .ok_or_else(|| ConfigError::at(*line, "bad voltage"))?;
                        let temperature = parse_f64(fields[2])
                            .ok_or_else(|| ConfigError::at(*line, "bad temperature"))?;
                        listed.push(PvtCorner::new(process, voltage, temperature));
                    }
                    "table" if value == "default" => listed.extend(corners::table_corners()),
                    "file" => {
                        let text = std::fs::read_to_string(value).map_err(|e| {
                            ConfigError::at(*line, format!("cannot read corner file {value:?}: {e}"))
                        })?;
                        listed.extend(corners::parse_corner_csv(&text)?);
                    }
                    other => {
                        return Err(ConfigError::at(*line, format!("unknown corners key {other:?}")))
                    }
                }
            }
            if listed.is_empty() {
                return Err(ConfigError::at(sec.line, "corner list is empty"));
            }
            cfg.corners = listed;
        }
        if let Some(sec) = raw.section("topology") {
            cfg.custom_paths = Some(parse_topology_paths(sec, cfg.topology)?);
        }
        if let Some(sec) = raw.section("effort") {
            sec.take_parse(&mut cfg.effort_params.g_tg, "g_tg", parse_f64)?;
            sec.take_parse(&mut cfg.effort_params.g_inv, "g_inv", parse_f64)?;
            sec.take_parse(&mut cfg.effort_params.p_tg, "p_tg", parse_f64)?;
            sec.take_parse(&mut cfg.effort_params.p_inv, "p_inv", parse_f64)?;
            sec.take_parse(&mut cfg.effort_params.h, "h", parse_f64)?;
            sec.take_parse(&mut cfg.effort_params.gamma, "gamma", parse_f64)?;
        }
        raw.reject_unknown_sections(&[
            "experiment",
            "search",
            "qmc",
            "al",
            "characterize",
            "bench",
            "output",
            "corners",
            "topology",
            "effort",
        ])?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.search
            .validate()
            .map_err(|e| ConfigError::at(0, e.to_string()))?;
        self.effort_params
            .validate()
            .map_err(|e| ConfigError::at(0, e))?;
        if self.corners.is_empty() {
            return Err(ConfigError::at(0, "corner list is empty"));
        }
        if self.combos.is_empty() {
            return Err(ConfigError::at(0, "bench combo list is empty"));
        }
        if !(self.fixed_l0.is_finite() && self.fixed_s0 > 0.0) {
            return Err(ConfigError::at(
                0,
                format!("bad fixed interval ({}, {})", self.fixed_l0, self.fixed_s0),
            ));
        }
        if self.al.batch == 0 {
            return Err(ConfigError::at(0, "al batch must be positive"));
        }
        if !(self.al.s_min > 0.0 && self.al.nominal_probe_skew > 0.0) {
            return Err(ConfigError::at(0, "al s_min and nominal_probe_skew must be positive"));
        }
        Ok(())
    }

    /// Total sample count: corners times local samples (a zero local count
    /// means one nominal sample per corner).
    pub fn sample_count(&self) -> usize {
        self.corners.len() * self.qmc.samples_per_corner.max(1)
    }
}

fn parse_f64(v: &str) -> Option<f64> {
    v.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_combos(line: usize, value: &str) -> Result<Vec<BenchCombo>, ConfigError> {
    let mut combos = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (m, p) = part
            .split_once(':')
            .ok_or_else(|| ConfigError::at(line, format!("combo {part:?} is not method:policy")))?;
        let method = Method::parse(m)
            .ok_or_else(|| ConfigError::at(line, format!("unknown method {m:?}")))?;
        let policy_kind = PolicyKind::parse(p)
            .ok_or_else(|| ConfigError::at(line, format!("unknown policy {p:?}")))?;
        combos.push(BenchCombo {
            method,
            policy_kind,
        });
    }
    if combos.is_empty() {
        return Err(ConfigError::at(line, "combo list is empty"));
    }
    Ok(combos)
}

fn parse_stage_list(line: usize, value: &str) -> Result<Vec<Stage>, ConfigError> {
    let mut stages = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (kind_str, weight) = match part.split_once(':') {
            Some((k, w)) => {
                let weight = parse_f64(w)
                    .filter(|w| *w > 0.0)
                    .ok_or_else(|| ConfigError::at(line, format!("bad stage weight {w:?}")))?;
                (k, weight)
            }
            None => (part, 1.0),
        };
        let kind = GateKind::parse(kind_str)
            .ok_or_else(|| ConfigError::at(line, format!("unknown gate kind {kind_str:?}")))?;
        stages.push(Stage::weighted(kind, weight));
    }
    if stages.is_empty() {
        return Err(ConfigError::at(line, "stage list is empty"));
    }
    Ok(stages)
}

fn parse_topology_paths(
    sec: &RawSection,
    topology: Topology,
) -> Result<TopologyPaths, ConfigError> {
    let mut paths = crate::effort::builtin_paths(topology);
    for (line, key, value) in &sec.entries {
        match key.as_str() {
            "nominal_stages" => paths.nominal = parse_stage_list(*line, value)?,
            "setup_stages" => paths.setup = parse_stage_list(*line, value)?,
            "hold_stages" => paths.hold = parse_stage_list(*line, value)?,
            "setup_fraction" => {
                paths.setup_fraction = parse_f64(value)
                    .filter(|f| (0.0..1.0).contains(f) && *f > 0.0)
                    .ok_or_else(|| ConfigError::at(*line, "setup_fraction must be in (0,1)"))?
            }
            "hold_fraction" => {
                paths.hold_fraction = parse_f64(value)
                    .filter(|f| (0.0..1.0).contains(f) && *f > 0.0)
                    .ok_or_else(|| ConfigError::at(*line, "hold_fraction must be in (0,1)"))?
            }
            other => return Err(ConfigError::at(*line, format!("unknown topology key {other:?}"))),
        }
    }
    Ok(paths)
}

struct RawSection {
    line: usize,
    entries: Vec<(usize, String, String)>,
}

impl RawSection {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries
            .iter()
            .rev()
            .find(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
    }

    fn take_parse<T>(
        &self,
        slot: &mut T,
        key: &str,
        parse: impl Fn(&str) -> Option<T>,
    ) -> Result<(), ConfigError> {
        if let Some((line, value)) = self.get(key) {
            *slot = parse(value)
                .ok_or_else(|| ConfigError::at(line, format!("bad value for {key}: {value:?}")))?;
        }
        Ok(())
    }
}

struct RawConfig {
    sections: BTreeMap<String, RawSection>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig, ConfigError> {
        let mut sections: BTreeMap<String, RawSection> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::at(line_no, "unterminated section header"))?
                    .trim()
                    .to_ascii_lowercase();
                if name.is_empty() {
                    return Err(ConfigError::at(line_no, "empty section name"));
                }
                sections.entry(name.clone()).or_insert(RawSection {
                    line: line_no,
                    entries: Vec::new(),
                });
                current = Some(name);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::at(line_no, format!("expected key = value, got {line:?}")));
            };
            let section = current
                .as_ref()
                .ok_or_else(|| ConfigError::at(line_no, "key before any [section]"))?;
            let key = key.trim().to_ascii_lowercase();
            if key.is_empty() {
                return Err(ConfigError::at(line_no, "empty key"));
            }
            sections
                .get_mut(section)
                .expect("section exists")
                .entries
                .push((line_no, key, value.trim().to_string()));
        }
        Ok(RawConfig { sections })
    }

    fn section(&self, name: &str) -> Option<&RawSection> {
        self.sections.get(name)
    }

    fn reject_unknown_sections(&self, known: &[&str]) -> Result<(), ConfigError> {
        for (name, sec) in &self.sections {
            if !known.contains(&name.as_str()) {
                return Err(ConfigError::at(sec.line, format!("unknown section [{name}]")));
            }
        }
        Ok(())
    }
}

/// The documented default configuration.
pub fn default_config_text() -> String {
    let d = ExperimentConfig::default();
    format!(
        r#"# seqchar experiment configuration
# Flat key = value entries grouped in [sections]; '#' starts a comment.

[experiment]
# randomization seed for the synthetic PVT map and sampling
seed = {seed}
# register topology: latch | dff
topology = {topology}
# constraint to characterize: setup | hold
constraint = {constraint}

[search]
# interval tolerance in oracle time units
tau = {tau}
# initial uncertainty of the biased interpolation
sigma0 = {sigma0}
# uncertainty growth per consecutive same-side iteration
beta = {beta}
max_iter = {max_iter}
# degradation threshold as a multiple of nominal delay
threshold_ratio = {ratio}
# iterations without a 25% shrink before a forced bisection step
safeguard_window = {window}

[qmc]
# local process-variation dimensions per sample
dimension = {dimension}
# local samples per corner; 0 characterizes one nominal sample per corner
samples_per_corner = {spc}
# none, or an integer seed for Owen scrambling
scramble_seed = none
# sobol | stratified
generator = {generator}

[al]
# batch size M
batch = {batch}
# refinement iterations after the initial batch
k_max = {k_max}
# floor for initial locations and steps
s_min = {s_min}
# passing-side skew magnitude used to measure nominal delay
nominal_probe_skew = {probe}
# doublings granted to a predicted interval before falling back
fallback_doublings = {fallback}

[characterize]
# bisection | regula_falsi | quadratic | brent | beira
method = {method}
# fixed | effort | al
policy = {policy}
# interval used by the fixed policy (defaults to 10x the circuit estimate)
fixed_l0 = {fixed_l0}
fixed_s0 = {fixed_s0}

[bench]
# method:policy pairs compared on identical samples
combos = bisection:fixed, bisection:al, beira:fixed, beira:al

[output]
directory = {outdir}
# per-sample trace CSVs to write, lowest sample ids first
traces = {traces}

# [corners]
# table = default        # the built-in 16-corner table
# corner = TT,0.8,25     # or explicit corners, one per line
# file = corners.csv     # or a CSV with header process,voltage,temperature

# [topology]             # override the built-in stage tables
# nominal_stages = tg,inv,inv,inv
# setup_stages = tg,inv,inv:0.5
# hold_stages = inv,inv:0.667
# setup_fraction = 0.7
# hold_fraction = 0.33

# [effort]               # logical-effort gate parameters
# g_tg = 2
# g_inv = 1
# p_tg = 2
# p_inv = 1
# h = 1
# gamma = 1
"#,
        seed = d.seed,
        topology = d.topology.as_str(),
        constraint = d.constraint.as_str(),
        tau = d.search.tau,
        sigma0 = d.search.sigma0,
        beta = d.search.beta,
        max_iter = d.search.max_iter,
        ratio = d.search.threshold_ratio,
        window = d.search.safeguard_window,
        dimension = d.qmc.dimension,
        spc = d.qmc.samples_per_corner,
        generator = d.qmc.generator.as_str(),
        batch = d.al.batch,
        k_max = d.al.k_max,
        s_min = d.al.s_min,
        probe = d.al.nominal_probe_skew,
        fallback = d.al.fallback_doublings,
        method = d.method.as_str(),
        policy = d.policy.label(),
        fixed_l0 = d.fixed_l0,
        fixed_s0 = d.fixed_s0,
        outdir = d.output.directory,
        traces = d.output.traces,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_text_parses_back_to_the_default() {
        let parsed = ExperimentConfig::parse(&default_config_text()).unwrap();
        assert_eq!(parsed, ExperimentConfig::default());
    }

    #[test]
    fn minimal_config_overrides_fields() {
        let cfg = ExperimentConfig::parse(
            "[experiment]\nseed = 9\ntopology = latch\nconstraint = hold\n\
             [search]\ntau = 0.02\n[al]\nbatch = 7\n\
             [corners]\ncorner = SS, 0.72, -40\ncorner = FF, 0.99, 125\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.topology, Topology::Latch);
        assert_eq!(cfg.constraint, Constraint::Hold);
        assert_eq!(cfg.search.tau, 0.02);
        assert_eq!(cfg.al.batch, 7);
        assert_eq!(cfg.corners.len(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ExperimentConfig::parse("[search]\ntau = spaghetti\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = ExperimentConfig::parse("key_without_section = 1\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = ExperimentConfig::parse("[bench]\ncombos = beira-fixed\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = ExperimentConfig::parse("[mystery]\nx = 1\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn empty_corner_section_is_rejected() {
        let err = ExperimentConfig::parse("[corners]\n").unwrap_err();
        assert!(err.to_string().contains("empty"));
    }

    #[test]
    fn topology_override_parses_stage_weights() {
        let cfg = ExperimentConfig::parse(
            "[topology]\nsetup_stages = tg, inv, inv:0.5\nsetup_fraction = 0.6\n",
        )
        .unwrap();
        let paths = cfg.custom_paths.unwrap();
        assert_eq!(paths.setup.len(), 3);
        assert_eq!(paths.setup[2].weight, 0.5);
        assert_eq!(paths.setup_fraction, 0.6);
    }
}
