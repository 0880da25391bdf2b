//! Deterministic PVT-sample → analytic-model map for multi-corner benchmarks.
//!
//! The map is a smooth seeded function of (process code, voltage,
//! temperature, local variations): log-space affine terms plus mild
//! quadratic cross-terms. Coefficient signs are fixed (slow process, low
//! voltage, and high temperature all slow the cell); the seed only jitters
//! magnitudes and redraws the local weight vectors. Scales are calibrated so
//! corner-to-corner constraint spread is roughly 3x and local-variation
//! spread roughly +/-20%, with the nominal corner and zero local variations
//! reproducing the topology base parameters exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AnalyticCellModel, PvtSample, Topology};
use crate::effort::{self, Constraint};

/// Oracle time units per logical-effort delay unit. Keeps search depths at
/// production-like ratios: with the default tau of 0.01 the default DFF
/// constraint sits around 35 time units, so a conservative fixed interval
/// costs a bisection chain in the mid-teens, as commercial flows see.
pub const TIME_UNITS_PER_EFFORT_UNIT: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
struct BaseParams {
    d0: f64,
    x_c: f64,
    lambda: f64,
    alpha: f64,
}

/// alpha = 0.1 * e^3 puts the 110% crossing exactly 3 lambdas past the
/// failure boundary, so base roots match the effort fractions by design.
fn base_params(topology: Topology, constraint: Constraint) -> BaseParams {
    let est = effort::estimate_topology(topology, &effort::EffortParams::default());
    let d0 = est.nominal_delay_units * TIME_UNITS_PER_EFFORT_UNIT;
    let lambda = TIME_UNITS_PER_EFFORT_UNIT
        * match topology {
            Topology::Latch => 2.0,
            Topology::Dff => 1.0,
        };
    let alpha = 0.1 * 3f64.exp();
    let root = effort::interval_fraction(topology, constraint) * d0;
    let x_c = match constraint {
        Constraint::Setup => root - 3.0 * lambda,
        Constraint::Hold => root + 3.0 * lambda,
    };
    BaseParams {
        d0,
        x_c,
        lambda,
        alpha,
    }
}

/// Seeded map from samples to cell models, fixed per (topology, constraint,
/// seed, dimension).
#[derive(Debug, Clone)]
pub struct PvtModelMap {
    constraint: Constraint,
    base: BaseParams,
    a_process: f64,
    a_voltage: f64,
    a_temperature: f64,
    c_pv: f64,
    c_vt: f64,
    w_root: Vec<f64>,
    w_d0: Vec<f64>,
    w_alpha: Vec<f64>,
    q_cross: f64,
}

impl PvtModelMap {
    pub fn new(topology: Topology, constraint: Constraint, seed: u64, dimension: usize) -> Self {
        let tag = match (topology, constraint) {
            (Topology::Latch, Constraint::Setup) => 0x4c53,
            (Topology::Latch, Constraint::Hold) => 0x4c48,
            (Topology::Dff, Constraint::Setup) => 0x4453,
            (Topology::Dff, Constraint::Hold) => 0x4448,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ tag);
        let a_process = -(0.18 + rng.gen_range(-0.02..0.02));
        let a_voltage = -(0.22 + rng.gen_range(-0.02..0.02));
        let a_temperature = 0.08 + rng.gen_range(-0.01..0.01);
        let c_pv = 0.02 + rng.gen_range(-0.005..0.005);
        let c_vt = 0.015 + rng.gen_range(-0.005..0.005);
        // fast decay: a handful of critical devices dominate the local
        // sensitivity, as in real cells
        let w_root = weight_vector(&mut rng, dimension, 0.35, 0.065);
        let w_d0 = weight_vector(&mut rng, dimension, 0.35, 0.02);
        let w_alpha = weight_vector(&mut rng, dimension, 0.35, 0.05);
        let q_cross = 0.008 + rng.gen_range(-0.002..0.002);
        PvtModelMap {
            constraint,
            base: base_params(topology, constraint),
            a_process,
            a_voltage,
            a_temperature,
            c_pv,
            c_vt,
            w_root,
            w_d0,
            w_alpha,
            q_cross,
        }
    }

    pub fn dimension(&self) -> usize {
        self.w_root.len()
    }

    /// Log-space corner factor; exactly 1 at TT/0.8V/25C.
    fn corner_log_factor(&self, sample: &PvtSample) -> f64 {
        let p = sample.corner.process.code();
        let vc = (sample.corner.voltage - 0.8) / 0.1;
        let tc = (sample.corner.temperature - 25.0) / 100.0;
        self.a_process * p
            + self.a_voltage * vc
            + self.a_temperature * tc
            + self.c_pv * p * vc
            + self.c_vt * vc * tc
    }

    fn local_log_factor(&self, weights: &[f64], sample: &PvtSample) -> f64 {
        debug_assert_eq!(sample.local_vars.len(), weights.len());
        let mut acc = 0.0;
        for (w, v) in weights.iter().zip(&sample.local_vars) {
            acc += w * v;
        }
        acc
    }

    pub fn model(&self, sample: &PvtSample) -> AnalyticCellModel {
        assert_eq!(
            sample.local_vars.len(),
            self.w_root.len(),
            "sample dimension does not match the map"
        );
        let corner = self.corner_log_factor(sample).exp();
        let mut local_log = self.local_log_factor(&self.w_root, sample);
        if sample.local_vars.len() >= 2 {
            local_log += self.q_cross * sample.local_vars[0] * sample.local_vars[1];
        }
        let local = local_log.exp();

        let d0 = self.base.d0
            * corner.powf(0.9)
            * self.local_log_factor(&self.w_d0, sample).exp();
        let x_c = self.base.x_c * corner * local;
        let lambda = self.base.lambda * corner * local;
        let alpha = self.base.alpha * self.local_log_factor(&self.w_alpha, sample).exp();
        AnalyticCellModel::new(d0, x_c, lambda, alpha)
            .with_fail_below(self.constraint == Constraint::Setup)
    }
}

fn weight_vector(rng: &mut ChaCha8Rng, dimension: usize, decay: f64, norm: f64) -> Vec<f64> {
    if dimension == 0 {
        return Vec::new();
    }
    let mut w: Vec<f64> = (0..dimension)
        .map(|i| {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * rng.gen_range(0.5..1.0) * decay.powi(i as i32)
        })
        .collect();
    let len = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut w {
        *x *= norm / len;
    }
    w
}

/// Convenience wrapper building a fresh setup-oriented map per call.
pub fn model_from_pvt(sample: &PvtSample, topology: Topology, seed: u64) -> AnalyticCellModel {
    PvtModelMap::new(topology, Constraint::Setup, seed, sample.local_vars.len()).model(sample)
}
