//! Low-discrepancy generation of local process-variation vectors.
//!
//! Vectors are produced in the unit cube (Sobol, optionally Owen-scrambled,
//! or seeded stratified sampling for dimensions beyond the Sobol table) and
//! mapped to standard-normal space through the inverse normal CDF. The unit
//! values are clamped to [2^-32, 1 - 2^-32] before the mapping so the
//! all-zero first Sobol point stays finite (about -6.2 sigma).

mod sobol;

pub use sobol::MAX_DIMENSION as MAX_SOBOL_DIMENSION;

use crate::stats::norm_quantile;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Sobol,
    Stratified,
}

impl Generator {
    pub fn as_str(self) -> &'static str {
        match self {
            Generator::Sobol => "sobol",
            Generator::Stratified => "stratified",
        }
    }

    pub fn parse(s: &str) -> Option<Generator> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sobol" => Some(Generator::Sobol),
            "stratified" => Some(Generator::Stratified),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmcConfig {
    pub dimension: usize,
    pub count: usize,
    /// `None` leaves the Sobol points unscrambled; `Some(seed)` applies
    /// hash-based Owen scrambling (and seeds the stratified generator).
    pub scramble_seed: Option<u64>,
    pub generator: Generator,
}

impl QmcConfig {
    pub fn sobol(dimension: usize, count: usize) -> Self {
        QmcConfig {
            dimension,
            count,
            scramble_seed: None,
            generator: Generator::Sobol,
        }
    }

    pub fn validate(&self) -> Result<(), SamplingError> {
        if self.dimension == 0 || self.count == 0 {
            return Err(SamplingError::InvalidConfig(format!(
                "dimension and count must be positive, got {}x{}",
                self.dimension, self.count
            )));
        }
        if self.generator == Generator::Sobol && self.dimension > MAX_SOBOL_DIMENSION {
            return Err(SamplingError::UnsupportedDimension {
                requested: self.dimension,
                supported: MAX_SOBOL_DIMENSION,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("sobol direction numbers cover {supported} dimensions, requested {requested} (use the stratified generator)")]
    UnsupportedDimension { requested: usize, supported: usize },
    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),
}

/// Points in the unit cube, `count` rows by `dimension` columns.
pub fn generate_uniform(config: &QmcConfig) -> Result<Vec<Vec<f64>>, SamplingError> {
    config.validate()?;
    match config.generator {
        Generator::Sobol => Ok(sobol_uniform(config)),
        Generator::Stratified => Ok(stratified_uniform(config)),
    }
}

/// Points mapped to standard-normal space.
///
/// For the unscrambled Sobol generator the sequence starts at index 1: the
/// index-0 point is the cube origin, whose image under the quantile map
/// would be an absurd all-dimensions-negative-tail sample. Uniform values
/// are clamped to [2^-32, 1 - 2^-32] before the mapping either way.
pub fn generate(config: &QmcConfig) -> Result<Vec<Vec<f64>>, SamplingError> {
    config.validate()?;
    let mut rows = match config.generator {
        Generator::Sobol => {
            let mut with_origin = sobol_uniform(&QmcConfig {
                count: config.count + 1,
                ..config.clone()
            });
            with_origin.remove(0);
            with_origin
        }
        Generator::Stratified => stratified_uniform(config),
    };
    let floor = 2f64.powi(-32);
    let ceil = 1.0 - floor;
    for row in &mut rows {
        for u in row.iter_mut() {
            *u = norm_quantile(u.clamp(floor, ceil));
        }
    }
    Ok(rows)
}

fn sobol_uniform(config: &QmcConfig) -> Vec<Vec<f64>> {
    let scale = 2f64.powi(-32);
    sobol::sobol_integers(config.dimension, config.count)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(d, raw)| {
                    let bits = match config.scramble_seed {
                        Some(seed) => sobol::owen_scramble(
                            raw,
                            sobol::splitmix64(seed).wrapping_add(d as u64),
                        ),
                        None => raw,
                    };
                    bits as f64 * scale
                })
                .collect()
        })
        .collect()
}

/// Latin-hypercube style: each dimension visits every 1/count stratum once,
/// in a seeded random order with a seeded offset.
fn stratified_uniform(config: &QmcConfig) -> Vec<Vec<f64>> {
    let n = config.count;
    let mut columns = Vec::with_capacity(config.dimension);
    for d in 0..config.dimension {
        let seed = sobol::splitmix64(config.scramble_seed.unwrap_or(0) ^ (d as u64) << 32 | 0x57);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let column: Vec<f64> = order
            .into_iter()
            .map(|stratum| (stratum as f64 + rng.gen_range(0.0..1.0)) / n as f64)
            .collect();
        columns.push(column);
    }
    (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::norm_cdf;

    #[test]
    fn canonical_sobol_prefix_in_one_dimension() {
        let cfg = QmcConfig::sobol(1, 4);
        let rows = generate_uniform(&cfg).unwrap();
        let flat: Vec<f64> = rows.into_iter().map(|r| r[0]).collect();
        assert_eq!(flat, vec![0.0, 0.5, 0.75, 0.25]);
    }

    #[test]
    fn per_dimension_means_stay_near_half() {
        for generator in [Generator::Sobol, Generator::Stratified] {
            let cfg = QmcConfig {
                dimension: 12,
                count: 256,
                scramble_seed: Some(9),
                generator,
            };
            let rows = generate_uniform(&cfg).unwrap();
            let bound = 3.0 / (cfg.count as f64).sqrt();
            for d in 0..cfg.dimension {
                let mean = rows.iter().map(|r| r[d]).sum::<f64>() / cfg.count as f64;
                assert!(
                    (mean - 0.5).abs() < bound,
                    "{generator:?} dim {d}: mean {mean}"
                );
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_config() {
        let cfg = QmcConfig {
            dimension: 20,
            count: 64,
            scramble_seed: Some(7),
            generator: Generator::Sobol,
        };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        let strat = QmcConfig {
            generator: Generator::Stratified,
            ..cfg
        };
        let c = generate(&strat).unwrap();
        let d = generate(&strat).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn dimension_limits() {
        assert!(generate_uniform(&QmcConfig::sobol(MAX_SOBOL_DIMENSION, 4)).is_ok());
        let err = generate_uniform(&QmcConfig::sobol(MAX_SOBOL_DIMENSION + 1, 4)).unwrap_err();
        assert!(matches!(err, SamplingError::UnsupportedDimension { .. }));
        let strat = QmcConfig {
            dimension: MAX_SOBOL_DIMENSION + 40,
            count: 8,
            scramble_seed: None,
            generator: Generator::Stratified,
        };
        assert!(generate_uniform(&strat).is_ok());
        assert!(generate_uniform(&QmcConfig::sobol(0, 4)).is_err());
        assert!(generate_uniform(&QmcConfig::sobol(4, 0)).is_err());
    }

    #[test]
    fn sobol_max_gap_beats_pseudo_random() {
        // star-discrepancy proxy: the largest 1-D gap between sorted
        // neighbors, worst over dimensions (matching counts and dims)
        use rand::Rng;
        use rand::SeedableRng;
        let dim = 16;
        let count = 512;
        let cfg = QmcConfig::sobol(dim, count);
        let sobol_rows = generate_uniform(&cfg).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        let random_rows: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let max_gap = |rows: &[Vec<f64>]| -> f64 {
            let mut worst: f64 = 0.0;
            for d in 0..dim {
                let mut col: Vec<f64> = rows.iter().map(|r| r[d]).collect();
                col.sort_by(f64::total_cmp);
                let mut gap = col[0];
                for w in col.windows(2) {
                    gap = gap.max(w[1] - w[0]);
                }
                gap = gap.max(1.0 - col[count - 1]);
                worst = worst.max(gap);
            }
            worst
        };
        assert!(max_gap(&sobol_rows) < max_gap(&random_rows));
    }

    #[test]
    fn normal_mapping_is_the_quantile_of_the_uniform_points() {
        // normal-space sobol rows skip the index-0 origin point
        let uniform = generate_uniform(&QmcConfig::sobol(3, 33)).unwrap();
        let normal = generate(&QmcConfig::sobol(3, 32)).unwrap();
        assert_eq!(normal.len(), 32);
        for (u_row, z_row) in uniform.iter().skip(1).zip(&normal) {
            for (u, z) in u_row.iter().zip(z_row) {
                assert!(z.is_finite());
                assert!((norm_cdf(*z) - u).abs() < 1e-9);
            }
        }
        // stratified rows have no origin to skip
        let strat_cfg = QmcConfig {
            dimension: 3,
            count: 16,
            scramble_seed: Some(3),
            generator: Generator::Stratified,
        };
        let su = generate_uniform(&strat_cfg).unwrap();
        let sz = generate(&strat_cfg).unwrap();
        for (u_row, z_row) in su.iter().zip(&sz) {
            for (u, z) in u_row.iter().zip(z_row) {
                assert!((norm_cdf(*z) - u).abs() < 1e-9);
            }
        }
    }
}
