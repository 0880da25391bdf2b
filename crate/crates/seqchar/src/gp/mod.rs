//! Gaussian-process regression over PVT features.
//!
//! Squared-exponential kernel with a lengthscale per feature, so the mostly
//! irrelevant local-variation dimensions get pruned automatically while the
//! corner features stay sharp. Hyperparameters maximize the log marginal
//! likelihood by multi-start bounded gradient ascent; the Gram factorization
//! is cached for prediction. Predictions return a mean and a standard
//! deviation, which the active-learning loop spends as the initial test
//! location and step.

mod io;

pub use io::{dump_model, load_model};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use thiserror::Error;

use crate::oracle::PvtSample;

pub const JITTER_FLOOR: f64 = 1e-10;
pub const JITTER_CEIL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("kernel matrix is singular even with jitter {JITTER_CEIL}")]
    SingularKernel,
    #[error("feature dimension mismatch: model has {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid training set: {0}")]
    InvalidTraining(String),
    #[error("cannot parse model dump: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpHyperparams {
    /// Per-feature lengthscales, in the model's (standardized) feature space.
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
}

impl GpHyperparams {
    pub fn validate(&self, dims: usize) -> Result<(), GpError> {
        if self.lengthscales.len() != dims {
            return Err(GpError::DimensionMismatch {
                expected: dims,
                got: self.lengthscales.len(),
            });
        }
        let ok = self.lengthscales.iter().all(|l| *l > 0.0 && l.is_finite())
            && self.signal_variance > 0.0
            && self.signal_variance.is_finite()
            && self.noise_variance >= 0.0
            && self.noise_variance.is_finite();
        if ok {
            Ok(())
        } else {
            Err(GpError::InvalidTraining("bad hyperparameters".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mu: f64,
    pub v: f64,
}

/// Fitted model: standardization, hyperparameters, and the cached Cholesky
/// factorization of the Gram matrix. Immutable once fitted.
pub struct GpModel {
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    y_mean: f64,
    train_x: DMatrix<f64>,
    train_y: DVector<f64>,
    hyper: GpHyperparams,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
    jitter: f64,
}

/// Feature encoding for PVT samples: process code in {-1, 0, +1}, voltage in
/// volts, temperature in units of 100 C, local variations raw.
pub fn encode_features(sample: &PvtSample) -> Vec<f64> {
    let mut out = Vec::with_capacity(sample.feature_dimension());
    out.push(sample.corner.process.code());
    out.push(sample.corner.voltage);
    out.push(sample.corner.temperature / 100.0);
    out.extend_from_slice(&sample.local_vars);
    out
}

/// Fit with hyperparameter optimization (three deterministic starts of
/// bounded gradient ascent on the log marginal likelihood). Features are
/// standardized per dimension; constant dimensions pass through unscaled.
pub fn fit(inputs: &[Vec<f64>], targets: &[f64]) -> Result<GpModel, GpError> {
    let (x, y, dims) = check_training(inputs, targets)?;
    let (x_mean, x_scale) = standardization(&x, dims);
    let xs = apply_standardization(&x, &x_mean, &x_scale);
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc = DVector::from_iterator(y.len(), y.iter().map(|t| t - y_mean));

    let var_y = (yc.dot(&yc) / yc.len() as f64).max(1e-8);
    let base_scale = (dims as f64).sqrt();
    let priors = Priors::for_data(dims, var_y);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mult in [0.5, 2.0, 8.0] {
        let init = pack(
            &vec![mult * base_scale; dims],
            var_y,
            (0.05 * var_y).max(1e-8),
        );
        if let Some((lml, theta)) = optimize(&xs, &yc, init, &priors) {
            if best.as_ref().is_none_or(|(b, _)| lml > *b) {
                best = Some((lml, theta));
            }
        }
    }
    let (_, theta) = best.ok_or(GpError::SingularKernel)?;
    let hyper = unpack(&theta, dims);
    build_model(xs, yc, x_mean, x_scale, y_mean, hyper)
}

/// Fit with fixed hyperparameters and no standardization (features and
/// lengthscales in raw space). Used for controlled posteriors in tests and
/// by the model loader.
pub fn fit_with_hyperparams(
    inputs: &[Vec<f64>],
    targets: &[f64],
    hyper: GpHyperparams,
) -> Result<GpModel, GpError> {
    let (x, y, dims) = check_training(inputs, targets)?;
    hyper.validate(dims)?;
    let xs = DMatrix::from_fn(x.len(), dims, |i, j| x[i][j]);
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc = DVector::from_iterator(y.len(), y.iter().map(|t| t - y_mean));
    build_model(xs, yc, vec![0.0; dims], vec![1.0; dims], y_mean, hyper)
}

impl GpModel {
    pub fn dims(&self) -> usize {
        self.train_x.ncols()
    }

    pub fn len(&self) -> usize {
        self.train_x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hyperparams(&self) -> &GpHyperparams {
        &self.hyper
    }

    pub fn predict(&self, inputs: &[Vec<f64>]) -> Result<Vec<Prediction>, GpError> {
        inputs
            .iter()
            .map(|row| self.predict_one(row))
            .collect()
    }

    pub fn predict_one(&self, input: &[f64]) -> Result<Prediction, GpError> {
        let dims = self.dims();
        if input.len() != dims {
            return Err(GpError::DimensionMismatch {
                expected: dims,
                got: input.len(),
            });
        }
        let z: Vec<f64> = input
            .iter()
            .enumerate()
            .map(|(j, v)| (v - self.x_mean[j]) / self.x_scale[j])
            .collect();
        let n = self.len();
        let kstar = DVector::from_fn(n, |i, _| {
            let mut dist = 0.0;
            for j in 0..dims {
                let d = (self.train_x[(i, j)] - z[j]) / self.hyper.lengthscales[j];
                dist += d * d;
            }
            self.hyper.signal_variance * (-0.5 * dist).exp()
        });
        let mu = self.y_mean + kstar.dot(&self.alpha);
        // v^2 = k** + noise - ||L^-1 k*||^2, with k** the prior signal variance
        let q = self.chol.l_dirty().solve_lower_triangular(&kstar).ok_or(
            GpError::InvalidTraining("triangular solve failed".into()),
        )?;
        let prior = self.hyper.signal_variance + self.hyper.noise_variance + self.jitter;
        let var = (prior - q.dot(&q)).max(0.0);
        Ok(Prediction {
            mu,
            v: var.sqrt(),
        })
    }

    /// Log marginal likelihood of the training data under the stored
    /// hyperparameters.
    pub fn log_marginal_likelihood(&self) -> f64 {
        lml_from_parts(&self.chol, &self.alpha, &self.train_y)
    }

    /// Largest relative reconstruction error of the factorization,
    /// `|L L^T - K|_F / |K|_F`.
    pub fn factorization_error(&self) -> f64 {
        let k = gram(&self.train_x, &self.hyper, self.jitter);
        let l = self.chol.l();
        let rebuilt = &l * l.transpose();
        let diff = &rebuilt - &k;
        diff.norm() / k.norm()
    }
}

fn check_training<'a>(
    inputs: &'a [Vec<f64>],
    targets: &'a [f64],
) -> Result<(&'a [Vec<f64>], &'a [f64], usize), GpError> {
    if inputs.len() != targets.len() {
        return Err(GpError::InvalidTraining(format!(
            "{} inputs vs {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    if inputs.len() < 2 {
        return Err(GpError::InvalidTraining(
            "need at least two training rows".into(),
        ));
    }
    let dims = inputs[0].len();
    if dims == 0 {
        return Err(GpError::InvalidTraining("zero-dimensional features".into()));
    }
    for row in inputs {
        if row.len() != dims {
            return Err(GpError::DimensionMismatch {
                expected: dims,
                got: row.len(),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(GpError::InvalidTraining("non-finite feature".into()));
        }
    }
    if targets.iter().any(|v| !v.is_finite()) {
        return Err(GpError::InvalidTraining("non-finite target".into()));
    }
    Ok((inputs, targets, dims))
}

fn standardization(x: &[Vec<f64>], dims: usize) -> (Vec<f64>, Vec<f64>) {
    let n = x.len() as f64;
    let mut mean = vec![0.0; dims];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v / n;
        }
    }
    let mut scale = vec![0.0; dims];
    for row in x {
        for j in 0..dims {
            let d = row[j] - mean[j];
            scale[j] += d * d / n;
        }
    }
    for s in &mut scale {
        *s = s.sqrt();
        if *s < 1e-12 {
            *s = 1.0; // constant dimension passes through unscaled
        }
    }
    (mean, scale)
}

fn apply_standardization(x: &[Vec<f64>], mean: &[f64], scale: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(x.len(), mean.len(), |i, j| (x[i][j] - mean[j]) / scale[j])
}

fn gram(x: &DMatrix<f64>, hyper: &GpHyperparams, jitter: f64) -> DMatrix<f64> {
    let n = x.nrows();
    let dims = x.ncols();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut dist = 0.0;
            for d in 0..dims {
                let delta = (x[(i, d)] - x[(j, d)]) / hyper.lengthscales[d];
                dist += delta * delta;
            }
            let v = hyper.signal_variance * (-0.5 * dist).exp();
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    for i in 0..n {
        k[(i, i)] += hyper.noise_variance + jitter;
    }
    k
}

/// Cholesky with jitter escalation from the floor to `JITTER_CEIL`.
fn factorize(
    x: &DMatrix<f64>,
    hyper: &GpHyperparams,
) -> Option<(Cholesky<f64, Dyn>, f64)> {
    let mut jitter = JITTER_FLOOR;
    while jitter <= JITTER_CEIL {
        if let Some(chol) = Cholesky::new(gram(x, hyper, jitter)) {
            return Some((chol, jitter));
        }
        jitter *= 10.0;
    }
    None
}

fn lml_from_parts(chol: &Cholesky<f64, Dyn>, alpha: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let n = y.len() as f64;
    let log_det: f64 = (0..y.len())
        .map(|i| chol.l_dirty()[(i, i)].ln())
        .sum::<f64>();
    -0.5 * y.dot(alpha) - log_det - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
}

fn build_model(
    xs: DMatrix<f64>,
    yc: DVector<f64>,
    x_mean: Vec<f64>,
    x_scale: Vec<f64>,
    y_mean: f64,
    hyper: GpHyperparams,
) -> Result<GpModel, GpError> {
    let (chol, jitter) = factorize(&xs, &hyper).ok_or(GpError::SingularKernel)?;
    let alpha = chol.solve(&yc);
    Ok(GpModel {
        x_mean,
        x_scale,
        y_mean,
        train_x: xs,
        train_y: yc,
        hyper,
        chol,
        alpha,
        jitter,
    })
}

// ---- hyperparameter optimization -------------------------------------------------

const LOG_LENGTH_BOUNDS: (f64, f64) = (-4.6051701859880914, 11.512925464970229); // 1e-2 .. 1e5
const LOG_SIGNAL_BOUNDS: (f64, f64) = (-23.025850929940457, 13.815510557964274); // 1e-10 .. 1e6
const LOG_NOISE_BOUNDS: (f64, f64) = (-23.025850929940457, 9.210340371976184); // 1e-10 .. 1e4

fn pack(lengthscales: &[f64], sf2: f64, sn2: f64) -> Vec<f64> {
    let mut theta: Vec<f64> = lengthscales.iter().map(|l| l.ln()).collect();
    theta.push(sf2.ln());
    theta.push(sn2.ln());
    theta
}

fn unpack(theta: &[f64], dims: usize) -> GpHyperparams {
    GpHyperparams {
        lengthscales: theta[..dims].iter().map(|t| t.exp()).collect(),
        signal_variance: theta[dims].exp(),
        noise_variance: theta[dims + 1].exp(),
    }
}

fn clamp_theta(theta: &mut [f64], dims: usize) {
    for t in theta[..dims].iter_mut() {
        *t = t.clamp(LOG_LENGTH_BOUNDS.0, LOG_LENGTH_BOUNDS.1);
    }
    theta[dims] = theta[dims].clamp(LOG_SIGNAL_BOUNDS.0, LOG_SIGNAL_BOUNDS.1);
    theta[dims + 1] = theta[dims + 1].clamp(LOG_NOISE_BOUNDS.0, LOG_NOISE_BOUNDS.1);
}

/// Weak log-normal hyperpriors. Pure maximum likelihood overfits badly when
/// the training set is small relative to the feature count (per-dimension
/// lengthscales can interpolate anything with zero noise, collapsing the
/// predictive variance); these wide priors pin that down while washing out
/// against the likelihood once a few dozen points arrive.
struct Priors {
    log_length_mean: f64,
    log_length_sd: f64,
    log_signal_mean: f64,
    log_signal_sd: f64,
    log_noise_mean: f64,
    log_noise_sd: f64,
}

impl Priors {
    fn for_data(dims: usize, var_y: f64) -> Priors {
        Priors {
            log_length_mean: (dims as f64).sqrt().ln(),
            log_length_sd: 2.3, // one decade
            log_signal_mean: var_y.ln(),
            log_signal_sd: 4.6,
            log_noise_mean: (0.05 * var_y).ln(),
            log_noise_sd: 2.3,
        }
    }

    /// Log-density (up to a constant) and its gradient contribution.
    fn apply(&self, theta: &[f64], dims: usize, grad: &mut [f64]) -> f64 {
        let mut value = 0.0;
        let mut one = |t: f64, mean: f64, sd: f64, g: &mut f64| {
            let z = (t - mean) / sd;
            value += -0.5 * z * z;
            *g += -z / sd;
        };
        for d in 0..dims {
            one(theta[d], self.log_length_mean, self.log_length_sd, &mut grad[d]);
        }
        one(
            theta[dims],
            self.log_signal_mean,
            self.log_signal_sd,
            &mut grad[dims],
        );
        one(
            theta[dims + 1],
            self.log_noise_mean,
            self.log_noise_sd,
            &mut grad[dims + 1],
        );
        value
    }
}

/// Posterior (LML plus weak priors) and its gradient in log-parameter space.
fn lml_and_grad(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    theta: &[f64],
    priors: &Priors,
) -> Option<(f64, Vec<f64>)> {
    let dims = x.ncols();
    let n = x.nrows();
    let hyper = unpack(theta, dims);
    let (chol, _) = factorize(x, &hyper)?;
    let alpha = chol.solve(y);
    let mut lml = lml_from_parts(&chol, &alpha, y);

    // W = alpha alpha^T - K^-1; dLML/dtheta = 0.5 tr(W dK/dtheta).
    // Row copies keep the inner loops on contiguous memory, and symmetry
    // halves the pair count.
    let kinv = chol.inverse();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..dims).map(|d| x[(i, d)] / hyper.lengthscales[d]).collect())
        .collect();
    let mut grad = vec![0.0; dims + 2];
    let sf2 = hyper.signal_variance;
    let sn2 = hyper.noise_variance;
    let mut sq = vec![0.0; dims];
    for i in 0..n {
        for j in 0..i {
            let w = alpha[i] * alpha[j] - kinv[(i, j)];
            let (ri, rj) = (&rows[i], &rows[j]);
            let mut dist = 0.0;
            for d in 0..dims {
                let delta = ri[d] - rj[d];
                let dd = delta * delta;
                sq[d] = dd;
                dist += dd;
            }
            let wc = w * sf2 * (-0.5 * dist).exp();
            grad[dims] += wc;
            for d in 0..dims {
                grad[d] += wc * sq[d];
            }
        }
        // diagonal: dist = 0, c = sf2
        let w = alpha[i] * alpha[i] - kinv[(i, i)];
        grad[dims] += 0.5 * w * sf2;
        grad[dims + 1] += 0.5 * w * sn2;
    }
    lml += priors.apply(theta, dims, &mut grad);
    Some((lml, grad))
}

/// Bounded Adam ascent; returns the best (objective, theta) seen.
fn optimize(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    mut theta: Vec<f64>,
    priors: &Priors,
) -> Option<(f64, Vec<f64>)> {
    const MAX_ITERS: usize = 120;
    const LR: f64 = 0.1;
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    let dims = x.ncols();
    clamp_theta(&mut theta, dims);

    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut stale = 0usize;
    for it in 1..=MAX_ITERS {
        let Some((lml, grad)) = lml_and_grad(x, y, &theta, priors) else {
            break; // singular at this theta: keep the best seen so far
        };
        match &mut best {
            Some((b, bt)) if lml > *b + 1e-9 * (1.0 + b.abs()) => {
                *b = lml;
                bt.clone_from(&theta);
                stale = 0;
            }
            Some(_) => {
                stale += 1;
                if stale > 12 {
                    break;
                }
            }
            None => best = Some((lml, theta.clone())),
        }
        let gnorm = grad.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        if gnorm < 1e-5 {
            break;
        }
        for k in 0..theta.len() {
            m[k] = B1 * m[k] + (1.0 - B1) * grad[k];
            v[k] = B2 * v[k] + (1.0 - B2) * grad[k] * grad[k];
            let mh = m[k] / (1.0 - B1.powi(it as i32));
            let vh = v[k] / (1.0 - B2.powi(it as i32));
            theta[k] += LR * mh / (vh.sqrt() + 1e-8); // ascent
        }
        clamp_theta(&mut theta, dims);
    }
    best
}
