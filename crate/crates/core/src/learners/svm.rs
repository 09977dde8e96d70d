use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_dim, check_permutation, FeatureMatrix};
use crate::corpus::Label;
use crate::error::{Error, Result};

/// Per-class scaling of the box constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassWeight {
    /// Same `C` for every example.
    Uniform,
    /// `C` scaled by `n / (2 n_class)` so both classes carry equal total weight.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmConfig {
    pub c: f64,
    /// KKT violation tolerance.
    pub tolerance: f64,
    /// Consecutive passes without an update before stopping.
    pub max_passes: usize,
    /// Hard cap on passes over the data.
    pub max_iterations: usize,
    /// Rescale every feature to [0, 1] using the training range.
    pub normalize: bool,
    pub class_weight: ClassWeight,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-3,
            max_passes: 10,
            max_iterations: 500,
            normalize: true,
            class_weight: ClassWeight::Balanced,
            seed: 1,
        }
    }
}

impl SvmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if self.max_passes == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max_passes and max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Linear decision function `w·x + b` in the original feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub c: f64,
    pub tolerance: f64,
}

impl LinearSvmModel {
    pub fn n_features(&self) -> usize {
        self.weights.len()
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.weights.len(), x.len())?;
        Ok(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }

    /// Positive iff the decision value is strictly positive.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(if self.decision_value(x)? > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        })
    }

    /// Model for inputs whose column `i` holds original feature `perm[i]`.
    pub fn permute_features(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.weights.len())?;
        Ok(Self {
            weights: perm.iter().map(|&p| self.weights[p]).collect(),
            ..self.clone()
        })
    }
}

pub fn predict_svm(model: &LinearSvmModel, x: &[f64]) -> Result<Label> {
    model.predict(x)
}

/// Per-feature affine map to [0, 1]; constant features map to 0.
struct Scaling {
    offset: Vec<f64>,
    scale: Vec<f64>,
}

impl Scaling {
    fn fit(data: &FeatureMatrix, enabled: bool) -> Self {
        let m = data.n_features();
        if !enabled {
            return Self {
                offset: vec![0.0; m],
                scale: vec![1.0; m],
            };
        }
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        for row in data.rows() {
            for (j, &v) in row.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        let scale = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| if h > l { 1.0 / (h - l) } else { 0.0 })
            .collect();
        Self { offset: lo, scale }
    }

    fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.offset.iter().zip(&self.scale))
            .map(|(v, (o, s))| (v - o) * s)
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dual variables plus the explicit primal weights they induce.
struct Smo<'a> {
    xs: &'a [Vec<f64>],
    kii: &'a [f64],
    y: &'a [f64],
    box_c: &'a [f64],
    alpha: Vec<f64>,
    w: Vec<f64>,
    b: f64,
}

impl Smo<'_> {
    fn error(&self, i: usize) -> f64 {
        dot(&self.w, &self.xs[i]) + self.b - self.y[i]
    }

    /// Jointly optimizes multipliers `i` and `j`; false if the pair cannot move.
    fn take_step(&mut self, i: usize, j: usize, ei: f64) -> bool {
        let (y, box_c) = (self.y, self.box_c);
        let ej = self.error(j);
        let (ai_old, aj_old) = (self.alpha[i], self.alpha[j]);
        let (lo, hi) = if y[i] != y[j] {
            let k = aj_old - ai_old;
            (k.max(0.0), box_c[j].min(box_c[i] + k))
        } else {
            let k = ai_old + aj_old;
            ((k - box_c[i]).max(0.0), box_c[j].min(k))
        };
        if hi - lo < 1e-12 {
            return false;
        }
        let kij = dot(&self.xs[i], &self.xs[j]);
        let eta = 2.0 * kij - self.kii[i] - self.kii[j];
        if eta >= 0.0 {
            return false;
        }
        let aj = (aj_old - y[j] * (ei - ej) / eta).clamp(lo, hi);
        if (aj - aj_old).abs() < 1e-7 {
            return false;
        }
        // clamp away rounding residue at the box edges
        let ai = (ai_old + y[i] * y[j] * (aj_old - aj)).clamp(0.0, box_c[i]);
        let (di, dj) = (ai - ai_old, aj - aj_old);
        self.alpha[i] = ai;
        self.alpha[j] = aj;

        let b1 = self.b - ei - y[i] * di * self.kii[i] - y[j] * dj * kij;
        let b2 = self.b - ej - y[i] * di * kij - y[j] * dj * self.kii[j];
        self.b = if ai > 0.0 && ai < box_c[i] {
            b1
        } else if aj > 0.0 && aj < box_c[j] {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        for ((wk, xi), xj) in self.w.iter_mut().zip(&self.xs[i]).zip(&self.xs[j]) {
            *wk += y[i] * di * xi + y[j] * dj * xj;
        }
        true
    }
}

/// SMO on a linear kernel. The second multiplier is tried at random first,
/// falling back to a scan over the remaining indices.
/// `observe` sees the dual variables after every pass over the data.
pub fn train_svm_observed<F>(
    data: &FeatureMatrix,
    config: &SvmConfig,
    mut observe: F,
) -> Result<LinearSvmModel>
where
    F: FnMut(&[f64]),
{
    config.validate()?;
    data.require_both_classes()?;
    let n = data.len();
    let scaling = Scaling::fit(data, config.normalize);
    let xs: Vec<Vec<f64>> = data.rows().map(|r| scaling.apply(r)).collect();
    let kii: Vec<f64> = xs.iter().map(|x| dot(x, x)).collect();
    let y = data.signs();
    let n_pos = data.labels().iter().filter(|l| l.is_positive()).count() as f64;
    let box_c: Vec<f64> = data
        .labels()
        .iter()
        .map(|l| match config.class_weight {
            ClassWeight::Uniform => config.c,
            ClassWeight::Balanced => {
                let n_class = if l.is_positive() {
                    n_pos
                } else {
                    n as f64 - n_pos
                };
                config.c * n as f64 / (2.0 * n_class)
            }
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = Smo {
        xs: &xs,
        kii: &kii,
        y: &y,
        box_c: &box_c,
        alpha: vec![0.0; n],
        w: vec![0.0; data.n_features()],
        b: 0.0,
    };
    let tol = config.tolerance;
    let (mut quiet_passes, mut iterations) = (0, 0);

    while quiet_passes < config.max_passes && iterations < config.max_iterations {
        let mut changed = 0;
        for i in 0..n {
            let ei = state.error(i);
            let violates = (y[i] * ei < -tol && state.alpha[i] < box_c[i])
                || (y[i] * ei > tol && state.alpha[i] > 0.0);
            if !violates {
                continue;
            }
            // Random partner first, then every other index from a random
            // offset, so a pass only stays quiet when no pair can improve.
            let offset = rng.random_range(0..n - 1);
            let stepped = (0..n - 1).any(|k| {
                let j = (offset + k) % (n - 1);
                let j = if j >= i { j + 1 } else { j };
                state.take_step(i, j, ei)
            });
            if stepped {
                changed += 1;
            }
        }
        iterations += 1;
        quiet_passes = if changed == 0 { quiet_passes + 1 } else { 0 };
        observe(&state.alpha);
    }
    let Smo { w, b, .. } = state;

    let weights: Vec<f64> = w.iter().zip(&scaling.scale).map(|(wk, s)| wk * s).collect();
    let bias = b - weights
        .iter()
        .zip(&scaling.offset)
        .map(|(wk, o)| wk * o)
        .sum::<f64>();
    if weights.iter().any(|v| !v.is_finite()) || !bias.is_finite() {
        return Err(Error::InvalidConfig(
            "SMO diverged to non-finite weights".into(),
        ));
    }
    Ok(LinearSvmModel {
        weights,
        bias,
        c: config.c,
        tolerance: config.tolerance,
    })
}

pub fn train_svm(data: &FeatureMatrix, config: &SvmConfig) -> Result<LinearSvmModel> {
    train_svm_observed(data, config, |_| {})
}
