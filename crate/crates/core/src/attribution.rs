//! Exact Shapley attribution by coalition enumeration, and a ridge-regression
//! predictor to attribute.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest feature count [`shapley_exact`] will enumerate (2^n coalitions).
pub const MAX_EXACT_FEATURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub regularization: f64,
}

impl LinearModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Ridge regression with an unpenalized intercept, solved on centered data.
pub fn fit_ridge(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<LinearModel> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ridge penalty must be non-negative, got {lambda}"
        )));
    }
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::InvalidInput(format!(
            "need at least 2 rows with one target each, got {n} rows and {} targets",
            y.len()
        )));
    }
    let p = x[0].len();
    if p == 0 || x.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidInput("rows must share a non-zero feature count".into()));
    }
    if x.iter().flatten().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("design and targets must be finite".into()));
    }

    let means: Vec<f64> = (0..p)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let y_mean = y.iter().sum::<f64>() / n as f64;
    let xc = DMatrix::from_fn(n, p, |i, j| x[i][j] - means[j]);
    let yc = DVector::from_iterator(n, y.iter().map(|v| v - y_mean));

    let mut gram = xc.transpose() * &xc;
    for j in 0..p {
        gram[(j, j)] += lambda;
    }
    let rhs = xc.transpose() * yc;
    let scale = (0..p).map(|j| gram[(j, j)]).fold(0.0, f64::max);
    let chol = gram.cholesky().ok_or(Error::SingularDesign)?;
    let pivots = chol.l_dirty().diagonal();
    if scale == 0.0 || pivots.iter().any(|d| d * d <= 1e-12 * scale) {
        return Err(Error::SingularDesign);
    }
    let w = chol.solve(&rhs);
    let intercept = y_mean - w.iter().zip(&means).map(|(a, b)| a * b).sum::<f64>();
    Ok(LinearModel {
        weights: w.iter().copied().collect(),
        intercept,
        regularization: lambda,
    })
}

/// Per-feature attributions for one prediction. `base_value + sum(phi)`
/// equals `prediction` up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapleyReport {
    pub features: Vec<String>,
    pub phi: Vec<f64>,
    pub base_value: f64,
    pub prediction: f64,
}

/// Per-feature means of `rows`, the default background point.
pub fn column_means(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidInput("no rows to average".into()))?;
    let p = first.len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::InvalidInput("rows have different lengths".into()));
    }
    Ok((0..p)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64)
        .collect())
}

fn check_shapes(features: &[String], instance: &[f64], background: &[f64]) -> Result<()> {
    if features.len() > MAX_EXACT_FEATURES {
        return Err(Error::TooManyFeatures(features.len()));
    }
    if instance.len() != features.len() || background.len() != features.len() {
        return Err(Error::InvalidInput(format!(
            "{} features but instance has {} values and background {}",
            features.len(),
            instance.len(),
            background.len()
        )));
    }
    Ok(())
}

/// Instance values where `mask` has a bit set, background elsewhere.
fn hybrid(mask: usize, instance: &[f64], background: &[f64]) -> Vec<f64> {
    instance
        .iter()
        .zip(background)
        .enumerate()
        .map(|(i, (x, b))| if mask >> i & 1 == 1 { *x } else { *b })
        .collect()
}

/// Shapley values from a table of all `2^n` coalition values.
fn from_coalitions(values: &[f64], n: usize) -> Vec<f64> {
    // weight[s] = s! (n - s - 1)! / n! = 1 / (n * C(n - 1, s))
    let mut weight = vec![0.0; n.max(1)];
    let mut binom = 1.0;
    for (s, w) in weight.iter_mut().enumerate().take(n) {
        *w = 1.0 / (n as f64 * binom);
        binom = binom * (n - 1 - s) as f64 / (s + 1) as f64;
    }
    (0..n)
        .into_par_iter()
        .map(|i| {
            let bit = 1usize << i;
            (0..values.len())
                .filter(|m| m & bit == 0)
                .map(|m| weight[m.count_ones() as usize] * (values[m | bit] - values[m]))
                .sum()
        })
        .collect()
}

/// Exact Shapley values with a single background point as the reference
/// for absent features.
pub fn shapley_exact<F>(predict: F, instance: &[f64], background: &[f64], features: &[String]) -> Result<ShapleyReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    check_shapes(features, instance, background)?;
    let n = features.len();
    let values: Vec<f64> = (0..1usize << n)
        .into_par_iter()
        .map(|m| predict(&hybrid(m, instance, background)))
        .collect();
    Ok(ShapleyReport {
        features: features.to_vec(),
        phi: from_coalitions(&values, n),
        base_value: values[0],
        prediction: values[values.len() - 1],
    })
}

/// Exact Shapley values where each coalition's value is the mean prediction
/// over every background row.
pub fn shapley_exact_averaged<F>(
    predict: F,
    instance: &[f64],
    backgrounds: &[Vec<f64>],
    features: &[String],
) -> Result<ShapleyReport>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if backgrounds.is_empty() {
        return Err(Error::InvalidInput("background set is empty".into()));
    }
    for b in backgrounds {
        check_shapes(features, instance, b)?;
    }
    let n = features.len();
    let values: Vec<f64> = (0..1usize << n)
        .into_par_iter()
        .map(|m| {
            backgrounds
                .iter()
                .map(|b| predict(&hybrid(m, instance, b)))
                .sum::<f64>()
                / backgrounds.len() as f64
        })
        .collect();
    Ok(ShapleyReport {
        features: features.to_vec(),
        phi: from_coalitions(&values, n),
        base_value: values[0],
        prediction: values[values.len() - 1],
    })
}

/// Mean absolute attribution per feature across reports.
pub fn mean_abs_shap(reports: &[ShapleyReport]) -> Result<Vec<f64>> {
    let first = reports
        .first()
        .ok_or_else(|| Error::InvalidInput("no reports to aggregate".into()))?;
    if let Some(r) = reports.iter().find(|r| r.features != first.features || r.phi.len() != first.phi.len()) {
        return Err(Error::InvalidInput(format!(
            "report features {:?} differ from {:?}",
            r.features, first.features
        )));
    }
    let k = reports.len() as f64;
    Ok((0..first.phi.len())
        .map(|i| reports.iter().map(|r| r.phi[i].abs()).sum::<f64>() / k)
        .collect())
}
