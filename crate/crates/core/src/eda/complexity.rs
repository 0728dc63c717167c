use std::collections::BTreeMap;

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};
use crate::signal::{min_max, variance};

fn diff(x: &[f64]) -> Vec<f64> {
    x.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Least-squares slope of `y` against `x`.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Petrosian fractal dimension. Sign changes are counted between
/// consecutive strictly non-zero first differences of opposite sign.
pub fn petrosian_fd(x: &[f64]) -> Result<f64> {
    if x.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "Petrosian dimension needs at least 3 samples, got {}",
            x.len()
        )));
    }
    let d = diff(x);
    let changes = d.windows(2).filter(|w| w[0] * w[1] < 0.0).count() as f64;
    let n = x.len() as f64;
    Ok(n.log10() / (n.log10() + (n / (n + 0.4 * changes)).log10()))
}

/// Higuchi fractal dimension from curve lengths at delays `1..=kmax`.
///
/// A constant input has zero length at every delay and is assigned 1.0.
pub fn higuchi_fd(x: &[f64], kmax: usize) -> Result<f64> {
    if kmax < 2 {
        return Err(Error::InvalidArgument(format!("kmax must be at least 2, got {kmax}")));
    }
    let n = x.len();
    if n < 2 * kmax {
        return Err(Error::InvalidInput(format!(
            "Higuchi dimension with kmax {kmax} needs at least {} samples, got {n}",
            2 * kmax
        )));
    }
    let lengths: Vec<f64> = (1..=kmax)
        .map(|k| {
            let total: f64 = (0..k)
                .map(|m| {
                    let steps = (n - 1 - m) / k;
                    let path: f64 = (1..=steps)
                        .map(|i| (x[m + i * k] - x[m + (i - 1) * k]).abs())
                        .sum();
                    path * (n - 1) as f64 / (steps * k) as f64 / k as f64
                })
                .sum();
            total / k as f64
        })
        .collect();

    if lengths.iter().all(|&l| l == 0.0) {
        return Ok(1.0);
    }
    if lengths.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::DegenerateInput(
            "curve length vanishes at some delay".into(),
        ));
    }
    let log_k: Vec<f64> = (1..=kmax).map(|k| (k as f64).ln()).collect();
    let log_l: Vec<f64> = lengths.iter().map(|l| l.ln()).collect();
    Ok(-ls_slope(&log_k, &log_l))
}

/// Katz fractal dimension on a unit-step abscissa.
pub fn katz_fd(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "Katz dimension needs at least 2 samples, got {}",
            x.len()
        )));
    }
    let steps = (x.len() - 1) as f64;
    let path: f64 = x.windows(2).map(|w| (w[1] - w[0]).hypot(1.0)).sum();
    let extent = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v - x[0]).hypot(i as f64))
        .fold(0.0, f64::max);
    if path == 0.0 {
        return Ok(1.0);
    }
    Ok(steps.log10() / (steps.log10() + (extent / path).log10()))
}

/// `points` box sizes spaced geometrically from 4 to `n / 4`, rounded and
/// deduplicated.
pub fn dfa_scales(n: usize, points: usize) -> Vec<usize> {
    let hi = n / 4;
    if hi < 4 || points == 0 {
        return Vec::new();
    }
    if points == 1 {
        return vec![4];
    }
    let (lo, hi) = (4f64.ln(), (hi as f64).ln());
    let mut scales: Vec<usize> = (0..points)
        .map(|i| (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp().round() as usize)
        .collect();
    scales.dedup();
    scales
}

/// Detrended fluctuation analysis exponent.
///
/// The mean-centered series is integrated, split into non-overlapping boxes
/// of each size, linearly detrended per box, and the RMS residual `F(s)` is
/// regressed against `s` on log-log axes.
pub fn dfa_alpha(x: &[f64], scales: &[usize]) -> Result<f64> {
    if scales.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "DFA needs at least 4 scales, got {}",
            scales.len()
        )));
    }
    let largest = *scales.iter().max().expect("non-empty");
    if scales.iter().any(|&s| s < 2) {
        return Err(Error::InvalidArgument("DFA box sizes must be at least 2".into()));
    }
    if x.len() < 4 * largest {
        return Err(Error::InvalidInput(format!(
            "DFA with box size {largest} needs at least {} samples, got {}",
            4 * largest,
            x.len()
        )));
    }
    let m = x.iter().sum::<f64>() / x.len() as f64;
    let profile: Vec<f64> = x
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v - m;
            Some(*acc)
        })
        .collect();

    let mut log_s = Vec::with_capacity(scales.len());
    let mut log_f = Vec::with_capacity(scales.len());
    for &s in scales {
        let boxes = profile.len() / s;
        let t: Vec<f64> = (0..s).map(|j| j as f64).collect();
        let tm = (s - 1) as f64 / 2.0;
        let stt: f64 = t.iter().map(|v| (v - tm) * (v - tm)).sum();
        let mut sq = 0.0;
        for b in 0..boxes {
            let y = &profile[b * s..(b + 1) * s];
            let ym = y.iter().sum::<f64>() / s as f64;
            let slope = t.iter().zip(y).map(|(a, v)| (a - tm) * (v - ym)).sum::<f64>() / stt;
            sq += y
                .iter()
                .zip(&t)
                .map(|(v, a)| {
                    let r = v - (ym + slope * (a - tm));
                    r * r
                })
                .sum::<f64>();
        }
        let f = (sq / (boxes * s) as f64).sqrt();
        if !(f > 0.0) {
            return Err(Error::DegenerateInput(format!(
                "zero fluctuation at box size {s}"
            )));
        }
        log_s.push((s as f64).ln());
        log_f.push(f.ln());
    }
    Ok(ls_slope(&log_s, &log_f))
}

/// Hjorth activity, mobility, and complexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hjorth {
    pub activity: f64,
    pub mobility: f64,
    pub complexity: f64,
}

/// Hjorth parameters from first differences. Inputs whose signal or
/// first difference has zero variance are rejected.
pub fn hjorth(x: &[f64]) -> Result<Hjorth> {
    if x.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "Hjorth parameters need at least 3 samples, got {}",
            x.len()
        )));
    }
    let d1 = diff(x);
    let d2 = diff(&d1);
    let (v0, v1, v2) = (variance(x), variance(&d1), variance(&d2));
    if !(v0 > 0.0 && v1 > 0.0) {
        return Err(Error::DegenerateInput(
            "Hjorth mobility and complexity need a varying signal and first difference".into(),
        ));
    }
    let mobility = (v1 / v0).sqrt();
    Ok(Hjorth {
        activity: v0,
        mobility,
        complexity: (v2 / v1).sqrt() / mobility,
    })
}

/// Normalized Shannon entropy of the periodogram over bins `1..=n/2`.
/// A spectrum with no power outside DC has zero entropy.
pub fn spectral_entropy(x: &[f64], fs: f64) -> Result<f64> {
    let n = x.len();
    if n < 8 {
        return Err(Error::InvalidInput(format!(
            "spectral entropy needs at least 8 samples, got {n}"
        )));
    }
    if !(fs > 0.0) {
        return Err(Error::InvalidArgument(format!("sample rate must be positive, got {fs}")));
    }
    let (lo, hi) = min_max(x);
    if lo == hi {
        return Ok(0.0);
    }
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = n / 2;
    // The 1/(fs n) periodogram scale cancels in the normalization.
    let power: Vec<f64> = buf[1..=bins].iter().map(|c| c.norm_sqr()).collect();
    let total: f64 = power.iter().sum();
    if !(total > 0.0) {
        return Ok(0.0);
    }
    let h: f64 = power
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.log2()
        })
        .sum();
    Ok(h / (bins as f64).log2() + 0.0)
}

/// Ordinal-pattern entropy normalized by `log2(order!)`. Equal values are
/// ranked by position.
pub fn permutation_entropy(x: &[f64], order: usize, delay: usize) -> Result<f64> {
    if order < 2 || delay < 1 {
        return Err(Error::InvalidArgument(format!(
            "permutation entropy needs order >= 2 and delay >= 1, got {order} and {delay}"
        )));
    }
    if x.len() < order * delay + 1 {
        return Err(Error::InvalidInput(format!(
            "permutation entropy of order {order}, delay {delay} needs at least {} samples, got {}",
            order * delay + 1,
            x.len()
        )));
    }
    let span = (order - 1) * delay;
    // Ordered map: the summation order, and so the last bit, is fixed.
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut idx: Vec<usize> = Vec::with_capacity(order);
    for start in 0..x.len() - span {
        idx.clear();
        idx.extend(0..order);
        idx.sort_by(|&a, &b| x[start + a * delay].total_cmp(&x[start + b * delay]));
        *counts.entry(idx.clone()).or_insert(0) += 1;
    }
    let total = (x.len() - span) as f64;
    let h: f64 = counts
        .values()
        .map(|&k| {
            let p = k as f64 / total;
            -p * p.log2()
        })
        .sum();
    let factorial: f64 = (2..=order).map(|k| k as f64).product();
    // Adding zero turns the -0 of a single pattern into 0.
    Ok(h / factorial.log2() + 0.0)
}
