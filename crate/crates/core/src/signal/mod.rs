//! Uniformly sampled recordings and the filters, derivatives, and
//! normalization shared by the EOG and EDA pipelines.
//!
//! Every routine here is a pure function of its inputs. Thresholds elsewhere
//! in the crate are expressed in seconds and converted to sample counts via
//! [`Recording::seconds_to_samples`].

mod butterworth;
mod savgol;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use butterworth::{butterworth_lowpass, Biquad, Butterworth, FilterMode};
pub use savgol::{savgol_smooth, savitzky_golay, window_for_seconds};

use crate::error::{Error, Result};

/// Sensor kind, which fixes the unit of the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Channel {
    /// Electrooculogram, volts.
    Eog,
    /// Electrodermal activity, microsiemens.
    Eda,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Eog => "EOG",
            Channel::Eda => "EDA",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Channel::Eog => "V",
            Channel::Eda => "uS",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EOG" => Ok(Channel::Eog),
            "EDA" => Ok(Channel::Eda),
            other => Err(Error::InvalidArgument(format!("unknown channel `{other}`"))),
        }
    }
}

/// A uniformly sampled, finite-valued time series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    sample_rate_hz: f64,
    samples: Vec<f64>,
    channel: Channel,
}

impl Recording {
    /// Builds a recording, rejecting non-positive rates, fewer than two
    /// samples, and non-finite values.
    pub fn new(sample_rate_hz: f64, samples: Vec<f64>, channel: Channel) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a recording needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "sample {i} is not finite ({})",
                samples[i]
            )));
        }
        Ok(Self {
            sample_rate_hz,
            samples,
            channel,
        })
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample period in seconds.
    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Time of sample `i` in seconds.
    pub fn time_of(&self, i: usize) -> f64 {
        i as f64 / self.sample_rate_hz
    }

    /// Nearest whole number of samples spanning `seconds`.
    pub fn seconds_to_samples(&self, seconds: f64) -> usize {
        (seconds * self.sample_rate_hz).round().max(0.0) as usize
    }

    /// Same rate and channel, new samples.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(self.sample_rate_hz, samples, self.channel)
    }
}

/// `n`-th discrete derivative of a recording, in value/s or value/s².
pub fn derivative(rec: &Recording, n: u8) -> Result<Recording> {
    let d = derivative_of(rec.samples(), rec.sample_rate_hz(), n)?;
    rec.with_samples(d)
}

/// Central-difference derivative of `x` sampled at `fs`.
///
/// Interior points use the centered stencil. For `n = 1` the endpoints use
/// second-order one-sided differences; for `n = 2` they repeat the nearest
/// full three-point stencil.
pub fn derivative_of(x: &[f64], fs: f64, n: u8) -> Result<Vec<f64>> {
    let len = x.len();
    if len < 3 {
        return Err(Error::InvalidInput(format!(
            "derivative needs at least 3 samples, got {len}"
        )));
    }
    match n {
        1 => {
            let half = 0.5 * fs;
            let mut out = Vec::with_capacity(len);
            out.push((-3.0 * x[0] + 4.0 * x[1] - x[2]) * half);
            for i in 1..len - 1 {
                out.push((x[i + 1] - x[i - 1]) * half);
            }
            out.push((3.0 * x[len - 1] - 4.0 * x[len - 2] + x[len - 3]) * half);
            Ok(out)
        }
        2 => {
            let fs2 = fs * fs;
            let mut out = Vec::with_capacity(len);
            out.push((x[0] - 2.0 * x[1] + x[2]) * fs2);
            for i in 1..len - 1 {
                out.push((x[i + 1] - 2.0 * x[i] + x[i - 1]) * fs2);
            }
            out.push((x[len - 1] - 2.0 * x[len - 2] + x[len - 3]) * fs2);
            Ok(out)
        }
        _ => Err(Error::InvalidArgument(format!(
            "derivative order must be 1 or 2, got {n}"
        ))),
    }
}

/// Rescales `values` onto [0, 1]. A constant input maps to all zeros.
pub fn minmax_normalize(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = min_max(values);
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - lo) / span).collect()
}

/// (min, max) of a slice; (inf, -inf) when empty.
pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population variance (divides by n).
pub(crate) fn variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}
