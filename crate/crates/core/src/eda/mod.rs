//! Electrodermal activity: tonic/phasic split, fixed-length windows, and
//! the per-window complexity and variability features.

mod complexity;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use complexity::{
    dfa_alpha, dfa_scales, higuchi_fd, hjorth, katz_fd, permutation_entropy, petrosian_fd,
    spectral_entropy, Hjorth,
};

use crate::blink::{local_maxima, prominence};
use crate::error::{Error, Result};
use crate::signal::{
    butterworth_lowpass, derivative_of, mean, min_max, variance, Channel, FilterMode, Recording,
};

/// Which signal the windows are cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdaSource {
    #[default]
    Phasic,
    /// The low-passed signal before the tonic component is removed.
    Filtered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EdaOptions {
    /// Cutoff of the first-order smoothing applied to the raw signal.
    pub lowpass_cutoff_hz: f64,
    /// Cutoff of the first-order filter that isolates the tonic level.
    pub tonic_cutoff_hz: f64,
    pub filter_mode: FilterMode,
    pub window_s: f64,
    pub source: EdaSource,
    pub higuchi_kmax: usize,
    pub dfa_points: usize,
    pub permutation_order: usize,
    pub permutation_delay: usize,
}

impl Default for EdaOptions {
    fn default() -> Self {
        Self {
            lowpass_cutoff_hz: 1.0,
            tonic_cutoff_hz: 0.05,
            filter_mode: FilterMode::ZeroPhase,
            window_s: 1.0,
            source: EdaSource::Phasic,
            higuchi_kmax: 10,
            dfa_points: 10,
            permutation_order: 3,
            permutation_delay: 1,
        }
    }
}

/// Filtered signal and its slow and fast parts; `tonic + phasic == filtered`
/// up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct EdaComponents {
    pub filtered: Recording,
    pub tonic: Recording,
    pub phasic: Recording,
}

fn require_eda(rec: &Recording) -> Result<()> {
    if rec.channel() != Channel::Eda {
        return Err(Error::InvalidChannel {
            expected: Channel::Eda,
            found: rec.channel(),
        });
    }
    Ok(())
}

pub fn decompose(rec: &Recording, opts: &EdaOptions) -> Result<EdaComponents> {
    require_eda(rec)?;
    let filtered = butterworth_lowpass(rec, 1, opts.lowpass_cutoff_hz, opts.filter_mode)?;
    let tonic = butterworth_lowpass(rec, 1, opts.tonic_cutoff_hz, opts.filter_mode)?;
    let phasic = filtered.with_samples(
        filtered
            .samples()
            .iter()
            .zip(tonic.samples())
            .map(|(f, t)| f - t)
            .collect(),
    )?;
    Ok(EdaComponents {
        filtered,
        tonic,
        phasic,
    })
}

/// `(tonic, phasic)` with default filter settings.
pub fn tonic_phasic_split(rec: &Recording) -> Result<(Recording, Recording)> {
    let c = decompose(rec, &EdaOptions::default())?;
    Ok((c.tonic, c.phasic))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaWindow {
    pub start_index: usize,
    pub samples: Vec<f64>,
}

/// Consecutive non-overlapping windows of `window_s`; a trailing partial
/// window is dropped.
pub fn window_series(rec: &Recording, window_s: f64) -> Result<Vec<EdaWindow>> {
    if !(window_s.is_finite() && window_s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "window length must be positive, got {window_s}"
        )));
    }
    let len = rec.seconds_to_samples(window_s).max(1);
    Ok(rec
        .samples()
        .chunks_exact(len)
        .enumerate()
        .map(|(i, w)| EdaWindow {
            start_index: i * len,
            samples: w.to_vec(),
        })
        .collect())
}

macro_rules! eda_catalog {
    ($($field:ident: $ty:ty => $name:literal,)*) => {
        /// Per-window features. `None` marks a value that is undefined for
        /// the window (for example Hjorth mobility of a constant window).
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        pub struct EdaFeatures {
            $(pub $field: $ty,)*
        }

        pub const EDA_FEATURE_NAMES: &[&str] = &[$($name,)*];

        impl EdaFeatures {
            pub fn values(&self) -> Vec<(&'static str, Option<f64>)> {
                vec![$(($name, Option::<f64>::from(self.$field)),)*]
            }

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $($name => Option::<f64>::from(self.$field),)*
                    _ => None,
                }
            }
        }
    };
}

eda_catalog! {
    signal_mean: f64 => "Signal Mean",
    signal_std: f64 => "Signal Standard Deviation",
    signal_range: f64 => "Signal Range",
    velocity_mean: f64 => "Velocity Mean",
    velocity_std: f64 => "Velocity Standard Deviation",
    petrosian: f64 => "Petrosian Fractal Dimension",
    higuchi: Option<f64> => "Higuchi Fractal Dimension",
    dfa: Option<f64> => "DFA",
    katz: f64 => "Katz Fractal Dimension",
    hjorth_activity: f64 => "Hjorth Activity",
    hjorth_mobility: Option<f64> => "Hjorth Mobility",
    hjorth_complexity: Option<f64> => "Hjorth Complexity",
    rate_of_change_variance: f64 => "Variance of Rate of Change",
    spectral_entropy: f64 => "Spectral Entropy",
    permutation_entropy: f64 => "Permutation Entropy",
}

pub fn is_eda_feature(name: &str) -> bool {
    EDA_FEATURE_NAMES.contains(&name)
}

pub fn extract_eda_features(win: &EdaWindow, fs: f64) -> Result<EdaFeatures> {
    extract_eda_features_with(win, fs, &EdaOptions::default())
}

pub fn extract_eda_features_with(win: &EdaWindow, fs: f64, opts: &EdaOptions) -> Result<EdaFeatures> {
    let x = &win.samples;
    if x.len() < 8 {
        return Err(Error::InvalidInput(format!(
            "EDA window needs at least 8 samples, got {}",
            x.len()
        )));
    }
    let velocity = derivative_of(x, fs, 1)?;
    let activity = variance(x);
    let (lo, hi) = min_max(x);
    let hj = hjorth(x).ok();
    let vel_var = variance(&velocity);

    Ok(EdaFeatures {
        signal_mean: mean(x),
        signal_std: activity.sqrt(),
        signal_range: hi - lo,
        velocity_mean: mean(&velocity),
        velocity_std: vel_var.sqrt(),
        petrosian: petrosian_fd(x)?,
        higuchi: higuchi_fd(x, opts.higuchi_kmax).ok(),
        dfa: dfa_alpha(x, &dfa_scales(x.len(), opts.dfa_points)).ok(),
        katz: katz_fd(x)?,
        hjorth_activity: activity,
        hjorth_mobility: hj.map(|h| h.mobility),
        hjorth_complexity: hj.map(|h| h.complexity),
        rate_of_change_variance: vel_var,
        spectral_entropy: spectral_entropy(x, fs)?,
        permutation_entropy: permutation_entropy(x, opts.permutation_order, opts.permutation_delay)?,
    })
}

/// Decomposes, windows the selected component, and extracts features for
/// every window in order.
pub fn eda_feature_table(rec: &Recording, opts: &EdaOptions) -> Result<Vec<(EdaWindow, EdaFeatures)>> {
    let parts = decompose(rec, opts)?;
    let source = match opts.source {
        EdaSource::Phasic => &parts.phasic,
        EdaSource::Filtered => &parts.filtered,
    };
    let fs = rec.sample_rate_hz();
    window_series(source, opts.window_s)?
        .into_par_iter()
        .map(|w| {
            let f = extract_eda_features_with(&w, fs, opts)?;
            Ok((w, f))
        })
        .collect()
}

/// Indices of phasic peaks whose prominence and height both reach
/// `threshold`, in order.
pub fn count_scrs(phasic: &Recording, threshold: f64) -> Vec<usize> {
    let x = phasic.samples();
    local_maxima(x)
        .into_iter()
        .filter(|&p| x[p] >= threshold && prominence(x, p).0 >= threshold)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eda(samples: Vec<f64>, fs: f64) -> Recording {
        Recording::new(fs, samples, Channel::Eda).unwrap()
    }

    #[test]
    fn rejects_eog_channel() {
        let r = Recording::new(10.0, vec![1.0; 50], Channel::Eog).unwrap();
        assert!(matches!(tonic_phasic_split(&r), Err(Error::InvalidChannel { .. })));
    }

    #[test]
    fn constant_input_is_all_tonic() {
        let (t, p) = tonic_phasic_split(&eda(vec![5.0; 2000], 100.0)).unwrap();
        assert!(t.samples().iter().all(|v| (v - 5.0).abs() < 1e-9));
        assert!(p.samples().iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn components_reconstruct_filtered() {
        let x: Vec<f64> = (0..3000).map(|i| ((i as f64) * 0.013).sin() + 2.0).collect();
        let c = decompose(&eda(x, 50.0), &EdaOptions::default()).unwrap();
        for i in 0..c.filtered.len() {
            let sum = c.tonic.samples()[i] + c.phasic.samples()[i];
            assert!((sum - c.filtered.samples()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn window_counts() {
        assert_eq!(window_series(&eda(vec![0.0; 1000], 100.0), 1.0).unwrap().len(), 10);
        let w = window_series(&eda(vec![0.0; 1050], 100.0), 1.0).unwrap();
        assert_eq!(w.len(), 10);
        assert!(w.iter().all(|w| w.samples.len() == 100));
        assert_eq!(w[3].start_index, 300);
        assert!(window_series(&eda(vec![0.0; 50], 100.0), 1.0).unwrap().is_empty());
    }

    #[test]
    fn constant_window_features() {
        let w = EdaWindow { start_index: 0, samples: vec![3.0; 100] };
        let f = extract_eda_features(&w, 100.0).unwrap();
        assert_eq!(f.signal_mean, 3.0);
        assert_eq!(f.signal_std, 0.0);
        assert_eq!(f.signal_range, 0.0);
        assert_eq!(f.velocity_mean, 0.0);
        assert_eq!(f.hjorth_mobility, None);
        assert_eq!(f.hjorth_complexity, None);
        assert_eq!(f.values().len(), 15);
    }

    #[test]
    fn ramp_window_features() {
        let w = EdaWindow {
            start_index: 0,
            samples: (0..100).map(|i| i as f64 / 99.0).collect(),
        };
        let f = extract_eda_features(&w, 100.0).unwrap();
        assert!((f.signal_mean - 0.5).abs() < 0.01);
        assert!((f.signal_range - 1.0).abs() < 1e-12);
        assert!((f.velocity_mean - 100.0 / 99.0).abs() < 1e-9);
    }

    #[test]
    fn std_squared_is_activity() {
        let w = EdaWindow {
            start_index: 0,
            samples: (0..100).map(|i| ((i * 37 % 17) as f64).sqrt()).collect(),
        };
        let f = extract_eda_features(&w, 100.0).unwrap();
        assert!((f.signal_std.powi(2) - f.hjorth_activity).abs() < 1e-12);
    }
}
