//! End-to-end EOG processing with one serializable configuration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blink::{detect_peaks, passes_prefilter, segment_peak, PeakSegment, SearchParams};
use crate::eda::EdaOptions;
use crate::eog::{extract_eog_features_with, BlinkFeatures, EogOptions};
use crate::error::{Error, Result};
use crate::signal::{butterworth_lowpass, savitzky_golay, window_for_seconds, Channel, FilterMode, Recording};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EogFilterConfig {
    pub order: usize,
    pub cutoff_hz: f64,
    pub mode: FilterMode,
    pub savgol_window_s: f64,
    pub savgol_polyorder: usize,
}

impl Default for EogFilterConfig {
    fn default() -> Self {
        Self {
            order: 5,
            cutoff_hz: 10.0,
            mode: FilterMode::ZeroPhase,
            savgol_window_s: 0.15,
            savgol_polyorder: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub eog_filter: EogFilterConfig,
    pub search: SearchParams,
    pub eog: EogOptions,
    pub eda: EdaOptions,
}

/// Butterworth low-pass followed by Savitzky-Golay smoothing.
pub fn preprocess_eog(rec: &Recording, cfg: &EogFilterConfig) -> Result<Recording> {
    if rec.channel() != Channel::Eog {
        return Err(Error::InvalidChannel {
            expected: Channel::Eog,
            found: rec.channel(),
        });
    }
    let low = butterworth_lowpass(rec, cfg.order, cfg.cutoff_hz, cfg.mode)?;
    let window = window_for_seconds(cfg.savgol_window_s, rec.sample_rate_hz(), cfg.savgol_polyorder + 2);
    if window > rec.len() {
        return Err(Error::InvalidInput(format!(
            "smoothing window of {window} samples exceeds the recording length {}",
            rec.len()
        )));
    }
    savitzky_golay(&low, window, cfg.savgol_polyorder)
}

/// A segmented peak with its features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRecord {
    pub segment: PeakSegment,
    pub features: BlinkFeatures,
    pub passes_prefilter: bool,
}

/// Every detected peak of a filtered recording, segmented and described.
/// Peaks whose shape has no usable tangents are left out and counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakTable {
    pub peaks: Vec<PeakRecord>,
    pub skipped: usize,
}

/// Detects, segments, and describes every peak in an already filtered
/// recording.
pub fn describe_peaks(filtered: &Recording, search: &SearchParams, opts: &EogOptions) -> Result<PeakTable> {
    let cands = detect_peaks(filtered, search)?;
    let results: Vec<Option<PeakRecord>> = cands
        .par_iter()
        .map(|c| {
            let segment = segment_peak(filtered, c, search)?;
            match extract_eog_features_with(&segment, opts) {
                Ok(features) => Ok(Some(PeakRecord {
                    passes_prefilter: passes_prefilter(c, search),
                    segment,
                    features,
                })),
                Err(Error::DegenerateShape(msg) | Error::InvalidSegment(msg)) => {
                    log::debug!("skipping peak at sample {}: {msg}", c.center_index);
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    Ok(PeakTable {
        peaks: results.into_iter().flatten().collect(),
        skipped,
    })
}

/// Filtering followed by [`describe_peaks`].
pub fn eog_peak_table(rec: &Recording, cfg: &PipelineConfig) -> Result<PeakTable> {
    let filtered = preprocess_eog(rec, &cfg.eog_filter)?;
    describe_peaks(&filtered, &cfg.search, &cfg.eog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_round_trip() {
        let cfg = PipelineConfig::default();
        let json = serde_json::to_string(&cfg).unwrap();
        let back: PipelineConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
        let partial: PipelineConfig = serde_json::from_str(r#"{"search": {"height_min": 0.2}}"#).unwrap();
        assert_eq!(partial.search.height_min, 0.2);
        assert_eq!(partial.search.prominence_min, 0.1);
    }

    #[test]
    fn rejects_eda_recordings() {
        let r = Recording::new(100.0, vec![0.0; 200], Channel::Eda).unwrap();
        assert!(matches!(preprocess_eog(&r, &EogFilterConfig::default()), Err(Error::InvalidChannel { .. })));
    }
}
