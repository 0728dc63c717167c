//! Per-blink shape features computed from a baseline-bounded EOG segment.
//!
//! All positions are measured on the segment's own time axis, with `t = 0`
//! at the left base. "Velocity" and "acceleration" are the first and second
//! derivatives of the (optionally normalized) slice.

use serde::{Deserialize, Serialize};

use crate::blink::PeakSegment;
use crate::error::{Error, Result};
use crate::signal::{derivative_of, mean, min_max, minmax_normalize, variance};

/// Tuning knobs for feature extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EogOptions {
    /// Min-max normalize the slice before anything else. Signal Height is
    /// omitted in this mode.
    pub normalize: bool,
    /// Velocity counts as "near zero" below this fraction of the segment's
    /// peak absolute velocity.
    pub zero_band: f64,
    pub entropy_bins: usize,
    /// Leading fraction of the segment integrated for Initial Blink Energy.
    pub initial_fraction: f64,
}

impl Default for EogOptions {
    fn default() -> Self {
        Self {
            normalize: false,
            zero_band: 0.05,
            entropy_bins: 10,
            initial_fraction: 0.05,
        }
    }
}

impl EogOptions {
    pub fn normalized() -> Self {
        Self {
            normalize: true,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.zero_band > 0.0 && self.zero_band < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "zero_band must lie in (0, 1), got {}",
                self.zero_band
            )));
        }
        if !(self.initial_fraction > 0.0 && self.initial_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "initial_fraction must lie in (0, 1], got {}",
                self.initial_fraction
            )));
        }
        if self.entropy_bins == 0 {
            return Err(Error::InvalidArgument("entropy_bins must be positive".into()));
        }
        Ok(())
    }
}

macro_rules! blink_catalog {
    ($($field:ident => $name:literal,)*) => {
        /// One value per catalog feature. Signal Height is absent in
        /// normalized mode; every other field is always present.
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        pub struct BlinkFeatures {
            pub signal_height: Option<f64>,
            $(pub $field: f64,)*
            /// The segment touched an end of the recording.
            pub edge_truncated: bool,
        }

        /// Every feature name except Signal Height, in output order.
        const SHAPE_NAMES: &[&str] = &[$($name,)*];

        impl BlinkFeatures {
            /// `(name, value)` pairs in catalog order.
            pub fn values(&self) -> Vec<(&'static str, f64)> {
                let mut out = Vec::with_capacity(SHAPE_NAMES.len() + 1);
                if let Some(h) = self.signal_height {
                    out.push((SIGNAL_HEIGHT, h));
                }
                $(out.push(($name, self.$field));)*
                out
            }

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    SIGNAL_HEIGHT => self.signal_height,
                    $($name => Some(self.$field),)*
                    _ => None,
                }
            }
        }
    };
}

pub const SIGNAL_HEIGHT: &str = "Signal Height";

blink_catalog! {
    x_axis_deviation => "X-Axis Deviation",
    y_axis_deviation => "Y-Axis Deviation",
    symmetry_ratio => "Symmetry Ratio",
    closing_signal_range => "Closing Signal Range",
    opening_signal_range => "Opening Signal Range",
    closing_duration => "Closing Duration",
    closing_dynamics_ratio => "Closing Dynamics Ratio",
    blink_duration => "Blink Duration",
    closing_tent_duration => "Closing Tent Duration",
    opening_tent_duration => "Opening Tent Duration",
    closing_tent_proportion => "Closing Tent Duration by Proportion of Blink",
    opening_tent_proportion => "Opening Tent Duration by Proportion of Blink",
    half_close_duration => "Blink Half-Close Duration",
    full_close_duration => "Blink Full-Close Duration",
    full_close_percentage => "Full-Close Duration by Percentage of Blink",
    opening_acceleration_to_peak => "Opening Acceleration to Peak Duration",
    velocity_recovery_duration => "Velocity Recovery Duration",
    closing_tent_to_max_velocity => "Closing Tent Duration to Max Velocity",
    max_velocity_to_peak => "Maximum Velocity to Peak Duration",
    closing_tent_slope => "Slope of Closing Tent",
    opening_tent_slope => "Slope of Opening Tent",
    slope_at_max_acceleration => "Slope at Closing Tent Maximum Acceleration",
    phase_velocity_ratio => "Blink Phase Velocity Ratio",
    initial_energy => "Initial Blink Energy",
    closing_energy => "Closing Phase Energy",
    opening_energy => "Opening Phase Energy",
    closing_slope_energy => "Closing Phase Slope Energy",
    closing_velocity_energy => "Closing Phase Velocity Energy",
    opening_velocity_energy => "Opening Phase Velocity Energy",
    signal_average => "Signal Average",
    acceleration_std => "Acceleration Standard Deviation",
    velocity_entropy => "Velocity Entropy",
    acceleration_entropy => "Acceleration Entropy",
    signal_entropy => "Signal Entropy",
    max_acceleration_velocity_ratio => "Maximum Acceleration Velocity Ratio",
}

/// Column names produced by [`extract_eog_features`] in the given mode.
pub fn eog_feature_names(normalize: bool) -> Vec<&'static str> {
    let mut names = Vec::with_capacity(SHAPE_NAMES.len() + 1);
    if !normalize {
        names.push(SIGNAL_HEIGHT);
    }
    names.extend_from_slice(SHAPE_NAMES);
    names
}

/// Whether `name` is any EOG catalog feature.
pub fn is_eog_feature(name: &str) -> bool {
    name == SIGNAL_HEIGHT || SHAPE_NAMES.contains(&name)
}

/// A line `v = slope * t + intercept` on the segment time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    fn through(t: f64, v: f64, slope: f64) -> Self {
        Self {
            slope,
            intercept: v - slope * t,
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        self.slope * t + self.intercept
    }
}

/// Tangents at the steepest rise and steepest fall, and where they meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TentGeometry {
    pub up_tangent: Line,
    pub down_tangent: Line,
    /// `(t_s, value)` of the tangent intersection.
    pub apex: (f64, f64),
    /// `(t_s, value)` of the segment center.
    pub peak: (f64, f64),
}

impl TentGeometry {
    pub fn x_deviation(&self) -> f64 {
        self.apex.0 - self.peak.0
    }

    pub fn y_deviation(&self) -> f64 {
        self.apex.1 - self.peak.1
    }
}

/// Index landmarks shared by several features.
struct Landmarks {
    center: usize,
    /// Steepest rise on `[0, center]`.
    vmax: usize,
    /// Steepest fall on `[center, len - 1]`.
    vmin: usize,
    /// Largest acceleration on `[0, center]`.
    amax: usize,
    /// Near-zero velocity run around the center.
    flat_start: usize,
    flat_end: usize,
    /// Fractional positions where `|v|` crosses the zero band at either end
    /// of the run, interpolated between samples.
    flat_start_at: f64,
    flat_end_at: f64,
    speed_max: f64,
}

fn check_segment(slice: &[f64], center: usize) -> Result<()> {
    if slice.len() < 5 {
        return Err(Error::InvalidSegment(format!(
            "segment has {} samples, need at least 5",
            slice.len()
        )));
    }
    let last = slice.len() - 1;
    if center == 0 || center >= last {
        return Err(Error::InvalidSegment(format!(
            "center offset {center} is not strictly inside the segment of {} samples",
            slice.len()
        )));
    }
    let (_, hi) = min_max(slice);
    if slice[center] < hi {
        return Err(Error::InvalidSegment(format!(
            "center value {} is below the segment maximum {hi}",
            slice[center]
        )));
    }
    if slice[center] <= slice[0].min(slice[last]) {
        return Err(Error::DegenerateShape("segment has no height above its bases".into()));
    }
    Ok(())
}

/// Index of the extreme of `key` over `range`, breaking near-ties (within
/// `tol`) toward `toward`.
fn extreme_toward(
    values: &[f64],
    range: std::ops::RangeInclusive<usize>,
    toward: usize,
    tol: f64,
    key: impl Fn(f64) -> f64,
) -> usize {
    let best = range.clone().map(|i| key(values[i])).fold(f64::NEG_INFINITY, f64::max);
    range
        .filter(|&i| key(values[i]) >= best - tol)
        .min_by_key(|&i| i.abs_diff(toward))
        .expect("non-empty range")
}

fn landmarks(v: &[f64], a: &[f64], center: usize, zero_band: f64) -> Landmarks {
    let last = v.len() - 1;
    let speed_max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let vtol = 1e-9 * speed_max;
    let acc_max = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let vmax = extreme_toward(v, 0..=center, center, vtol, |x| x);
    let vmin = extreme_toward(v, center..=last, center, vtol, |x| -x);
    let amax = extreme_toward(a, 0..=center, center, 1e-9 * acc_max, |x| x);

    let band = zero_band * speed_max;
    let mut flat_start = center;
    while flat_start > 0 && v[flat_start - 1].abs() < band {
        flat_start -= 1;
    }
    let mut flat_end = center;
    while flat_end < last && v[flat_end + 1].abs() < band {
        flat_end += 1;
    }
    // Linear position of |v| = band between the last in-band sample and
    // its out-of-band neighbour.
    let band_crossing = |inside: usize, outside: usize| {
        let (a, b) = (v[inside].abs(), v[outside].abs());
        let frac = if b > a { (band - a) / (b - a) } else { 0.0 };
        inside as f64 + frac * (outside as f64 - inside as f64)
    };
    let flat_start_at = if flat_start > 0 {
        band_crossing(flat_start, flat_start - 1)
    } else {
        0.0
    };
    let flat_end_at = if flat_end < last {
        band_crossing(flat_end, flat_end + 1)
    } else {
        last as f64
    };

    Landmarks {
        center,
        vmax,
        vmin,
        amax,
        flat_start,
        flat_end,
        flat_start_at,
        flat_end_at,
        speed_max,
    }
}

fn tent_from(s: &[f64], v: &[f64], lm: &Landmarks, dt: f64) -> Result<TentGeometry> {
    let up_slope = v[lm.vmax];
    let down_slope = v[lm.vmin];
    if !(up_slope > 0.0 && down_slope < 0.0) {
        return Err(Error::DegenerateShape(format!(
            "tangent slopes must straddle zero, got rise {up_slope} and fall {down_slope}"
        )));
    }
    let up = Line::through(lm.vmax as f64 * dt, s[lm.vmax], up_slope);
    let down = Line::through(lm.vmin as f64 * dt, s[lm.vmin], down_slope);
    let t = (down.intercept - up.intercept) / (up.slope - down.slope);
    Ok(TentGeometry {
        up_tangent: up,
        down_tangent: down,
        apex: (t, up.at(t)),
        peak: (lm.center as f64 * dt, s[lm.center]),
    })
}

/// Tangent geometry of the raw segment slice.
pub fn tent_geometry(seg: &PeakSegment) -> Result<TentGeometry> {
    let c = seg.center_offset();
    check_segment(&seg.slice, c)?;
    let fs = seg.sample_rate_hz;
    let v = derivative_of(&seg.slice, fs, 1)?;
    let a = derivative_of(&seg.slice, fs, 2)?;
    let lm = landmarks(&v, &a, c, EogOptions::default().zero_band);
    tent_from(&seg.slice, &v, &lm, 1.0 / fs)
}

/// Shannon entropy, in bits, of a `bins`-bin histogram spanning the value
/// range. A constant input has zero entropy.
pub fn histogram_entropy(values: &[f64], bins: usize) -> f64 {
    let (lo, hi) = min_max(values);
    let span = hi - lo;
    if values.is_empty() || bins == 0 || !(span > 0.0) {
        return 0.0;
    }
    let mut counts = vec![0usize; bins];
    for &x in values {
        let b = (((x - lo) / span) * bins as f64).floor() as usize;
        counts[b.min(bins - 1)] += 1;
    }
    let n = values.len() as f64;
    -counts
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| {
            let p = k as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Trapezoid integral of `y` sampled every `dt` seconds.
pub(crate) fn trapezoid(y: &[f64], dt: f64) -> f64 {
    if y.len() < 2 {
        return 0.0;
    }
    let inner: f64 = y[1..y.len() - 1].iter().sum();
    dt * (inner + 0.5 * (y[0] + y[y.len() - 1]))
}

/// Fractional index where `y` first reaches `level` walking from `from` in
/// direction `step`, interpolated between the bracketing samples.
fn crossing(y: &[f64], from: usize, step: isize, level: f64, reached: impl Fn(f64) -> bool) -> Option<f64> {
    let mut prev = from;
    loop {
        let next = prev as isize + step;
        if next < 0 || next >= y.len() as isize {
            return None;
        }
        let next = next as usize;
        if reached(y[next]) {
            let drop = y[prev] - y[next];
            let frac = if drop > 0.0 { (y[prev] - level) / drop } else { 0.0 };
            return Some(prev as f64 + step as f64 * frac);
        }
        prev = next;
    }
}

/// Full feature set with default options and the given normalization mode.
pub fn extract_eog_features(seg: &PeakSegment, normalize: bool) -> Result<BlinkFeatures> {
    extract_eog_features_with(
        seg,
        &EogOptions {
            normalize,
            ..EogOptions::default()
        },
    )
}

pub fn extract_eog_features_with(seg: &PeakSegment, opts: &EogOptions) -> Result<BlinkFeatures> {
    opts.validate()?;
    let c = seg.center_offset();
    check_segment(&seg.slice, c)?;

    let s = if opts.normalize {
        minmax_normalize(&seg.slice)
    } else {
        seg.slice.clone()
    };
    let fs = seg.sample_rate_hz;
    let dt = 1.0 / fs;
    let last = s.len() - 1;
    let v = derivative_of(&s, fs, 1)?;
    let a = derivative_of(&s, fs, 2)?;
    let lm = landmarks(&v, &a, c, opts.zero_band);
    let tent = tent_from(&s, &v, &lm, dt)?;

    let baseline = s[0].min(s[last]);
    let height = s[c] - baseline;
    let blink_duration = last as f64 * dt;

    let x_dev = tent.x_deviation();
    let y_dev = tent.y_deviation();
    let symmetry_ratio = if y_dev.abs() > 1e-12 * height { x_dev / y_dev } else { 0.0 };

    let band = opts.zero_band * lm.speed_max;
    let onset = (0..=lm.vmax).find(|&i| v[i] >= band).unwrap_or(lm.vmax);

    let half = baseline + 0.5 * height;
    let below = |x: f64| x <= half;
    let half_left = crossing(&s, c, -1, half, below).unwrap_or(0.0);
    let half_right = crossing(&s, c, 1, half, below).unwrap_or(last as f64);

    let recovery_level = s[lm.vmax];
    let recovery_end = crossing(&s, c, 1, recovery_level, |x| x <= recovery_level).unwrap_or(last as f64);

    let zero_cross = if v[lm.vmax] <= 0.0 {
        lm.vmax as f64
    } else {
        crossing(&v, lm.vmax, 1, 0.0, |x| x <= 0.0).unwrap_or(last as f64)
    };

    let closing_tent_slope = if lm.vmax > 0 {
        (s[lm.vmax] - s[0]) / (lm.vmax as f64 * dt)
    } else {
        0.0
    };
    let opening_tent_slope = if lm.vmin < last {
        (s[last] - s[lm.vmin]) / ((last - lm.vmin) as f64 * dt)
    } else {
        0.0
    };

    let initial_len = ((opts.initial_fraction * s.len() as f64).ceil() as usize).clamp(2, s.len());

    let open_speed = v[c..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let open_acc = a[c..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_acceleration_velocity_ratio = if open_speed > 0.0 { open_acc / open_speed } else { 0.0 };

    let full_close_duration = (lm.flat_end_at - lm.flat_start_at) * dt;

    Ok(BlinkFeatures {
        signal_height: (!opts.normalize).then_some(height),
        x_axis_deviation: x_dev,
        y_axis_deviation: y_dev,
        symmetry_ratio,
        closing_signal_range: s[lm.flat_start] - s[0],
        opening_signal_range: s[lm.flat_end] - s[last],
        closing_duration: (c - lm.vmax) as f64 * dt,
        closing_dynamics_ratio: v[lm.vmax] / height,
        blink_duration,
        closing_tent_duration: (lm.vmax - onset) as f64 * dt,
        opening_tent_duration: (last - c) as f64 * dt,
        closing_tent_proportion: lm.vmax as f64 / last as f64,
        opening_tent_proportion: (last - c) as f64 / last as f64,
        half_close_duration: (half_right - half_left) * dt,
        full_close_duration,
        full_close_percentage: 100.0 * full_close_duration / blink_duration,
        opening_acceleration_to_peak: (lm.flat_end_at - lm.amax as f64) * dt,
        velocity_recovery_duration: (recovery_end - lm.vmax as f64) * dt,
        closing_tent_to_max_velocity: lm.vmax as f64 * dt,
        max_velocity_to_peak: (zero_cross - lm.vmax as f64) * dt,
        closing_tent_slope,
        opening_tent_slope,
        slope_at_max_acceleration: v[lm.amax],
        phase_velocity_ratio: v[lm.vmax] / v[lm.vmin].abs(),
        initial_energy: trapezoid(&s[..initial_len], dt),
        closing_energy: trapezoid(&s[..=c], dt),
        opening_energy: trapezoid(&s[c..], dt),
        closing_slope_energy: trapezoid(&v[..=lm.vmax], dt),
        closing_velocity_energy: trapezoid(&s[lm.vmax..=c], dt),
        opening_velocity_energy: trapezoid(&s[c..=lm.vmin], dt),
        signal_average: mean(&s),
        acceleration_std: variance(&a).sqrt(),
        velocity_entropy: histogram_entropy(&v, opts.entropy_bins),
        acceleration_entropy: histogram_entropy(&a, opts.entropy_bins),
        signal_entropy: histogram_entropy(&s, opts.entropy_bins),
        max_acceleration_velocity_ratio,
        edge_truncated: seg.edge_truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blink::PeakCandidate;

    fn segment(slice: Vec<f64>, center: usize, fs: f64) -> PeakSegment {
        let last = slice.len() - 1;
        PeakSegment {
            candidate: PeakCandidate {
                center_index: 100 + center,
                height: slice[center],
                prominence: slice[center],
                width_s: 0.1,
            },
            left_base_index: 100,
            right_base_index: 100 + last,
            slice,
            sample_rate_hz: fs,
            edge_truncated: false,
        }
    }

    fn triangle(half: usize) -> Vec<f64> {
        (0..=2 * half)
            .map(|i| 1.0 - (i as f64 - half as f64).abs() / half as f64)
            .collect()
    }

    fn gaussian(n: usize, sigma: f64) -> Vec<f64> {
        let c = (n / 2) as f64;
        (0..n).map(|i| (-0.5 * ((i as f64 - c) / sigma).powi(2)).exp()).collect()
    }

    #[test]
    fn catalog_sizes() {
        assert_eq!(eog_feature_names(false).len(), 36);
        assert_eq!(eog_feature_names(true).len(), 35);
        assert_eq!(eog_feature_names(false)[0], SIGNAL_HEIGHT);
        let mut names = eog_feature_names(false);
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 36);
    }

    #[test]
    fn values_follow_catalog_order() {
        let f = extract_eog_features(&segment(gaussian(41, 5.0), 20, 100.0), false).unwrap();
        let got: Vec<_> = f.values().iter().map(|(n, _)| *n).collect();
        assert_eq!(got, eog_feature_names(false));
        let f = extract_eog_features(&segment(gaussian(41, 5.0), 20, 100.0), true).unwrap();
        assert_eq!(f.values().len(), 35);
        assert_eq!(f.get(SIGNAL_HEIGHT), None);
    }

    #[test]
    fn triangle_duration_and_proportion() {
        let fs = 100.0;
        let f = extract_eog_features(&segment(triangle(15), 15, fs), false).unwrap();
        assert!((f.blink_duration - 0.3).abs() <= 1.0 / fs);
        assert!((f.closing_tent_proportion - 0.5).abs() <= 0.05);
        assert!(f.x_axis_deviation.abs() <= 1.0 / fs);
        assert!((f.phase_velocity_ratio - 1.0).abs() < 0.02);
    }

    #[test]
    fn gaussian_apex_sits_above_peak() {
        let tent = tent_geometry(&segment(gaussian(61, 6.0), 30, 100.0)).unwrap();
        assert!(tent.x_deviation().abs() < 1e-9);
        assert!(tent.y_deviation() > 0.0);
    }

    #[test]
    fn skewed_tent_apex_matches_line_intersection() {
        // Rise at 2 V/s for 0.5 s, fall at -1 V/s for 1 s, sampled at 100 Hz.
        let fs = 100.0;
        let mut s: Vec<f64> = (0..=50).map(|i| 2.0 * i as f64 / fs).collect();
        s.extend((1..=100).map(|i| 1.0 - i as f64 / fs));
        let tent = tent_geometry(&segment(s, 50, fs)).unwrap();
        assert!((tent.up_tangent.slope - 2.0).abs() < 1e-9);
        assert!((tent.down_tangent.slope + 1.0).abs() < 1e-9);
        // y = 2t and y = 1 - (t - 0.5) meet at t = 0.5, y = 1.
        assert!((tent.apex.0 - 0.5).abs() < 1e-9);
        assert!((tent.apex.1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn flat_segment_is_degenerate() {
        let seg = segment(vec![1.0; 9], 4, 100.0);
        assert!(matches!(extract_eog_features(&seg, false), Err(Error::DegenerateShape(_))));
    }

    #[test]
    fn short_or_off_center_segment_is_rejected() {
        let seg = segment(vec![0.0, 1.0, 0.0], 1, 100.0);
        assert!(matches!(extract_eog_features(&seg, false), Err(Error::InvalidSegment(_))));
        let seg = segment(vec![0.0, 1.0, 2.0, 1.0, 0.0, 0.0], 1, 100.0);
        assert!(matches!(extract_eog_features(&seg, false), Err(Error::InvalidSegment(_))));
    }

    #[test]
    fn energies_split_at_center() {
        let s = gaussian(51, 7.0);
        let total = trapezoid(&s, 0.01);
        let f = extract_eog_features(&segment(s, 25, 100.0), false).unwrap();
        assert!((f.closing_energy + f.opening_energy - total).abs() < 1e-12);
    }

    #[test]
    fn edge_flag_is_carried() {
        let mut seg = segment(gaussian(41, 5.0), 20, 100.0);
        seg.edge_truncated = true;
        assert!(extract_eog_features(&seg, true).unwrap().edge_truncated);
    }

    #[test]
    fn histogram_entropy_examples() {
        assert_eq!(histogram_entropy(&[2.0; 10], 10), 0.0);
        let uniform: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert!((histogram_entropy(&uniform, 10) - 10f64.log2()).abs() < 1e-12);
        assert!((histogram_entropy(&[0.0, 1.0], 10) - 1.0).abs() < 1e-12);
    }

    proptest::proptest! {
        #[test]
        fn normalized_features_ignore_scale_and_offset(
            sigma in 3.0f64..9.0,
            skew in 0.5f64..2.0,
            k in 0.01f64..100.0,
            off in -50.0f64..50.0,
        ) {
            let n = 61;
            let s: Vec<f64> = (0..n)
                .map(|i| {
                    let d = i as f64 - 30.0;
                    let w = if d < 0.0 { sigma } else { sigma * skew };
                    (-0.5 * (d / w).powi(2)).exp()
                })
                .collect();
            let scaled: Vec<f64> = s.iter().map(|x| k * x + off).collect();
            let a = extract_eog_features(&segment(s, 30, 100.0), true).unwrap();
            let b = extract_eog_features(&segment(scaled, 30, 100.0), true).unwrap();
            for ((name, x), (_, y)) in a.values().iter().zip(b.values()) {
                proptest::prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()), "{name}: {x} vs {y}");
            }
        }

        #[test]
        fn durations_and_ratios_in_range(sigma in 2.0f64..10.0, n in 21usize..81) {
            let s = gaussian(n, sigma);
            let c = n / 2;
            let f = extract_eog_features(&segment(s, c, 100.0), false).unwrap();
            proptest::prop_assert!(f.blink_duration > 0.0);
            for d in [f.closing_duration, f.closing_tent_duration, f.opening_tent_duration,
                      f.half_close_duration, f.full_close_duration, f.velocity_recovery_duration,
                      f.closing_tent_to_max_velocity, f.max_velocity_to_peak,
                      f.opening_acceleration_to_peak] {
                proptest::prop_assert!(d >= 0.0);
            }
            proptest::prop_assert!((0.0..=1.0).contains(&f.closing_tent_proportion));
            proptest::prop_assert!((0.0..=1.0).contains(&f.opening_tent_proportion));
            proptest::prop_assert!((0.0..=100.0).contains(&f.full_close_percentage));
            for e in [f.velocity_entropy, f.acceleration_entropy, f.signal_entropy] {
                proptest::prop_assert!(e >= 0.0);
            }
        }
    }
}
