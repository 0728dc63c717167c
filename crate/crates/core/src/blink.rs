//! Peak candidates in filtered EOG, the blink-likeness prefilter, and
//! baseline segmentation of each peak.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Recording;

/// Thresholds for peak detection, prefiltering, and baseline search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    /// Minimum prominence, volts.
    pub prominence_min: f64,
    /// Minimum width at half prominence, seconds.
    pub width_min_s: f64,
    /// Maximum width at half prominence for a blink-like peak, seconds.
    pub width_max_s: f64,
    /// Minimum peak value for a blink-like peak, volts.
    pub height_min: f64,
    /// Extent of the baseline minimum search on each side, seconds.
    pub baseline_window_s: f64,
    /// Initial stride of the baseline minimum search, seconds. Rounded to
    /// at least one sample.
    pub baseline_stride_s: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        Self {
            prominence_min: 0.1,
            width_min_s: 0.04,
            width_max_s: 0.5,
            height_min: 0.05,
            baseline_window_s: 0.5,
            baseline_stride_s: 0.01,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.prominence_min,
            self.width_min_s,
            self.width_max_s,
            self.height_min,
            self.baseline_window_s,
            self.baseline_stride_s,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "search parameters must all be positive: {self:?}"
            )));
        }
        if self.width_min_s >= self.width_max_s {
            return Err(Error::InvalidArgument(format!(
                "width_min_s {} must be below width_max_s {}",
                self.width_min_s, self.width_max_s
            )));
        }
        Ok(())
    }
}

/// A local maximum that cleared the prominence and width thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakCandidate {
    pub center_index: usize,
    /// Signal value at the center, volts.
    pub height: f64,
    pub prominence: f64,
    /// Width at half prominence, seconds.
    pub width_s: f64,
}

/// A candidate bounded by its left and right baseline minima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakSegment {
    pub candidate: PeakCandidate,
    pub left_base_index: usize,
    pub right_base_index: usize,
    /// Samples on `[left_base_index, right_base_index]`.
    pub slice: Vec<f64>,
    pub sample_rate_hz: f64,
    /// Set when a baseline search ran into either end of the recording.
    pub edge_truncated: bool,
}

impl PeakSegment {
    /// Center position relative to the start of `slice`.
    pub fn center_offset(&self) -> usize {
        self.candidate.center_index - self.left_base_index
    }

    pub fn duration_s(&self) -> f64 {
        (self.right_base_index - self.left_base_index) as f64 / self.sample_rate_hz
    }
}

/// Indices of local maxima, leftmost sample of any flat top. Endpoints are
/// never maxima.
pub fn local_maxima(x: &[f64]) -> Vec<usize> {
    let n = x.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i] > x[i - 1] {
            let mut j = i;
            while j + 1 < n && x[j + 1] == x[i] {
                j += 1;
            }
            if j + 1 < n && x[j + 1] < x[i] {
                peaks.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Prominence of the peak at `peak` with the indices of its contour bases.
///
/// Each side extends until a strictly higher sample or the end of the
/// signal; the lower of the two side minima's maximum is the reference.
pub fn prominence(x: &[f64], peak: usize) -> (f64, usize, usize) {
    let top = x[peak];

    let mut left_min = top;
    let mut left_base = peak;
    let mut i = peak;
    loop {
        if x[i] > top {
            break;
        }
        if x[i] < left_min {
            left_min = x[i];
            left_base = i;
        }
        if i == 0 {
            break;
        }
        i -= 1;
    }

    let mut right_min = top;
    let mut right_base = peak;
    for (j, &v) in x.iter().enumerate().skip(peak) {
        if v > top {
            break;
        }
        if v < right_min {
            right_min = v;
            right_base = j;
        }
    }

    (top - left_min.max(right_min), left_base, right_base)
}

/// Width in samples at `rel_height` of the prominence below the peak, with
/// linear interpolation of both crossings inside the contour bases.
pub fn peak_width(x: &[f64], peak: usize, prom: f64, bases: (usize, usize), rel_height: f64) -> f64 {
    let level = x[peak] - prom * rel_height;

    let mut i = peak;
    while bases.0 < i && level < x[i] {
        i -= 1;
    }
    let mut left = i as f64;
    if x[i] < level {
        left += (level - x[i]) / (x[i + 1] - x[i]);
    }

    let mut i = peak;
    while i < bases.1 && level < x[i] {
        i += 1;
    }
    let mut right = i as f64;
    if x[i] < level {
        right -= (level - x[i]) / (x[i - 1] - x[i]);
    }

    right - left
}

/// Local maxima whose prominence is at least `prominence_min` and whose
/// half-prominence width is at least `width_min_s`, in index order.
pub fn detect_peaks(rec: &Recording, params: &SearchParams) -> Result<Vec<PeakCandidate>> {
    let x = rec.samples();
    if x.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "peak detection needs at least 3 samples, got {}",
            x.len()
        )));
    }
    params.validate()?;
    let fs = rec.sample_rate_hz();

    Ok(local_maxima(x)
        .into_iter()
        .filter_map(|peak| {
            let (prom, lb, rb) = prominence(x, peak);
            if prom < params.prominence_min {
                return None;
            }
            let width_s = peak_width(x, peak, prom, (lb, rb), 0.5) / fs;
            (width_s >= params.width_min_s).then_some(PeakCandidate {
                center_index: peak,
                height: x[peak],
                prominence: prom,
                width_s,
            })
        })
        .collect())
}

/// Keeps candidates no wider than `width_max_s` and at least `height_min`
/// high, preserving order.
pub fn blink_prefilter(cands: &[PeakCandidate], params: &SearchParams) -> Vec<PeakCandidate> {
    cands
        .iter()
        .filter(|c| passes_prefilter(c, params))
        .copied()
        .collect()
}

pub fn passes_prefilter(c: &PeakCandidate, params: &SearchParams) -> bool {
    c.width_s <= params.width_max_s && c.height >= params.height_min
}

/// Recursive coarse-to-fine search for a low point reachable from `p`.
///
/// `w` is the signed stride in samples (its sign is the search direction)
/// and `m` the number of samples the search may cover. The walk strides
/// while values keep falling; on the first non-falling sample it restarts
/// from the lowest point so far with a quarter stride, and when the budget
/// runs out it continues from the lowest point with half the stride. Once
/// the stride drops below one sample or the budget is spent, the lowest of
/// the three samples around the current point is taken.
///
/// A quartered stride only looks ahead, so the recursion can stop just past
/// a minimum it stepped over. The result is therefore settled by walking
/// downhill sample by sample, without leaving the span `p ..= p + sign(w) * m`.
/// A walk that ends on the first or last sample of the signal falls back
/// to the interior local minimum nearest `p` in the span, if there is one.
pub fn find_nearby_minimum(x: &[f64], p: usize, w: isize, m: usize) -> Result<usize> {
    Ok(find_nearby_minimum_traced(x, p, w, m)?.0)
}

/// [`find_nearby_minimum`] that also reports how many recursive calls the
/// search made.
pub fn find_nearby_minimum_traced(x: &[f64], p: usize, w: isize, m: usize) -> Result<(usize, usize)> {
    let (i, depth) = recursive_minimum(x, p, w, m)?;
    let reach = m.min(x.len());
    let span = if w > 0 {
        p..=(p + reach).min(x.len() - 1)
    } else {
        p.saturating_sub(reach)..=p
    };
    let settled = settle(x, i, span.clone());
    if settled != 0 && settled + 1 != x.len() {
        return Ok((settled, depth));
    }
    // A signal end is no baseline when the span holds an interior minimum:
    // take the one nearest the start instead.
    let interior = |&j: &usize| j > 0 && j + 1 < x.len() && x[j - 1] >= x[j] && x[j] <= x[j + 1];
    let nearest = if w > 0 {
        span.into_iter().find(interior)
    } else {
        span.rev().find(interior)
    };
    Ok((nearest.unwrap_or(settled), depth))
}

/// The stride recursion alone, without the final settling walk.
pub fn recursive_minimum(x: &[f64], p: usize, w: isize, m: usize) -> Result<(usize, usize)> {
    if p >= x.len() {
        return Err(Error::InvalidArgument(format!(
            "start index {p} outside signal of length {}",
            x.len()
        )));
    }
    if w == 0 {
        return Err(Error::InvalidArgument("search window must be non-zero".into()));
    }
    let budget = i64::try_from(m).unwrap_or(i64::MAX);
    Ok(nearby_minimum(x, p, w, budget, 0))
}

fn nearby_minimum(x: &[f64], p: usize, w: isize, m: i64, depth: usize) -> (usize, usize) {
    let n = x.len();
    if w.unsigned_abs() < 1 || m <= 0 {
        let lo = p.saturating_sub(1);
        let hi = (p + 2).min(n);
        let local = argmin_first(&x[lo..hi]);
        return (lo + local, depth);
    }

    let d = w.signum();
    let p_signed = p as isize;
    // Exclusive end of the stride walk, kept inside the signal.
    let end = p_signed.saturating_add(d.saturating_mul(m as isize));
    let end = if d > 0 { end.min(n as isize) } else { end.max(-1) };

    let mut best = p;
    let mut best_value = x[p];
    let mut i = p_signed;
    while (d > 0 && i < end) || (d < 0 && i > end) {
        let iu = i as usize;
        if x[iu] >= best_value && iu != p {
            let restart = i - w;
            let spent = (restart - p_signed).unsigned_abs() as i64;
            return nearby_minimum(x, restart as usize, w / 4, (m - spent).max(0), depth + 1);
        }
        best = iu;
        best_value = x[iu];
        i += w;
    }
    nearby_minimum(x, best, w / 2, m - 1, depth + 1)
}

/// Steepest single-sample descent from `i`, confined to `span`.
fn settle(x: &[f64], mut i: usize, span: std::ops::RangeInclusive<usize>) -> usize {
    loop {
        let left = (i > *span.start()).then(|| i - 1);
        let right = (i < *span.end()).then(|| i + 1);
        let next = [left, right]
            .into_iter()
            .flatten()
            .filter(|&j| x[j] < x[i])
            .min_by(|&a, &b| x[a].total_cmp(&x[b]));
        match next {
            Some(j) => i = j,
            None => return i,
        }
    }
}

fn argmin_first(s: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in s.iter().enumerate() {
        if *v < s[best] {
            best = i;
        }
    }
    best
}

/// Bounds a candidate by the nearest baseline minima on each side.
///
/// Both searches start at the peak (the right one at the end of a flat top)
/// and may cover `baseline_window_s`. A base that lands on the first or last
/// sample marks the segment as edge-truncated.
pub fn segment_peak(rec: &Recording, cand: &PeakCandidate, params: &SearchParams) -> Result<PeakSegment> {
    params.validate()?;
    let x = rec.samples();
    let n = x.len();
    let c = cand.center_index;
    if c == 0 || c + 1 >= n {
        return Err(Error::InvalidSegment(format!(
            "peak at index {c} has no samples on one side (length {n})"
        )));
    }
    let budget = rec.seconds_to_samples(params.baseline_window_s).max(1);
    let stride = rec.seconds_to_samples(params.baseline_stride_s).max(1) as isize;

    let mut top_end = c;
    while top_end + 1 < n && x[top_end + 1] == x[c] {
        top_end += 1;
    }

    let mut left = find_nearby_minimum(x, c, -stride, budget)?;
    if left >= c {
        left = descend(x, c, -1);
    }
    let mut right = find_nearby_minimum(x, top_end, stride, budget)?;
    if right <= top_end {
        right = descend(x, top_end, 1).max(top_end + 1).min(n - 1);
    }

    Ok(PeakSegment {
        candidate: *cand,
        left_base_index: left,
        right_base_index: right,
        slice: x[left..=right].to_vec(),
        sample_rate_hz: rec.sample_rate_hz(),
        edge_truncated: left == 0 || right == n - 1,
    })
}

/// One step past `from` in direction `d`, then downhill while values keep
/// falling. Used only when the stride search settles on the wrong side of
/// the peak.
fn descend(x: &[f64], from: usize, d: isize) -> usize {
    let mut i = (from as isize + d).clamp(0, x.len() as isize - 1) as usize;
    loop {
        let j = i as isize + d;
        if j < 0 || j >= x.len() as isize || x[j as usize] >= x[i] {
            return i;
        }
        i = j as usize;
    }
}

/// detect → prefilter → segment over a whole recording.
pub fn detect_blinks(rec: &Recording, params: &SearchParams) -> Result<Vec<PeakSegment>> {
    let cands = detect_peaks(rec, params)?;
    blink_prefilter(&cands, params)
        .iter()
        .map(|c| segment_peak(rec, c, params))
        .collect()
}

/// Segments every detected candidate, without the blink prefilter.
pub fn segment_all(rec: &Recording, params: &SearchParams) -> Result<Vec<PeakSegment>> {
    detect_peaks(rec, params)?
        .iter()
        .map(|c| segment_peak(rec, c, params))
        .collect()
}
