use nalgebra::DMatrix;

use super::Recording;
use crate::error::{Error, Result};

/// Weights that evaluate, at offset 0, the least-squares polynomial of
/// degree `order` through samples at integer `offsets`.
fn center_weights(offsets: &[i64], order: usize) -> Vec<f64> {
    let order = order.min(offsets.len() - 1);
    // Scale the abscissa to [-1, 1]; the value at 0 is unaffected.
    let scale = offsets.iter().map(|o| o.unsigned_abs()).max().unwrap_or(1).max(1) as f64;
    let vander = DMatrix::from_fn(offsets.len(), order + 1, |r, c| {
        (offsets[r] as f64 / scale).powi(c as i32)
    });
    let pinv = vander
        .svd(true, true)
        .pseudo_inverse(1e-12)
        .expect("SVD with both factors computed");
    pinv.row(0).iter().copied().collect()
}

/// Savitzky-Golay smoothing of a plain slice.
///
/// Interior samples use the symmetric window. Within half a window of either
/// end the fit uses only the samples that exist, with the polynomial degree
/// lowered when the truncated window is too short to determine it.
pub fn savgol_smooth(x: &[f64], window: usize, polyorder: usize) -> Result<Vec<f64>> {
    if window.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Savitzky-Golay window must be odd, got {window}"
        )));
    }
    if polyorder >= window {
        return Err(Error::InvalidArgument(format!(
            "polyorder {polyorder} must be below the window length {window}"
        )));
    }
    if window > x.len() {
        return Err(Error::InvalidArgument(format!(
            "window {window} exceeds signal length {}",
            x.len()
        )));
    }
    let n = x.len();
    let half = window / 2;
    let mut out = vec![0.0; n];

    let interior_offsets: Vec<i64> = (-(half as i64)..=half as i64).collect();
    let weights = center_weights(&interior_offsets, polyorder);
    for i in half..n - half {
        out[i] = weights
            .iter()
            .zip(&x[i - half..=i + half])
            .map(|(w, v)| w * v)
            .sum();
    }

    for i in (0..half).chain(n - half..n) {
        let lo = i.saturating_sub(half);
        let hi = (i + half).min(n - 1);
        let offsets: Vec<i64> = (lo..=hi).map(|j| j as i64 - i as i64).collect();
        let w = center_weights(&offsets, polyorder);
        out[i] = w.iter().zip(&x[lo..=hi]).map(|(w, v)| w * v).sum();
    }
    Ok(out)
}

/// Savitzky-Golay smoothing of a recording.
pub fn savitzky_golay(rec: &Recording, window_samples: usize, polyorder: usize) -> Result<Recording> {
    rec.with_samples(savgol_smooth(rec.samples(), window_samples, polyorder)?)
}

/// Odd sample count nearest to `seconds` at `fs`, at least `min_len`.
pub fn window_for_seconds(seconds: f64, fs: f64, min_len: usize) -> usize {
    let raw = (seconds * fs).round().max(1.0) as usize;
    let odd = if raw.is_multiple_of(2) {
        // Of the two odd neighbours pick the one closer to the exact length.
        if seconds * fs >= raw as f64 { raw + 1 } else { raw - 1 }
    } else {
        raw
    };
    let min_odd = if min_len.is_multiple_of(2) { min_len + 1 } else { min_len };
    odd.max(min_odd).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[f64], t: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    #[test]
    fn rejects_even_or_oversized_windows() {
        let x = vec![0.0; 20];
        assert!(matches!(savgol_smooth(&x, 10, 3), Err(Error::InvalidArgument(_))));
        assert!(savgol_smooth(&x, 21, 3).is_err());
        assert!(savgol_smooth(&x, 5, 5).is_err());
    }

    #[test]
    fn reproduces_cubic_everywhere() {
        let coeffs = [0.3, -1.2, 0.05, 0.01];
        let x: Vec<f64> = (0..60).map(|i| poly(&coeffs, i as f64 * 0.5)).collect();
        let y = savgol_smooth(&x, 11, 3).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn constant_unchanged() {
        let y = savgol_smooth(&[2.5; 30], 7, 2).unwrap();
        assert!(y.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn window_rounding() {
        assert_eq!(window_for_seconds(0.15, 100.0, 5), 15);
        assert_eq!(window_for_seconds(0.16, 100.0, 5), 17);
        assert_eq!(window_for_seconds(0.15, 1000.0, 5), 151);
        assert_eq!(window_for_seconds(0.01, 100.0, 5), 5);
    }
}
