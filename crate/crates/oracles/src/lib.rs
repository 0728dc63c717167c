//! Deliberately naive reference implementations for cross-checking the
//! `blinkforge` library in tests. Nothing here is tuned for speed; each
//! routine follows its textbook definition as directly as possible and
//! shares no code with the library.
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod cull;
pub mod eda;
pub mod eog;
pub mod linalg;
pub mod peaks;
pub mod shapley;

/// `|a - b| <= tol * max(1, |a|, |b|)`: absolute near zero, relative for
/// large magnitudes.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

pub fn mean(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in x {
        s += v;
    }
    s / x.len() as f64
}

/// Population variance via the two-pass formula.
pub fn pvar(x: &[f64]) -> f64 {
    let m = mean(x);
    let mut s = 0.0;
    for v in x {
        s += (v - m).powi(2);
    }
    s / x.len() as f64
}

/// First (`order = 1`) or second derivative by finite differences.
/// Interior: centered stencils. Ends: second-order one-sided first
/// derivative; the second derivative reuses the neighbouring stencil.
pub fn finite_diff(x: &[f64], fs: f64, order: u8) -> Vec<f64> {
    let n = x.len();
    let at = |i: usize| -> f64 {
        match order {
            1 => {
                if i == 0 {
                    fs * (-1.5 * x[0] + 2.0 * x[1] - 0.5 * x[2])
                } else if i == n - 1 {
                    fs * (1.5 * x[n - 1] - 2.0 * x[n - 2] + 0.5 * x[n - 3])
                } else {
                    fs * (x[i + 1] - x[i - 1]) / 2.0
                }
            }
            _ => {
                let c = i.clamp(1, n - 2);
                fs * fs * (x[c - 1] - 2.0 * x[c] + x[c + 1])
            }
        }
    };
    (0..n).map(at).collect()
}

/// Trapezoid rule, one panel at a time.
pub fn trapz(y: &[f64], dt: f64) -> f64 {
    let mut s = 0.0;
    for i in 1..y.len() {
        s += 0.5 * (y[i - 1] + y[i]) * dt;
    }
    s
}

/// Shannon entropy (bits) of an equal-width histogram over `[min, max]`;
/// the maximum falls in the last bin.
pub fn hist_entropy(x: &[f64], bins: usize) -> f64 {
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        return 0.0;
    }
    let mut counts = vec![0u32; bins];
    for &v in x {
        let mut b = ((v - lo) / (hi - lo) * bins as f64).floor() as usize;
        if b >= bins {
            b = bins - 1;
        }
        counts[b] += 1;
    }
    let mut h = 0.0;
    for &k in &counts {
        if k > 0 {
            let p = k as f64 / x.len() as f64;
            h -= p * p.log2();
        }
    }
    h
}

/// Least-squares slope by the closed-form normal equation.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
