//! Blink-shape features recomputed from first principles.

use crate::{finite_diff, hist_entropy, mean, pvar, trapz};

/// Catalog names in output order, Signal Height first.
pub const NAMES: [&str; 36] = [
    "Signal Height",
    "X-Axis Deviation",
    "Y-Axis Deviation",
    "Symmetry Ratio",
    "Closing Signal Range",
    "Opening Signal Range",
    "Closing Duration",
    "Closing Dynamics Ratio",
    "Blink Duration",
    "Closing Tent Duration",
    "Opening Tent Duration",
    "Closing Tent Duration by Proportion of Blink",
    "Opening Tent Duration by Proportion of Blink",
    "Blink Half-Close Duration",
    "Blink Full-Close Duration",
    "Full-Close Duration by Percentage of Blink",
    "Opening Acceleration to Peak Duration",
    "Velocity Recovery Duration",
    "Closing Tent Duration to Max Velocity",
    "Maximum Velocity to Peak Duration",
    "Slope of Closing Tent",
    "Slope of Opening Tent",
    "Slope at Closing Tent Maximum Acceleration",
    "Blink Phase Velocity Ratio",
    "Initial Blink Energy",
    "Closing Phase Energy",
    "Opening Phase Energy",
    "Closing Phase Slope Energy",
    "Closing Phase Velocity Energy",
    "Opening Phase Velocity Energy",
    "Signal Average",
    "Acceleration Standard Deviation",
    "Velocity Entropy",
    "Acceleration Entropy",
    "Signal Entropy",
    "Maximum Acceleration Velocity Ratio",
];

const ZERO_BAND: f64 = 0.05;
const BINS: usize = 10;
const INITIAL_FRACTION: f64 = 0.05;

/// Index in `range` whose value is within `tol` of the range maximum and
/// closest to `pivot`.
fn argmax_near(y: &[f64], lo: usize, hi: usize, pivot: usize, tol: f64) -> usize {
    let best = y[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut pick = None::<usize>;
    for i in lo..=hi {
        if y[i] >= best - tol && pick.is_none_or(|p| i.abs_diff(pivot) < p.abs_diff(pivot)) {
            pick = Some(i);
        }
    }
    pick.unwrap()
}

/// Fractional position where `y`, walked from `start` by `dir`, first drops
/// to `level` or below; linear between the bracketing samples.
fn drop_to(y: &[f64], start: usize, dir: isize, level: f64) -> Option<f64> {
    let mut i = start as isize;
    loop {
        let j = i + dir;
        if j < 0 || j as usize >= y.len() {
            return None;
        }
        let (a, b) = (y[i as usize], y[j as usize]);
        if b <= level {
            let t = if a > b { (a - level) / (a - b) } else { 0.0 };
            return Some(i as f64 + dir as f64 * t);
        }
        i = j;
    }
}

/// All features of a segment whose peak sits at `center`, as
/// `(name, value)` pairs in catalog order. Signal Height is left out when
/// `normalize` is set. `None` when the tangent slopes do not straddle zero.
pub fn features(slice: &[f64], center: usize, fs: f64, normalize: bool) -> Option<Vec<(&'static str, f64)>> {
    let s: Vec<f64> = if normalize {
        let lo = slice.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        slice.iter().map(|v| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 }).collect()
    } else {
        slice.to_vec()
    };
    let n = s.len();
    let last = n - 1;
    let c = center;
    let dt = 1.0 / fs;
    let v = finite_diff(&s, fs, 1);
    let a = finite_diff(&s, fs, 2);

    let vpeak = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let apeak = a.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let i_vmax = argmax_near(&v, 0, c, c, 1e-9 * vpeak);
    let neg_v: Vec<f64> = v.iter().map(|x| -x).collect();
    let i_vmin = argmax_near(&neg_v, c, last, c, 1e-9 * vpeak);
    let i_amax = argmax_near(&a, 0, c, c, 1e-9 * apeak);

    let band = ZERO_BAND * vpeak;
    let flat_lo = (0..c).rev().take_while(|&j| v[j].abs() < band).last().unwrap_or(c);
    let flat_hi = (c + 1..=last).take_while(|&j| v[j].abs() < band).last().unwrap_or(c);

    // Sub-sample edges of the in-band run: where |v| reaches the band on
    // the segment joining the run's end sample to its outside neighbour.
    let edge = |inner: usize, outer: usize| -> f64 {
        let (p, q) = (v[inner].abs(), v[outer].abs());
        if q > p {
            inner as f64 + (outer as f64 - inner as f64) * (band - p) / (q - p)
        } else {
            inner as f64
        }
    };
    let flat_lo_t = if flat_lo == 0 { 0.0 } else { edge(flat_lo, flat_lo - 1) };
    let flat_hi_t = if flat_hi == last { last as f64 } else { edge(flat_hi, flat_hi + 1) };

    let (m1, m2) = (v[i_vmax], v[i_vmin]);
    if !(m1 > 0.0 && m2 < 0.0) {
        return None;
    }
    let (t1, t2) = (i_vmax as f64 * dt, i_vmin as f64 * dt);
    let apex_t = (s[i_vmin] - s[i_vmax] + m1 * t1 - m2 * t2) / (m1 - m2);
    let apex_y = s[i_vmax] + m1 * (apex_t - t1);
    let x_dev = apex_t - c as f64 * dt;
    let y_dev = apex_y - s[c];

    let base = s[0].min(s[last]);
    let height = s[c] - base;
    let duration = last as f64 * dt;
    let symmetry = if y_dev.abs() > 1e-12 * height { x_dev / y_dev } else { 0.0 };
    let onset = (0..=i_vmax).find(|&j| v[j] >= band).unwrap_or(i_vmax);
    let half = base + height / 2.0;
    let half_l = drop_to(&s, c, -1, half).unwrap_or(0.0);
    let half_r = drop_to(&s, c, 1, half).unwrap_or(last as f64);
    let recovered = drop_to(&s, c, 1, s[i_vmax]).unwrap_or(last as f64);
    let zero = if m1 <= 0.0 {
        i_vmax as f64
    } else {
        drop_to(&v, i_vmax, 1, 0.0).unwrap_or(last as f64)
    };
    let full_close = (flat_hi_t - flat_lo_t) * dt;
    let init = ((INITIAL_FRACTION * n as f64).ceil() as usize).max(2).min(n);
    let open_speed = v[c..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    let open_acc = a[c..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut out = Vec::with_capacity(36);
    if !normalize {
        out.push(("Signal Height", height));
    }
    let rest = [
        x_dev,
        y_dev,
        symmetry,
        s[flat_lo] - s[0],
        s[flat_hi] - s[last],
        (c - i_vmax) as f64 * dt,
        m1 / height,
        duration,
        (i_vmax - onset) as f64 * dt,
        (last - c) as f64 * dt,
        i_vmax as f64 / last as f64,
        (last - c) as f64 / last as f64,
        (half_r - half_l) * dt,
        full_close,
        full_close / duration * 100.0,
        (flat_hi_t - i_amax as f64) * dt,
        (recovered - i_vmax as f64) * dt,
        i_vmax as f64 * dt,
        (zero - i_vmax as f64) * dt,
        if i_vmax > 0 { (s[i_vmax] - s[0]) / t1 } else { 0.0 },
        if i_vmin < last { (s[last] - s[i_vmin]) / (duration - t2) } else { 0.0 },
        v[i_amax],
        m1 / (-m2),
        trapz(&s[..init], dt),
        trapz(&s[..=c], dt),
        trapz(&s[c..], dt),
        trapz(&v[..=i_vmax], dt),
        trapz(&s[i_vmax..=c], dt),
        trapz(&s[c..=i_vmin], dt),
        mean(&s),
        pvar(&a).sqrt(),
        hist_entropy(&v, BINS),
        hist_entropy(&a, BINS),
        hist_entropy(&s, BINS),
        if open_speed > 0.0 { open_acc / open_speed } else { 0.0 },
    ];
    out.extend(NAMES[1..].iter().copied().zip(rest));
    Some(out)
}
