//! EDA window features from their textbook formulas.

use std::f64::consts::PI;

use crate::{finite_diff, mean, pvar, slope};

pub const NAMES: [&str; 15] = [
    "Signal Mean",
    "Signal Standard Deviation",
    "Signal Range",
    "Velocity Mean",
    "Velocity Standard Deviation",
    "Petrosian Fractal Dimension",
    "Higuchi Fractal Dimension",
    "DFA",
    "Katz Fractal Dimension",
    "Hjorth Activity",
    "Hjorth Mobility",
    "Hjorth Complexity",
    "Variance of Rate of Change",
    "Spectral Entropy",
    "Permutation Entropy",
];

fn diff(x: &[f64]) -> Vec<f64> {
    (1..x.len()).map(|i| x[i] - x[i - 1]).collect()
}

pub fn petrosian(x: &[f64]) -> f64 {
    let d = diff(x);
    let mut changes = 0usize;
    for i in 1..d.len() {
        if (d[i - 1] > 0.0 && d[i] < 0.0) || (d[i - 1] < 0.0 && d[i] > 0.0) {
            changes += 1;
        }
    }
    let n = x.len() as f64;
    n.log10() / (n.log10() + (n / (n + 0.4 * changes as f64)).log10())
}

/// Higuchi dimension as the slope of `ln L(k)` against `ln(1/k)`. `None`
/// when some but not all curve lengths vanish; 1.0 when all do.
pub fn higuchi(x: &[f64], kmax: usize) -> Option<f64> {
    let n = x.len();
    let mut lk = Vec::new();
    for k in 1..=kmax {
        let mut sum = 0.0;
        for m in 1..=k {
            // Textbook indexing: samples m, m + k, ..., 1-based.
            let count = (n - m) / k;
            let mut len = 0.0;
            for i in 1..=count {
                len += (x[m - 1 + i * k] - x[m - 1 + (i - 1) * k]).abs();
            }
            let norm = (n - 1) as f64 / (count * k) as f64;
            sum += len * norm / k as f64;
        }
        lk.push(sum / k as f64);
    }
    if lk.iter().all(|&l| l == 0.0) {
        return Some(1.0);
    }
    if lk.iter().any(|&l| l <= 0.0) {
        return None;
    }
    let inv: Vec<f64> = (1..=kmax).map(|k| (1.0 / k as f64).ln()).collect();
    let ln_l: Vec<f64> = lk.iter().map(|l| l.ln()).collect();
    Some(slope(&inv, &ln_l))
}

pub fn katz(x: &[f64]) -> f64 {
    let steps = (x.len() - 1) as f64;
    let mut path = 0.0;
    for i in 1..x.len() {
        path += (1.0 + (x[i] - x[i - 1]).powi(2)).sqrt();
    }
    let mut far: f64 = 0.0;
    for (i, v) in x.iter().enumerate() {
        far = far.max(((i * i) as f64 + (v - x[0]).powi(2)).sqrt());
    }
    if path == 0.0 {
        return 1.0;
    }
    steps.log10() / (steps.log10() + (far / path).log10())
}

/// Geometric box sizes from 4 to `n / 4`, rounded, consecutive repeats
/// removed.
pub fn dfa_scales(n: usize, points: usize) -> Vec<usize> {
    let top = (n / 4) as f64;
    let mut out: Vec<usize> = Vec::new();
    for i in 0..points {
        let s = (4.0 * (top / 4.0).powf(i as f64 / (points - 1) as f64)).round() as usize;
        if out.last() != Some(&s) {
            out.push(s);
        }
    }
    out
}

/// DFA exponent with per-box least-squares line removal. `None` on
/// too-short input or zero fluctuation.
pub fn dfa(x: &[f64], scales: &[usize]) -> Option<f64> {
    if scales.len() < 4 || x.len() < 4 * scales.iter().max()? {
        return None;
    }
    let m = mean(x);
    let mut y = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    for v in x {
        acc += v - m;
        y.push(acc);
    }
    let mut ls = Vec::new();
    let mut lf = Vec::new();
    for &s in scales {
        let boxes = y.len() / s;
        let mut resid = 0.0;
        for b in 0..boxes {
            let seg = &y[b * s..(b + 1) * s];
            let t: Vec<f64> = (0..s).map(|j| j as f64).collect();
            let k = slope(&t, seg);
            let c = mean(seg) - k * mean(&t);
            for (j, v) in seg.iter().enumerate() {
                resid += (v - (c + k * j as f64)).powi(2);
            }
        }
        let f = (resid / (boxes * s) as f64).sqrt();
        if f <= 0.0 {
            return None;
        }
        ls.push((s as f64).ln());
        lf.push(f.ln());
    }
    Some(slope(&ls, &lf))
}

/// `(activity, mobility, complexity)`; mobility and complexity are `None`
/// for a constant signal or constant first difference.
pub fn hjorth(x: &[f64]) -> (f64, Option<f64>, Option<f64>) {
    let d1 = diff(x);
    let d2 = diff(&d1);
    let (a, b, c) = (pvar(x), pvar(&d1), pvar(&d2));
    if a <= 0.0 || b <= 0.0 {
        return (a, None, None);
    }
    let mob = (b / a).sqrt();
    (a, Some(mob), Some((c / b).sqrt() / mob))
}

/// Normalized entropy of `|X_k|^2` for `k = 1..=n/2` from a direct DFT.
pub fn spectral_entropy(x: &[f64]) -> f64 {
    let n = x.len();
    if x.iter().all(|&v| v == x[0]) {
        return 0.0;
    }
    let half = n / 2;
    let mut p = Vec::with_capacity(half);
    for k in 1..=half {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, v) in x.iter().enumerate() {
            let ang = -2.0 * PI * ((k * j) % n) as f64 / n as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        p.push(re * re + im * im);
    }
    let total: f64 = p.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for q in p {
        if q > 0.0 {
            h -= (q / total) * (q / total).log2();
        }
    }
    h / (half as f64).log2()
}

/// Ordinal-pattern entropy. A pattern is the tuple of ranks, with equal
/// values ranked by position; normalized by `log2(order!)`.
pub fn permutation_entropy(x: &[f64], order: usize, delay: usize) -> f64 {
    let windows = x.len() - (order - 1) * delay;
    let mut seen: Vec<(Vec<usize>, usize)> = Vec::new();
    for start in 0..windows {
        let vals: Vec<f64> = (0..order).map(|k| x[start + k * delay]).collect();
        let ranks: Vec<usize> = (0..order)
            .map(|i| (0..order).filter(|&j| vals[j] < vals[i] || (vals[j] == vals[i] && j < i)).count())
            .collect();
        match seen.iter_mut().find(|(r, _)| *r == ranks) {
            Some(e) => e.1 += 1,
            None => seen.push((ranks, 1)),
        }
    }
    let mut h = 0.0;
    for (_, k) in seen {
        let p = k as f64 / windows as f64;
        h -= p * p.log2();
    }
    let fact: f64 = (1..=order).map(|k| k as f64).product();
    h / fact.log2()
}

/// The 15 window features with default settings (Higuchi kmax 10, ten DFA
/// scales, permutation order 3 and delay 1), in catalog order.
pub fn features(x: &[f64], fs: f64) -> Vec<(&'static str, Option<f64>)> {
    let vel = finite_diff(x, fs, 1);
    let (act, mob, cpx) = hjorth(x);
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let vals = [
        Some(mean(x)),
        Some(pvar(x).sqrt()),
        Some(hi - lo),
        Some(mean(&vel)),
        Some(pvar(&vel).sqrt()),
        Some(petrosian(x)),
        higuchi(x, 10),
        dfa(x, &dfa_scales(x.len(), 10)),
        Some(katz(x)),
        Some(act),
        mob,
        cpx,
        Some(pvar(&vel)),
        Some(spectral_entropy(x)),
        Some(permutation_entropy(x, 3, 1)),
    ];
    NAMES.iter().copied().zip(vals).collect()
}
