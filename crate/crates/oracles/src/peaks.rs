//! Peak finding by brute force over runs of equal samples.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub prominence: f64,
    /// Width at half prominence, in samples.
    pub width: f64,
}

/// Maximal runs of equal values as `(first index, last index)`.
fn runs(x: &[f64]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for (i, v) in x.iter().enumerate() {
        match out.last_mut() {
            Some(r) if x[r.0] == *v => r.1 = i,
            _ => out.push((i, i)),
        }
    }
    out
}

/// First sample of every run that is strictly above both neighbouring runs.
pub fn local_maxima(x: &[f64]) -> Vec<usize> {
    let r = runs(x);
    (1..r.len().saturating_sub(1))
        .filter(|&k| x[r[k - 1].0] < x[r[k].0] && x[r[k + 1].0] < x[r[k].0])
        .map(|k| r[k].0)
        .collect()
}

/// Prominence by definition: on each side, the lowest sample before the
/// first strictly higher one (or the end); the higher of those two minima
/// is the reference. Also returns each side's minimum position nearest the
/// peak.
pub fn prominence(x: &[f64], p: usize) -> (f64, usize, usize) {
    let left_end = (0..p).rev().find(|&j| x[j] > x[p]).map_or(0, |j| j + 1);
    let right_end = (p + 1..x.len()).find(|&j| x[j] > x[p]).map_or(x.len() - 1, |j| j - 1);
    let left_min = x[left_end..=p].iter().cloned().fold(f64::INFINITY, f64::min);
    let right_min = x[p..=right_end].iter().cloned().fold(f64::INFINITY, f64::min);
    let lb = (left_end..=p).rev().find(|&j| x[j] == left_min).unwrap();
    let rb = (p..=right_end).find(|&j| x[j] == right_min).unwrap();
    (x[p] - left_min.max(right_min), lb, rb)
}

/// Interpolated width at `x[p] - prom / 2`, searched inside the bases.
pub fn half_width(x: &[f64], p: usize, prom: f64, lb: usize, rb: usize) -> f64 {
    let level = x[p] - prom / 2.0;
    let li = (lb..=p).rev().find(|&j| x[j] <= level).unwrap_or(lb);
    let ri = (p..=rb).find(|&j| x[j] <= level).unwrap_or(rb);
    let left = if x[li] < level {
        li as f64 + (level - x[li]) / (x[li + 1] - x[li])
    } else {
        li as f64
    };
    let right = if x[ri] < level {
        ri as f64 - (level - x[ri]) / (x[ri - 1] - x[ri])
    } else {
        ri as f64
    };
    right - left
}

/// Every local maximum with prominence and width at least the given
/// minimums (width in samples).
pub fn detect(x: &[f64], prominence_min: f64, width_min: f64) -> Vec<Peak> {
    local_maxima(x)
        .into_iter()
        .filter_map(|p| {
            let (prom, lb, rb) = prominence(x, p);
            if prom < prominence_min {
                return None;
            }
            let width = half_width(x, p, prom, lb, rb);
            (width >= width_min).then_some(Peak {
                index: p,
                prominence: prom,
                width,
            })
        })
        .collect()
}

/// Walks from `p` one sample at a time in direction `dir` while the next
/// sample is strictly lower, for at most `budget` steps.
pub fn nearest_minimum(x: &[f64], p: usize, dir: isize, budget: usize) -> usize {
    let mut i = p;
    for _ in 0..budget {
        let j = i as isize + dir;
        if j < 0 || j as usize >= x.len() || x[j as usize] >= x[i] {
            break;
        }
        i = j as usize;
    }
    i
}
