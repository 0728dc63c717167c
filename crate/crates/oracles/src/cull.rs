//! Bound searches by direct enumeration.

/// Evenly spaced grid point `i` of `bins` over `[min, max]`; point `bins`
/// is the maximum itself.
pub fn grid_point(min: f64, max: f64, bins: usize, i: usize) -> f64 {
    if i == bins {
        max
    } else {
        min + i as f64 * (max - min) / bins as f64
    }
}

fn finite_range(col: &[f64]) -> (f64, f64) {
    let f: Vec<f64> = col.iter().copied().filter(|v| v.is_finite()).collect();
    (
        f.iter().cloned().fold(f64::INFINITY, f64::min),
        f.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    )
}

/// `(tp, fp, tn, fn)` of "every feature inside its bounds" against labels.
pub fn confusion(cols: &[Vec<f64>], bounds: &[(f64, f64)], labels: &[bool]) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for (r, &label) in labels.iter().enumerate() {
        let inside = cols.iter().zip(bounds).all(|(col, &(lo, hi))| col[r] >= lo && col[r] <= hi);
        match (inside, label) {
            (true, true) => c.0 += 1,
            (true, false) => c.1 += 1,
            (false, false) => c.2 += 1,
            (false, true) => c.3 += 1,
        }
    }
    c
}

/// Two-phase scan: best lower bound with the upper at the maximum, then
/// best upper bound at that lower bound, earliest position winning ties.
/// Returns `(lower, upper, (tp, fp, tn, fn))`.
pub fn individual(col: &[f64], labels: &[bool], bins: usize) -> (f64, f64, (usize, usize, usize, usize)) {
    let (min, max) = finite_range(col);
    let cols = [col.to_vec()];
    let correct = |lo: f64, hi: f64| {
        let c = confusion(&cols, &[(lo, hi)], labels);
        c.0 + c.2
    };
    if min == max {
        return (min, max, confusion(&cols, &[(min, max)], labels));
    }
    let lo_scores: Vec<usize> = (0..=bins).map(|j| correct(grid_point(min, max, bins, j), max)).collect();
    let best_lo = (0..=bins).find(|&j| lo_scores[j] == *lo_scores.iter().max().unwrap()).unwrap();
    let lower = grid_point(min, max, bins, best_lo);
    let hi_scores: Vec<usize> = (0..=bins - best_lo)
        .map(|k| correct(lower, grid_point(min, max, bins, bins - k)))
        .collect();
    let best_hi = (0..hi_scores.len()).find(|&k| hi_scores[k] == *hi_scores.iter().max().unwrap()).unwrap();
    let upper = grid_point(min, max, bins, bins - best_hi);
    (lower, upper, confusion(&cols, &[(lower, upper)], labels))
}

/// Best joint configuration over every `(lower steps, upper steps)` per
/// feature with `lower + upper <= bins`: most correct rows, then highest
/// F1, then fewest steps, then lexicographically smallest step vector.
/// Returns the step vector, the bounds, and the confusion counts.
pub fn exhaustive(
    cols: &[Vec<f64>],
    labels: &[bool],
    bins: usize,
) -> (Vec<(usize, usize)>, Vec<(f64, f64)>, (usize, usize, usize, usize)) {
    let ranges: Vec<(f64, f64)> = cols.iter().map(|c| finite_range(c)).collect();
    let per_feature: Vec<(usize, usize)> = (0..=bins)
        .flat_map(|lo| (0..=bins - lo).map(move |hi| (lo, hi)))
        .collect();
    let nf = cols.len();
    let total = per_feature.len().pow(nf as u32);

    let mut best: Option<(Vec<(usize, usize)>, (usize, usize, usize, usize))> = None;
    for code in 0..total {
        let mut rem = code;
        let mut steps = vec![(0, 0); nf];
        for f in (0..nf).rev() {
            steps[f] = per_feature[rem % per_feature.len()];
            rem /= per_feature.len();
        }
        let bounds: Vec<(f64, f64)> = steps
            .iter()
            .zip(&ranges)
            .map(|(&(lo, hi), &(a, b))| (grid_point(a, b, bins, lo), grid_point(a, b, bins, bins - hi)))
            .collect();
        let c = confusion(cols, &bounds, labels);
        let better = match &best {
            None => true,
            Some((bs, bc)) => {
                let (cor, bcor) = (c.0 + c.2, bc.0 + bc.2);
                // F1 = 2tp / (2tp + fp + fn), compared by cross-multiplying.
                let f1 = (2 * c.0) as u128 * (2 * bc.0 + bc.1 + bc.3).max(1) as u128;
                let bf1 = (2 * bc.0) as u128 * (2 * c.0 + c.1 + c.3).max(1) as u128;
                let st: usize = steps.iter().map(|s| s.0 + s.1).sum();
                let bst: usize = bs.iter().map(|s| s.0 + s.1).sum();
                (cor, f1, std::cmp::Reverse(st), std::cmp::Reverse(steps.clone()))
                    > (bcor, bf1, std::cmp::Reverse(bst), std::cmp::Reverse(bs.clone()))
            }
        };
        if better {
            best = Some((steps, c));
        }
    }
    let (steps, c) = best.unwrap();
    let bounds = steps
        .iter()
        .zip(&ranges)
        .map(|(&(lo, hi), &(a, b))| (grid_point(a, b, bins, lo), grid_point(a, b, bins, bins - hi)))
        .collect();
    (steps, bounds, c)
}
