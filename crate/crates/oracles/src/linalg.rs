//! Dense solves by Gaussian elimination.

/// Solves `a x = b` with partial pivoting. `None` when a pivot vanishes.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Value at `t = 0` of the degree-`deg` least-squares polynomial through
/// `(t[i], y[i])`, from the normal equations. The degree drops to
/// `len - 1` when there are too few points.
pub fn poly_fit_at_zero(t: &[f64], y: &[f64], deg: usize) -> f64 {
    let deg = deg.min(t.len() - 1);
    let scale = t.iter().fold(1f64, |m, v| m.max(v.abs()));
    let m = deg + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (ti, yi) in t.iter().zip(y) {
        let u = ti / scale;
        for r in 0..m {
            aty[r] += u.powi(r as i32) * yi;
            for c in 0..m {
                ata[r][c] += u.powi((r + c) as i32);
            }
        }
    }
    solve(ata, aty).expect("distinct abscissae")[0]
}

/// Savitzky-Golay smoothing by an explicit fit in every window, truncated
/// at the ends.
pub fn savgol(x: &[f64], window: usize, deg: usize) -> Vec<f64> {
    let half = (window / 2) as isize;
    let n = x.len() as isize;
    (0..n)
        .map(|i| {
            let lo = (i - half).max(0);
            let hi = (i + half).min(n - 1);
            let t: Vec<f64> = (lo..=hi).map(|j| (j - i) as f64).collect();
            let y: Vec<f64> = (lo..=hi).map(|j| x[j as usize]).collect();
            poly_fit_at_zero(&t, &y, deg)
        })
        .collect()
}

/// Ridge regression with an unpenalized intercept, solved on the augmented
/// design `[X | 1]`. Returns `(weights, intercept)`.
pub fn ridge(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Option<(Vec<f64>, f64)> {
    let p = x[0].len();
    let m = p + 1;
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (row, yi) in x.iter().zip(y) {
        let aug: Vec<f64> = row.iter().copied().chain([1.0]).collect();
        for r in 0..m {
            aty[r] += aug[r] * yi;
            for c in 0..m {
                ata[r][c] += aug[r] * aug[c];
            }
        }
    }
    for (j, row) in ata.iter_mut().enumerate().take(p) {
        row[j] += lambda;
    }
    let beta = solve(ata, aty)?;
    Some((beta[..p].to_vec(), beta[p]))
}
