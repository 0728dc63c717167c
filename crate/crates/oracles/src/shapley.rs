//! Shapley values as average marginal contributions over all orderings.

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Absent features take their `background` value.
pub fn by_permutation(predict: impl Fn(&[f64]) -> f64, instance: &[f64], background: &[f64]) -> Vec<f64> {
    let n = instance.len();
    let perms = permutations(n);
    let mut phi = vec![0.0; n];
    for order in &perms {
        let mut x = background.to_vec();
        let mut before = predict(&x);
        for &i in order {
            x[i] = instance[i];
            let after = predict(&x);
            phi[i] += after - before;
            before = after;
        }
    }
    phi.iter().map(|v| v / perms.len() as f64).collect()
}
