//! Interval culling classifiers over feature tables and the two searches
//! that fit their bounds.
//!
//! A row is predicted to be a blink when every configured feature lies in
//! its inclusive `[lower, upper]` interval. Both searches work on a grid of
//! `bins + 1` evenly spaced values spanning each feature's observed range,
//! and describe a bound pair by how many grid steps each end has been moved
//! inward.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Blink,
    Artifact,
}

impl Label {
    pub fn is_blink(self) -> bool {
        self == Label::Blink
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Blink => "blink",
            Label::Artifact => "artifact",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "blink" => Ok(Label::Blink),
            "artifact" => Ok(Label::Artifact),
            other => Err(Error::InvalidInput(format!(
                "label must be `blink` or `artifact`, got `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub id: String,
    /// One value per table feature, in table order. NaN marks a missing
    /// value, which never satisfies a bound.
    pub values: Vec<f64>,
    pub label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    feature_names: Vec<String>,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn new(feature_names: Vec<String>, rows: Vec<FeatureRow>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = feature_names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::InvalidInput(format!("duplicate feature `{dup}`")));
        }
        if let Some(r) = rows.iter().find(|r| r.values.len() != feature_names.len()) {
            return Err(Error::InvalidInput(format!(
                "row `{}` has {} values for {} features",
                r.id,
                r.values.len(),
                feature_names.len()
            )));
        }
        Ok(Self { feature_names, rows })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Config(format!("unknown feature `{name}`")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.index_of(name)?;
        Ok(self.rows.iter().map(|r| r.values[i]).collect())
    }

    /// `true` for blink rows. Fails if any row is unlabeled.
    pub fn labels(&self) -> Result<Vec<bool>> {
        self.rows
            .iter()
            .map(|r| {
                r.label
                    .map(Label::is_blink)
                    .ok_or_else(|| Error::InvalidInput(format!("row `{}` has no label", r.id)))
            })
            .collect()
    }

    /// Rows whose predicted flag is set, in order.
    pub fn filter(&self, keep: &[bool]) -> Self {
        Self {
            feature_names: self.feature_names.clone(),
            rows: self
                .rows
                .iter()
                .zip(keep)
                .filter(|(_, k)| **k)
                .map(|(r, _)| r.clone())
                .collect(),
        }
    }
}

/// Per-feature inclusive bounds. Serialized as `{name: [lower, upper]}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CullConfig {
    pub bounds: BTreeMap<String, (f64, f64)>,
}

impl CullConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in &self.bounds {
            if lo.is_nan() || hi.is_nan() || lo > hi {
                return Err(Error::Config(format!(
                    "bounds for `{name}` must satisfy lower <= upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub accuracy: f64,
    pub f1: f64,
}

impl EvalReport {
    pub fn from_counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        let total = tp + fp + tn + fn_;
        let accuracy = if total == 0 { 0.0 } else { (tp + tn) as f64 / total as f64 };
        let denom = 2 * tp + fp + fn_;
        let f1 = if denom == 0 { 0.0 } else { (2 * tp) as f64 / denom as f64 };
        Self {
            tp,
            fp,
            tn,
            fn_,
            accuracy,
            f1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Blink predictions for every row.
pub fn apply_bounds(table: &FeatureTable, cfg: &CullConfig) -> Result<Vec<bool>> {
    cfg.validate()?;
    let checks: Vec<(usize, f64, f64)> = cfg
        .bounds
        .iter()
        .map(|(name, &(lo, hi))| Ok((table.index_of(name)?, lo, hi)))
        .collect::<Result<_>>()?;
    Ok(table
        .rows
        .iter()
        .map(|r| checks.iter().all(|&(i, lo, hi)| lo <= r.values[i] && r.values[i] <= hi))
        .collect())
}

/// Confusion counts with blink as the positive class.
pub fn evaluate(predictions: &[bool], labels: &[bool]) -> Result<EvalReport> {
    if predictions.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    Ok(EvalReport::from_counts(tp, fp, tn, fn_))
}

/// `bins + 1` evenly spaced values over the finite range of a column; the
/// last point is exactly the maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Grid {
    min: f64,
    max: f64,
    bins: usize,
}

impl Grid {
    fn over(values: &[f64], bins: usize, name: &str) -> Result<Self> {
        let (min, max) = values
            .iter()
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        if min > max {
            return Err(Error::InvalidInput(format!("feature `{name}` has no finite values")));
        }
        Ok(Self { min, max, bins })
    }

    fn value(&self, i: usize) -> f64 {
        if i >= self.bins {
            self.max
        } else {
            self.min + i as f64 * (self.max - self.min) / self.bins as f64
        }
    }

    /// Bounds after raising the lower end `lo_steps` and dropping the upper
    /// end `hi_steps`.
    fn bounds(&self, lo_steps: usize, hi_steps: usize) -> (f64, f64) {
        (self.value(lo_steps), self.value(self.bins - hi_steps))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualResult {
    pub feature: String,
    pub lower: f64,
    pub upper: f64,
    pub report: EvalReport,
}

/// Two-phase greedy bound scan on one feature.
///
/// With the upper bound at the maximum, the lower bound is raised one grid
/// step at a time and the most accurate position kept (earliest on ties).
/// The upper bound is then lowered from the maximum toward the chosen
/// lower bound the same way. A constant feature keeps its full range.
pub fn individual_search(table: &FeatureTable, feature: &str, bins: usize) -> Result<IndividualResult> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    if table.is_empty() {
        return Err(Error::InvalidInput("feature table is empty".into()));
    }
    let column = table.column(feature)?;
    let labels = table.labels()?;
    let grid = Grid::over(&column, bins, feature)?;

    let score = |lo: f64, hi: f64| {
        let pred: Vec<bool> = column.iter().map(|&v| lo <= v && v <= hi).collect();
        evaluate(&pred, &labels).expect("equal lengths")
    };

    if grid.min == grid.max {
        return Ok(IndividualResult {
            feature: feature.to_string(),
            lower: grid.min,
            upper: grid.max,
            report: score(grid.min, grid.max),
        });
    }

    let mut best_lo = 0;
    let mut best_correct = 0;
    for j in 0..=bins {
        let (lo, hi) = grid.bounds(j, 0);
        let r = score(lo, hi);
        if j == 0 || r.tp + r.tn > best_correct {
            best_lo = j;
            best_correct = r.tp + r.tn;
        }
    }
    let mut best_hi = 0;
    let mut best_correct = 0;
    for k in 0..=bins - best_lo {
        let (lo, hi) = grid.bounds(best_lo, k);
        let r = score(lo, hi);
        if k == 0 || r.tp + r.tn > best_correct {
            best_hi = k;
            best_correct = r.tp + r.tn;
        }
    }
    let (lower, upper) = grid.bounds(best_lo, best_hi);
    Ok(IndividualResult {
        feature: feature.to_string(),
        lower,
        upper,
        report: score(lower, upper),
    })
}

/// Features a single breadth-first search may combine.
pub const MAX_BFS_FEATURES: usize = 8;
/// Grid resolution limit of the breadth-first search.
pub const MAX_BFS_BINS: usize = 255;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfsResult {
    pub config: CullConfig,
    pub report: EvalReport,
    /// `(lower steps, upper steps)` per feature, in the requested order.
    pub steps: Vec<(usize, usize)>,
    /// Grid nodes evaluated.
    pub nodes_evaluated: u64,
}

/// Packed node coordinates: 8 bits each of lower and upper steps per
/// feature, first feature in the most significant bits, so numeric order
/// is lexicographic coordinate order.
type Node = u128;

fn node_get(node: Node, f: usize, nf: usize) -> (usize, usize) {
    let shift = 16 * (nf - 1 - f);
    let lo = ((node >> (shift + 8)) & 0xff) as usize;
    let hi = ((node >> shift) & 0xff) as usize;
    (lo, hi)
}

fn node_bump(node: Node, f: usize, nf: usize, upper: bool) -> Node {
    let shift = 16 * (nf - 1 - f) + if upper { 0 } else { 8 };
    node + (1u128 << shift)
}

/// Score of one grid node; ordered best first by [`Scored::rank`].
#[derive(Debug, Clone, Copy)]
struct Scored {
    node: Node,
    tp: u64,
    fp: u64,
    steps: u32,
}

struct Counts {
    positives: u64,
    negatives: u64,
}

impl Scored {
    fn correct(&self, c: &Counts) -> u64 {
        self.tp + c.negatives - self.fp
    }

    /// F1 as the exact fraction `2tp / (tp + fp + positives)`.
    fn f1(&self, c: &Counts) -> (u64, u64) {
        (2 * self.tp, self.tp + self.fp + c.positives)
    }

    /// `Less` means `self` is preferred: higher accuracy, then higher F1,
    /// then fewer steps, then lexicographically smaller coordinates.
    fn rank(&self, other: &Self, c: &Counts) -> Ordering {
        other
            .correct(c)
            .cmp(&self.correct(c))
            .then_with(|| frac_cmp(other.f1(c), self.f1(c)))
            .then_with(|| self.steps.cmp(&other.steps))
            .then_with(|| self.node.cmp(&other.node))
    }
}

/// Compares `a.0 / a.1` with `b.0 / b.1`, treating `x / 0` as zero.
fn frac_cmp(a: (u64, u64), b: (u64, u64)) -> Ordering {
    let a = if a.1 == 0 { (0, 1) } else { a };
    let b = if b.1 == 0 { (0, 1) } else { b };
    (a.0 as u128 * b.1 as u128).cmp(&(b.0 as u128 * a.1 as u128))
}

struct Bitset(Vec<u64>);

impl Bitset {
    fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for i in (0..n).filter(|&i| f(i)) {
            words[i / 64] |= 1 << (i % 64);
        }
        Bitset(words)
    }
}

/// Exhaustive breadth-first search over joint bound grids.
///
/// The root keeps every feature's full range. Each move tightens one end
/// of one feature by a grid step; nodes are grouped by total step count
/// and each level is deduplicated before expansion. The best node under
/// (accuracy, F1, fewer steps, lexicographic coordinates) is returned.
///
/// A node's subtree is skipped only when no descendant can match the
/// incumbent: tightening never adds predicted blinks, so accuracy is at
/// most `(tp + negatives) / n` and F1 at most `2tp / (tp + positives)`.
/// The result is therefore identical to evaluating every grid node.
pub fn bfs_search(table: &FeatureTable, features: &[&str], bins: usize) -> Result<BfsResult> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("bins must be at least 2, got {bins}")));
    }
    if bins > MAX_BFS_BINS {
        return Err(Error::InvalidArgument(format!(
            "bins must be at most {MAX_BFS_BINS}, got {bins}"
        )));
    }
    if features.is_empty() || features.len() > MAX_BFS_FEATURES {
        return Err(Error::InvalidArgument(format!(
            "between 1 and {MAX_BFS_FEATURES} features are supported, got {}",
            features.len()
        )));
    }
    if table.is_empty() {
        return Err(Error::InvalidInput("feature table is empty".into()));
    }
    let labels = table.labels()?;
    let n = table.len();
    let nf = features.len();
    let positives = Bitset::from_fn(n, |i| labels[i]);
    let counts = Counts {
        positives: labels.iter().filter(|&&l| l).count() as u64,
        negatives: labels.iter().filter(|&&l| !l).count() as u64,
    };

    // interval[f][lo * (bins + 1) + hi]: rows inside feature f's bounds.
    let mut grids = Vec::with_capacity(nf);
    let mut interval: Vec<Vec<Bitset>> = Vec::with_capacity(nf);
    for name in features {
        let col = table.column(name)?;
        let grid = Grid::over(&col, bins, name)?;
        let mut masks = Vec::with_capacity((bins + 1) * (bins + 1));
        for lo in 0..=bins {
            for hi in 0..=bins {
                masks.push(if lo + hi <= bins {
                    let (a, b) = grid.bounds(lo, hi);
                    Bitset::from_fn(n, |i| a <= col[i] && col[i] <= b)
                } else {
                    Bitset(Vec::new())
                });
            }
        }
        grids.push(grid);
        interval.push(masks);
    }

    let words = n.div_ceil(64);
    let score = |node: Node| -> Scored {
        let mut tp = 0u64;
        let mut predicted = 0u64;
        let parts: Vec<&Bitset> = (0..nf)
            .map(|f| {
                let (lo, hi) = node_get(node, f, nf);
                &interval[f][lo * (bins + 1) + hi]
            })
            .collect();
        for w in 0..words {
            let m = parts.iter().fold(u64::MAX, |acc, b| acc & b.0[w]);
            predicted += m.count_ones() as u64;
            tp += (m & positives.0[w]).count_ones() as u64;
        }
        let steps = (0..nf)
            .map(|f| {
                let (lo, hi) = node_get(node, f, nf);
                (lo + hi) as u32
            })
            .sum();
        Scored {
            node,
            tp,
            fp: predicted - tp,
            steps,
        }
    };

    let mut level: Vec<Node> = vec![0];
    let mut best: Option<Scored> = None;
    let mut evaluated = 0u64;
    while !level.is_empty() {
        evaluated += level.len() as u64;
        let scored: Vec<Scored> = level.par_iter().map(|&node| score(node)).collect();
        if let Some(top) = scored.iter().min_by(|a, b| a.rank(b, &counts)) {
            if best.is_none_or(|b| top.rank(&b, &counts) == Ordering::Less) {
                best = Some(*top);
            }
        }
        let incumbent = best.expect("root evaluated");

        let mut next: Vec<Node> = scored
            .par_iter()
            .filter(|s| {
                let acc_cap = s.tp + counts.negatives;
                match acc_cap.cmp(&incumbent.correct(&counts)) {
                    Ordering::Less => false,
                    Ordering::Greater => true,
                    Ordering::Equal => match frac_cmp((2 * s.tp, s.tp + counts.positives), incumbent.f1(&counts)) {
                        Ordering::Less => false,
                        Ordering::Greater => true,
                        Ordering::Equal => s.steps < incumbent.steps,
                    },
                }
            })
            .flat_map_iter(|s| {
                let node = s.node;
                (0..nf).flat_map(move |f| {
                    let (lo, hi) = node_get(node, f, nf);
                    let open = lo + hi < bins;
                    [
                        open.then(|| node_bump(node, f, nf, false)),
                        open.then(|| node_bump(node, f, nf, true)),
                    ]
                    .into_iter()
                    .flatten()
                })
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }

    let best = best.expect("root evaluated");
    let steps: Vec<(usize, usize)> = (0..nf).map(|f| node_get(best.node, f, nf)).collect();
    let config = CullConfig {
        bounds: features
            .iter()
            .zip(&grids)
            .zip(&steps)
            .map(|((name, g), &(lo, hi))| (name.to_string(), g.bounds(lo, hi)))
            .collect(),
    };
    let report = EvalReport::from_counts(
        best.tp as usize,
        best.fp as usize,
        (counts.negatives - best.fp) as usize,
        (counts.positives - best.tp) as usize,
    );
    Ok(BfsResult {
        config,
        report,
        steps,
        nodes_evaluated: evaluated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub features: Vec<String>,
    pub config: CullConfig,
    pub report: EvalReport,
}

/// Runs [`bfs_search`] on every `k`-subset of `candidates` and ranks the
/// results by accuracy, then F1, then the feature list.
pub fn combination_sweep(
    table: &FeatureTable,
    k: usize,
    candidates: &[&str],
    bins: usize,
) -> Result<Vec<SweepEntry>> {
    if k == 0 || k > candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "subset size {k} must be between 1 and the {} candidates",
            candidates.len()
        )));
    }
    for c in candidates {
        table.index_of(c)?;
    }
    let mut entries: Vec<SweepEntry> = subsets(candidates.len(), k)
        .into_par_iter()
        .map(|idx| {
            let names: Vec<&str> = idx.iter().map(|&i| candidates[i]).collect();
            let r = bfs_search(table, &names, bins)?;
            Ok(SweepEntry {
                features: names.iter().map(|s| s.to_string()).collect(),
                config: r.config,
                report: r.report,
            })
        })
        .collect::<Result<_>>()?;
    entries.sort_by(|a, b| {
        (b.report.tp + b.report.tn)
            .cmp(&(a.report.tp + a.report.tn))
            .then_with(|| {
                frac_cmp(
                    (2 * b.report.tp as u64, (2 * b.report.tp + b.report.fp + b.report.fn_) as u64),
                    (2 * a.report.tp as u64, (2 * a.report.tp + a.report.fp + a.report.fn_) as u64),
                )
            })
            .then_with(|| a.features.cmp(&b.features))
    });
    Ok(entries)
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(names: &[&str], rows: &[(&[f64], bool)]) -> FeatureTable {
        FeatureTable::new(
            names.iter().map(|s| s.to_string()).collect(),
            rows.iter()
                .enumerate()
                .map(|(i, (v, l))| FeatureRow {
                    id: i.to_string(),
                    values: v.to_vec(),
                    label: Some(if *l { Label::Blink } else { Label::Artifact }),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_config_keeps_everything() {
        let t = table(&["a"], &[(&[1.0], true), (&[5.0], false)]);
        assert_eq!(apply_bounds(&t, &CullConfig::default()).unwrap(), vec![true, true]);
    }

    #[test]
    fn single_bound_example() {
        let t = table(&["Blink Duration"], &[(&[0.25], true), (&[0.8], false)]);
        let mut cfg = CullConfig::default();
        cfg.bounds.insert("Blink Duration".into(), (0.1, 0.4));
        assert_eq!(apply_bounds(&t, &cfg).unwrap(), vec![true, false]);
        cfg.bounds.insert("Nope".into(), (0.0, 1.0));
        assert!(matches!(apply_bounds(&t, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn inverted_bounds_rejected() {
        let mut cfg = CullConfig::default();
        cfg.bounds.insert("a".into(), (2.0, 1.0));
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn evaluate_examples() {
        let r = evaluate(&[true, false], &[true, false]).unwrap();
        assert_eq!((r.accuracy, r.f1), (1.0, 1.0));
        let r = evaluate(&[false, false], &[true, false]).unwrap();
        assert_eq!(r.f1, 0.0);
        assert!(evaluate(&[true], &[true, false]).is_err());
        let r = EvalReport::from_counts(0, 0, 3, 0);
        assert_eq!(r.f1, 0.0);
        assert_eq!(r.accuracy, 1.0);
    }

    #[test]
    fn individual_isolates_separable_band() {
        let mut rows: Vec<(Vec<f64>, bool)> = Vec::new();
        for i in 0..20 {
            rows.push((vec![0.1 + 0.3 * i as f64 / 19.0], true));
        }
        for i in 0..10 {
            rows.push((vec![0.6 + i as f64 * 0.05], false));
        }
        rows.push((vec![0.0], false));
        let rows: Vec<(&[f64], bool)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let t = table(&["x"], &rows);
        let r = individual_search(&t, "x", 50).unwrap();
        assert_eq!(r.report.accuracy, 1.0);
        assert!(r.lower > 0.0 && r.lower <= 0.1);
        assert!(r.upper >= 0.4 && r.upper < 0.6);
    }

    #[test]
    fn individual_constant_and_single_class() {
        let t = table(&["x"], &[(&[1.0], true), (&[1.0], false), (&[1.0], true)]);
        let r = individual_search(&t, "x", 10).unwrap();
        assert_eq!((r.lower, r.upper), (1.0, 1.0));
        assert!((r.report.accuracy - 2.0 / 3.0).abs() < 1e-15);

        let t = table(&["x"], &[(&[1.0], true), (&[2.0], true), (&[3.0], true)]);
        let r = individual_search(&t, "x", 10).unwrap();
        assert_eq!((r.lower, r.upper), (1.0, 3.0));
        assert_eq!(r.report.accuracy, 1.0);
    }

    #[test]
    fn bfs_rejects_coarse_grid() {
        let t = table(&["x"], &[(&[1.0], true), (&[2.0], false)]);
        assert!(matches!(bfs_search(&t, &["x"], 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn bfs_separates_two_features() {
        let t = table(
            &["a", "b"],
            &[
                (&[1.0, 1.0], true),
                (&[2.0, 2.0], true),
                (&[9.0, 1.0], false),
                (&[1.0, 9.0], false),
                (&[0.0, 0.0], false),
                (&[10.0, 10.0], false),
            ],
        );
        let r = bfs_search(&t, &["a", "b"], 10).unwrap();
        assert_eq!(r.report.accuracy, 1.0);
        let kept = apply_bounds(&t, &r.config).unwrap();
        assert_eq!(kept, vec![true, true, false, false, false, false]);
    }

    #[test]
    fn packed_nodes_roundtrip() {
        let mut n: Node = 0;
        n = node_bump(n, 1, 3, true);
        n = node_bump(n, 1, 3, true);
        n = node_bump(n, 0, 3, false);
        assert_eq!(node_get(n, 0, 3), (1, 0));
        assert_eq!(node_get(n, 1, 3), (0, 2));
        assert_eq!(node_get(n, 2, 3), (0, 0));
    }

    #[test]
    fn subsets_enumerate_combinations() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(5, 5), vec![vec![0, 1, 2, 3, 4]]);
        assert_eq!(subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }

    proptest::proptest! {
        #[test]
        fn tightening_never_adds_blinks(
            vals in proptest::collection::vec(-10.0f64..10.0, 1..40),
            lo in -10.0f64..0.0,
            hi in 0.0f64..10.0,
            dlo in 0.0f64..5.0,
            dhi in 0.0f64..5.0,
        ) {
            let rows: Vec<(Vec<f64>, bool)> = vals.iter().map(|v| (vec![*v], true)).collect();
            let rows: Vec<(&[f64], bool)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
            let t = table(&["x"], &rows);
            let mut wide = CullConfig::default();
            wide.bounds.insert("x".into(), (lo, hi));
            let mut narrow = CullConfig::default();
            let nlo = (lo + dlo).min(hi);
            narrow.bounds.insert("x".into(), (nlo, (hi - dhi).max(nlo)));
            let a = apply_bounds(&t, &wide).unwrap();
            let b = apply_bounds(&t, &narrow).unwrap();
            for (x, y) in a.iter().zip(&b) {
                proptest::prop_assert!(!(*y && !*x));
            }
        }

        #[test]
        fn report_identities(tp in 0usize..500, fp in 0usize..500, tn in 0usize..500, fn_ in 0usize..500) {
            let r = EvalReport::from_counts(tp, fp, tn, fn_);
            let total = tp + fp + tn + fn_;
            if total > 0 {
                proptest::prop_assert_eq!(r.accuracy, (tp + tn) as f64 / total as f64);
            }
            proptest::prop_assert!((0.0..=1.0).contains(&r.f1));
        }
    }
}
