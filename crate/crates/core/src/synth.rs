//! Seeded synthetic EOG and EDA recordings with ground-truth event lists.
//!
//! Every generator is a pure function of its [`SynthSpec`]. Randomness comes
//! from xoshiro256++ seeded through SplitMix64, so outputs are identical
//! across platforms and runs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp, Normal};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::blink::PeakSegment;
use crate::error::{Error, Result};
use crate::signal::{Channel, Recording};

/// Mean blink rate over the reference recordings: 6792 blinks in 12103.14 s.
pub const BLINK_RATE_HZ: f64 = 6792.0 / 12103.14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Blink,
    Wire,
    Scr,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Blink => "blink",
            EventKind::Wire => "wire",
            EventKind::Scr => "scr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthEvent {
    pub kind: EventKind,
    /// Peak time for blinks, onset for SCRs, midpoint for wire bursts.
    pub time_s: f64,
    pub amplitude: f64,
    /// Full extent of a blink or wire burst; SCR rise scale.
    pub width_s: f64,
    /// Decay-to-rise duration ratio of a blink; ignored otherwise.
    #[serde(default = "default_skew")]
    pub skew: f64,
}

fn default_skew() -> f64 {
    1.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub seed: u64,
    #[serde(default = "default_rate")]
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    #[serde(default)]
    pub events: Vec<SynthEvent>,
    #[serde(default)]
    pub noise_sigma: f64,
    /// Constant level added everywhere (EOG) or starting tonic level (EDA).
    #[serde(default)]
    pub baseline: f64,
}

fn default_rate() -> f64 {
    100.0
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {}",
                self.sample_rate_hz
            )));
        }
        if !(self.duration_s.is_finite() && self.duration_s * self.sample_rate_hz >= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "duration {} s is too short",
                self.duration_s
            )));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "noise_sigma must be non-negative, got {}",
                self.noise_sigma
            )));
        }
        for (i, e) in self.events.iter().enumerate() {
            if !(e.width_s.is_finite() && e.width_s > 0.0) {
                return Err(Error::InvalidArgument(format!("event {i} has non-positive width")));
            }
            if !(0.0..=self.duration_s).contains(&e.time_s) {
                return Err(Error::InvalidArgument(format!(
                    "event {i} at {} s lies outside [0, {}]",
                    e.time_s, self.duration_s
                )));
            }
            if !(e.amplitude.is_finite() && e.skew.is_finite() && e.skew > 0.0) {
                return Err(Error::InvalidArgument(format!("event {i} has a bad amplitude or skew")));
            }
        }
        Ok(())
    }

    fn len(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round() as usize
    }

    fn rng(&self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::seed_from_u64(self.seed)
    }
}

/// An event as rendered, with its sample span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub kind: EventKind,
    /// Sample of the template maximum.
    pub center_index: usize,
    pub start_index: usize,
    pub end_index: usize,
}

/// Pairs of event indices whose spans come closer than the wider width.
pub fn overlapping_events(events: &[SynthEvent]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            let gap = (events[i].time_s - events[j].time_s).abs();
            if gap < events[i].width_s.max(events[j].width_s) {
                out.push((i, j));
            }
        }
    }
    out
}

fn warn_overlaps(events: &[SynthEvent]) {
    let pairs = overlapping_events(events);
    if !pairs.is_empty() {
        log::warn!(
            "{} event pairs overlap (first: {:?}); ground truth may merge peaks",
            pairs.len(),
            pairs[0]
        );
    }
}

/// Raised-cosine rise then a tapered exponential decay with a flat top.
/// `u` is time from the peak in seconds.
fn blink_shape(u: f64, rise: f64, fall: f64) -> f64 {
    if u < -rise || u > fall {
        0.0
    } else if u <= 0.0 {
        0.5 * (1.0 + (PI * u / rise).cos())
    } else {
        let x = u / fall;
        let tail = 4.0 * (-3.0f64).exp();
        ((-3.0 * x).exp() * (1.0 + 3.0 * x) - tail) / (1.0 - tail)
    }
}

fn hann(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        0.5 * (1.0 - (2.0 * PI * x).cos())
    } else {
        0.0
    }
}

/// Adds one blink; returns its ground truth.
fn render_blink(out: &mut [f64], fs: f64, e: &SynthEvent) -> GroundTruth {
    let rise = e.width_s / (1.0 + e.skew);
    let fall = e.width_s - rise;
    let start = ((e.time_s - rise) * fs).floor().max(0.0) as usize;
    let end = (((e.time_s + fall) * fs).ceil() as usize).min(out.len() - 1);
    for (i, v) in out.iter_mut().enumerate().take(end + 1).skip(start) {
        *v += e.amplitude * blink_shape(i as f64 / fs - e.time_s, rise, fall);
    }
    GroundTruth {
        kind: EventKind::Blink,
        center_index: ((e.time_s * fs).round() as usize).min(out.len() - 1),
        start_index: start,
        end_index: end,
    }
}

/// Adds one wire burst: two to four overlapping bumps of mixed sign plus a
/// windowed random walk. Consumes randomness from `rng`.
fn render_wire(out: &mut [f64], fs: f64, e: &SynthEvent, rng: &mut Xoshiro256PlusPlus) -> GroundTruth {
    let t0 = e.time_s - e.width_s / 2.0;
    let start = (t0 * fs).floor().max(0.0) as usize;
    let end = (((t0 + e.width_s) * fs).ceil() as usize).min(out.len() - 1);
    let span = end - start + 1;
    let mut burst = vec![0.0; span];

    let bumps = rng.random_range(2..=4);
    for b in 0..bumps {
        let w = e.width_s * rng.random_range(0.15..0.5);
        let c = t0 + rng.random_range(0.0..1.0) * (e.width_s - w);
        let sign = if b == 0 || rng.random_bool(0.7) { 1.0 } else { -1.0 };
        let a = sign * e.amplitude * rng.random_range(0.4..1.0);
        for (k, v) in burst.iter_mut().enumerate() {
            let t = (start + k) as f64 / fs;
            *v += a * hann((t - c) / w);
        }
    }

    let step = Normal::new(0.0, 1.0).expect("unit normal");
    let mut walk: Vec<f64> = step
        .sample_iter(&mut *rng)
        .take(span)
        .scan(0.0, |acc, d: f64| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let peak = walk.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    for (k, w) in walk.iter_mut().enumerate() {
        *w *= 0.35 * e.amplitude / peak * hann(k as f64 / (span - 1).max(1) as f64);
    }
    for (k, v) in burst.iter().enumerate() {
        out[start + k] += v + walk[k];
    }

    let center = burst
        .iter()
        .zip(&walk)
        .enumerate()
        .max_by(|a, b| (a.1 .0 + a.1 .1).total_cmp(&(b.1 .0 + b.1 .1)))
        .map_or(start, |(k, _)| start + k);
    GroundTruth {
        kind: EventKind::Wire,
        center_index: center,
        start_index: start,
        end_index: end,
    }
}

fn add_noise(out: &mut [f64], sigma: f64, rng: &mut Xoshiro256PlusPlus) {
    if sigma > 0.0 {
        let noise = Normal::new(0.0, sigma).expect("positive sigma");
        for v in out.iter_mut() {
            *v += noise.sample(rng);
        }
    }
}

/// EOG recording with every blink and wire event of `spec`.
pub fn synth_eog_session(spec: &SynthSpec) -> Result<(Recording, Vec<GroundTruth>)> {
    spec.validate()?;
    if let Some(e) = spec.events.iter().find(|e| e.kind == EventKind::Scr) {
        return Err(Error::InvalidArgument(format!(
            "SCR event at {} s in an EOG session",
            e.time_s
        )));
    }
    warn_overlaps(&spec.events);
    let fs = spec.sample_rate_hz;
    let mut rng = spec.rng();
    let mut out = vec![spec.baseline; spec.len()];
    let truth = spec
        .events
        .iter()
        .map(|e| match e.kind {
            EventKind::Blink => render_blink(&mut out, fs, e),
            _ => render_wire(&mut out, fs, e, &mut rng),
        })
        .collect();
    add_noise(&mut out, spec.noise_sigma, &mut rng);
    Ok((Recording::new(fs, out, Channel::Eog)?, truth))
}

fn only(spec: &SynthSpec, kind: EventKind) -> Result<()> {
    match spec.events.iter().find(|e| e.kind != kind) {
        Some(e) => Err(Error::InvalidArgument(format!(
            "expected only {} events, found {} at {} s",
            kind.as_str(),
            e.kind.as_str(),
            e.time_s
        ))),
        None => Ok(()),
    }
}

pub fn synth_blink_session(spec: &SynthSpec) -> Result<(Recording, Vec<GroundTruth>)> {
    only(spec, EventKind::Blink)?;
    synth_eog_session(spec)
}

pub fn synth_wire_session(spec: &SynthSpec) -> Result<(Recording, Vec<GroundTruth>)> {
    only(spec, EventKind::Wire)?;
    synth_eog_session(spec)
}

/// Peak-normalized bi-exponential response starting at `t = 0`, with rise
/// scale `0.4 * width` and decay scale `3 * width`.
fn scr_shape(t: f64, width: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let (tr, td) = (0.4 * width, 3.0 * width);
    let t_peak = (td / tr).ln() * tr * td / (td - tr);
    let peak = (-t_peak / td).exp() - (-t_peak / tr).exp();
    ((-t / td).exp() - (-t / tr).exp()) / peak
}

/// EDA recording: tonic level with a slow drift, SCR events, and noise.
pub fn synth_eda_session(spec: &SynthSpec) -> Result<Recording> {
    spec.validate()?;
    only(spec, EventKind::Scr)?;
    let fs = spec.sample_rate_hz;
    let mut rng = spec.rng();
    let drift_phase = rng.random_range(0.0..2.0 * PI);
    let mut out: Vec<f64> = (0..spec.len())
        .map(|i| {
            let t = i as f64 / fs;
            spec.baseline + 0.2 * (2.0 * PI * 0.005 * t + drift_phase).sin()
        })
        .collect();
    for e in &spec.events {
        for (i, v) in out.iter_mut().enumerate() {
            *v += e.amplitude * scr_shape(i as f64 / fs - e.time_s, e.width_s);
        }
    }
    add_noise(&mut out, spec.noise_sigma, &mut rng);
    Recording::new(fs, out, Channel::Eda)
}

/// Random event parameters for [`plan_events`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanParams {
    pub kind: EventKind,
    pub rate_hz: f64,
    pub amplitude: (f64, f64),
    pub width_s: (f64, f64),
    pub skew: (f64, f64),
    /// Dead time added after each event.
    pub min_gap_s: f64,
}

impl PlanParams {
    pub fn blinks() -> Self {
        Self {
            kind: EventKind::Blink,
            rate_hz: BLINK_RATE_HZ,
            amplitude: (0.3, 1.0),
            width_s: (0.1, 0.4),
            skew: (1.2, 3.0),
            min_gap_s: 0.0,
        }
    }

    pub fn wires() -> Self {
        Self {
            kind: EventKind::Wire,
            rate_hz: 0.4,
            amplitude: (0.3, 1.0),
            width_s: (0.3, 0.8),
            skew: (1.0, 1.0),
            min_gap_s: 0.0,
        }
    }

    pub fn scrs() -> Self {
        Self {
            kind: EventKind::Scr,
            rate_hz: 0.05,
            amplitude: (0.2, 0.8),
            width_s: (0.8, 1.2),
            skew: (1.0, 1.0),
            min_gap_s: 5.0,
        }
    }
}

fn uniform(rng: &mut Xoshiro256PlusPlus, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Poisson arrivals at `rate_hz` (plus dead time) over `duration_s`, with
/// parameters drawn uniformly from the given ranges. Event times keep one
/// maximum width clear of both ends.
pub fn plan_events(seed: u64, duration_s: f64, p: &PlanParams) -> Result<Vec<SynthEvent>> {
    if !(p.rate_hz > 0.0 && p.rate_hz.is_finite()) {
        return Err(Error::InvalidArgument(format!("event rate must be positive, got {}", p.rate_hz)));
    }
    let gaps = Exp::new(p.rate_hz).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let margin = p.width_s.1;
    let mut t = margin;
    let mut events = Vec::new();
    loop {
        t += gaps.sample(&mut rng);
        if t > duration_s - margin {
            return Ok(events);
        }
        events.push(SynthEvent {
            kind: p.kind,
            time_s: t,
            amplitude: uniform(&mut rng, p.amplitude),
            width_s: uniform(&mut rng, p.width_s),
            skew: uniform(&mut rng, p.skew),
        });
        t += p.min_gap_s;
    }
}

/// Kind of the event whose span contains the segment center, if any.
pub fn match_segment(seg: &PeakSegment, truth: &[GroundTruth]) -> Option<EventKind> {
    let c = seg.candidate.center_index;
    truth
        .iter()
        .filter(|g| g.start_index <= c && c <= g.end_index)
        .min_by_key(|g| g.center_index.abs_diff(c))
        .map(|g| g.kind)
}
