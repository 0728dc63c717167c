use std::f64::consts::PI;

use blinkforge::eda::{
    decompose, dfa_alpha, dfa_scales, extract_eda_features, higuchi_fd, hjorth, permutation_entropy, petrosian_fd,
    spectral_entropy, EdaOptions, EdaWindow,
};
use blinkforge::signal::{Channel, Recording};
use blinkforge_oracles::{close, eda as oracle, mean};
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

fn white(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn walk(n: usize, seed: u64) -> Vec<f64> {
    white(n, seed)
        .into_iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// Rise with a 0.5 s time constant, decay with 3 s, peak scaled to 1.
fn scr(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let raw = |t: f64| (-t / 3.0).exp() - (-t / 0.5).exp();
    let t_peak = (3.0f64 / 0.5).ln() * 3.0 * 0.5 / (3.0 - 0.5);
    raw(t) / raw(t_peak)
}

#[test]
fn petrosian_white_noise() {
    let x = white(1000, 1);
    let got = petrosian_fd(&x).unwrap();
    assert!((got - oracle::petrosian(&x)).abs() < 1e-12);
    assert!((got - 1.03).abs() < 0.01, "{got}");
}

#[test]
fn higuchi_noise_and_sine() {
    let x = white(1000, 2);
    let got = higuchi_fd(&x, 10).unwrap();
    assert!((got - 2.0).abs() <= 0.15, "{got}");
    assert!(close(got, oracle::higuchi(&x, 10).unwrap(), 1e-9));

    let sine: Vec<f64> = (0..1000).map(|i| (2.0 * PI * i as f64 / 100.0).sin()).collect();
    let got = higuchi_fd(&sine, 10).unwrap();
    assert!((1.0..=1.3).contains(&got), "{got}");
    assert!(close(got, oracle::higuchi(&sine, 10).unwrap(), 1e-9));
}

#[test]
fn dfa_exponents() {
    let scales = dfa_scales(4096, 10);
    assert_eq!(scales, oracle::dfa_scales(4096, 10));
    let noise = white(4096, 3);
    let a = dfa_alpha(&noise, &scales).unwrap();
    assert!((a - 0.5).abs() <= 0.1, "white noise {a}");
    assert!(close(a, oracle::dfa(&noise, &scales).unwrap(), 1e-9));
    assert_eq!(a.to_bits(), dfa_alpha(&noise, &scales).unwrap().to_bits());

    let w = walk(4096, 4);
    let a = dfa_alpha(&w, &scales).unwrap();
    assert!((a - 1.5).abs() <= 0.1, "random walk {a}");
    assert!(close(a, oracle::dfa(&w, &scales).unwrap(), 1e-9));
}

#[test]
fn hjorth_white_noise() {
    let x = white(2000, 5);
    let h = hjorth(&x).unwrap();
    let (a, m, c) = oracle::hjorth(&x);
    assert!(close(h.activity, a, 1e-12));
    assert!(close(h.mobility, m.unwrap(), 1e-12));
    assert!(close(h.complexity, c.unwrap(), 1e-12));
    assert!(h.complexity > 1.0);
}

#[test]
fn spectral_entropy_white_noise() {
    let x = white(1024, 6);
    let got = spectral_entropy(&x, 100.0).unwrap();
    assert!(got > 0.9, "{got}");
    assert!(close(got, oracle::spectral_entropy(&x), 1e-9));
}

#[test]
fn permutation_entropy_uniform() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(7);
    let x: Vec<f64> = (0..10_000).map(|_| rng.random::<f64>()).collect();
    let got = permutation_entropy(&x, 3, 1).unwrap();
    assert!(got > 0.99, "{got}");
    assert!(close(got, oracle::permutation_entropy(&x, 3, 1), 1e-12));
}

fn assert_window_matches(samples: Vec<f64>, fs: f64) {
    let got = extract_eda_features(&EdaWindow { start_index: 0, samples: samples.clone() }, fs).unwrap();
    let want = oracle::features(&samples, fs);
    let got = got.values();
    assert_eq!(got.len(), want.len());
    for ((gn, gv), (wn, wv)) in got.iter().zip(&want) {
        assert_eq!(gn, wn);
        match (gv, wv) {
            (Some(g), Some(w)) => assert!(close(*g, *w, 1e-9), "{gn}: {g} vs {w}"),
            (None, None) => {}
            _ => panic!("{gn}: {gv:?} vs {wv:?}"),
        }
    }
}

#[test]
fn scr_bump_window_matches_reference() {
    // One second at 100 Hz starting at the bump onset.
    let fs = 100.0;
    assert_window_matches((0..100).map(|i| 2.0 + 0.5 * scr(i as f64 / fs)).collect(), fs);
}

#[test]
fn random_windows_match_reference() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(8);
    for k in 0..30 {
        let fs = 100.0;
        let x: Vec<f64> = match k % 3 {
            0 => white(100, k),
            1 => walk(100, k),
            _ => (0..100)
                .map(|i| {
                    let t = i as f64 / fs;
                    rng.random_range(0.0..3.0) * 0.01 + scr(t - rng.random_range(0.0..0.5))
                })
                .collect(),
        };
        assert_window_matches(x, fs);
    }
}

#[test]
fn constant_window_has_undefined_hjorth_ratios() {
    assert_window_matches(vec![3.0; 100], 100.0);
}

#[test]
fn phasic_recovers_bumps_over_drift() {
    let fs = 20.0;
    let n = (300.0 * fs) as usize;
    let onsets = [20.0, 70.0, 130.0, 180.0, 240.0];
    let bumps: Vec<f64> = (0..n)
        .map(|i| onsets.iter().map(|&o| 0.5 * scr(i as f64 / fs - o)).sum())
        .collect();
    let x: Vec<f64> = (0..n)
        .map(|i| 5.0 + (2.0 * PI * 0.005 * i as f64 / fs).sin() + bumps[i])
        .collect();
    let rec = Recording::new(fs, x, Channel::Eda).unwrap();
    let parts = decompose(&rec, &EdaOptions::default()).unwrap();

    // Each bump, from 2 s before onset to 12 s after, against the template.
    for &o in &onsets {
        let (a, b) = (((o - 2.0) * fs) as usize, ((o + 12.0) * fs) as usize);
        let r = pearson(&parts.phasic.samples()[a..b], &bumps[a..b]);
        assert!(r > 0.9, "phasic vs template at {o} s: {r}");
    }
    let drift: Vec<f64> = (0..n).map(|i| (2.0 * PI * 0.005 * i as f64 / fs).sin()).collect();
    let r = pearson(parts.tonic.samples(), &drift);
    assert!(r > 0.9, "tonic vs drift: {r}");
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
