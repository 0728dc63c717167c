use blinkforge::blink::{blink_prefilter, detect_peaks, SearchParams};
use blinkforge::eda::{count_scrs, decompose, EdaOptions};
use blinkforge::synth::{
    plan_events, synth_blink_session, synth_eda_session, synth_wire_session, EventKind, PlanParams, SynthEvent,
    SynthSpec, BLINK_RATE_HZ,
};

fn spec(seed: u64, duration_s: f64, events: Vec<SynthEvent>, noise_sigma: f64) -> SynthSpec {
    SynthSpec {
        seed,
        sample_rate_hz: 100.0,
        duration_s,
        events,
        noise_sigma,
        baseline: 0.0,
    }
}

fn event(kind: EventKind, time_s: f64, amplitude: f64, width_s: f64, skew: f64) -> SynthEvent {
    SynthEvent {
        kind,
        time_s,
        amplitude,
        width_s,
        skew,
    }
}

#[test]
fn noiseless_blinks_are_recovered() {
    let events: Vec<SynthEvent> = (0..10)
        .map(|i| event(EventKind::Blink, 2.0 + 2.5 * i as f64, 0.3 + 0.07 * i as f64, 0.1 + 0.03 * i as f64, 2.0))
        .collect();
    let (rec, truth) = synth_blink_session(&spec(1, 28.0, events, 0.0)).unwrap();
    let params = SearchParams::default();
    let found = blink_prefilter(&detect_peaks(&rec, &params).unwrap(), &params);
    assert_eq!(found.len(), 10);
    for (c, g) in found.iter().zip(&truth) {
        assert!(c.center_index.abs_diff(g.center_index) <= 1, "{} vs {}", c.center_index, g.center_index);
    }
}

#[test]
fn sessions_are_deterministic() {
    let mut events = plan_events(3, 60.0, &PlanParams::blinks()).unwrap();
    events.extend(plan_events(4, 60.0, &PlanParams::wires()).unwrap());
    events.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    let s = spec(11, 60.0, events, 0.02);
    let a = blinkforge::synth::synth_eog_session(&s).unwrap();
    let b = blinkforge::synth::synth_eog_session(&s).unwrap();
    let bits = |r: &blinkforge::signal::Recording| r.samples().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.0), bits(&b.0));
    assert_eq!(a.1, b.1);

    let wires = plan_events(5, 60.0, &PlanParams::wires()).unwrap();
    let w = spec(12, 60.0, wires, 0.0);
    assert_eq!(bits(&synth_wire_session(&w).unwrap().0), bits(&synth_wire_session(&w).unwrap().0));

    let scrs = plan_events(6, 120.0, &PlanParams::scrs()).unwrap();
    let e = SynthSpec { baseline: 2.0, ..spec(13, 120.0, scrs, 0.005) };
    assert_eq!(bits(&synth_eda_session(&e).unwrap()), bits(&synth_eda_session(&e).unwrap()));
}

#[test]
fn blink_count_follows_the_configured_rate() {
    let mean = BLINK_RATE_HZ * 300.0;
    assert!((mean - 168.0).abs() < 1.0);
    // The plan keeps one maximum width clear of each end.
    let p = PlanParams::blinks();
    let expected = BLINK_RATE_HZ * (300.0 - 2.0 * p.width_s.1);
    for seed in 0..20 {
        let n = plan_events(seed, 300.0, &p).unwrap().len() as f64;
        assert!((n - expected).abs() <= 3.0 * expected.sqrt(), "seed {seed}: {n}");
    }
}

#[test]
fn some_noiseless_wires_pass_the_prefilter() {
    let params = SearchParams::default();
    let mut passed = 0;
    for seed in 0..5 {
        let wires = plan_events(seed, 120.0, &PlanParams::wires()).unwrap();
        let (rec, _) = synth_wire_session(&spec(seed, 120.0, wires, 0.0)).unwrap();
        passed += blink_prefilter(&detect_peaks(&rec, &params).unwrap(), &params).len();
    }
    assert!(passed > 0);
}

#[test]
fn quiet_eda_has_small_phasic_part() {
    let sigma = 0.01;
    let rec = synth_eda_session(&SynthSpec { baseline: 5.0, ..spec(2, 300.0, Vec::new(), sigma) }).unwrap();
    let parts = decompose(&rec, &EdaOptions::default()).unwrap();
    let p = parts.phasic.samples();
    let rms = (p.iter().map(|v| v * v).sum::<f64>() / p.len() as f64).sqrt();
    assert!(rms < 2.0 * sigma, "{rms}");
}

#[test]
fn noiseless_scrs_are_counted() {
    let events: Vec<SynthEvent> = [20.0, 60.0, 100.0, 140.0, 180.0]
        .iter()
        .map(|&t| event(EventKind::Scr, t, 0.5, 1.0, 1.0))
        .collect();
    let rec = synth_eda_session(&SynthSpec { baseline: 5.0, ..spec(3, 220.0, events, 0.0) }).unwrap();
    let parts = decompose(&rec, &EdaOptions::default()).unwrap();
    assert_eq!(count_scrs(&parts.phasic, 0.01).len(), 5);
}
