use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::Recording;
use crate::error::{Error, Result};

/// How a recursive filter is run over a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// Forward then backward; squares the magnitude response, no phase shift.
    #[default]
    ZeroPhase,
    /// One causal pass.
    SinglePass,
}

/// One second-order section in transposed direct form II, `a[0] == 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    fn dc_gain(&self) -> f64 {
        self.b.iter().sum::<f64>() / self.a.iter().sum::<f64>()
    }

    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        let num = self.b[0] + z_inv * self.b[1] + z2 * self.b[2];
        let den = self.a[0] + z_inv * self.a[1] + z2 * self.a[2];
        num / den
    }
}

/// Digital Butterworth low-pass as a cascade of biquads, designed by the
/// bilinear transform with the cutoff pre-warped so that the digital
/// response is exactly -3 dB at `cutoff_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    sections: Vec<Biquad>,
    order: usize,
    cutoff_hz: f64,
    sample_rate_hz: f64,
}

impl Butterworth {
    pub const MAX_ORDER: usize = 8;

    pub fn lowpass(order: usize, cutoff_hz: f64, sample_rate_hz: f64) -> Result<Self> {
        if !(1..=Self::MAX_ORDER).contains(&order) {
            return Err(Error::InvalidArgument(format!(
                "Butterworth order must be in 1..={}, got {order}",
                Self::MAX_ORDER
            )));
        }
        let nyquist = sample_rate_hz / 2.0;
        if !(cutoff_hz > 0.0 && cutoff_hz < nyquist) {
            return Err(Error::InvalidArgument(format!(
                "cutoff {cutoff_hz} Hz must lie in (0, {nyquist}) Hz"
            )));
        }

        let k = 2.0 * sample_rate_hz;
        let wc = k * (PI * cutoff_hz / sample_rate_hz).tan();
        let wc2 = wc * wc;
        let k2 = k * k;

        let mut sections = Vec::with_capacity(order.div_ceil(2));
        // Conjugate pole pairs of the analog prototype, s = wc * exp(i*theta).
        for idx in 0..order / 2 {
            let theta = PI * (2 * idx + 1 + order) as f64 / (2 * order) as f64;
            let damping = -2.0 * theta.cos() * wc;
            let d0 = k2 + damping * k + wc2;
            let d1 = 2.0 * wc2 - 2.0 * k2;
            let d2 = k2 - damping * k + wc2;
            sections.push(Biquad {
                b: [wc2 / d0, 2.0 * wc2 / d0, wc2 / d0],
                a: [1.0, d1 / d0, d2 / d0],
            });
        }
        if order % 2 == 1 {
            let d0 = k + wc;
            sections.push(Biquad {
                b: [wc / d0, wc / d0, 0.0],
                a: [1.0, (wc - k) / d0, 0.0],
            });
        }

        Ok(Self {
            sections,
            order,
            cutoff_hz,
            sample_rate_hz,
        })
    }

    pub fn sections(&self) -> &[Biquad] {
        &self.sections
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cutoff_hz(&self) -> f64 {
        self.cutoff_hz
    }

    /// Single-pass magnitude response of the digital filter at `freq_hz`.
    pub fn magnitude_at(&self, freq_hz: f64) -> f64 {
        let omega = 2.0 * PI * freq_hz / self.sample_rate_hz;
        let z_inv = Complex64::from_polar(1.0, -omega);
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z_inv))
            .norm()
    }

    /// Steady-state section states for a unit step input.
    fn step_state(&self) -> Vec<[f64; 2]> {
        let mut level = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let g = s.dc_gain();
                let z2 = (s.b[2] - s.a[2] * g) * level;
                let z1 = (s.b[1] - s.a[1] * g) * level + z2;
                level *= g;
                [z1, z2]
            })
            .collect()
    }

    /// Causal pass with states initialised to the steady state of `x[0]`,
    /// so a constant input passes through unchanged.
    pub fn filter(&self, x: &[f64]) -> Vec<f64> {
        let Some(&x0) = x.first() else {
            return Vec::new();
        };
        let mut states: Vec<[f64; 2]> = self
            .step_state()
            .into_iter()
            .map(|[z1, z2]| [z1 * x0, z2 * x0])
            .collect();
        x.iter()
            .map(|&input| {
                self.sections
                    .iter()
                    .zip(states.iter_mut())
                    .fold(input, |u, (s, z)| {
                        let y = s.b[0] * u + z[0];
                        z[0] = s.b[1] * u - s.a[1] * y + z[1];
                        z[1] = s.b[2] * u - s.a[2] * y;
                        y
                    })
            })
            .collect()
    }

    /// Forward-backward application with odd reflection padding at both ends.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let first_order = self.sections.iter().filter(|s| s.a[2] == 0.0).count();
        let pad = (3 * (2 * self.sections.len() + 1 - first_order)).min(n - 1);

        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));

        let mut y = self.filter(&ext);
        y.reverse();
        let mut y = self.filter(&y);
        y.reverse();
        y.drain(..pad);
        y.truncate(n);
        y
    }

    pub fn apply(&self, x: &[f64], mode: FilterMode) -> Vec<f64> {
        match mode {
            FilterMode::ZeroPhase => self.filtfilt(x),
            FilterMode::SinglePass => self.filter(x),
        }
    }
}

/// Butterworth low-pass of a recording; same length, rate, and channel.
pub fn butterworth_lowpass(
    rec: &Recording,
    order: usize,
    cutoff_hz: f64,
    mode: FilterMode,
) -> Result<Recording> {
    if let Some(i) = rec.samples().iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("sample {i} is not finite")));
    }
    let filter = Butterworth::lowpass(order, cutoff_hz, rec.sample_rate_hz())?;
    rec.with_samples(filter.apply(rec.samples(), mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Channel;

    fn analog(f: f64, fc: f64, order: usize) -> f64 {
        1.0 / (1.0 + (f / fc).powi(2 * order as i32)).sqrt()
    }

    /// Amplitude of the `freq` component by least-squares fit of sin and cos.
    fn tone_amplitude(y: &[f64], freq: f64, fs: f64) -> f64 {
        let (mut ss, mut cc, mut sc, mut ys, mut yc) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (i, v) in y.iter().enumerate() {
            let ph = 2.0 * PI * freq * i as f64 / fs;
            let (s, c) = ph.sin_cos();
            ss += s * s;
            cc += c * c;
            sc += s * c;
            ys += v * s;
            yc += v * c;
        }
        let det = ss * cc - sc * sc;
        let a = (ys * cc - yc * sc) / det;
        let b = (yc * ss - ys * sc) / det;
        a.hypot(b)
    }

    #[test]
    fn rejects_invalid_design() {
        assert!(Butterworth::lowpass(5, 50.0, 100.0).is_err());
        assert!(Butterworth::lowpass(0, 5.0, 100.0).is_err());
        assert!(Butterworth::lowpass(9, 5.0, 100.0).is_err());
    }

    #[test]
    fn constant_passes_unchanged() {
        let r = Recording::new(100.0, vec![2.0; 500], Channel::Eog).unwrap();
        for order in 1..=8 {
            for mode in [FilterMode::ZeroPhase, FilterMode::SinglePass] {
                let y = butterworth_lowpass(&r, order, 7.0, mode).unwrap();
                assert!(y.samples().iter().all(|v| (v - 2.0).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn half_power_at_cutoff() {
        let f = Butterworth::lowpass(5, 10.0, 100.0).unwrap();
        assert!((f.magnitude_at(10.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((f.magnitude_at(0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tone_at_cutoff_single_and_double_pass() {
        let fs = 1000.0;
        let fc = 10.0;
        let x: Vec<f64> = (0..10_000)
            .map(|i| (2.0 * PI * fc * i as f64 / fs).sin())
            .collect();
        let f = Butterworth::lowpass(5, fc, fs).unwrap();
        let interior = 3000..7000;
        let single = f.filter(&x);
        let a1 = tone_amplitude(&single[interior.clone()], fc, fs);
        assert!((a1 - analog(fc, fc, 5)).abs() / analog(fc, fc, 5) < 0.02, "{a1}");
        let double = f.filtfilt(&x);
        let a2 = tone_amplitude(&double[interior], fc, fs);
        assert!((a2 - 0.5).abs() / 0.5 < 0.02, "{a2}");
    }

    #[test]
    fn decade_above_cutoff_is_deeply_attenuated() {
        let fs = 1000.0;
        let fc = 10.0;
        let x: Vec<f64> = (0..10_000)
            .map(|i| (2.0 * PI * 10.0 * fc * i as f64 / fs).sin())
            .collect();
        let f = Butterworth::lowpass(5, fc, fs).unwrap();
        let y = f.filter(&x);
        let amp = tone_amplitude(&y[5000..], 10.0 * fc, fs);
        let db = 20.0 * amp.log10();
        assert!(db <= -90.0, "{db} dB");
    }

    #[test]
    fn zero_phase_keeps_pulse_center() {
        let fs = 100.0;
        let x: Vec<f64> = (0..400)
            .map(|i| {
                let t = (i as f64 - 200.0) / fs;
                (-0.5 * (t / 0.05).powi(2)).exp()
            })
            .collect();
        let f = Butterworth::lowpass(5, 10.0, fs).unwrap();
        let y = f.filtfilt(&x);
        let argmax = y
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!((argmax as i64 - 200).abs() <= 1);
    }

    proptest::proptest! {
        #[test]
        fn filtering_is_linear(
            xs in proptest::collection::vec(-5.0f64..5.0, 40),
            ys in proptest::collection::vec(-5.0f64..5.0, 40),
            a in -2.0f64..2.0,
            b in -2.0f64..2.0,
        ) {
            let f = Butterworth::lowpass(5, 8.0, 100.0).unwrap();
            let combo: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
            for mode in [FilterMode::ZeroPhase, FilterMode::SinglePass] {
                let fc = f.apply(&combo, mode);
                let fx = f.apply(&xs, mode);
                let fy = f.apply(&ys, mode);
                for i in 0..combo.len() {
                    proptest::prop_assert!((fc[i] - (a * fx[i] + b * fy[i])).abs() < 1e-9);
                }
            }
        }
    }
}
