//! Signal representation and synthetic test-signal generators.
//!
//! A [`Signal`] is a uniformly sampled, finite real time series. The
//! generators here produce the cosine-sum and concatenated-tone test models
//! used throughout the experiment harness, plus reproducible additive
//! Gaussian noise.

use crate::error::{Error, Result};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniformly sampled real time series.
///
/// Invariants enforced at construction: at least two samples, every sample
/// finite, strictly positive sample rate. Sample spacing is `1/sample_rate`
/// by construction; values are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: f64,
    start_time: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64, start_time: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooShort {
                need: 2,
                got: samples.len(),
            });
        }
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if !start_time.is_finite() {
            return Err(Error::InvalidArgument("start time must be finite".into()));
        }
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            samples,
            sample_rate,
            start_time,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Window length in seconds (`len / sample_rate`), i.e. the span covered
    /// by the samples including the trailing inter-sample interval.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.start_time + i as f64 / self.sample_rate
    }

    /// Sample times as a vector.
    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time_at(i)).collect()
    }

    /// New signal with the same sample rate and start time.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Signal::new(samples, self.sample_rate, self.start_time)
    }

    /// Pointwise difference `self - other`; geometries must match.
    pub fn pointwise_sub(&self, other: &Signal) -> Result<Signal> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        let diff = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        self.with_samples(diff)
    }

    pub fn l2_norm(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// One cosine term `amplitude * cos(2*pi*frequency*t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosineComponent {
    pub amplitude: f64,
    /// Frequency in Hz; must be strictly positive.
    pub frequency: f64,
    /// Phase in radians.
    pub phase: f64,
}

impl CosineComponent {
    pub fn new(amplitude: f64, frequency: f64, phase: f64) -> Self {
        Self {
            amplitude,
            frequency,
            phase,
        }
    }

    fn validate(&self, sample_rate: f64) -> Result<()> {
        if !(self.amplitude.is_finite() && self.phase.is_finite() && self.frequency.is_finite()) {
            return Err(Error::InvalidArgument(
                "cosine component fields must be finite".into(),
            ));
        }
        if self.frequency <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "component frequency must be positive, got {}",
                self.frequency
            )));
        }
        // Strict precondition: the rate must exceed twice the component frequency.
        if sample_rate <= 2.0 * self.frequency {
            return Err(Error::NyquistViolation {
                frequency: self.frequency,
                sample_rate,
            });
        }
        Ok(())
    }
}

fn output_length(sample_rate: f64, duration: f64) -> Result<usize> {
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sample rate must be positive, got {sample_rate}"
        )));
    }
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let n = (sample_rate * duration).round() as usize;
    if n < 2 {
        return Err(Error::TooShort { need: 2, got: n });
    }
    Ok(n)
}

/// Sum of cosines plus a constant offset:
/// `s[i] = sum_k A_k cos(2 pi f_k t_i + phi_k) + offset` with `t_i = i / sample_rate`.
///
/// The output has `round(duration * sample_rate)` samples starting at t = 0.
/// Every component must lie strictly below the Nyquist frequency.
pub fn cosine_sum(
    components: &[CosineComponent],
    offset: f64,
    sample_rate: f64,
    duration: f64,
) -> Result<Signal> {
    let n = output_length(sample_rate, duration)?;
    if !offset.is_finite() {
        return Err(Error::InvalidArgument("offset must be finite".into()));
    }
    for c in components {
        c.validate(sample_rate)?;
    }
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate;
            components
                .iter()
                .map(|c| c.amplitude * (2.0 * PI * c.frequency * t + c.phase).cos())
                .sum::<f64>()
                + offset
        })
        .collect();
    Signal::new(samples, sample_rate, 0.0)
}

/// Two concatenated unit cosines: `cos(2 pi f1 t)` for `t < t_switch` and
/// `cos(2 pi f2 t)` for `t >= t_switch`.
///
/// No phase matching is applied at the switch; the discontinuity is part of
/// the test signal's difficulty.
pub fn mode_mix(f1: f64, f2: f64, t_switch: f64, sample_rate: f64, duration: f64) -> Result<Signal> {
    let n = output_length(sample_rate, duration)?;
    for f in [f1, f2] {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tone frequency must be positive, got {f}"
            )));
        }
        if sample_rate <= 2.0 * f {
            return Err(Error::NyquistViolation {
                frequency: f,
                sample_rate,
            });
        }
    }
    if !(t_switch.is_finite() && t_switch > 0.0 && t_switch < duration) {
        return Err(Error::InvalidArgument(format!(
            "switch time must lie strictly inside (0, {duration}), got {t_switch}"
        )));
    }
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sample_rate;
            let f = if t < t_switch { f1 } else { f2 };
            (2.0 * PI * f * t).cos()
        })
        .collect();
    Signal::new(samples, sample_rate, 0.0)
}

/// Uniform draw in [0, 1) from the top 53 bits of a u64.
fn unit_uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation `sigma`.
///
/// The generator is ChaCha8 seeded with `seed`; standard normals come from
/// the Box-Muller transform on two ChaCha8 uniforms per sample, so the output
/// is a pure deterministic function of `(signal, sigma, seed)` on every
/// platform. `sigma = 0` returns the input unchanged.
pub fn add_white_noise(signal: &Signal, sigma: f64, seed: u64) -> Result<Signal> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise standard deviation must be nonnegative, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(signal.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = signal
        .samples()
        .iter()
        .map(|&x| {
            let u1 = 1.0 - unit_uniform(&mut rng); // (0, 1], keeps the log finite
            let u2 = unit_uniform(&mut rng);
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos();
            x + sigma * z
        })
        .collect();
    signal.with_samples(samples)
}

/// Number of sign changes in a sequence.
///
/// Exact zeros inherit the sign of the previous nonzero sample (a zero never
/// creates a crossing on its own); leading zeros are skipped.
pub fn count_zero_crossings(samples: &[f64]) -> usize {
    let mut count = 0;
    let mut last_sign = 0i8;
    for &x in samples {
        let sign = if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            continue;
        };
        if last_sign != 0 && sign != last_sign {
            count += 1;
        }
        last_sign = sign;
    }
    count
}
