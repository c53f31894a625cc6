//! Thin wrappers around `rustfft` used by the spectral solvers.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Unnormalized forward DFT of a real sequence.
pub(crate) fn forward(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new()
        .plan_fft_forward(buf.len())
        .process(&mut buf);
    buf
}

/// Inverse DFT (scaled by 1/n), keeping only the real part.
pub(crate) fn inverse_real(spectrum: &mut [Complex64]) -> Vec<f64> {
    let n = spectrum.len();
    FftPlanner::new().plan_fft_inverse(n).process(spectrum);
    let scale = 1.0 / n as f64;
    spectrum.iter().map(|c| c.re * scale).collect()
}

/// Inverse DFT (scaled by 1/n), keeping the complex result.
pub(crate) fn inverse(spectrum: &mut [Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    FftPlanner::new().plan_fft_inverse(n).process(spectrum);
    let scale = 1.0 / n as f64;
    spectrum.iter().map(|c| c * scale).collect()
}

/// Signed angular frequency (rad/s) of DFT bin `k` for a window of `n`
/// samples at `sample_rate` Hz. Bins above `n/2` are negative frequencies.
pub(crate) fn bin_angular_frequency(k: usize, n: usize, sample_rate: f64) -> f64 {
    let signed = if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    };
    let window = n as f64 / sample_rate;
    2.0 * PI * signed / window
}

/// |frequency| in Hz of DFT bin `k`.
pub(crate) fn bin_frequency_hz(k: usize, n: usize, sample_rate: f64) -> f64 {
    bin_angular_frequency(k, n, sample_rate).abs() / (2.0 * PI)
}
