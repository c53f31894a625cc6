//! Forward heat-equation evolution of sampled signals.
//!
//! Evolving `dh/dt = a * d2h/dx2` from a signal to pseudo-time `T` yields the
//! low-pass "mean curve" that drives the diffusion-based sifting in
//! [`crate::pde`]. The spatial variable is time in seconds, so the
//! diffusivity `a` carries units of s^2 per unit pseudo-time and `T` is a
//! dimensionless evolution parameter.
//!
//! Three engines are provided:
//! - [`evolve_spectral`]: exact per-mode solution for periodic signals; each
//!   DFT mode of angular frequency `w` is scaled by `exp(-a w^2 T)`.
//! - [`evolve_fd`]: Crank-Nicolson finite differences for periodic, fixed-end
//!   (Dirichlet), and reflective (zero-flux Neumann) boundaries.
//! - [`gaussian_convolve`]: circular convolution with a unit-sum Gaussian of
//!   standard deviation `sqrt(2 a T)`, an independent cross-check of the
//!   spectral engine. (The heat kernel at pseudo-time `T` has exactly this
//!   width; the spectral engine is the normative definition.)
//!
//! Only the forward equation is supported: `a <= 0` is rejected everywhere,
//! which excludes the numerically unstable backward evolution by
//! construction.

use crate::error::{Error, Result};
use crate::fft;
use crate::signal::Signal;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Boundary handling for the finite-difference engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Signal wraps around; matches the spectral solution.
    Periodic,
    /// Both endpoint values are held at their initial values.
    FixedEnds,
    /// Zero normal derivative at both ends.
    Reflective,
}

impl BoundaryCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::FixedEnds => "fixed",
            BoundaryCondition::Reflective => "reflective",
        }
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryCondition::Periodic),
            "fixed" | "fixed_ends" => Ok(BoundaryCondition::FixedEnds),
            "reflective" => Ok(BoundaryCondition::Reflective),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary condition `{other}` (expected periodic|fixed|reflective)"
            ))),
        }
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Validated (diffusivity, pseudo-time, boundary) triple for one evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatEvolution {
    pub diffusivity: f64,
    pub evolution_time: f64,
    pub bc: BoundaryCondition,
}

impl HeatEvolution {
    pub fn new(diffusivity: f64, evolution_time: f64, bc: BoundaryCondition) -> Result<Self> {
        check_coefficients(diffusivity, evolution_time)?;
        if evolution_time == 0.0 {
            return Err(Error::InvalidArgument(
                "evolution time must be positive".into(),
            ));
        }
        Ok(Self {
            diffusivity,
            evolution_time,
            bc,
        })
    }

    /// Runs the evolution: spectral for periodic boundaries, Crank-Nicolson
    /// with `time_steps` steps otherwise.
    pub fn apply(&self, signal: &Signal, time_steps: usize) -> Result<Vec<f64>> {
        match self.bc {
            BoundaryCondition::Periodic => {
                evolve_spectral(signal, self.diffusivity, self.evolution_time)
            }
            bc => evolve_fd(signal, self.diffusivity, self.evolution_time, bc, time_steps),
        }
    }
}

fn check_coefficients(a: f64, t: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "diffusivity must be positive (forward equation only), got {a}"
        )));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be nonnegative, got {t}"
        )));
    }
    Ok(())
}

/// Exact periodic evolution: DFT mode `k` of angular frequency `w_k` is
/// multiplied by `exp(-a * w_k^2 * T)`; the zero mode is unchanged.
pub fn evolve_spectral(signal: &Signal, diffusivity: f64, evolution_time: f64) -> Result<Vec<f64>> {
    check_coefficients(diffusivity, evolution_time)?;
    let n = signal.len();
    let fs = signal.sample_rate();
    let mut spectrum = fft::forward(signal.samples());
    for (k, c) in spectrum.iter_mut().enumerate() {
        let w = fft::bin_angular_frequency(k, n, fs);
        *c *= (-diffusivity * w * w * evolution_time).exp();
    }
    Ok(fft::inverse_real(&mut spectrum))
}

/// Crank-Nicolson time stepping with second-order central differences.
///
/// `fixed` holds both endpoint values constant, `reflective` imposes zero
/// normal derivative through a mirrored ghost point, `periodic` wraps the
/// stencil.
pub fn evolve_fd(
    signal: &Signal,
    diffusivity: f64,
    evolution_time: f64,
    bc: BoundaryCondition,
    time_steps: usize,
) -> Result<Vec<f64>> {
    check_coefficients(diffusivity, evolution_time)?;
    if time_steps < 1 {
        return Err(Error::InvalidArgument(
            "time steps must be at least 1".into(),
        ));
    }
    let n = signal.len();
    let dx = 1.0 / signal.sample_rate();
    let dt = evolution_time / time_steps as f64;
    let r = diffusivity * dt / (dx * dx);
    let mut h = signal.samples().to_vec();
    for _ in 0..time_steps {
        h = match bc {
            BoundaryCondition::Periodic => cn_step_periodic(&h, r),
            BoundaryCondition::FixedEnds => cn_step_fixed(&h, r),
            BoundaryCondition::Reflective => cn_step_reflective(&h, r),
        };
    }
    if let Some(i) = h.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(h)
}

/// One Crank-Nicolson step with a wrapped stencil.
fn cn_step_periodic(h: &[f64], r: f64) -> Vec<f64> {
    let n = h.len();
    let rhs: Vec<f64> = (0..n)
        .map(|i| {
            let left = h[(i + n - 1) % n];
            let right = h[(i + 1) % n];
            (1.0 - r) * h[i] + 0.5 * r * (left + right)
        })
        .collect();
    if n == 2 {
        // Both neighbors of each point are the other point.
        let d = 1.0 + r;
        let o = -r;
        let det = d * d - o * o;
        return vec![
            (d * rhs[0] - o * rhs[1]) / det,
            (d * rhs[1] - o * rhs[0]) / det,
        ];
    }
    solve_cyclic_tridiagonal(-0.5 * r, 1.0 + r, -0.5 * r, &rhs)
}

/// One Crank-Nicolson step with both endpoints pinned at their current values.
fn cn_step_fixed(h: &[f64], r: f64) -> Vec<f64> {
    let n = h.len();
    if n <= 2 {
        return h.to_vec();
    }
    let m = n - 2;
    let mut rhs = vec![0.0; m];
    for i in 1..n - 1 {
        rhs[i - 1] = (1.0 - r) * h[i] + 0.5 * r * (h[i - 1] + h[i + 1]);
    }
    // Known boundary values move to the right-hand side.
    rhs[0] += 0.5 * r * h[0];
    rhs[m - 1] += 0.5 * r * h[n - 1];
    let sub = vec![-0.5 * r; m];
    let diag = vec![1.0 + r; m];
    let sup = vec![-0.5 * r; m];
    let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut out = Vec::with_capacity(n);
    out.push(h[0]);
    out.extend(interior);
    out.push(h[n - 1]);
    out
}

/// One Crank-Nicolson step with mirrored ghost points (zero normal derivative).
fn cn_step_reflective(h: &[f64], r: f64) -> Vec<f64> {
    let n = h.len();
    // Ghost mirror makes the boundary Laplacian 2*(h[1] - h[0]) / dx^2.
    let mut rhs = vec![0.0; n];
    rhs[0] = (1.0 - r) * h[0] + r * h[1];
    for i in 1..n - 1 {
        rhs[i] = (1.0 - r) * h[i] + 0.5 * r * (h[i - 1] + h[i + 1]);
    }
    rhs[n - 1] = (1.0 - r) * h[n - 1] + r * h[n - 2];
    let mut sub = vec![-0.5 * r; n];
    let diag = vec![1.0 + r; n];
    let mut sup = vec![-0.5 * r; n];
    sup[0] = -r;
    sub[n - 1] = -r;
    solve_tridiagonal(&sub, &diag, &sup, &rhs)
}

/// Thomas algorithm. `sub[i]` couples row `i` to `i-1`, `sup[i]` to `i+1`;
/// `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    debug_assert!(sub.len() == n && sup.len() == n && rhs.len() == n);
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Sherman-Morrison solve of a symmetric cyclic tridiagonal system with
/// constant diagonal `d`, off-diagonal `o`, and corner entries `o`.
/// Requires `n >= 3`.
fn solve_cyclic_tridiagonal(o: f64, d: f64, _o2: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    debug_assert!(n >= 3);
    let gamma = -d;
    let mut diag = vec![d; n];
    diag[0] = d - gamma;
    diag[n - 1] = d - o * o / gamma;
    let sub = vec![o; n];
    let sup = vec![o; n];
    let y = solve_tridiagonal(&sub, &diag, &sup, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = o;
    let z = solve_tridiagonal(&sub, &diag, &sup, &u);
    // v = (1, 0, ..., 0, o / gamma)
    let vy = y[0] + (o / gamma) * y[n - 1];
    let vz = z[0] + (o / gamma) * z[n - 1];
    let factor = vy / (1.0 + vz);
    y.iter().zip(&z).map(|(yi, zi)| yi - factor * zi).collect()
}

/// Circular convolution with a unit-sum discrete Gaussian of standard
/// deviation `sqrt(2 a T)` seconds.
///
/// Independent cross-check of [`evolve_spectral`]: for band-limited periodic
/// signals the two agree to high precision.
pub fn gaussian_convolve(signal: &Signal, diffusivity: f64, evolution_time: f64) -> Result<Vec<f64>> {
    check_coefficients(diffusivity, evolution_time)?;
    let n = signal.len();
    let dx = 1.0 / signal.sample_rate();
    let sigma = (2.0 * diffusivity * evolution_time).sqrt();
    if sigma == 0.0 {
        return Ok(signal.samples().to_vec());
    }
    let mut kernel = vec![0.0; n];
    for (j, w) in kernel.iter_mut().enumerate() {
        let wrap = j.min(n - j); // circular distance in samples
        let d = wrap as f64 * dx;
        *w = (-d * d / (2.0 * sigma * sigma)).exp();
    }
    let sum: f64 = kernel.iter().sum();
    for w in &mut kernel {
        *w /= sum;
    }
    let signal_spec = fft::forward(signal.samples());
    let kernel_spec = fft::forward(&kernel);
    let mut product: Vec<_> = signal_spec
        .iter()
        .zip(&kernel_spec)
        .map(|(s, k)| s * k)
        .collect();
    Ok(fft::inverse_real(&mut product))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{cosine_sum, CosineComponent, Signal};
    use crate::stats::relative_l2;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_tone(freq: f64, fs: f64, dur: f64) -> Signal {
        cosine_sum(&[CosineComponent::new(1.0, freq, 0.0)], 0.0, fs, dur).unwrap()
    }

    /// Naive projection onto DFT bin `k`: returns the tone amplitude `2|X_k|/n`.
    /// Used as an oracle independent of the FFT-based solver path.
    fn mode_amplitude(samples: &[f64], k: usize) -> f64 {
        let n = samples.len() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &x) in samples.iter().enumerate() {
            let theta = -2.0 * PI * (k as f64) * (j as f64) / n;
            re += x * theta.cos();
            im += x * theta.sin();
        }
        2.0 * (re * re + im * im).sqrt() / n
    }

    #[test]
    fn constant_signal_is_invariant() {
        let s = Signal::new(vec![3.25; 64], 64.0, 0.0).unwrap();
        let spectral = evolve_spectral(&s, 0.01, 2.0).unwrap();
        for &x in &spectral {
            assert_relative_eq!(x, 3.25, epsilon = 1e-12);
        }
        for bc in [
            BoundaryCondition::Periodic,
            BoundaryCondition::FixedEnds,
            BoundaryCondition::Reflective,
        ] {
            let fd = evolve_fd(&s, 0.01, 2.0, bc, 50).unwrap();
            for &x in &fd {
                assert_relative_eq!(x, 3.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn unit_cosine_attenuates_to_exp_minus_one() {
        // a w^2 T = 1 for a 5 Hz tone over a 1 s periodic window.
        let s = unit_tone(5.0, 1000.0, 1.0);
        let w = 2.0 * PI * 5.0;
        let a = 1.0 / (w * w);
        let out = evolve_spectral(&s, a, 1.0).unwrap();
        let expected = (-1.0f64).exp();
        assert_relative_eq!(mode_amplitude(&out, 5), expected, max_relative = 1e-12);
        // Pointwise the output is the attenuated cosine.
        for (i, &x) in out.iter().enumerate() {
            let t = i as f64 / 1000.0;
            assert_relative_eq!(x, expected * (w * t).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn modes_attenuate_independently() {
        let comps = [
            CosineComponent::new(1.0, 2.0, 0.3),
            CosineComponent::new(0.5, 7.0, -0.8),
        ];
        let s = cosine_sum(&comps, 0.0, 128.0, 1.0).unwrap();
        let a = 3e-4;
        let t = 2.0;
        let out = evolve_spectral(&s, a, t).unwrap();
        for c in &comps {
            let w = 2.0 * PI * c.frequency;
            let expected = c.amplitude * (-a * w * w * t).exp();
            let k = c.frequency as usize; // 1 s window: bin index equals Hz
            assert_relative_eq!(mode_amplitude(&out, k), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn fd_periodic_matches_spectral() {
        let comps = [
            CosineComponent::new(1.0, 1.0, 0.0),
            CosineComponent::new(0.6, 2.0, 0.9),
            CosineComponent::new(0.4, 3.0, -0.4),
        ];
        let s = cosine_sum(&comps, 0.2, 1000.0, 1.0).unwrap();
        let a = 1.0 / (2.0 * PI * 3.0).powi(2);
        let spectral = evolve_spectral(&s, a, 1.0).unwrap();
        let fd = evolve_fd(&s, a, 1.0, BoundaryCondition::Periodic, 1000).unwrap();
        let err = relative_l2(&fd, &spectral).unwrap();
        assert!(err < 1e-4, "fd vs spectral relative L2 {err}");
    }

    #[test]
    fn fd_fixed_ends_pins_endpoints() {
        let s = cosine_sum(
            &[CosineComponent::new(1.0, 3.3, 0.7)],
            0.1,
            200.0,
            1.0,
        )
        .unwrap();
        let out = evolve_fd(&s, 1e-3, 5.0, BoundaryCondition::FixedEnds, 200).unwrap();
        assert_eq!(out[0], s.samples()[0]);
        assert_eq!(out[s.len() - 1], s.samples()[s.len() - 1]);
    }

    #[test]
    fn fd_rejects_bad_coefficients() {
        let s = unit_tone(2.0, 100.0, 1.0);
        assert!(evolve_fd(&s, 0.0, 1.0, BoundaryCondition::Periodic, 10).is_err());
        assert!(evolve_fd(&s, -1.0, 1.0, BoundaryCondition::Periodic, 10).is_err());
        assert!(evolve_fd(&s, 1.0, 1.0, BoundaryCondition::Periodic, 0).is_err());
        assert!(evolve_spectral(&s, 1e-3, -1.0).is_err());
    }

    #[test]
    fn gaussian_kernel_preserves_unit_mass() {
        let mut samples = vec![0.0; 128];
        samples[0] = 1.0;
        let impulse = Signal::new(samples, 128.0, 0.0).unwrap();
        let out = gaussian_convolve(&impulse, 1e-4, 1.0).unwrap();
        let total: f64 = out.iter().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_tiny_time_is_identity() {
        let s = unit_tone(3.0, 100.0, 1.0);
        let out = gaussian_convolve(&s, 1e-3, 1e-12).unwrap();
        for (a, b) in out.iter().zip(s.samples()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn gaussian_matches_spectral_on_band_limited_signal() {
        let comps = [
            CosineComponent::new(1.0, 1.0, 0.0),
            CosineComponent::new(0.5, 2.0, 1.1),
            CosineComponent::new(0.25, 3.0, -2.0),
        ];
        let s = cosine_sum(&comps, 0.0, 500.0, 1.0).unwrap();
        let a = 1.0 / (2.0 * PI * 3.0).powi(2);
        let spectral = evolve_spectral(&s, a, 1.0).unwrap();
        let gauss = gaussian_convolve(&s, a, 1.0).unwrap();
        let err = relative_l2(&gauss, &spectral).unwrap();
        assert!(err < 1e-6, "gaussian vs spectral relative L2 {err}");
    }

    #[test]
    fn spectral_linearity_and_semigroup() {
        let s1 = unit_tone(2.0, 256.0, 1.0);
        let s2 = cosine_sum(&[CosineComponent::new(0.7, 5.0, 0.5)], 0.3, 256.0, 1.0).unwrap();
        let a = 2e-3;
        let combined = Signal::new(
            s1.samples()
                .iter()
                .zip(s2.samples())
                .map(|(x, y)| 2.0 * x - 0.5 * y)
                .collect(),
            256.0,
            0.0,
        )
        .unwrap();
        let lhs = evolve_spectral(&combined, a, 0.7).unwrap();
        let e1 = evolve_spectral(&s1, a, 0.7).unwrap();
        let e2 = evolve_spectral(&s2, a, 0.7).unwrap();
        for i in 0..lhs.len() {
            assert_relative_eq!(lhs[i], 2.0 * e1[i] - 0.5 * e2[i], epsilon = 1e-12);
        }
        // Semigroup: T1 then T2 equals T1 + T2.
        let step1 = s1.with_samples(evolve_spectral(&s1, a, 0.4).unwrap()).unwrap();
        let two_step = evolve_spectral(&step1, a, 0.3).unwrap();
        let one_shot = evolve_spectral(&s1, a, 0.7).unwrap();
        for i in 0..two_step.len() {
            assert_relative_eq!(two_step[i], one_shot[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn maximum_principle_and_mean_conservation() {
        let comps = [
            CosineComponent::new(1.0, 1.0, 0.2),
            CosineComponent::new(0.5, 4.0, -1.0),
        ];
        let s = cosine_sum(&comps, 0.1, 200.0, 1.0).unwrap();
        let a = 1.0 / (2.0 * PI * 4.0).powi(2);
        let out = evolve_spectral(&s, a, 1.0).unwrap();
        let min = s.samples().iter().cloned().fold(f64::INFINITY, f64::min);
        let max = s.samples().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let eps = 1e-12 * (max - min);
        for &x in &out {
            assert!(x >= min - eps && x <= max + eps, "{x} outside [{min}, {max}]");
        }
        let mean_in: f64 = s.samples().iter().sum::<f64>() / s.len() as f64;
        let mean_out: f64 = out.iter().sum::<f64>() / out.len() as f64;
        assert_relative_eq!(mean_in, mean_out, epsilon = 1e-12);
    }

    #[test]
    fn low_pass_attenuation_is_monotone_in_frequency() {
        // Filter-bank view: the per-mode survival factor decreases with
        // frequency, so the residual s - m gains with frequency.
        let fs = 256.0;
        let a = 1e-3;
        let t = 1.0;
        let mut factors = Vec::new();
        for k in 1..10usize {
            let tone = unit_tone(k as f64, fs, 1.0);
            let out = evolve_spectral(&tone, a, t).unwrap();
            factors.push(mode_amplitude(&out, k));
        }
        for pair in factors.windows(2) {
            assert!(pair[0] > pair[1], "low-pass gain not decreasing: {pair:?}");
        }
        for pair in factors.windows(2) {
            assert!(
                (1.0 - pair[0]) < (1.0 - pair[1]),
                "high-pass complement not increasing"
            );
        }
    }

    #[test]
    fn fd_reflective_conserves_constants_and_stays_bounded() {
        let s = cosine_sum(&[CosineComponent::new(1.0, 2.0, 0.4)], 0.5, 200.0, 1.0).unwrap();
        let out = evolve_fd(&s, 1e-3, 2.0, BoundaryCondition::Reflective, 400).unwrap();
        let min = s.samples().iter().cloned().fold(f64::INFINITY, f64::min);
        let max = s.samples().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for &x in &out {
            assert!(x >= min - 1e-9 && x <= max + 1e-9);
        }
    }

    #[test]
    fn cyclic_solver_agrees_with_dense_elimination() {
        // 5x5 cyclic tridiagonal with d = 1.8, o = -0.4.
        let d = 1.8;
        let o = -0.4;
        let rhs = [1.0, -2.0, 0.5, 3.0, -1.0];
        let x = solve_cyclic_tridiagonal(o, d, o, &rhs);
        let n = rhs.len();
        for i in 0..n {
            let got = o * x[(i + n - 1) % n] + d * x[i] + o * x[(i + 1) % n];
            assert_relative_eq!(got, rhs[i], epsilon = 1e-12);
        }
    }
}
