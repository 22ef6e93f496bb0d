//! The circle equation `h(s + a) - h(s) = f(s) - ∫f` by Fourier division.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use super::SolverError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationOptions {
    /// Mode cutoff `K`: modes `|k| > K` are discarded.
    pub modes: usize,
    /// Coefficients below `tol` at resonant modes are ignored; tail bounds above it fail.
    pub tol: f64,
    /// Divisors `|e^{2πika} - 1|` below this count as resonant.
    pub divisor_floor: f64,
    /// Absolute size below which Fourier coefficients are treated as rounding noise.
    pub noise_floor: f64,
}

/// Solution on one circle. `h(s) = Re Σ_k coeffs[k] e^{2πiks}` for `0 ≤ k ≤ m/2`.
#[derive(Clone, Debug, Serialize)]
pub struct RotationSolution {
    pub values: Vec<f64>,
    #[serde(skip)]
    pub coeffs: Vec<Complex64>,
    pub mean: f64,
    pub min_divisor: f64,
    /// Sum of discarded coefficient magnitudes between `K` and `m/2`.
    pub observed_tail: f64,
    /// Power-law extrapolation of the spectrum past `m/2` (infinite if the decay is too slow).
    pub extrapolated_tail: f64,
    /// Bound on the sup-norm residual of the equation.
    pub error_bound: f64,
}

impl RotationSolution {
    pub fn eval(&self, s: f64) -> f64 {
        let rho = Complex64::from_polar(1.0, 2.0 * PI * s);
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * rho + c).re
    }
}

/// Precomputed divisors and FFT plans for repeated solves with the same `m`, `a` and options.
#[derive(Clone)]
pub struct RotationPlan {
    m: usize,
    a: f64,
    opts: RotationOptions,
    divisors: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for RotationPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RotationPlan").field("m", &self.m).field("a", &self.a).field("opts", &self.opts).finish()
    }
}

impl RotationPlan {
    pub fn new(m: usize, a: f64, opts: RotationOptions) -> Result<Self, SolverError> {
        if m < 2 {
            return Err(SolverError::InvalidOptions(format!("circle grid needs at least 2 points, got {m}")));
        }
        if opts.tol.is_nan() || opts.tol <= 0.0 || opts.divisor_floor.is_nan() || opts.divisor_floor < 0.0 {
            return Err(SolverError::InvalidOptions("tolerance must be positive and the divisor floor nonnegative".into()));
        }
        let mut planner = FftPlanner::new();
        let divisors = (0..=m / 2).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 * a) - 1.0).collect();
        Ok(RotationPlan { m, a, opts, divisors, forward: planner.plan_fft_forward(m), inverse: planner.plan_fft_inverse(m) })
    }

    pub fn modes(&self) -> usize {
        self.opts.modes.min(self.m / 2)
    }

    /// Smallest divisor among the modes that will be divided by.
    pub fn min_divisor(&self) -> f64 {
        (1..=self.modes()).map(|k| self.divisors[k].norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn solve(&self, f: &[f64]) -> Result<RotationSolution, SolverError> {
        let m = self.m;
        if f.len() != m {
            return Err(SolverError::InvalidOptions(format!("expected {m} samples, got {}", f.len())));
        }
        let half = m / 2;
        let nyquist = m.is_multiple_of(2);
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        // Amplitude of the real mode k in f.
        let amp = |k: usize| {
            let c = buf[k].norm() / m as f64;
            if k == 0 || (nyquist && k == half) {
                c
            } else {
                2.0 * c
            }
        };
        let k_max = self.modes();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); half + 1];
        let mut min_divisor = f64::INFINITY;
        for (k, coeff) in coeffs.iter_mut().enumerate().take(k_max + 1).skip(1) {
            let d = self.divisors[k];
            if d.norm() < self.opts.divisor_floor {
                if amp(k) > self.opts.tol {
                    return Err(SolverError::Resonance { level: 0, line: 0, k, divisor: d.norm(), coefficient: amp(k) });
                }
                continue;
            }
            min_divisor = min_divisor.min(d.norm());
            let weight = if nyquist && k == half { 1.0 } else { 2.0 };
            *coeff = buf[k] / m as f64 * weight / d;
        }
        let observed_tail: f64 = (k_max + 1..=half).map(amp).sum();
        let extrapolated_tail = extrapolate_tail(&(0..=half).map(amp).collect::<Vec<_>>(), m, self.opts.noise_floor);
        let scale = f.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(coeffs.iter().map(|c| c.norm()).sum());
        let roundoff = 16.0 * f64::EPSILON * (m as f64).log2().max(1.0) * scale;
        let error_bound = observed_tail + 2.0 * extrapolated_tail + roundoff;
        if error_bound.is_nan() || error_bound > self.opts.tol {
            return Err(SolverError::TailTooFat { level: 0, line: 0, bound: error_bound, tol: self.opts.tol });
        }
        // Samples: inverse transform of the two-sided spectrum.
        let mut spec = vec![Complex64::new(0.0, 0.0); m];
        for k in 1..=half {
            if nyquist && k == half {
                spec[k] = Complex64::new(coeffs[k].re, 0.0);
            } else {
                spec[k] = coeffs[k] / 2.0;
                spec[m - k] = spec[k].conj();
            }
        }
        self.inverse.process(&mut spec);
        Ok(RotationSolution {
            values: spec.iter().map(|c| c.re).collect(),
            coeffs,
            mean: buf[0].re / m as f64,
            min_divisor,
            observed_tail,
            extrapolated_tail,
            error_bound,
        })
    }
}

/// Fits `|c_k| ≈ M k^{-p}` on the top octave and sums the fit past `m/2`.
/// Modes at rounding level are treated as exactly zero.
fn extrapolate_tail(amps: &[f64], m: usize, noise_floor: f64) -> f64 {
    let half = amps.len() - 1;
    let peak = amps.iter().cloned().fold(0.0, f64::max);
    let noise = (1e-13 * peak).max(noise_floor).max(f64::MIN_POSITIVE);
    let lo = (half / 2).max(1);
    let pts: Vec<(f64, f64)> =
        (lo..=half).filter(|&k| amps[k] > noise).map(|k| ((k as f64).ln(), amps[k].ln())).collect();
    if pts.is_empty() {
        return 0.0;
    }
    if pts.len() < 2 {
        // A single significant mode: assume at least the same size just past the grid.
        return amps[half.max(1)].max(noise) * 2.0;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx).powi(2)));
    let p = -sxy / sxx;
    if p.is_nan() || p <= 1.0 {
        return f64::INFINITY;
    }
    let log_m = my + p * mx;
    let edge = (m / 2) as f64;
    log_m.exp() * edge.powf(1.0 - p) / (p - 1.0)
}

/// One-shot solve on an `m`-point circle.
pub fn solve_rotation_coboundary(f: &[f64], a: f64, opts: RotationOptions) -> Result<RotationSolution, SolverError> {
    RotationPlan::new(f.len(), a, opts)?.solve(f)
}
