//! Evaluation of grid functions on `Γ\N` at arbitrary points.
//!
//! The fiber coordinate is handled spectrally: every fiber line is replaced by its
//! Fourier coefficients. The remaining coordinates are processed from `n` down to 2.
//! Along coordinate `i`, moving past the edge of the cube is a left translation by
//! `e^{X_i}`, which conjugates the prefix `e^{t_1X_1}···e^{t_{i-1}X_{i-1}}`:
//!
//! - `Periodic` (`[X_i, X_j] = 0` for `j < i`): the restriction is 1-periodic and is
//!   interpolated trigonometrically (Dirichlet kernel).
//! - `FiberTwisted` (`[X_i, X_j] ∈ R X_1`): conjugation only shifts `t_1` by a fixed amount `L`,
//!   so the fiber mode `k` picks up the phase `e^{2πikL}` per period. After removing
//!   the phase each mode is periodic and again interpolated trigonometrically.
//! - `General`: local Lagrange interpolation; stencil nodes outside the cube are
//!   evaluated at the conjugated prefix.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::grid::{Grid, GridFunction};
use crate::lie::{GroupLaw, LieAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DirectionKind {
    Fiber,
    Periodic,
    FiberTwisted,
    General,
}

pub fn direction_kinds(alg: &LieAlgebra) -> Vec<DirectionKind> {
    (0..alg.dim())
        .map(|i| {
            if i == 0 {
                return DirectionKind::Fiber;
            }
            let targets: Vec<usize> =
                (0..i).flat_map(|j| alg.structure_constants(i, j).iter().map(|(k, _)| *k)).collect();
            if targets.is_empty() {
                DirectionKind::Periodic
            } else if targets.iter().all(|&k| k == 0) {
                DirectionKind::FiberTwisted
            } else {
                DirectionKind::General
            }
        })
        .collect()
}

/// Relative distance below which a coordinate counts as sitting on a grid node.
const NODE_TOL: f64 = 1e-10;

/// Trigonometric cardinal function of an `m`-point periodic grid.
fn dirichlet(x: f64, m: usize) -> f64 {
    let s = (PI * x).sin();
    if s.abs() < 1e-14 {
        return if m.is_multiple_of(2) && (x.round() as i64) % 2 != 0 { (m as f64 * PI * x).cos() } else { 1.0 };
    }
    let mf = m as f64;
    if m.is_multiple_of(2) {
        (mf * PI * x).sin() / (mf * (PI * x).tan())
    } else {
        (mf * PI * x).sin() / (mf * s)
    }
}

#[derive(Clone, Debug)]
pub struct Interpolator {
    law: Arc<GroupLaw>,
    grid: Grid,
    kinds: Vec<DirectionKind>,
    order: usize,
    half: usize,
    /// Per fiber line, `c_0, 2c_1, .., 2c_{m/2-1}, c_{m/2}` so that the line is
    /// `Re Σ_k coeffs[k] e^{2πikt}`.
    coeffs: Vec<Complex64>,
}

impl Interpolator {
    /// `order` is the (even) Lagrange stencil size used along `General` directions.
    pub fn new(alg: &LieAlgebra, f: &GridFunction, order: usize) -> Self {
        assert_eq!(alg.dim(), f.grid.ndim(), "algebra and grid dimensions differ");
        let m = f.grid.fiber_len();
        let half = m / 2;
        let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
        let coeffs: Vec<Complex64> = f
            .values
            .par_chunks(m)
            .flat_map_iter(|line| {
                let mut buf: Vec<Complex64> = line.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                fft.process(&mut buf);
                (0..=half).map(move |k| {
                    let c = buf[k] / m as f64;
                    if k == 0 || (m.is_multiple_of(2) && k == half) {
                        c
                    } else {
                        c * 2.0
                    }
                })
            })
            .collect();
        Interpolator {
            law: alg.group_law(),
            grid: f.grid.clone(),
            kinds: direction_kinds(alg),
            order: order.max(2) & !1,
            half,
            coeffs,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kinds(&self) -> &[DirectionKind] {
        &self.kinds
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut out = Complex64::new(0.0, 0.0);
        self.accumulate(self.grid.ndim(), x.to_vec(), 0, 1.0, Complex64::new(1.0, 0.0), &mut out);
        out.re
    }

    pub fn eval_many(&self, points: &[Vec<f64>]) -> Vec<f64> {
        points.par_iter().map(|p| self.eval(p)).collect()
    }

    /// Fiber-line spectrum evaluated at `t_1`, with extra per-mode phase `z^k`.
    fn line_value(&self, line: usize, t1: f64, z: Complex64) -> Complex64 {
        let c = &self.coeffs[line * (self.half + 1)..(line + 1) * (self.half + 1)];
        let rho = z * Complex64::from_polar(1.0, 2.0 * PI * t1);
        c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &ck| acc * rho + ck)
    }

    /// `e^{-q X_d} · h · e^{q X_d}` restricted to the first `d` coordinates.
    fn conjugate(&self, h: &[f64], d: usize, q: f64) -> Vec<f64> {
        let n = self.grid.ndim();
        let mut g = vec![0.0; n];
        g[..d].copy_from_slice(&h[..d]);
        let mut e = vec![0.0; n];
        e[d] = -q;
        let left = self.law.multiply_f64(&e, &g);
        e[d] = q;
        let mut out = self.law.multiply_f64(&left, &e);
        out.truncate(d);
        out
    }

    /// Left translation by `e^{-q X_d}` of a point supported on the first `d+1` coordinates.
    fn shift_down(&self, p: &[f64], d: usize, q: f64) -> Vec<f64> {
        let n = self.grid.ndim();
        let mut g = vec![0.0; n];
        g[..=d].copy_from_slice(&p[..=d]);
        let mut e = vec![0.0; n];
        e[d] = -q;
        let mut out = self.law.multiply_f64(&e, &g);
        out.truncate(d + 1);
        out
    }

    fn accumulate(&self, level: usize, mut p: Vec<f64>, line: usize, w: f64, z: Complex64, out: &mut Complex64) {
        if w == 0.0 {
            return;
        }
        if level == 1 {
            *out += self.line_value(line, p[0], z) * w;
            return;
        }
        let d = level - 1;
        let m = self.grid.dims()[d];
        let stride = self.grid.stride(d) / self.grid.fiber_len();
        let q = p[d].floor();
        if q != 0.0 {
            p = self.shift_down(&p, d, q);
        }
        let x = p[d] * m as f64;
        let nearest = x.round();
        if (x - nearest).abs() < NODE_TOL * m as f64 {
            let mut j = nearest as usize;
            if j == m {
                p = self.shift_down(&p, d, 1.0);
                j = 0;
            }
            p.truncate(d);
            self.accumulate(d, p, line + j * stride, w, z, out);
            return;
        }
        let s = p[d];
        p.truncate(d);
        match self.kinds[d] {
            DirectionKind::Periodic | DirectionKind::FiberTwisted => {
                let twist = if self.kinds[d] == DirectionKind::FiberTwisted {
                    self.conjugate(&p, d, 1.0)[0] - p[0]
                } else {
                    0.0
                };
                for j in 0..m {
                    let offset = s - j as f64 / m as f64;
                    let phase = Complex64::from_polar(1.0, 2.0 * PI * offset * twist);
                    self.accumulate(d, p.clone(), line + j * stride, w * dirichlet(offset, m), z * phase, out);
                }
            }
            DirectionKind::General | DirectionKind::Fiber => {
                let r = self.order as i64;
                let base = x.floor() as i64 - r / 2 + 1;
                for a in 0..r {
                    let j = base + a;
                    let weight: f64 = (0..r)
                        .filter(|&b| b != a)
                        .map(|b| (x - (base + b) as f64) / (a - b) as f64)
                        .product();
                    let wraps = j.div_euclid(m as i64);
                    let jj = j.rem_euclid(m as i64) as usize;
                    let prefix = if wraps == 0 { p.clone() } else { self.conjugate(&p, d, wraps as f64) };
                    self.accumulate(d, prefix, line + jj * stride, w * weight, z, out);
                }
            }
        }
    }
}
