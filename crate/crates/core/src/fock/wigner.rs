//! Wigner functions by the displaced-parity formula
//! W(x, p) = (1/π) Σₙ (−1)ⁿ |⟨n|D(−γ)|ψ⟩|², γ = (x + ip)/√2.

use std::f64::consts::{FRAC_1_PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FockState, ZERO};
use crate::error::{Error, Result};

/// Uniform rectangular phase-space grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(6.0, 201)
    }
}

impl GridSpec {
    /// [−half_width, half_width]² with `points` samples per axis.
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            x_points: points,
            p_min: -half_width,
            p_max: half_width,
            p_points: points,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = |lo: f64, hi: f64, n: usize| lo.is_finite() && hi.is_finite() && (n == 1 || (hi > lo && n >= 2));
        if ok(self.x_min, self.x_max, self.x_points) && ok(self.p_min, self.p_max, self.p_points) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid Wigner grid {self:?}")))
        }
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| lo + step * k as f64).collect()
}

/// Sampled Wigner function; `values` is row-major with x as the slow index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p_axis.len() + ip]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn spacing(axis: &[f64]) -> f64 {
        if axis.len() > 1 {
            axis[1] - axis[0]
        } else {
            1.0
        }
    }

    /// Σ W dx dp over the grid.
    pub fn riemann_sum(&self) -> f64 {
        self.values.iter().sum::<f64>() * Self::spacing(&self.x_axis) * Self::spacing(&self.p_axis)
    }

    /// ∫ W dp for every x sample (the position distribution).
    pub fn x_marginal(&self) -> Vec<f64> {
        let dp = Self::spacing(&self.p_axis);
        self.values
            .chunks(self.p_axis.len())
            .map(|row| row.iter().sum::<f64>() * dp)
            .collect()
    }
}

/// Matrix elements ⟨n|D(δ)|m⟩ for n < `rows`, m < `cols`, by the exact
/// recursion D|m⟩ = (â† − δ*) D|m−1⟩ / √m.
pub fn displacement_matrix(delta: C64, rows: usize, cols: usize) -> DMatrix<C64> {
    let mut out = DMatrix::<C64>::zeros(rows, cols);
    if rows == 0 || cols == 0 {
        return out;
    }
    let mut col = coherent_column(delta, rows);
    out.set_column(0, &nalgebra::DVector::from_vec(col.clone()));
    for m in 1..cols {
        col = raise_column(&col, delta, m);
        out.set_column(m, &nalgebra::DVector::from_vec(col.clone()));
    }
    out
}

fn coherent_column(delta: C64, rows: usize) -> Vec<C64> {
    let mut col = Vec::with_capacity(rows);
    let mut c = C64::new((-delta.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..rows {
        if n > 0 {
            c *= delta / (n as f64).sqrt();
        }
        col.push(c);
    }
    col
}

fn raise_column(prev: &[C64], delta: C64, m: usize) -> Vec<C64> {
    let inv = 1.0 / (m as f64).sqrt();
    let dc = delta.conj();
    (0..prev.len())
        .map(|n| {
            let up = if n > 0 {
                prev[n - 1] * (n as f64).sqrt()
            } else {
                ZERO
            };
            (up - dc * prev[n]) * inv
        })
        .collect()
}

// ⟨n|D(δ)|ψ⟩ for n < rows.
fn displaced(psi: &[C64], delta: C64, rows: usize) -> Vec<C64> {
    let mut col = coherent_column(delta, rows);
    let mut acc: Vec<C64> = col.iter().map(|c| c * psi[0]).collect();
    for (m, &a) in psi.iter().enumerate().skip(1) {
        col = raise_column(&col, delta, m);
        if a != ZERO {
            for (x, c) in acc.iter_mut().zip(&col) {
                *x += c * a;
            }
        }
    }
    acc
}

fn point_value(psi: &[C64], norm2: f64, mean_n: f64, gamma: C64) -> f64 {
    let reach = gamma.norm() + mean_n.sqrt();
    let mut rows = (reach * reach + 6.0 * reach + psi.len() as f64 / 2.0 + 10.0).ceil() as usize;
    rows = rows.max(psi.len() + 10);
    loop {
        let phi = displaced(psi, -gamma, rows);
        let kept: f64 = phi.iter().map(|a| a.norm_sqr()).sum();
        if norm2 - kept < 1e-12 * norm2 || rows > 4096 {
            let parity: f64 = phi
                .iter()
                .enumerate()
                .map(|(n, a)| if n % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
                .sum();
            return FRAC_1_PI * parity;
        }
        rows *= 2;
    }
}

pub(super) fn wigner(state: &FockState, grid: &GridSpec) -> Result<WignerGrid> {
    if state.mode_count() != 1 {
        return Err(Error::NotSingleMode(state.mode_count()));
    }
    grid.validate()?;
    let psi = state.amplitudes();
    let norm2 = state.norm2();
    if norm2 <= 0.0 {
        return Err(Error::DegenerateState("Wigner function of a zero state".into()));
    }
    let mean_n = psi
        .iter()
        .enumerate()
        .map(|(n, a)| n as f64 * a.norm_sqr())
        .sum::<f64>()
        / norm2;
    let x_axis = axis(grid.x_min, grid.x_max, grid.x_points);
    let p_axis = axis(grid.p_min, grid.p_max, grid.p_points);
    let np = p_axis.len();
    let values: Vec<f64> = (0..x_axis.len() * np)
        .into_par_iter()
        .map(|k| {
            let gamma = C64::new(x_axis[k / np], p_axis[k % np]) / SQRT_2;
            point_value(psi, norm2, mean_n, gamma) / norm2
        })
        .collect();
    Ok(WignerGrid {
        x_axis,
        p_axis,
        values,
    })
}
