//! Dense truncated Fock-space engine.
//!
//! Amplitudes are stored row-major over the per-mode cutoffs, last mode
//! fastest. Every operation returns a fresh state.

mod beam_splitter;
mod wigner;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::coherent::{check_mode, check_transmittance};
use crate::error::{Error, Result};

pub use beam_splitter::number_state_image;
pub use wigner::{displacement_matrix, GridSpec, WignerGrid};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Truncated multimode state |ψ⟩ = Σ ψ_{n₀n₁…}|n₀n₁…⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    cutoffs: Vec<usize>,
    amplitudes: Vec<C64>,
    truncation_error: f64,
}

impl FockState {
    pub fn zeros(cutoffs: Vec<usize>) -> Self {
        let len = cutoffs.iter().product();
        Self {
            cutoffs,
            amplitudes: vec![ZERO; len],
            truncation_error: 0.0,
        }
    }

    pub fn vacuum(cutoffs: Vec<usize>) -> Self {
        let mut s = Self::zeros(cutoffs);
        if let Some(a) = s.amplitudes.first_mut() {
            *a = C64::new(1.0, 0.0);
        }
        s
    }

    /// Number state |n₀n₁…⟩.
    pub fn basis(cutoffs: Vec<usize>, occupation: &[usize]) -> Result<Self> {
        let mut s = Self::zeros(cutoffs);
        let idx = s.flat_index(occupation)?;
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(cutoffs: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        let len: usize = cutoffs.iter().product();
        if amplitudes.len() != len {
            return Err(Error::ModeMismatch(format!(
                "{} amplitudes for cutoffs {cutoffs:?} ({len} expected)",
                amplitudes.len()
            )));
        }
        Ok(Self {
            cutoffs,
            amplitudes,
            truncation_error: 0.0,
        })
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn mode_count(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Accumulated estimate of 1 − ‖ψ_truncated‖/‖ψ_exact‖.
    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    pub fn set_truncation_error(&mut self, error: f64) {
        self.truncation_error = error;
    }

    pub fn get(&self, occupation: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.flat_index(occupation)?])
    }

    fn flat_index(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.cutoffs.len() {
            return Err(Error::ModeMismatch(format!(
                "occupation {occupation:?} for {} modes",
                self.cutoffs.len()
            )));
        }
        let mut idx = 0;
        for (&n, &c) in occupation.iter().zip(&self.cutoffs) {
            if n >= c {
                return Err(Error::InvalidParameter(format!(
                    "photon number {n} outside cutoff {c}"
                )));
            }
            idx = idx * c + n;
        }
        Ok(idx)
    }

    fn stride(&self, mode: usize) -> usize {
        self.cutoffs[mode + 1..].iter().product()
    }

    pub fn norm2(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            cutoffs: self.cutoffs.clone(),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
            truncation_error: self.truncation_error,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm2();
        if n2 <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateState("cannot normalize a zero-norm state".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.cutoffs != other.cutoffs {
            return Err(Error::ModeMismatch(format!(
                "cutoffs {:?} and {:?} differ",
                self.cutoffs, other.cutoffs
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.extend_from_slice(&other.cutoffs);
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Self {
            cutoffs,
            amplitudes,
            truncation_error: self.truncation_error + other.truncation_error,
        }
    }

    /// Copy with new per-mode cutoffs; amplitudes outside the smaller box are
    /// dropped, new entries are zero.
    pub fn resized(&self, cutoffs: Vec<usize>) -> Result<Self> {
        if cutoffs.len() != self.cutoffs.len() {
            return Err(Error::ModeMismatch(format!(
                "cannot resize {} modes to {}",
                self.cutoffs.len(),
                cutoffs.len()
            )));
        }
        let mut out = Self::zeros(cutoffs);
        out.truncation_error = self.truncation_error;
        let mut occ = vec![0; self.cutoffs.len()];
        for (flat, a) in self.amplitudes.iter().enumerate() {
            let mut rem = flat;
            for m in (0..occ.len()).rev() {
                occ[m] = rem % self.cutoffs[m];
                rem /= self.cutoffs[m];
            }
            if let Ok(idx) = out.flat_index(&occ) {
                out.amplitudes[idx] = *a;
            }
        }
        Ok(out)
    }

    /// Reorders modes so that new mode k is old mode `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.mode_count();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&m| m >= n || std::mem::replace(&mut seen[m], true)) {
            return Err(Error::ModeMismatch(format!("{order:?} is not a permutation of {n} modes")));
        }
        let cutoffs: Vec<usize> = order.iter().map(|&m| self.cutoffs[m]).collect();
        let mut out = Self::zeros(cutoffs);
        out.truncation_error = self.truncation_error;
        let mut occ = vec![0; n];
        for (flat, a) in self.amplitudes.iter().enumerate() {
            let mut rem = flat;
            for m in (0..n).rev() {
                occ[m] = rem % self.cutoffs[m];
                rem /= self.cutoffs[m];
            }
            let idx = order.iter().fold(0, |acc, &m| acc * self.cutoffs[m] + occ[m]);
            out.amplitudes[idx] = *a;
        }
        Ok(out)
    }

    /// Applies the single-mode operator `matrix` (rows: output cutoff,
    /// columns: current cutoff) on `mode`.
    pub fn apply_single_mode(&self, mode: usize, matrix: &DMatrix<C64>) -> Result<Self> {
        check_mode(mode, self.mode_count())?;
        let d_in = self.cutoffs[mode];
        if matrix.ncols() != d_in {
            return Err(Error::ModeMismatch(format!(
                "operator has {} columns, mode {mode} has cutoff {d_in}",
                matrix.ncols()
            )));
        }
        let d_out = matrix.nrows();
        let mut cutoffs = self.cutoffs.clone();
        cutoffs[mode] = d_out;
        let inner = self.stride(mode);
        let outer: usize = self.cutoffs[..mode].iter().product();
        let mut out = vec![ZERO; outer * d_out * inner];
        for o in 0..outer {
            for n in 0..d_in {
                for r in 0..inner {
                    let a = self.amplitudes[(o * d_in + n) * inner + r];
                    if a == ZERO {
                        continue;
                    }
                    for k in 0..d_out {
                        out[(o * d_out + k) * inner + r] += matrix[(k, n)] * a;
                    }
                }
            }
        }
        Ok(Self {
            cutoffs,
            amplitudes: out,
            truncation_error: self.truncation_error,
        })
    }

    /// Contracts `mode` with the row vector `bra` (⟨χ| = Σ bra[n]⟨n|) and
    /// removes it.
    pub fn contract_mode(&self, mode: usize, bra: &[C64]) -> Result<Self> {
        check_mode(mode, self.mode_count())?;
        let d = self.cutoffs[mode];
        let inner = self.stride(mode);
        let outer: usize = self.cutoffs[..mode].iter().product();
        let mut out = vec![ZERO; outer * inner];
        for o in 0..outer {
            for (n, &b) in bra.iter().enumerate().take(d) {
                if b == ZERO {
                    continue;
                }
                for r in 0..inner {
                    out[o * inner + r] += b * self.amplitudes[(o * d + n) * inner + r];
                }
            }
        }
        let mut cutoffs = self.cutoffs.clone();
        cutoffs.remove(mode);
        Ok(Self {
            cutoffs,
            amplitudes: out,
            truncation_error: self.truncation_error,
        })
    }

    /// Displacement D(α) = exp(αâ† − α*â) on `mode`.
    ///
    /// The generator is exponentiated on a padded space and the leading block
    /// is kept; the resulting norm loss is added to the truncation error and
    /// checked against `bound`.
    pub fn apply_displacement(&self, mode: usize, alpha: C64, bound: Option<f64>) -> Result<Self> {
        check_mode(mode, self.mode_count())?;
        let d = self.cutoffs[mode];
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "displacement needs cutoff ≥ 2 on mode {mode}, got {d}"
            )));
        }
        if alpha == ZERO {
            return Ok(self.clone());
        }
        let matrix = displacement_exp(alpha, d);
        let mut out = self.apply_single_mode(mode, &matrix)?;
        let before = self.norm2();
        let drop = if before > 0.0 {
            (1.0 - (out.norm2() / before).sqrt()).max(0.0)
        } else {
            0.0
        };
        out.truncation_error += drop;
        if let Some(bound) = bound {
            if drop > bound {
                return Err(Error::CutoffTooSmall { error: drop, bound });
            }
        }
        Ok(out)
    }

    /// Two-mode beam splitter exp(θ(â_i†â_j − â_iâ_j†)), cos θ = √T.
    ///
    /// Coherent amplitudes (u, v) on (i, j) map to
    /// (√T u + √(1−T) v, −√(1−T) u + √T v), so |1,0⟩ ↦ √T|1,0⟩ − √(1−T)|0,1⟩.
    /// Photon number is conserved within each total-number block; amplitude
    /// pushed beyond the cutoff box is dropped and counted as truncation.
    pub fn apply_beam_splitter(&self, mode_i: usize, mode_j: usize, t: f64) -> Result<Self> {
        check_mode(mode_i, self.mode_count())?;
        check_mode(mode_j, self.mode_count())?;
        if mode_i == mode_j {
            return Err(Error::ModeMismatch(format!(
                "beam splitter needs two distinct modes, got {mode_i} twice"
            )));
        }
        if self.cutoffs[mode_i] != self.cutoffs[mode_j] {
            return Err(Error::ModeMismatch(format!(
                "beam splitter modes have cutoffs {} and {}",
                self.cutoffs[mode_i], self.cutoffs[mode_j]
            )));
        }
        check_transmittance(t)?;
        let images = beam_splitter::BlockImages::new(self.cutoffs[mode_i], t);
        let mut out = beam_splitter::apply(self, mode_i, mode_j, &images);
        let before = self.norm2();
        if before > 0.0 {
            out.truncation_error += (1.0 - (out.norm2() / before).sqrt()).max(0.0);
        }
        Ok(out)
    }

    /// Projects `mode` on the momentum eigenstate ⟨p|; returns the reduced
    /// unnormalized state and its squared norm.
    pub fn project_quadrature(&self, mode: usize, p: f64) -> Result<(Self, f64)> {
        check_mode(mode, self.mode_count())?;
        let kernel = homodyne_kernel(p, self.cutoffs[mode]);
        let out = self.contract_mode(mode, &kernel)?;
        let density = out.norm2();
        Ok((out, density))
    }

    /// Projects `mode` on ⟨n|; returns the reduced state and outcome probability.
    pub fn project_fock(&self, mode: usize, n: usize) -> Result<(Self, f64)> {
        check_mode(mode, self.mode_count())?;
        let mut bra = vec![ZERO; self.cutoffs[mode]];
        if n < bra.len() {
            bra[n] = C64::new(1.0, 0.0);
        }
        let out = self.contract_mode(mode, &bra)?;
        let prob = out.norm2();
        Ok((out, prob))
    }

    /// Photon-number distribution of a single-mode state.
    pub fn number_distribution(&self) -> Result<Vec<f64>> {
        if self.mode_count() != 1 {
            return Err(Error::NotSingleMode(self.mode_count()));
        }
        Ok(self.amplitudes.iter().map(|a| a.norm_sqr()).collect())
    }

    /// Wigner function on `grid` by the displaced-parity sum.
    pub fn wigner(&self, grid: &GridSpec) -> Result<WignerGrid> {
        wigner::wigner(self, grid)
    }
}

/// |⟨a|b⟩|² / (‖a‖²‖b‖²).
pub fn fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    let overlap = a.inner(b)?;
    let (na, nb) = (a.norm2(), b.norm2());
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::DegenerateState("fidelity with a zero-norm state".into()));
    }
    Ok((overlap.norm_sqr() / (na * nb)).min(1.0))
}

/// ⟨p|n⟩ = (−i)ⁿ ψₙ(p) for n < `cutoff`, with ψₙ the normalized Hermite
/// functions.
pub fn homodyne_kernel(p: f64, cutoff: usize) -> Vec<C64> {
    let psi = hermite_functions(p, cutoff);
    let phases = [
        C64::new(1.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
    ];
    psi.iter()
        .enumerate()
        .map(|(n, &v)| phases[n % 4] * v)
        .collect()
}

/// Normalized Hermite functions ψ₀…ψ_{cutoff−1} at `x`.
pub fn hermite_functions(x: f64, cutoff: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(cutoff);
    if cutoff == 0 {
        return out;
    }
    out.push(PI.powf(-0.25) * (-x * x / 2.0).exp());
    if cutoff > 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for n in 2..cutoff {
        let nf = n as f64;
        let v = (2.0 / nf).sqrt() * x * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
        out.push(v);
    }
    out
}

// D(α) on a cutoff-d space: exp of the generator on a larger space, top-left block.
fn displacement_exp(alpha: C64, d: usize) -> DMatrix<C64> {
    let big = d + d.max(20);
    let mut gen = DMatrix::<C64>::zeros(big, big);
    for n in 0..big - 1 {
        let s = ((n + 1) as f64).sqrt();
        gen[(n + 1, n)] = alpha * s;
        gen[(n, n + 1)] = -alpha.conj() * s;
    }
    gen.exp().view((0, 0), (d, d)).into_owned()
}
