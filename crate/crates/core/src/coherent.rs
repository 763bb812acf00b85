//! Exact algebra of finite superpositions of multimode coherent states.
//!
//! A [`SuperposedState`] is a list of [`CoherentTerm`]s, each a complex weight
//! times a product of coherent states |γ₀⟩⊗|γ₁⟩⊗…. Every linear-optical
//! element used by the generation circuits maps such a list onto another one,
//! so circuits can be evaluated without truncation. Measurements replace the
//! measured mode by a scalar kernel and drop it from the term.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockState;

/// Componentwise amplitude distance below which two terms are merged.
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Merged weights smaller than this fraction of the largest input weight are
/// dropped by [`SuperposedState::canonicalize`].
pub const PRUNE_TOLERANCE: f64 = 1e-12;

/// Photon-number parity of a cat state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

/// One weighted product of coherent states.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentTerm {
    pub weight: C64,
    pub amplitudes: Vec<C64>,
}

impl CoherentTerm {
    pub fn new(weight: C64, amplitudes: Vec<C64>) -> Self {
        Self { weight, amplitudes }
    }

    /// Real-amplitude convenience constructor.
    pub fn real(weight: f64, amplitudes: &[f64]) -> Self {
        Self {
            weight: C64::new(weight, 0.0),
            amplitudes: amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect(),
        }
    }
}

/// Unnormalized result of projecting one mode onto a measurement outcome.
///
/// `density_amplitude_norm2` is the squared norm of `state`: the probability density at a
/// homodyne outcome, or the probability of a photon-number outcome, when the
/// input state was normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalOutput {
    pub state: SuperposedState,
    pub density_amplitude_norm2: f64,
}

/// ⟨x|y⟩ for single-mode coherent states.
#[inline]
pub fn coherent_overlap(x: C64, y: C64) -> C64 {
    (-(x.norm_sqr() + y.norm_sqr()) / 2.0 + x.conj() * y).exp()
}

/// Momentum-eigenstate kernel ⟨p|γ⟩ including the Gaussian envelope.
///
/// For real γ this is π^{-1/4} e^{-p²/2} e^{-i√2 pγ}.
#[inline]
pub fn homodyne_amplitude(p: f64, gamma: C64) -> C64 {
    let shift = p - SQRT_2 * gamma.im;
    let exponent = C64::new(
        -shift * shift / 2.0,
        -SQRT_2 * p * gamma.re + gamma.re * gamma.im,
    );
    PI.powf(-0.25) * exponent.exp()
}

/// Fock amplitude ⟨n|γ⟩ = e^{-|γ|²/2} γⁿ/√n!.
pub fn fock_amplitude(n: usize, gamma: C64) -> C64 {
    let mut c = C64::new((-gamma.norm_sqr() / 2.0).exp(), 0.0);
    for k in 1..=n {
        c *= gamma / (k as f64).sqrt();
    }
    c
}

/// First `cutoff` Fock amplitudes of |γ⟩.
pub fn fock_expansion(gamma: C64, cutoff: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(cutoff);
    let mut c = C64::new((-gamma.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        if n > 0 {
            c *= gamma / (n as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// Finite superposition of multimode coherent states.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperposedState {
    mode_count: usize,
    terms: Vec<CoherentTerm>,
}

impl SuperposedState {
    /// State with no terms (the zero vector).
    pub fn zero(mode_count: usize) -> Self {
        Self {
            mode_count,
            terms: Vec::new(),
        }
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self::coherent(vec![C64::new(0.0, 0.0); mode_count])
    }

    /// Single product coherent state with unit weight.
    pub fn coherent(amplitudes: Vec<C64>) -> Self {
        Self {
            mode_count: amplitudes.len(),
            terms: vec![CoherentTerm::new(C64::new(1.0, 0.0), amplitudes)],
        }
    }

    pub fn from_terms(mode_count: usize, terms: Vec<CoherentTerm>) -> Result<Self> {
        for t in &terms {
            if t.amplitudes.len() != mode_count {
                return Err(Error::ModeMismatch(format!(
                    "term has {} amplitudes, state has {mode_count} modes",
                    t.amplitudes.len()
                )));
            }
            if !t.weight.re.is_finite() || !t.weight.im.is_finite() {
                return Err(Error::InvalidParameter("non-finite term weight".into()));
            }
        }
        Ok(Self { mode_count, terms })
    }

    /// Single-mode superposition Σ wₖ|aₖ⟩ with real weights and amplitudes.
    pub fn single_mode_real(terms: &[(f64, f64)]) -> Self {
        Self {
            mode_count: 1,
            terms: terms
                .iter()
                .map(|&(w, a)| CoherentTerm::real(w, &[a]))
                .collect(),
        }
    }

    /// Normalized cat state (|α⟩ ± |−α⟩)/𝒩± on `mode`, vacuum elsewhere.
    pub fn cat(alpha: f64, parity: Parity, mode_count: usize, mode: usize) -> Result<Self> {
        check_mode(mode, mode_count)?;
        let norm2 = cat_norm2(alpha, parity);
        if norm2 <= 0.0 {
            return Err(Error::DegenerateState(format!(
                "{parity:?} cat state with amplitude {alpha} has zero norm"
            )));
        }
        let scale = 1.0 / norm2.sqrt();
        let mut plus = vec![C64::new(0.0, 0.0); mode_count];
        let mut minus = plus.clone();
        plus[mode] = C64::new(alpha, 0.0);
        minus[mode] = C64::new(-alpha, 0.0);
        let state = Self {
            mode_count,
            terms: vec![
                CoherentTerm::new(C64::new(scale, 0.0), plus),
                CoherentTerm::new(C64::new(parity.sign() * scale, 0.0), minus),
            ],
        };
        Ok(state.canonicalize())
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn terms(&self) -> &[CoherentTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, weight: C64, amplitudes: Vec<C64>) -> Result<()> {
        if amplitudes.len() != self.mode_count {
            return Err(Error::ModeMismatch(format!(
                "term has {} amplitudes, state has {} modes",
                amplitudes.len(),
                self.mode_count
            )));
        }
        self.terms.push(CoherentTerm::new(weight, amplitudes));
        Ok(())
    }

    /// Largest coherent amplitude modulus over all terms and modes.
    pub fn max_amplitude(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.amplitudes.iter())
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            mode_count: self.mode_count,
            terms: self
                .terms
                .iter()
                .map(|t| CoherentTerm::new(t.weight * factor, t.amplitudes.clone()))
                .collect(),
        }
    }

    /// Vector sum `self + other` (terms concatenated, then canonicalized).
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeMismatch(format!(
                "cannot add {}-mode and {}-mode states",
                self.mode_count, other.mode_count
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            mode_count: self.mode_count,
            terms,
        }
        .canonicalize())
    }

    /// Tensor product with `other`, whose modes are appended after ours.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut amps = a.amplitudes.clone();
                amps.extend_from_slice(&b.amplitudes);
                terms.push(CoherentTerm::new(a.weight * b.weight, amps));
            }
        }
        Self {
            mode_count: self.mode_count + other.mode_count,
            terms,
        }
    }

    /// Displacement D(α) on one mode, keeping the exact phase
    /// D(α)|γ⟩ = e^{(αγ* − α*γ)/2}|γ+α⟩.
    pub fn displace(&self, mode: usize, alpha: C64) -> Result<Self> {
        check_mode(mode, self.mode_count)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let gamma = t.amplitudes[mode];
                let phase = ((alpha * gamma.conj() - alpha.conj() * gamma) / 2.0).exp();
                let mut amps = t.amplitudes.clone();
                amps[mode] = gamma + alpha;
                CoherentTerm::new(t.weight * phase, amps)
            })
            .collect();
        Ok(Self {
            mode_count: self.mode_count,
            terms,
        })
    }

    /// Beam splitter of transmittance `t` acting on ports (`mode_i`, `mode_j`):
    /// (u, v) ↦ (√T u + √(1−T) v, −√(1−T) u + √T v).
    ///
    /// With T = 1/2, a coherent input on port `mode_j` and vacuum on `mode_i`
    /// leaves both outputs at γ/√2.
    pub fn beam_split(&self, mode_i: usize, mode_j: usize, t: f64) -> Result<Self> {
        check_mode(mode_i, self.mode_count)?;
        check_mode(mode_j, self.mode_count)?;
        if mode_i == mode_j {
            return Err(Error::ModeMismatch(format!(
                "beam splitter needs two distinct modes, got {mode_i} twice"
            )));
        }
        check_transmittance(t)?;
        let (c, s) = (t.sqrt(), (1.0 - t).sqrt());
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let (u, v) = (term.amplitudes[mode_i], term.amplitudes[mode_j]);
                let mut amps = term.amplitudes.clone();
                amps[mode_i] = c * u + s * v;
                amps[mode_j] = -s * u + c * v;
                CoherentTerm::new(term.weight, amps)
            })
            .collect();
        Ok(Self {
            mode_count: self.mode_count,
            terms,
        })
    }

    /// ⟨self|other⟩ from the Gaussian coherent-state overlaps.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.mode_count != other.mode_count {
            return Err(Error::ModeMismatch(format!(
                "inner product of {}-mode and {}-mode states",
                self.mode_count, other.mode_count
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.terms {
            for b in &other.terms {
                let overlap: C64 = a
                    .amplitudes
                    .iter()
                    .zip(&b.amplitudes)
                    .map(|(&x, &y)| coherent_overlap(x, y))
                    .product();
                acc += a.weight.conj() * b.weight * overlap;
            }
        }
        Ok(acc)
    }

    /// Squared norm, clamped at zero against Gram-matrix rounding.
    pub fn norm2(&self) -> f64 {
        self.norm2_raw().max(0.0)
    }

    /// Squared norm before clamping (may be a tiny negative number).
    pub fn norm2_raw(&self) -> f64 {
        let mut acc = 0.0;
        for (k, a) in self.terms.iter().enumerate() {
            acc += a.weight.norm_sqr();
            for b in &self.terms[k + 1..] {
                let overlap: C64 = a
                    .amplitudes
                    .iter()
                    .zip(&b.amplitudes)
                    .map(|(&x, &y)| coherent_overlap(x, y))
                    .product();
                acc += 2.0 * (a.weight.conj() * b.weight * overlap).re;
            }
        }
        acc
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm2();
        if n2 <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateState("cannot normalize a zero-norm state".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    /// Projects `mode` onto the momentum eigenstate ⟨p| and removes it.
    pub fn homodyne_project(&self, mode: usize, p: f64) -> Result<ConditionalOutput> {
        self.project_with(mode, |gamma| homodyne_amplitude(p, gamma))
    }

    /// Projects `mode` onto the Fock state ⟨n| and removes it.
    pub fn project_fock(&self, mode: usize, n: usize) -> Result<ConditionalOutput> {
        self.project_with(mode, |gamma| fock_amplitude(n, gamma))
    }

    fn project_with(&self, mode: usize, kernel: impl Fn(C64) -> C64) -> Result<ConditionalOutput> {
        check_mode(mode, self.mode_count)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut amps = t.amplitudes.clone();
                let gamma = amps.remove(mode);
                CoherentTerm::new(t.weight * kernel(gamma), amps)
            })
            .collect();
        let state = Self {
            mode_count: self.mode_count - 1,
            terms,
        }
        .canonicalize();
        let density = state.norm2();
        Ok(ConditionalOutput {
            state,
            density_amplitude_norm2: density,
        })
    }

    /// Merges terms with coincident amplitude vectors and drops negligible
    /// weights. Term order follows first occurrence.
    pub fn canonicalize(&self) -> Self {
        let mut merged: Vec<CoherentTerm> = Vec::with_capacity(self.terms.len());
        let mut max_weight: f64 = 0.0;
        for t in &self.terms {
            max_weight = max_weight.max(t.weight.norm());
            match merged.iter_mut().find(|m| amplitudes_close(&m.amplitudes, &t.amplitudes)) {
                Some(m) => m.weight += t.weight,
                None => merged.push(t.clone()),
            }
        }
        let floor = PRUNE_TOLERANCE * max_weight;
        merged.retain(|m| m.weight.norm() > floor);
        Self {
            mode_count: self.mode_count,
            terms: merged,
        }
    }

    /// Dense Fock representation truncated at the given per-mode cutoffs.
    ///
    /// The returned state records `1 − ‖truncated‖/‖exact‖` as its truncation
    /// error; `bound` turns an excessive error into [`Error::CutoffTooSmall`].
    pub fn to_fock(&self, cutoffs: &[usize], bound: Option<f64>) -> Result<FockState> {
        if cutoffs.len() != self.mode_count {
            return Err(Error::ModeMismatch(format!(
                "{} cutoffs given for a {}-mode state",
                cutoffs.len(),
                self.mode_count
            )));
        }
        if cutoffs.contains(&0) {
            return Err(Error::InvalidParameter("Fock cutoffs must be positive".into()));
        }
        let mut amps = vec![C64::new(0.0, 0.0); cutoffs.iter().product()];
        for term in &self.terms {
            let factors: Vec<Vec<C64>> = term
                .amplitudes
                .iter()
                .zip(cutoffs)
                .map(|(&g, &c)| fock_expansion(g, c))
                .collect();
            accumulate_product(&mut amps, &factors, term.weight);
        }
        let mut state = FockState::from_amplitudes(cutoffs.to_vec(), amps)?;
        let exact = self.norm2();
        let error = if exact > 1e-300 {
            (1.0 - (state.norm2() / exact).sqrt()).max(0.0)
        } else {
            0.0
        };
        state.set_truncation_error(error);
        if let Some(bound) = bound {
            if error > bound {
                return Err(Error::CutoffTooSmall { error, bound });
            }
        }
        Ok(state)
    }

    /// Termwise equality up to one common complex scale factor.
    ///
    /// Both states are canonicalized; every amplitude vector must have a
    /// partner within `tol`, and weights must satisfy w_self = λ·w_other with
    /// relative error below `tol`.
    pub fn matches_termwise(&self, other: &Self, tol: f64) -> bool {
        if self.mode_count != other.mode_count {
            return false;
        }
        let a = self.canonicalize();
        let b = other.canonicalize();
        if a.len() != b.len() || a.is_empty() {
            return a.len() == b.len();
        }
        let mut ratio: Option<C64> = None;
        let scale = a.terms.iter().map(|t| t.weight.norm()).fold(0.0, f64::max);
        for ta in &a.terms {
            let Some(tb) = b.terms.iter().find(|tb| {
                ta.amplitudes
                    .iter()
                    .zip(&tb.amplitudes)
                    .all(|(x, y)| (x - y).norm() <= tol)
            }) else {
                return false;
            };
            let r = *ratio.get_or_insert(ta.weight / tb.weight);
            if (ta.weight - r * tb.weight).norm() > tol * scale {
                return false;
            }
        }
        true
    }
}

/// Normalized fidelity |⟨a|b⟩|² / (‖a‖²‖b‖²).
pub fn fidelity(a: &SuperposedState, b: &SuperposedState) -> Result<f64> {
    let (na, nb) = (a.norm2(), b.norm2());
    if na <= 0.0 || nb <= 0.0 {
        return Err(Error::DegenerateState("fidelity with a zero-norm state".into()));
    }
    Ok((a.inner(b)?.norm_sqr() / (na * nb)).min(1.0))
}

/// Squared norm of |α⟩ ± |−α⟩ for real α, 𝒩±² = 2(1 ± e^{−2α²}).
pub fn cat_norm2(alpha: f64, parity: Parity) -> f64 {
    let x = 2.0 * alpha * alpha;
    match parity {
        Parity::Even => 2.0 * (1.0 + (-x).exp()),
        Parity::Odd => -2.0 * (-x).exp_m1(),
    }
}

fn amplitudes_close(a: &[C64], b: &[C64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.re - y.re).abs() <= MERGE_TOLERANCE && (x.im - y.im).abs() <= MERGE_TOLERANCE)
}

pub(crate) fn check_mode(mode: usize, mode_count: usize) -> Result<()> {
    if mode < mode_count {
        Ok(())
    } else {
        Err(Error::InvalidMode { mode, mode_count })
    }
}

pub(crate) fn check_transmittance(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidTransmittance(t))
    }
}

// amps += weight · f₀ ⊗ f₁ ⊗ … (row-major, last mode fastest)
fn accumulate_product(amps: &mut [C64], factors: &[Vec<C64>], weight: C64) {
    fn recurse(amps: &mut [C64], factors: &[Vec<C64>], coeff: C64) {
        match factors.split_first() {
            None => amps[0] += coeff,
            Some((first, rest)) => {
                let stride = amps.len() / first.len();
                for (k, &f) in first.iter().enumerate() {
                    let c = coeff * f;
                    if c.norm_sqr() == 0.0 {
                        continue;
                    }
                    recurse(&mut amps[k * stride..(k + 1) * stride], rest, c);
                }
            }
        }
    }
    recurse(amps, factors, weight);
}
