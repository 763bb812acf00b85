//! Figures of merit: single-photon and hybrid-state fidelities, the optimal
//! cat amplitude, acceptance-window trade-offs, approximation validity and
//! photon-number parity spectra.

mod tradeoff;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherent::{fidelity, Parity, SuperposedState};
use crate::error::{Error, Result};
use crate::fock::{self, FockState};
use crate::optimize;
use crate::protocols::{
    default_cutoff, hybrid_circuit, hybrid_generate, split_photon, states, AncillaModel, HybridState, LogicalInput,
};

pub use tradeoff::{tradeoff, TradeoffModel, DEFAULT_P_MAX};

/// One row of a parameter sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub parameter: f64,
    pub fidelity: f64,
    pub probability: Option<f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl SweepRecord {
    pub fn new(parameter: f64, fidelity: f64) -> Self {
        Self {
            parameter,
            fidelity,
            probability: None,
            diagnostics: BTreeMap::new(),
        }
    }
}

/// Photon-number parity split of a single-mode state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParitySpectrum {
    pub even_weight: f64,
    pub odd_weight: f64,
    /// |⟨n|ψ⟩|²/‖ψ‖² for n below the cutoff.
    pub weights: Vec<f64>,
}

/// Which engine evaluates a simulated quantity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Coherent,
    Fock,
}

/// |⟨1|C⁻_α⟩|² = 4α²e^{−α²}/(𝒩⁻_α)².
pub fn single_photon_fidelity(alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        return Err(Error::DegenerateState("odd cat with zero amplitude".into()));
    }
    let a2 = alpha * alpha;
    Ok(4.0 * a2 * (-a2).exp() / (-2.0 * (-2.0 * a2).exp_m1()))
}

// 1 − e^{−x}
fn d(x: f64) -> f64 {
    -(-x).exp_m1()
}

// e^{−x} − 1 + x
fn g(x: f64) -> f64 {
    if x > 0.5 {
        return (-x).exp() - 1.0 + x;
    }
    let mut term = x * x / 2.0;
    let mut sum = 0.0f64;
    let mut k = 2.0;
    while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
        sum += term;
        k += 1.0;
        term *= -x / k;
    }
    sum
}

/// Closed-form fidelity between the exact first-generation output and the
/// target hybrid state, evaluated without catastrophic cancellation at
/// small α.
pub fn closed_form_fidelity(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::DegenerateState(format!("amplitude {alpha} must be positive")));
    }
    let b2 = alpha * alpha / 2.0;
    let (d2, d4, d8) = (d(2.0 * b2), d(4.0 * b2), d(8.0 * b2));
    let n0 = -8.0 * g(2.0 * b2) + 2.0 * g(8.0 * b2);
    let n1 = 2.0 * d2;
    let npr = n0 + 2.0 * d4 * (d8 - 2.0 * d2);
    let overlap = n0 + 2.0 * alpha * (-b2 / 2.0).exp() * d4;
    Ok((-alpha * alpha).exp() * overlap * overlap / ((n0 + n1) * npr))
}

/// Maximizer of [`closed_form_fidelity`] on [lo, hi]: scan at step 1e−3,
/// golden-section refinement to 1e−6.
pub fn optimal_alpha(lo: f64, hi: f64) -> Result<(f64, f64)> {
    optimal_alpha_with_step(lo, hi, 1e-3)
}

pub fn optimal_alpha_with_step(lo: f64, hi: f64, step: f64) -> Result<(f64, f64)> {
    if !(lo > 0.0 && hi <= 2.0 && lo <= hi) {
        return Err(Error::InvalidParameter(format!("search interval [{lo}, {hi}] must lie in (0, 2]")));
    }
    optimize::maximize(|a| closed_form_fidelity(a).unwrap_or(0.0), lo, hi, step, 1e-6)
}

/// Fidelity between the simulated exact output at p = 0 and the target
/// hybrid state, by either engine.
pub fn simulated_fidelity(alpha: f64, engine: Engine, cutoff: Option<usize>) -> Result<f64> {
    let target = states::hybrid_target(alpha, 0, 2)?;
    match engine {
        Engine::Coherent => {
            let out = hybrid_generate(&LogicalInput::OddCat, alpha, 0.0, AncillaModel::Exact)?;
            let projected = out.state.label_coherent_mode(2, 1)?;
            let overlap = target.inner(&projected)?;
            Ok(overlap.norm_sqr() / (target.norm2() * out.density))
        }
        Engine::Fock => {
            let run = hybrid_circuit(&LogicalInput::OddCat, alpha, 0.0, AncillaModel::Exact)?.run_fock(cutoff)?;
            fock::fidelity(&target.to_fock(run.cutoff, None)?, &run.state)
        }
    }
}

/// Closed-form fidelity over an evenly spaced grid, evaluated in parallel
/// and returned in grid order.
pub fn sweep_fidelity(lo: f64, hi: f64, step: f64) -> Result<Vec<SweepRecord>> {
    if !(step > 0.0 && lo <= hi) {
        return Err(Error::InvalidParameter(format!("bad sweep [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .into_par_iter()
        .map(|k| {
            let alpha = lo + step * k as f64;
            Ok(SweepRecord::new(alpha, closed_form_fidelity(alpha)?))
        })
        .collect()
}

/// Exact post-splitter state |α⟩|α⟩ − |−α⟩|−α⟩ on (mode 1, mode 2).
pub fn split_cat_exact(alpha: f64) -> Result<HybridState> {
    HybridState::coherent(
        vec![1, 2],
        SuperposedState::from_terms(
            2,
            vec![
                crate::CoherentTerm::real(1.0, &[alpha, alpha]),
                crate::CoherentTerm::real(-1.0, &[-alpha, -alpha]),
            ],
        )?,
    )
}

/// Fidelity between the exact split cat and (|C⁻_α⟩|0⟩ + |0⟩|1⟩)/√2.
pub fn approximation_validity(alpha: f64, engine: Engine) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::DegenerateState(format!("amplitude {alpha} must be positive")));
    }
    let exact = split_cat_exact(alpha)?;
    let approx = split_photon(1, 2, alpha, true)?;
    match engine {
        Engine::Coherent => {
            let overlap = approx.inner(&exact.label_coherent_mode(2, 1)?)?;
            Ok(overlap.norm_sqr() / (approx.norm2() * exact.norm2()))
        }
        Engine::Fock => {
            let cutoff = default_cutoff(alpha).max(4);
            fock::fidelity(&approx.to_fock(cutoff, None)?, &exact.to_fock(cutoff, None)?)
        }
    }
}

/// Weight of {|1,2⟩, |2,1⟩, |0,3⟩} in the split cat. With `normalized` the
/// state is normalized first; otherwise the weight refers to the
/// unnormalized |α⟩|α⟩ − |−α⟩|−α⟩.
pub fn neglected_population(alpha: f64, normalized: bool) -> Result<f64> {
    let exact = split_cat_exact(alpha)?;
    let state = exact.component(&[]);
    let mut weight = 0.0;
    for (m, n) in [(1, 2), (2, 1), (0, 3)] {
        let a = state.project_fock(0, m)?.state.project_fock(0, n)?.state;
        weight += a.norm2();
    }
    Ok(if normalized { weight / state.norm2() } else { weight })
}

/// Single-mode Fock conversion whose cutoff grows from the default until the
/// truncation error is below 1e−14, stops improving, or the cutoff passes 400.
pub fn to_fock_auto(state: &SuperposedState) -> Result<FockState> {
    if state.mode_count() != 1 {
        return Err(Error::NotSingleMode(state.mode_count()));
    }
    let mut cutoff = default_cutoff(state.max_amplitude());
    let mut f = state.to_fock(&[cutoff], None)?;
    while f.truncation_error() >= 1e-14 && cutoff <= 400 {
        cutoff += 10;
        let next = state.to_fock(&[cutoff], None)?;
        if next.truncation_error() >= f.truncation_error() {
            return Ok(next);
        }
        f = next;
    }
    Ok(f)
}

/// Parity spectrum of `state` after displacing it by `frame`.
pub fn parity_spectrum(state: &SuperposedState, frame: C64) -> Result<ParitySpectrum> {
    if state.mode_count() != 1 {
        return Err(Error::NotSingleMode(state.mode_count()));
    }
    let shifted = state.displace(0, frame)?;
    let norm2 = shifted.norm2();
    if norm2 <= 0.0 {
        return Err(Error::DegenerateState("parity spectrum of a zero state".into()));
    }
    let f = to_fock_auto(&shifted)?;
    let weights: Vec<f64> = f.number_distribution()?.iter().map(|w| w / norm2).collect();
    let even_weight = weights.iter().step_by(2).sum();
    let odd_weight = weights.iter().skip(1).step_by(2).sum();
    Ok(ParitySpectrum {
        even_weight,
        odd_weight,
        weights,
    })
}

/// Normalized overlaps between the qutrit branches at p = 0:
/// (|⟨b0|b1⟩|, |⟨b1|b2⟩|, |⟨b0|b2⟩|).
pub fn qutrit_overlaps(alpha: f64) -> Result<[f64; 3]> {
    let out = crate::protocols::qutrit_generate(alpha, 0.0)?;
    let (b0, b1, b2) = (out.branch(0), out.branch(1), out.branch(2));
    Ok([
        fidelity(&b0, &b1)?.sqrt(),
        fidelity(&b1, &b2)?.sqrt(),
        fidelity(&b0, &b2)?.sqrt(),
    ])
}

/// Frame displacement in which |1̃_L⟩ and |0̃_L⟩ have definite parity.
pub fn logical_frame(beta: f64) -> C64 {
    C64::new(-beta, 0.0)
}

/// Frame for the second-generation bred state, −α/2.
pub fn bred_frame(alpha: f64) -> C64 {
    C64::new(-alpha / 2.0, 0.0)
}

#[doc(hidden)]
pub fn beta_of(alpha: f64) -> f64 {
    alpha * FRAC_1_SQRT_2
}

#[doc(hidden)]
pub fn alpha_of(beta: f64) -> f64 {
    beta * SQRT_2
}

/// Normalized odd cat, for convenience in examples.
pub fn odd_cat(alpha: f64) -> Result<SuperposedState> {
    SuperposedState::cat(alpha, Parity::Odd, 1, 0)
}
