//! Named coherent superpositions of the generation protocols, in their
//! unnormalized closed forms.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;

use crate::coherent::{CoherentTerm, SuperposedState};
use crate::error::Result;

use super::hybrid::HybridState;

/// |0̃_L⟩ ∝ |3β⟩ − 2|β⟩ + |−β⟩.
pub fn logical_zero(beta: f64) -> SuperposedState {
    SuperposedState::single_mode_real(&[(1.0, 3.0 * beta), (-2.0, beta), (1.0, -beta)])
}

/// |1̃_L⟩ ∝ |2β⟩ − |0⟩.
pub fn logical_one(beta: f64) -> SuperposedState {
    SuperposedState::single_mode_real(&[(1.0, 2.0 * beta), (-1.0, 0.0)])
}

/// Second-generation bred state |0̃⁽²⁾_L⟩ (six terms), amplitude α of the
/// resource cats.
pub fn bred_zero(alpha: f64) -> SuperposedState {
    let y = alpha / SQRT_2;
    SuperposedState::single_mode_real(&[
        (1.0, 1.5 * alpha + y),
        (-1.0, 1.5 * alpha - y),
        (-2.0, 0.5 * alpha + y),
        (2.0, 0.5 * alpha - y),
        (1.0, -0.5 * alpha + y),
        (-1.0, -0.5 * alpha - y),
    ])
}

/// |1̃⁽²⁾_L⟩ = |3α/2⟩ − 2|α/2⟩ + |−α/2⟩.
pub fn bred_one(alpha: f64) -> SuperposedState {
    logical_zero(alpha / 2.0)
}

/// |1_qt⟩ = |α + α/√2⟩ − |α − α/√2⟩ − |α/√2⟩ + |−α/√2⟩.
pub fn qutrit_one(alpha: f64) -> SuperposedState {
    let y = alpha / SQRT_2;
    SuperposedState::single_mode_real(&[(1.0, alpha + y), (-1.0, alpha - y), (-1.0, y), (1.0, -y)])
}

/// |2_qt⟩ = |α⟩ − |0⟩.
pub fn qutrit_two(alpha: f64) -> SuperposedState {
    SuperposedState::single_mode_real(&[(1.0, alpha), (-1.0, 0.0)])
}

/// Branches obtained when |1̃_L⟩ is bred: the same four-term state as
/// [`qutrit_one`] on the vacuum ancilla, |α⟩ − |0⟩ on the one-photon ancilla.
pub fn odd_bred_branches(alpha: f64) -> [SuperposedState; 2] {
    [qutrit_one(alpha), qutrit_two(alpha)]
}

/// Branches of the equal-amplitude variant at p = 0:
/// (|√3A⟩ − 2|A/√3⟩ + |−A/√3⟩, |2A/√3⟩ − |0⟩).
pub fn equal_amplitude_branches(a: f64) -> [SuperposedState; 2] {
    let r3 = 3f64.sqrt();
    [
        SuperposedState::single_mode_real(&[(1.0, r3 * a), (-2.0, a / r3), (1.0, -a / r3)]),
        SuperposedState::single_mode_real(&[(1.0, 2.0 * a / r3), (-1.0, 0.0)]),
    ]
}

/// Conditional branches at homodyne outcome p for the first-generation
/// circuit: (|3β⟩ + |−β⟩ − 2cos(2αp)|β⟩, e^{iαp}|2β⟩ − e^{−iαp}|0⟩).
pub fn conditional_branches(alpha: f64, p: f64) -> [SuperposedState; 2] {
    let beta = alpha / SQRT_2;
    let r = |x: f64| C64::new(x, 0.0);
    let zero = SuperposedState::from_terms(
        1,
        vec![
            CoherentTerm::new(r(1.0), vec![r(3.0 * beta)]),
            CoherentTerm::new(r(1.0), vec![r(-beta)]),
            CoherentTerm::new(r(-2.0 * (2.0 * alpha * p).cos()), vec![r(beta)]),
        ],
    )
    .expect("single-mode terms");
    let phase = C64::new(0.0, alpha * p).exp();
    let one = SuperposedState::from_terms(
        1,
        vec![
            CoherentTerm::new(phase, vec![r(2.0 * beta)]),
            CoherentTerm::new(-phase.conj(), vec![r(0.0)]),
        ],
    )
    .expect("single-mode terms");
    [zero, one]
}

/// Target hybrid state |0̃_L⟩|0⟩ + |1̃_L⟩|1⟩ with the logical mode
/// `logical_mode` and photon-number label `label_mode`.
pub fn hybrid_target(alpha: f64, logical_mode: usize, label_mode: usize) -> Result<HybridState> {
    let beta = alpha / SQRT_2;
    HybridState::from_components(
        vec![logical_mode],
        vec![label_mode],
        vec![(vec![0], logical_zero(beta)), (vec![1], logical_one(beta))],
    )
}

/// Output without the single-photon replacement:
/// (|3β⟩ − |β⟩)|α⟩ − (|β⟩ − |−β⟩)|−α⟩ on (logical, ancilla).
pub fn exact_output(alpha: f64) -> SuperposedState {
    let beta = alpha / SQRT_2;
    let mut s = SuperposedState::zero(2);
    for (w, a, b) in [
        (1.0, 3.0 * beta, alpha),
        (-1.0, beta, alpha),
        (-1.0, beta, -alpha),
        (1.0, -beta, -alpha),
    ] {
        s.push(C64::new(w, 0.0), vec![a.into(), b.into()])
            .expect("two-mode term");
    }
    s
}
