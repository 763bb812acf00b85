//! Generation circuits: hybrid qubit, breeding, hybrid qutrit and the
//! equal-amplitude variant.
//!
//! Mode layout of the qubit circuits: mode 0 carries the logical state,
//! mode 1 the second cat (measured by homodyne detection), mode 2 the
//! photon-number ancilla. The half beam splitter between modes 1 and 2 uses
//! ports (2, 1), so a coherent amplitude γ on mode 1 splits into γ/√2 on
//! both outputs; the final beam splitter uses ports (0, 1).

mod circuit;
mod hybrid;
pub mod states;

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64 as C64;

use crate::coherent::{Parity, SuperposedState};
use crate::error::{Error, Result};

pub use circuit::{
    default_cutoff, split_photon, AncillaModel, Circuit, CoherentRun, Element, FockRun, InputSpec,
};
pub use hybrid::HybridState;

/// Squared norms below this mark a forbidden measurement outcome.
pub const ZERO_DENSITY: f64 = 1e-14;

/// Mode-0 input of the qubit circuits.
#[derive(Clone, Debug, PartialEq)]
pub enum LogicalInput {
    /// Normalized odd cat of the circuit amplitude, displaced by that
    /// amplitude before interference.
    OddCat,
    /// A state already in the displaced frame (a bred logical state); it
    /// enters the final beam splitter unchanged.
    Prepared(SuperposedState),
}

/// Photon source of the qutrit circuit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum PhotonModel {
    /// (|α⟩ − |−α⟩)|0⟩ + |0⟩|1⟩ with the photon replaced by an odd cat.
    #[default]
    OddCat,
    /// (|1⟩|0⟩ + |0⟩|1⟩)/√2; needs the Fock engine.
    Fock,
}

/// Conditional output of a generation circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridOutput {
    /// Unnormalized state over the logical mode and the ancilla.
    pub state: HybridState,
    pub logical_mode: usize,
    pub ancilla_mode: usize,
    /// `branches[n]` is the logical-mode state paired with ancilla |n⟩.
    pub branches: Vec<SuperposedState>,
    /// Squared norm of `state` (probability density at the outcome).
    pub density: f64,
}

impl HybridOutput {
    /// Splits `state` along `ancilla_mode`. A coherent ancilla is expanded
    /// in number states until the retained norm is complete to 1e−14.
    pub fn from_state(state: HybridState, logical_mode: usize, ancilla_mode: usize) -> Result<Self> {
        let density = state.norm2();
        if density < ZERO_DENSITY {
            return Err(Error::ZeroDensity(density));
        }
        if state.mode_count() != 2 {
            return Err(Error::ModeMismatch(format!(
                "expected a logical mode and an ancilla, found modes {:?}",
                state.modes()
            )));
        }
        let mut branches = Vec::new();
        if state.label_modes().contains(&ancilla_mode) {
            for n in 0..=state.max_label() {
                branches.push(state.project_fock(ancilla_mode, n)?.0.component(&[]));
            }
        } else {
            let mut captured = 0.0;
            while captured < density * (1.0 - 1e-14) && branches.len() < 200 {
                let (b, w) = state.project_fock(ancilla_mode, branches.len())?;
                captured += w;
                branches.push(b.component(&[]));
            }
        }
        Ok(Self {
            state,
            logical_mode,
            ancilla_mode,
            branches,
            density,
        })
    }

    /// Σ_n branches[n] ⊗ |n⟩ with the ancilla as a photon-number label.
    pub fn reassembled(&self) -> Result<HybridState> {
        HybridState::from_components(
            vec![self.logical_mode],
            vec![self.ancilla_mode],
            self.branches
                .iter()
                .enumerate()
                .map(|(n, b)| (vec![n], b.clone()))
                .collect(),
        )
    }

    /// Branch `n`, or the zero state when the ancilla never reaches n.
    pub fn branch(&self, n: usize) -> SuperposedState {
        self.branches.get(n).cloned().unwrap_or_else(|| SuperposedState::zero(1))
    }
}

fn check_amplitude(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateState(format!("amplitude {alpha} must be positive")))
    }
}

struct Layout {
    displacement: Option<f64>,
    second_cat: f64,
    final_transmittance: f64,
}

fn qubit_circuit(input: &LogicalInput, cat_amplitude: f64, layout: Layout, p: f64, model: AncillaModel) -> Result<Circuit> {
    let mode0 = match input {
        LogicalInput::OddCat => InputSpec::Cat {
            mode: 0,
            alpha: cat_amplitude,
            parity: Parity::Odd,
        },
        LogicalInput::Prepared(state) => {
            if state.mode_count() != 1 {
                return Err(Error::NotSingleMode(state.mode_count()));
            }
            InputSpec::Superposed {
                modes: vec![0],
                state: state.clone(),
            }
        }
    };
    let mut inputs = vec![mode0];
    let mut elements = Vec::new();
    match model {
        AncillaModel::Exact => {
            inputs.push(InputSpec::Cat {
                mode: 1,
                alpha: layout.second_cat,
                parity: Parity::Odd,
            });
            inputs.push(InputSpec::Vacuum { mode: 2 });
            elements.push(Element::BeamSplit {
                modes: [2, 1],
                transmittance: 0.5,
            });
        }
        AncillaModel::Approximate | AncillaModel::ApproximateNormalized => {
            inputs.push(InputSpec::SplitPhoton {
                cat_mode: 1,
                label_mode: 2,
                alpha: layout.second_cat * FRAC_1_SQRT_2,
                normalized: model == AncillaModel::ApproximateNormalized,
            });
        }
    }
    if let (LogicalInput::OddCat, Some(d)) = (input, layout.displacement) {
        elements.push(Element::Displace {
            mode: 0,
            alpha: C64::new(d, 0.0),
        });
    }
    elements.push(Element::BeamSplit {
        modes: [0, 1],
        transmittance: layout.final_transmittance,
    });
    elements.push(Element::Homodyne { mode: 1, p });
    Circuit::new(3, inputs, elements)
}

/// First-generation circuit: odd cat (or a prepared logical state) on mode
/// 0, |C⁻_{√2α}⟩ on mode 1, vacuum on mode 2, homodyne outcome `p` on mode 1.
pub fn hybrid_circuit(input: &LogicalInput, alpha: f64, p: f64, model: AncillaModel) -> Result<Circuit> {
    check_amplitude(alpha)?;
    let layout = Layout {
        displacement: Some(alpha),
        second_cat: SQRT_2 * alpha,
        final_transmittance: 0.5,
    };
    qubit_circuit(input, alpha, layout, p, model)
}

/// Runs [`hybrid_circuit`] in the coherent algebra and splits the result
/// along the ancilla (mode 2).
pub fn hybrid_generate(input: &LogicalInput, alpha: f64, p: f64, model: AncillaModel) -> Result<HybridOutput> {
    let run = hybrid_circuit(input, alpha, p, model)?.run_coherent()?;
    HybridOutput::from_state(run.state, 0, 2)
}

/// Normalized logical input after `j` breeding rounds: j = 1 is |0̃_L⟩ at
/// β = α/√2, each further round feeds the previous state through the
/// first-generation circuit and keeps the vacuum-ancilla branch at p = 0.
/// Rounds beyond the second repeat the construction unchanged.
pub fn bred_input(j: usize, alpha: f64) -> Result<SuperposedState> {
    check_amplitude(alpha)?;
    if j == 0 {
        return Err(Error::InvalidParameter("breeding depth starts at 1".into()));
    }
    let mut state = states::logical_zero(alpha / SQRT_2).normalized()?;
    for _ in 1..j {
        let out = hybrid_generate(&LogicalInput::Prepared(state), alpha, 0.0, AncillaModel::Approximate)?;
        state = out.branch(0).normalized()?;
    }
    Ok(state)
}

/// Input of generation `j`: the raw odd cat for j = 1, otherwise the
/// normalized vacuum branch of generation j − 1.
pub fn generation_input(j: usize, alpha: f64) -> Result<LogicalInput> {
    match j {
        0 => Err(Error::InvalidParameter("breeding depth starts at 1".into())),
        1 => Ok(LogicalInput::OddCat),
        _ => Ok(LogicalInput::Prepared(bred_input(j - 1, alpha)?)),
    }
}

/// Circuit producing generation `j`.
pub fn breed_circuit(j: usize, alpha: f64, p: f64, model: AncillaModel) -> Result<Circuit> {
    hybrid_circuit(&generation_input(j, alpha)?, alpha, p, model)
}

/// Branches of generation `j`; branch 0 normalized equals `bred_input(j, α)`
/// at p = 0.
pub fn breed(j: usize, alpha: f64, p: f64, model: AncillaModel) -> Result<HybridOutput> {
    hybrid_generate(&generation_input(j, alpha)?, alpha, p, model)
}

/// Qutrit circuit: the target hybrid state on modes (0, 1), the photon
/// source on modes (2, 3); half beam splitter on ports (0, 2), homodyne on
/// mode 2, half beam splitter on ports (3, 1), vacuum projection on mode 1.
pub fn qutrit_circuit(alpha: f64, p: f64, model: PhotonModel) -> Result<Circuit> {
    check_amplitude(alpha)?;
    let source = match model {
        PhotonModel::OddCat => InputSpec::SplitPhoton {
            cat_mode: 2,
            label_mode: 3,
            alpha,
            normalized: false,
        },
        PhotonModel::Fock => InputSpec::PathPhoton { modes: [2, 3] },
    };
    Circuit::new(
        4,
        vec![InputSpec::Hybrid(states::hybrid_target(alpha, 0, 1)?), source],
        vec![
            Element::BeamSplit {
                modes: [0, 2],
                transmittance: 0.5,
            },
            Element::Homodyne { mode: 2, p },
            Element::BeamSplit {
                modes: [3, 1],
                transmittance: 0.5,
            },
            Element::FockProject { mode: 1, n: 0 },
        ],
    )
}

/// Runs the odd-cat qutrit circuit; branches are indexed by the photon
/// number of mode 3.
pub fn qutrit_generate(alpha: f64, p: f64) -> Result<HybridOutput> {
    let run = qutrit_circuit(alpha, p, PhotonModel::OddCat)?.run_coherent()?;
    HybridOutput::from_state(run.state, 0, 3)
}

/// Equal-amplitude variant: both cats of amplitude A, final beam splitter of
/// transmittance 1/3.
pub fn equal_amplitude_circuit(a: f64, p: f64, model: AncillaModel) -> Result<Circuit> {
    check_amplitude(a)?;
    let layout = Layout {
        displacement: Some(a),
        second_cat: a,
        final_transmittance: 1.0 / 3.0,
    };
    qubit_circuit(&LogicalInput::OddCat, a, layout, p, model)
}

pub fn equal_amplitude_generate(a: f64, p: f64, model: AncillaModel) -> Result<HybridOutput> {
    let run = equal_amplitude_circuit(a, p, model)?.run_coherent()?;
    HybridOutput::from_state(run.state, 0, 2)
}
