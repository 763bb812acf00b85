//! Circuit descriptions and their execution on both engines.

use num_complex::Complex64 as C64;

use crate::coherent::{Parity, SuperposedState};
use crate::error::{Error, Result};
use crate::fock::FockState;

use super::hybrid::HybridState;

/// How the odd cat on a half beam splitter with vacuum is replaced by a
/// one-photon split state.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum AncillaModel {
    /// No replacement; the cat and the vacuum go through the beam splitter.
    Exact,
    /// (|a⟩ − |−a⟩)|0⟩ + |0⟩|1⟩ with unnormalized cat, as the branch
    /// formulas are written.
    #[default]
    Approximate,
    /// (|C⁻_a⟩|0⟩ + |0⟩|1⟩)/√2 with a normalized cat.
    ApproximateNormalized,
}

/// Initial state of one or more circuit modes.
#[derive(Clone, Debug, PartialEq)]
pub enum InputSpec {
    Vacuum { mode: usize },
    Coherent { mode: usize, amplitude: C64 },
    Cat { mode: usize, alpha: f64, parity: Parity },
    /// Number state |n⟩, carried as a photon-number label.
    Fock { mode: usize, n: usize },
    /// Arbitrary superposition; `modes[k]` receives the state's k-th mode.
    Superposed { modes: Vec<usize>, state: SuperposedState },
    /// (|1⟩|0⟩ + |0⟩|1⟩)/√2 on two label modes.
    PathPhoton { modes: [usize; 2] },
    /// Approximate split of an odd cat: the cat part on `cat_mode`, the
    /// photon-number label on `label_mode`.
    SplitPhoton {
        cat_mode: usize,
        label_mode: usize,
        alpha: f64,
        normalized: bool,
    },
    /// Prebuilt hybrid state; its mode ids are circuit modes.
    Hybrid(HybridState),
}

impl InputSpec {
    pub fn modes(&self) -> Vec<usize> {
        match self {
            InputSpec::Vacuum { mode }
            | InputSpec::Coherent { mode, .. }
            | InputSpec::Cat { mode, .. }
            | InputSpec::Fock { mode, .. } => vec![*mode],
            InputSpec::Superposed { modes, .. } => modes.clone(),
            InputSpec::PathPhoton { modes } => modes.to_vec(),
            InputSpec::SplitPhoton {
                cat_mode,
                label_mode,
                ..
            } => vec![*cat_mode, *label_mode],
            InputSpec::Hybrid(h) => h.modes(),
        }
    }

    /// The input as a hybrid state.
    pub fn to_hybrid(&self) -> Result<HybridState> {
        match self {
            InputSpec::Vacuum { mode } => HybridState::coherent(vec![*mode], SuperposedState::vacuum(1)),
            InputSpec::Coherent { mode, amplitude } => {
                HybridState::coherent(vec![*mode], SuperposedState::coherent(vec![*amplitude]))
            }
            InputSpec::Cat { mode, alpha, parity } => {
                HybridState::coherent(vec![*mode], SuperposedState::cat(*alpha, *parity, 1, 0)?)
            }
            InputSpec::Fock { mode, n } => Ok(HybridState::number(*mode, *n)),
            InputSpec::Superposed { modes, state } => {
                if modes.len() != state.mode_count() {
                    return Err(Error::ModeMismatch(format!(
                        "{} modes listed for a {}-mode state",
                        modes.len(),
                        state.mode_count()
                    )));
                }
                HybridState::coherent(modes.clone(), state.clone())
            }
            InputSpec::PathPhoton { modes } => {
                let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                let unit = SuperposedState::coherent(Vec::new());
                HybridState::from_components(
                    Vec::new(),
                    modes.to_vec(),
                    vec![(vec![1, 0], unit.scaled(h)), (vec![0, 1], unit.scaled(h))],
                )
            }
            InputSpec::SplitPhoton {
                cat_mode,
                label_mode,
                alpha,
                normalized,
            } => split_photon(*cat_mode, *label_mode, *alpha, *normalized),
            InputSpec::Hybrid(h) => Ok(h.clone()),
        }
    }
}

/// Approximate one-photon split state on (`cat_mode`, `label_mode`).
pub fn split_photon(cat_mode: usize, label_mode: usize, alpha: f64, normalized: bool) -> Result<HybridState> {
    let (cat, vacuum) = if normalized {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        (
            SuperposedState::cat(alpha, Parity::Odd, 1, 0)?.scaled(h),
            SuperposedState::vacuum(1).scaled(h),
        )
    } else {
        if alpha == 0.0 {
            return Err(Error::DegenerateState("odd cat with zero amplitude".into()));
        }
        (
            SuperposedState::single_mode_real(&[(1.0, alpha), (-1.0, -alpha)]),
            SuperposedState::vacuum(1),
        )
    };
    HybridState::from_components(
        vec![cat_mode],
        vec![label_mode],
        vec![(vec![0], cat), (vec![1], vacuum)],
    )
}

/// One circuit element.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    /// Ports (i, j): (u, v) ↦ (√T u + √(1−T) v, −√(1−T) u + √T v).
    BeamSplit { modes: [usize; 2], transmittance: f64 },
    Displace { mode: usize, alpha: C64 },
    Homodyne { mode: usize, p: f64 },
    FockProject { mode: usize, n: usize },
}

impl Element {
    pub fn modes(&self) -> Vec<usize> {
        match self {
            Element::BeamSplit { modes, .. } => modes.to_vec(),
            Element::Displace { mode, .. } | Element::Homodyne { mode, .. } | Element::FockProject { mode, .. } => {
                vec![*mode]
            }
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Element::Homodyne { .. } | Element::FockProject { .. })
    }
}

/// Ordered list of elements acting on initialized modes.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub mode_count: usize,
    pub inputs: Vec<InputSpec>,
    pub elements: Vec<Element>,
}

/// Result of a coherent-engine run.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentRun {
    pub state: HybridState,
    /// Squared norm of the final (unnormalized) state.
    pub density: f64,
    /// Largest coherent amplitude met anywhere along the run.
    pub max_amplitude: f64,
}

/// Result of a Fock-engine run; modes in ascending id order.
#[derive(Clone, Debug, PartialEq)]
pub struct FockRun {
    pub state: FockState,
    pub modes: Vec<usize>,
    pub cutoff: usize,
    pub density: f64,
}

/// N = ⌈γ² + 6γ + 10⌉ for the largest coherent amplitude γ.
pub fn default_cutoff(max_amplitude: f64) -> usize {
    let g = max_amplitude.abs();
    (g * g + 6.0 * g + 10.0).ceil() as usize
}

impl Circuit {
    pub fn new(mode_count: usize, inputs: Vec<InputSpec>, elements: Vec<Element>) -> Result<Self> {
        let c = Self {
            mode_count,
            inputs,
            elements,
        };
        c.validate()?;
        Ok(c)
    }

    /// Every mode initialized exactly once; elements reference live modes.
    pub fn validate(&self) -> Result<()> {
        let mut initialized = vec![false; self.mode_count];
        for input in &self.inputs {
            for m in input.modes() {
                if m >= self.mode_count {
                    return Err(Error::InvalidMode {
                        mode: m,
                        mode_count: self.mode_count,
                    });
                }
                if std::mem::replace(&mut initialized[m], true) {
                    return Err(Error::ModeMismatch(format!("mode {m} initialized twice")));
                }
            }
        }
        if let Some(m) = initialized.iter().position(|&x| !x) {
            return Err(Error::ModeMismatch(format!("mode {m} has no input")));
        }
        let mut live = vec![true; self.mode_count];
        for el in &self.elements {
            let modes = el.modes();
            for &m in &modes {
                if m >= self.mode_count {
                    return Err(Error::InvalidMode {
                        mode: m,
                        mode_count: self.mode_count,
                    });
                }
                if !live[m] {
                    return Err(Error::ModeMismatch(format!("mode {m} used after measurement")));
                }
            }
            if let Element::BeamSplit { modes, transmittance } = el {
                if modes[0] == modes[1] {
                    return Err(Error::ModeMismatch(format!(
                        "beam splitter needs two distinct modes, got {} twice",
                        modes[0]
                    )));
                }
                crate::coherent::check_transmittance(*transmittance)?;
            }
            if el.is_measurement() {
                live[modes[0]] = false;
            }
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<HybridState> {
        let mut state = HybridState::coherent(Vec::new(), SuperposedState::coherent(Vec::new()))?;
        for input in &self.inputs {
            state = state.tensor(&input.to_hybrid()?)?;
        }
        Ok(state)
    }

    /// Runs the circuit in the coherent-state algebra.
    pub fn run_coherent(&self) -> Result<CoherentRun> {
        self.validate()?;
        let mut state = self.initial_state()?;
        let mut max_amplitude = state.max_amplitude();
        for el in &self.elements {
            state = apply_hybrid(&state, el)?;
            max_amplitude = max_amplitude.max(state.max_amplitude());
        }
        let density = state.norm2();
        Ok(CoherentRun {
            state,
            density,
            max_amplitude,
        })
    }

    /// Cutoff heuristic for [`Circuit::run_fock`]: the coherent trace sets
    /// the amplitude scale, and labels must fit their total photon number.
    pub fn suggested_cutoff(&self) -> Result<usize> {
        let initial = self.initial_state()?;
        let labels = initial.max_label_total() + 1;
        let amplitude = match self.run_coherent() {
            Ok(run) => run.max_amplitude,
            Err(Error::Unsupported(_)) => {
                // beam splitters conserve Σ|γ|², displacements add at most |α|
                let energy: f64 = initial
                    .components()
                    .values()
                    .map(|s| {
                        s.terms()
                            .iter()
                            .map(|t| t.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>())
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max);
                let shifts: f64 = self
                    .elements
                    .iter()
                    .map(|e| match e {
                        Element::Displace { alpha, .. } => alpha.norm(),
                        _ => 0.0,
                    })
                    .sum();
                energy.sqrt() + shifts
            }
            Err(e) => return Err(e),
        };
        Ok(default_cutoff(amplitude).max(labels + 1))
    }

    /// Runs the circuit on dense Fock states with a common cutoff
    /// (heuristic when `None`).
    pub fn run_fock(&self, cutoff: Option<usize>) -> Result<FockRun> {
        self.validate()?;
        let cutoff = match cutoff {
            Some(c) => c,
            None => self.suggested_cutoff()?,
        };
        if cutoff < 2 {
            return Err(Error::InvalidParameter(format!("Fock cutoff {cutoff} is below 2")));
        }
        let mut state = FockState::vacuum(Vec::new());
        let mut ids: Vec<usize> = Vec::new();
        for input in &self.inputs {
            let h = input.to_hybrid()?;
            state = state.tensor(&h.to_fock(cutoff, None)?);
            ids.extend(h.modes());
        }
        let pos = |ids: &[usize], m: usize| ids.iter().position(|&x| x == m).expect("validated mode");
        for el in &self.elements {
            state = match el {
                Element::BeamSplit { modes, transmittance } => {
                    state.apply_beam_splitter(pos(&ids, modes[0]), pos(&ids, modes[1]), *transmittance)?
                }
                Element::Displace { mode, alpha } => state.apply_displacement(pos(&ids, *mode), *alpha, None)?,
                Element::Homodyne { mode, p } => {
                    let k = pos(&ids, *mode);
                    ids.remove(k);
                    state.project_quadrature(k, *p)?.0
                }
                Element::FockProject { mode, n } => {
                    let k = pos(&ids, *mode);
                    ids.remove(k);
                    state.project_fock(k, *n)?.0
                }
            };
        }
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by_key(|&k| ids[k]);
        let state = state.permuted(&order)?;
        ids.sort_unstable();
        let density = state.norm2();
        Ok(FockRun {
            state,
            modes: ids,
            cutoff,
            density,
        })
    }
}

pub(crate) fn apply_hybrid(state: &HybridState, el: &Element) -> Result<HybridState> {
    match el {
        Element::BeamSplit { modes, transmittance } => state.beam_split(modes[0], modes[1], *transmittance),
        Element::Displace { mode, alpha } => state.displace(*mode, *alpha),
        Element::Homodyne { mode, p } => Ok(state.homodyne(*mode, *p)?.0),
        Element::FockProject { mode, n } => Ok(state.project_fock(*mode, *n)?.0),
    }
}
