//! States mixing coherent-superposition modes with photon-number labels.
//!
//! Some circuits carry a mode in a definite small photon-number basis (the
//! ancilla of the approximate splitter, the path-entangled photon). Such a
//! mode is kept as a label: the state is Σ_k |ψ_k⟩ ⊗ |k⟩ with each |ψ_k⟩ a
//! [`SuperposedState`] over the coherent modes.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::coherent::{check_transmittance, SuperposedState};
use crate::error::{Error, Result};
use crate::fock::{homodyne_kernel, number_state_image, FockState};

/// Mode identifiers are circuit mode indices; they survive measurements of
/// other modes unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridState {
    coherent_modes: Vec<usize>,
    label_modes: Vec<usize>,
    components: BTreeMap<Vec<usize>, SuperposedState>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Slot {
    Coherent(usize),
    Label(usize),
}

impl HybridState {
    /// Purely coherent state on the given circuit modes.
    pub fn coherent(modes: Vec<usize>, state: SuperposedState) -> Result<Self> {
        Self::from_components(modes, Vec::new(), vec![(Vec::new(), state)])
    }

    /// Number state |n⟩ on a single label mode.
    pub fn number(mode: usize, n: usize) -> Self {
        let mut components = BTreeMap::new();
        components.insert(vec![n], SuperposedState::coherent(Vec::new()));
        Self {
            coherent_modes: Vec::new(),
            label_modes: vec![mode],
            components,
        }
    }

    /// Σ_k |ψ_k⟩ ⊗ |k⟩ from (label occupation, coherent component) pairs;
    /// repeated occupations are summed.
    pub fn from_components(
        coherent_modes: Vec<usize>,
        label_modes: Vec<usize>,
        components: Vec<(Vec<usize>, SuperposedState)>,
    ) -> Result<Self> {
        let mut all: Vec<usize> = coherent_modes.iter().chain(&label_modes).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::ModeMismatch(format!(
                "duplicate mode ids in {coherent_modes:?} / {label_modes:?}"
            )));
        }
        let mut map: BTreeMap<Vec<usize>, SuperposedState> = BTreeMap::new();
        for (key, state) in components {
            if key.len() != label_modes.len() || state.mode_count() != coherent_modes.len() {
                return Err(Error::ModeMismatch(format!(
                    "component {key:?} with {} modes does not fit {} coherent and {} label modes",
                    state.mode_count(),
                    coherent_modes.len(),
                    label_modes.len()
                )));
            }
            let merged = match map.remove(&key) {
                Some(prev) => prev.plus(&state)?,
                None => state.canonicalize(),
            };
            map.insert(key, merged);
        }
        map.retain(|_, s| !s.is_empty());
        Ok(Self {
            coherent_modes,
            label_modes,
            components: map,
        })
    }

    pub fn coherent_modes(&self) -> &[usize] {
        &self.coherent_modes
    }

    pub fn label_modes(&self) -> &[usize] {
        &self.label_modes
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, SuperposedState> {
        &self.components
    }

    /// Coherent component attached to a label occupation (zero if absent).
    pub fn component(&self, key: &[usize]) -> SuperposedState {
        self.components
            .get(key)
            .cloned()
            .unwrap_or_else(|| SuperposedState::zero(self.coherent_modes.len()))
    }

    /// All live circuit mode ids in ascending order.
    pub fn modes(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.coherent_modes.iter().chain(&self.label_modes).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn mode_count(&self) -> usize {
        self.coherent_modes.len() + self.label_modes.len()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.components.values().map(|s| s.max_amplitude()).fold(0.0, f64::max)
    }

    /// Largest photon number carried by any label.
    pub fn max_label(&self) -> usize {
        self.components.keys().flatten().copied().max().unwrap_or(0)
    }

    /// Largest total photon number over all labels of one component.
    pub fn max_label_total(&self) -> usize {
        self.components.keys().map(|k| k.iter().sum()).max().unwrap_or(0)
    }

    fn slot(&self, mode: usize) -> Result<Slot> {
        if let Some(k) = self.coherent_modes.iter().position(|&m| m == mode) {
            Ok(Slot::Coherent(k))
        } else if let Some(k) = self.label_modes.iter().position(|&m| m == mode) {
            Ok(Slot::Label(k))
        } else {
            Err(Error::InvalidMode {
                mode,
                mode_count: self.mode_count(),
            })
        }
    }

    pub fn norm2(&self) -> f64 {
        self.components.values().map(|s| s.norm2()).sum()
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            coherent_modes: self.coherent_modes.clone(),
            label_modes: self.label_modes.clone(),
            components: self
                .components
                .iter()
                .map(|(k, s)| (k.clone(), s.scaled(factor)))
                .collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm2();
        if n2 <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateState("cannot normalize a zero-norm state".into()));
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    /// ⟨self|other⟩; both states must have the same mode layout.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.coherent_modes != other.coherent_modes || self.label_modes != other.label_modes {
            return Err(Error::ModeMismatch(format!(
                "layouts {:?}/{:?} and {:?}/{:?} differ",
                self.coherent_modes, self.label_modes, other.coherent_modes, other.label_modes
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (key, a) in &self.components {
            if let Some(b) = other.components.get(key) {
                acc += a.inner(b)?;
            }
        }
        Ok(acc)
    }

    /// Tensor product; mode ids of the two factors must be disjoint.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut coherent_modes = self.coherent_modes.clone();
        coherent_modes.extend_from_slice(&other.coherent_modes);
        let mut label_modes = self.label_modes.clone();
        label_modes.extend_from_slice(&other.label_modes);
        let mut components = Vec::new();
        for (ka, a) in &self.components {
            for (kb, b) in &other.components {
                let mut key = ka.clone();
                key.extend_from_slice(kb);
                components.push((key, a.tensor(b)));
            }
        }
        Self::from_components(coherent_modes, label_modes, components)
    }

    fn map_components(&self, f: impl Fn(&SuperposedState) -> Result<SuperposedState>) -> Result<Self> {
        let mut components = BTreeMap::new();
        for (k, s) in &self.components {
            components.insert(k.clone(), f(s)?);
        }
        Ok(Self {
            coherent_modes: self.coherent_modes.clone(),
            label_modes: self.label_modes.clone(),
            components,
        })
    }

    pub fn displace(&self, mode: usize, alpha: C64) -> Result<Self> {
        match self.slot(mode)? {
            Slot::Coherent(k) => self.map_components(|s| s.displace(k, alpha)),
            Slot::Label(_) => Err(Error::Unsupported(format!(
                "displacement of photon-number label mode {mode}"
            ))),
        }
    }

    /// Beam splitter with the same port convention as
    /// [`SuperposedState::beam_split`]. Both modes must be coherent or both
    /// labels.
    pub fn beam_split(&self, mode_i: usize, mode_j: usize, t: f64) -> Result<Self> {
        if mode_i == mode_j {
            return Err(Error::ModeMismatch(format!(
                "beam splitter needs two distinct modes, got {mode_i} twice"
            )));
        }
        check_transmittance(t)?;
        match (self.slot(mode_i)?, self.slot(mode_j)?) {
            (Slot::Coherent(a), Slot::Coherent(b)) => self.map_components(|s| s.beam_split(a, b, t)),
            (Slot::Label(a), Slot::Label(b)) => {
                let mut out = Vec::new();
                for (key, state) in &self.components {
                    let image = number_state_image(key[a], key[b], t);
                    let total = key[a] + key[b];
                    for (k, &c) in image.iter().enumerate() {
                        if c.norm() < 1e-15 {
                            continue;
                        }
                        let mut new_key = key.clone();
                        new_key[a] = k;
                        new_key[b] = total - k;
                        out.push((new_key, state.scaled(c)));
                    }
                }
                Self::from_components(self.coherent_modes.clone(), self.label_modes.clone(), out)
            }
            _ => Err(Error::Unsupported(format!(
                "beam splitter between a coherent mode and a photon-number label ({mode_i}, {mode_j})"
            ))),
        }
    }

    /// Momentum projection ⟨p| on `mode`; returns the reduced state and its
    /// squared norm.
    pub fn homodyne(&self, mode: usize, p: f64) -> Result<(Self, f64)> {
        let slot = self.slot(mode)?;
        self.measure(slot, |s, k| Ok(s.homodyne_project(k, p)?.state), |n| {
            homodyne_kernel(p, n + 1)[n]
        })
    }

    /// Photon-number projection ⟨n| on `mode`.
    pub fn project_fock(&self, mode: usize, n: usize) -> Result<(Self, f64)> {
        let slot = self.slot(mode)?;
        self.measure(slot, |s, k| Ok(s.project_fock(k, n)?.state), |m| {
            if m == n {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    fn measure(
        &self,
        slot: Slot,
        coherent: impl Fn(&SuperposedState, usize) -> Result<SuperposedState>,
        label: impl Fn(usize) -> C64,
    ) -> Result<(Self, f64)> {
        let out = match slot {
            Slot::Coherent(k) => {
                let mut modes = self.coherent_modes.clone();
                modes.remove(k);
                let mut components = Vec::new();
                for (key, s) in &self.components {
                    components.push((key.clone(), coherent(s, k)?));
                }
                Self::from_components(modes, self.label_modes.clone(), components)?
            }
            Slot::Label(k) => {
                let mut labels = self.label_modes.clone();
                labels.remove(k);
                let mut components = Vec::new();
                for (key, s) in &self.components {
                    let c = label(key[k]);
                    if c.norm() == 0.0 {
                        continue;
                    }
                    let mut new_key = key.clone();
                    new_key.remove(k);
                    components.push((new_key, s.scaled(c)));
                }
                Self::from_components(self.coherent_modes.clone(), labels, components)?
            }
        };
        let density = out.norm2();
        Ok((out, density))
    }

    /// Dense Fock representation with a common cutoff, modes in ascending id
    /// order.
    pub fn to_fock(&self, cutoff: usize, bound: Option<f64>) -> Result<FockState> {
        let ids = self.modes();
        let nc = self.coherent_modes.len();
        let positions: Vec<usize> = self
            .coherent_modes
            .iter()
            .chain(&self.label_modes)
            .map(|m| ids.binary_search(m).expect("mode id present"))
            .collect();
        let total_len = cutoff.pow(ids.len() as u32);
        let mut amps = vec![C64::new(0.0, 0.0); total_len];
        let mut occupation = vec![0usize; ids.len()];
        for (key, state) in &self.components {
            if key.iter().any(|&n| n >= cutoff) {
                continue;
            }
            let f = state.to_fock(&vec![cutoff; nc], None)?;
            for (flat, a) in f.amplitudes().iter().enumerate() {
                let mut rem = flat;
                for k in (0..nc).rev() {
                    occupation[positions[k]] = rem % cutoff;
                    rem /= cutoff;
                }
                for (k, &n) in key.iter().enumerate() {
                    occupation[positions[nc + k]] = n;
                }
                let idx = occupation.iter().fold(0, |acc, &n| acc * cutoff + n);
                amps[idx] += a;
            }
        }
        let mut out = FockState::from_amplitudes(vec![cutoff; ids.len()], amps)?;
        let exact = self.norm2();
        let error = if exact > 0.0 {
            (1.0 - (out.norm2() / exact).sqrt()).max(0.0)
        } else {
            0.0
        };
        out.set_truncation_error(error);
        if let Some(bound) = bound {
            if error > bound {
                return Err(Error::CutoffTooSmall { error, bound });
            }
        }
        Ok(out)
    }

    /// Replaces the coherent `mode` by a photon-number label, keeping
    /// occupations up to `max_n`.
    pub fn label_coherent_mode(&self, mode: usize, max_n: usize) -> Result<Self> {
        let Slot::Coherent(k) = self.slot(mode)? else {
            return Ok(self.clone());
        };
        let mut coherent_modes = self.coherent_modes.clone();
        coherent_modes.remove(k);
        let mut label_modes = self.label_modes.clone();
        label_modes.push(mode);
        let mut components = Vec::new();
        for (key, s) in &self.components {
            for n in 0..=max_n {
                let projected = s.project_fock(k, n)?.state;
                let mut new_key = key.clone();
                new_key.push(n);
                components.push((new_key, projected));
            }
        }
        Self::from_components(coherent_modes, label_modes, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::Parity;
    use crate::fock::fidelity;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn example() -> HybridState {
        let cat = SuperposedState::cat(0.4, Parity::Odd, 1, 0).unwrap();
        HybridState::coherent(vec![0], cat)
            .unwrap()
            .tensor(&HybridState::number(1, 1))
            .unwrap()
            .tensor(&HybridState::number(2, 0))
            .unwrap()
    }

    #[test]
    fn label_beam_splitter_matches_fock_engine() {
        let s = example();
        let out = s.beam_split(2, 1, 0.3).unwrap();
        let fock = s.to_fock(12, None).unwrap().apply_beam_splitter(2, 1, 0.3).unwrap();
        let direct = out.to_fock(12, None).unwrap();
        assert!(fidelity(&fock, &direct).unwrap() > 1.0 - 1e-12);
        assert!((out.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn label_homodyne_matches_fock_engine() {
        let s = example().beam_split(2, 1, 0.5).unwrap();
        let (out, density) = s.homodyne(1, 0.37).unwrap();
        let (fock, fdensity) = s.to_fock(12, None).unwrap().project_quadrature(1, 0.37).unwrap();
        assert!((density - fdensity).abs() < 1e-12);
        assert!(fidelity(&out.to_fock(12, None).unwrap(), &fock).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn mixed_beam_splitter_is_unsupported() {
        assert!(matches!(example().beam_split(0, 1, 0.5), Err(Error::Unsupported(_))));
        assert!(matches!(example().displace(1, c(0.1)), Err(Error::Unsupported(_))));
        assert!(matches!(example().homodyne(7, 0.0), Err(Error::InvalidMode { .. })));
    }

    #[test]
    fn labelling_a_coherent_mode_keeps_the_state() {
        let s = HybridState::coherent(
            vec![0, 1],
            SuperposedState::coherent(vec![c(0.3), c(-0.5)]),
        )
        .unwrap();
        let labelled = s.label_coherent_mode(1, 25).unwrap();
        let a = s.to_fock(26, None).unwrap();
        let b = labelled.to_fock(26, None).unwrap();
        assert!(fidelity(&a, &b).unwrap() > 1.0 - 1e-14);
    }
}
