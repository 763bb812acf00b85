//! Circuit documents (TOML or JSON).
//!
//! ```toml
//! modes = "3"
//!
//! [[inputs]]
//! mode = "0"
//! kind = "cat"
//! params = { alpha = "0.455", parity = "odd" }
//!
//! [[elements]]
//! op = "beam_splitter"
//! modes = ["0", "1"]
//! params = { transmittance = "0.5" }
//!
//! [[measurements]]
//! op = "homodyne"
//! modes = ["1"]
//! params = { p = "0" }
//! ```
//!
//! Every number is a decimal string. Unknown keys, kinds, ops and params are
//! rejected.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coherent::{CoherentTerm, Parity, SuperposedState};
use crate::protocols::{Circuit, Element, InputSpec};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub modes: String,
    pub inputs: Vec<InputEntry>,
    #[serde(default)]
    pub elements: Vec<ElementEntry>,
    #[serde(default)]
    pub measurements: Vec<ElementEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEntry {
    pub mode: String,
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    pub op: String,
    pub modes: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn number<T: FromStr>(text: &str, what: &str) -> Result<T, CliError> {
    text.trim()
        .parse()
        .map_err(|_| config(format!("{what}: '{text}' is not a valid number")))
}

fn list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(|t| number(t, what)).collect()
}

struct Params<'a> {
    owner: String,
    map: &'a BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    fn new(owner: String, map: &'a BTreeMap<String, String>, allowed: &[&str]) -> Result<Self, CliError> {
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(config(format!("{owner}: unknown parameter '{k}'")));
        }
        Ok(Self { owner, map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let text = self
            .map
            .get(key)
            .ok_or_else(|| config(format!("{}: missing parameter '{key}'", self.owner)))?;
        number(text, &format!("{}.{key}", self.owner))
    }

    fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.map.contains_key(key) {
            true => self.get(key),
            false => Ok(default),
        }
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }
}

impl CircuitFile {
    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config(format!("cannot read circuit file {}: {e}", path.display())))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config(format!("circuit file: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| config(format!("circuit file: {e}")))
    }

    pub fn to_circuit(&self) -> Result<Circuit, CliError> {
        let mode_count = number(&self.modes, "modes")?;
        let inputs = self
            .inputs
            .iter()
            .enumerate()
            .map(|(k, e)| e.to_input(k))
            .collect::<Result<Vec<_>, _>>()?;
        let mut elements = Vec::new();
        for (k, e) in self.elements.iter().enumerate() {
            elements.push(e.to_element(&format!("elements[{k}]"))?);
        }
        for (k, e) in self.measurements.iter().enumerate() {
            let el = e.to_element(&format!("measurements[{k}]"))?;
            if !el.is_measurement() {
                return Err(config(format!("measurements[{k}]: '{}' is not a measurement", e.op)));
            }
            elements.push(el);
        }
        Ok(Circuit::new(mode_count, inputs, elements)?)
    }
}

impl InputEntry {
    fn to_input(&self, index: usize) -> Result<InputSpec, CliError> {
        let owner = format!("inputs[{index}]");
        let mode: usize = number(&self.mode, &format!("{owner}.mode"))?;
        let params = |allowed: &[&str]| Params::new(owner.clone(), &self.params, allowed);
        Ok(match self.kind.as_str() {
            "vacuum" => {
                params(&[])?;
                InputSpec::Vacuum { mode }
            }
            "coherent" => {
                let p = params(&["re", "im"])?;
                InputSpec::Coherent {
                    mode,
                    amplitude: C64::new(p.get("re")?, p.get_or("im", 0.0)?),
                }
            }
            "cat" => {
                let p = params(&["alpha", "parity"])?;
                let parity = match p.text("parity").unwrap_or("odd") {
                    "odd" => Parity::Odd,
                    "even" => Parity::Even,
                    other => return Err(config(format!("{owner}: parity '{other}' is neither even nor odd"))),
                };
                InputSpec::Cat {
                    mode,
                    alpha: p.get("alpha")?,
                    parity,
                }
            }
            "fock" => {
                let p = params(&["n"])?;
                InputSpec::Fock { mode, n: p.get("n")? }
            }
            "path_photon" => {
                let p = params(&["partner"])?;
                InputSpec::PathPhoton {
                    modes: [mode, p.get("partner")?],
                }
            }
            "split_photon" => {
                let p = params(&["label_mode", "alpha", "normalized"])?;
                let normalized = match p.text("normalized").unwrap_or("false") {
                    "true" => true,
                    "false" => false,
                    other => return Err(config(format!("{owner}: normalized must be true or false, got '{other}'"))),
                };
                InputSpec::SplitPhoton {
                    cat_mode: mode,
                    label_mode: p.get("label_mode")?,
                    alpha: p.get("alpha")?,
                    normalized,
                }
            }
            "superposed" => {
                let p = params(&["weights", "weights_im", "amplitudes", "amplitudes_im"])?;
                let part = |key: &str, len: Option<usize>| -> Result<Vec<f64>, CliError> {
                    match (p.text(key), len) {
                        (Some(t), _) => list(t, &format!("{owner}.{key}")),
                        (None, Some(n)) => Ok(vec![0.0; n]),
                        (None, None) => Err(config(format!("{owner}: missing parameter '{key}'"))),
                    }
                };
                let w = part("weights", None)?;
                let a = part("amplitudes", None)?;
                let (wi, ai) = (part("weights_im", Some(w.len()))?, part("amplitudes_im", Some(a.len()))?);
                if [a.len(), wi.len(), ai.len()].iter().any(|&n| n != w.len()) {
                    return Err(config(format!("{owner}: weight and amplitude lists differ in length")));
                }
                let terms = (0..w.len())
                    .map(|k| CoherentTerm::new(C64::new(w[k], wi[k]), vec![C64::new(a[k], ai[k])]))
                    .collect();
                InputSpec::Superposed {
                    modes: vec![mode],
                    state: SuperposedState::from_terms(1, terms)?,
                }
            }
            other => return Err(config(format!("{owner}: unknown input kind '{other}'"))),
        })
    }
}

impl ElementEntry {
    fn to_element(&self, owner: &str) -> Result<Element, CliError> {
        let modes = self
            .modes
            .iter()
            .map(|m| number::<usize>(m, &format!("{owner}.modes")))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = |n: usize| {
            if modes.len() == n {
                Ok(())
            } else {
                Err(config(format!("{owner}: '{}' takes {n} mode(s), got {}", self.op, modes.len())))
            }
        };
        let params = |allowed: &[&str]| Params::new(owner.to_string(), &self.params, allowed);
        Ok(match self.op.as_str() {
            "beam_splitter" => {
                arity(2)?;
                let p = params(&["transmittance"])?;
                Element::BeamSplit {
                    modes: [modes[0], modes[1]],
                    transmittance: p.get_or("transmittance", 0.5)?,
                }
            }
            "displace" => {
                arity(1)?;
                let p = params(&["re", "im"])?;
                Element::Displace {
                    mode: modes[0],
                    alpha: C64::new(p.get("re")?, p.get_or("im", 0.0)?),
                }
            }
            "homodyne" => {
                arity(1)?;
                let p = params(&["p"])?;
                Element::Homodyne {
                    mode: modes[0],
                    p: p.get("p")?,
                }
            }
            "fock_project" => {
                arity(1)?;
                let p = params(&["n"])?;
                Element::FockProject {
                    mode: modes[0],
                    n: p.get("n")?,
                }
            }
            other => return Err(config(format!("{owner}: unknown op '{other}'"))),
        })
    }
}
