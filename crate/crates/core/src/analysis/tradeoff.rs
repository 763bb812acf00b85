//! Fidelity and success probability of a homodyne acceptance window
//! |p| ≤ v_up.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::optimize;
use crate::protocols::{hybrid_circuit, AncillaModel, Element, HybridState, LogicalInput};
use crate::quadrature::{integrate_vec, Integral};

use super::SweepRecord;

/// Outcomes beyond this carry negligible weight for amplitudes up to ~1.5.
pub const DEFAULT_P_MAX: f64 = 8.0;

const REL_TOL: f64 = 1e-12;

/// Pre-measurement state of the first-generation circuit together with the
/// p = 0 target and the total weight on [−p_max, p_max].
#[derive(Clone, Debug)]
pub struct TradeoffModel {
    alpha: f64,
    p_max: f64,
    measured_mode: usize,
    pre_measurement: HybridState,
    target: HybridState,
    target_norm2: f64,
    total: f64,
}

impl TradeoffModel {
    pub fn new(alpha: f64, model: AncillaModel, p_max: f64) -> Result<Self> {
        if !(p_max > 0.0 && p_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("p_max {p_max} must be positive")));
        }
        let mut circuit = hybrid_circuit(&LogicalInput::OddCat, alpha, 0.0, model)?;
        let measured_mode = match circuit.elements.pop() {
            Some(Element::Homodyne { mode, .. }) => mode,
            other => unreachable!("circuit ends with {other:?}"),
        };
        let pre_measurement = circuit.run_coherent()?.state;
        let (target, target_norm2) = pre_measurement.homodyne(measured_mode, 0.0)?;
        let mut m = Self {
            alpha,
            p_max,
            measured_mode,
            pre_measurement,
            target,
            target_norm2,
            total: 0.0,
        };
        m.total = integrate_vec(|p| m.integrand(p), 3, -p_max, p_max, REL_TOL)?.value[0];
        Ok(m)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Unnormalized conditional state g(p) and its squared norm.
    pub fn conditional(&self, p: f64) -> Result<(HybridState, f64)> {
        self.pre_measurement.homodyne(self.measured_mode, p)
    }

    /// F(p) = |⟨g(0)|g(p)⟩|² / (⟨g(0)|g(0)⟩⟨g(p)|g(p)⟩).
    pub fn pointwise_fidelity(&self, p: f64) -> Result<f64> {
        let (g, n) = self.conditional(p)?;
        Ok(self.target.inner(&g)?.norm_sqr() / (self.target_norm2 * n))
    }

    // [⟨g|g⟩, |⟨g0|g⟩|²/⟨g0|g0⟩, F(p)⟨g|g⟩]
    fn integrand(&self, p: f64) -> Vec<f64> {
        let (g, n) = self.conditional(p).expect("modes validated at construction");
        let overlap = self.target.inner(&g).expect("matching layout").norm_sqr() / self.target_norm2;
        let pointwise = if n > 0.0 { overlap / n } else { 0.0 };
        vec![n, overlap, pointwise * n]
    }

    /// Window integrals of the three integrands.
    pub fn window(&self, v_up: f64) -> Result<Integral<Vec<f64>>> {
        if !(v_up > 0.0) {
            return Err(Error::InvalidParameter(format!("acceptance window {v_up} must be positive")));
        }
        if v_up > self.p_max {
            return Err(Error::WindowExceedsDomain { v_up, p_max: self.p_max });
        }
        integrate_vec(|p| self.integrand(p), 3, -v_up, v_up, REL_TOL)
    }

    /// Averaged fidelity and success probability of the window.
    pub fn evaluate(&self, v_up: f64) -> Result<SweepRecord> {
        let w = self.window(v_up)?;
        let [weight, overlap, averaged] = [w.value[0], w.value[1], w.value[2]];
        let fidelity = overlap / weight;
        let mut diagnostics = BTreeMap::new();
        diagnostics.insert("fidelity_averaged".into(), averaged / weight);
        diagnostics.insert("panels".into(), w.panels as f64);
        diagnostics.insert("p_max".into(), self.p_max);
        diagnostics.insert("total_weight".into(), self.total);
        Ok(SweepRecord {
            parameter: v_up,
            fidelity,
            probability: Some(weight / self.total),
            diagnostics,
        })
    }

    /// Window half-width whose averaged fidelity equals `target`.
    pub fn window_for_fidelity(&self, target: f64) -> Result<f64> {
        self.solve(target, |r| r.fidelity)
    }

    /// Window half-width whose success probability equals `target`.
    pub fn window_for_probability(&self, target: f64) -> Result<f64> {
        self.solve(target, |r| r.probability.unwrap_or(f64::NAN))
    }

    fn solve(&self, target: f64, pick: impl Fn(&SweepRecord) -> f64) -> Result<f64> {
        optimize::bisect(
            |v| self.evaluate(v).map(|r| pick(&r)).unwrap_or(f64::NAN),
            1e-6,
            self.p_max,
            target,
            1e-9,
        )
    }
}

/// One-shot evaluation with the default approximate ancilla.
pub fn tradeoff(alpha: f64, v_up: f64, p_max: f64) -> Result<SweepRecord> {
    if v_up > p_max {
        return Err(Error::WindowExceedsDomain { v_up, p_max });
    }
    TradeoffModel::new(alpha, AncillaModel::Approximate, p_max)?.evaluate(v_up)
}
