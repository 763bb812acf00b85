//! Composite Gauss–Legendre integration with panel doubling.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const ORDER: usize = 64;

const MAX_PANELS: usize = 1 << 14;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(ORDER.try_into().expect("nonzero order"))
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// Converged integral and the panel count that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub panels: usize,
}

/// ∫ₐᵇ f over `panels` equal panels.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    composite_vec(&|x| vec![f(x)], 1, a, b, panels)[0]
}

/// Componentwise ∫ₐᵇ f for a vector-valued integrand of length `dim`.
pub fn composite_vec<F: Fn(f64) -> Vec<f64>>(f: &F, dim: usize, a: f64, b: f64, panels: usize) -> Vec<f64> {
    let h = (b - a) / panels as f64;
    let mut acc = vec![0.0; dim];
    for k in 0..panels {
        let lo = a + h * k as f64;
        let (mid, half) = (lo + h / 2.0, h / 2.0);
        for &(x, w) in rule() {
            let v = f(mid + half * x);
            for (s, y) in acc.iter_mut().zip(v) {
                *s += w * half * y;
            }
        }
    }
    acc
}

/// Doubles the panel count until the relative change drops below `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Integral<f64>> {
    let r = integrate_vec(|x| vec![f(x)], 1, a, b, rel_tol)?;
    Ok(Integral {
        value: r.value[0],
        panels: r.panels,
    })
}

/// Vector version of [`integrate`]; the change is measured against the
/// largest component magnitude.
pub fn integrate_vec<F: Fn(f64) -> Vec<f64>>(
    f: F,
    dim: usize,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<Integral<Vec<f64>>> {
    if a == b {
        return Ok(Integral {
            value: vec![0.0; dim],
            panels: 0,
        });
    }
    let mut panels = 1;
    let mut prev = composite_vec(&f, dim, a, b, panels);
    while panels < MAX_PANELS {
        panels *= 2;
        let next = composite_vec(&f, dim, a, b, panels);
        let scale = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let change = next
            .iter()
            .zip(&prev)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        if change <= rel_tol * scale || scale == 0.0 {
            return Ok(Integral { value: next, panels });
        }
        prev = next;
    }
    Err(Error::Convergence(format!(
        "quadrature on [{a}, {b}] did not reach relative change {rel_tol} with {MAX_PANELS} panels"
    )))
}
