#![allow(dead_code)]

use std::f64::consts::PI;

use hybrid_gkp::fock;
use hybrid_gkp::protocols::{Circuit, Element, HybridState, InputSpec};
use hybrid_gkp::{CoherentTerm, SuperposedState, C64};
use proptest::prelude::*;

pub fn hybrid_fidelity(a: &HybridState, b: &HybridState) -> f64 {
    a.inner(b).unwrap().norm_sqr() / (a.norm2() * b.norm2())
}

/// Complex number with modulus at most `radius`.
pub fn disc(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..=radius, 0.0..2.0 * PI).prop_map(|(r, t)| C64::from_polar(r, t))
}

pub fn weight() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

/// Superposition of 1..=`max_terms` coherent products on `modes` modes.
pub fn state(modes: usize, max_terms: usize, radius: f64) -> impl Strategy<Value = SuperposedState> {
    prop::collection::vec((weight(), prop::collection::vec(disc(radius), modes)), 1..=max_terms).prop_map(
        move |terms| {
            SuperposedState::from_terms(modes, terms.into_iter().map(|(w, a)| CoherentTerm::new(w, a)).collect())
                .unwrap()
        },
    )
}

fn element(modes: usize) -> BoxedStrategy<Element> {
    let displace = (0..modes, disc(0.5)).prop_map(|(mode, alpha)| Element::Displace { mode, alpha });
    if modes == 1 {
        return displace.boxed();
    }
    let split = (0..modes, 1..modes, 0.05..0.95f64).prop_map(move |(i, off, t)| Element::BeamSplit {
        modes: [i, (i + off) % modes],
        transmittance: t,
    });
    prop_oneof![displace, split].boxed()
}

fn measurement(modes: usize) -> BoxedStrategy<Option<Element>> {
    if modes == 1 {
        return Just(None).boxed();
    }
    prop_oneof![
        Just(None),
        (0..modes, -2.0..2.0f64).prop_map(|(mode, p)| Some(Element::Homodyne { mode, p })),
        (0..modes, 0..4usize).prop_map(|(mode, n)| Some(Element::FockProject { mode, n })),
    ]
    .boxed()
}

/// Random circuit: ≤ 3 modes, one superposed input of ≤ 6 terms with
/// |amplitudes| ≤ 1.5, up to four unitary elements and an optional final
/// measurement.
pub fn circuit() -> impl Strategy<Value = Circuit> {
    (1..=3usize)
        .prop_flat_map(|m| {
            (
                Just(m),
                state(m, 6, 1.5),
                prop::collection::vec(element(m), 0..=4),
                measurement(m),
            )
        })
        .prop_map(|(m, s, mut elements, last)| {
            elements.extend(last);
            Circuit::new(
                m,
                vec![InputSpec::Superposed {
                    modes: (0..m).collect(),
                    state: s,
                }],
                elements,
            )
            .unwrap()
        })
}

/// Engine gaps for one circuit at Fock cutoff ≥ 40: (initial norm, final
/// density, fidelity), the first two relative. `None` for outcomes of negligible probability.
pub fn engine_gaps(circuit: &Circuit) -> Option<[f64; 3]> {
    let initial = circuit.initial_state().unwrap();
    let coherent = circuit.run_coherent().unwrap();
    if initial.norm2() < 1e-3 || coherent.density < 1e-6 * initial.norm2() {
        return None;
    }
    let run = circuit.run_fock(Some(circuit.suggested_cutoff().unwrap().max(40))).unwrap();
    let fock_initial = initial.to_fock(run.cutoff, None).unwrap().norm2();
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs());
    let converted = coherent.state.to_fock(run.cutoff, None).unwrap();
    Some([
        rel(initial.norm2(), fock_initial),
        rel(coherent.density, run.density),
        1.0 - fock::fidelity(&converted, &run.state).unwrap(),
    ])
}
