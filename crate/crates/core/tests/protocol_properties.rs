mod common;

use std::f64::consts::SQRT_2;

use hybrid_gkp::analysis::{bred_frame, parity_spectrum};
use hybrid_gkp::fock;
use hybrid_gkp::protocols::{
    self, bred_input, breed, hybrid_generate, qutrit_circuit, AncillaModel, InputSpec, LogicalInput, PhotonModel,
};
use hybrid_gkp::protocols::states::bred_zero;
use hybrid_gkp::SuperposedState;
use proptest::prelude::*;

use common::hybrid_fidelity;

fn fid(a: &SuperposedState, b: &SuperposedState) -> f64 {
    hybrid_gkp::coherent::fidelity(a, b).unwrap()
}

fn model() -> impl Strategy<Value = AncillaModel> {
    prop_oneof![
        Just(AncillaModel::Approximate),
        Just(AncillaModel::ApproximateNormalized),
        Just(AncillaModel::Exact)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn branches_reassemble(alpha in 0.1..1.4f64, p in -1.5..1.5f64, m in model()) {
        let out = hybrid_generate(&LogicalInput::OddCat, alpha, p, m).unwrap();
        prop_assume!(out.density > 1e-10);
        let whole = out.reassembled().unwrap();
        let target = if out.state.label_modes().is_empty() {
            out.state.label_coherent_mode(out.ancilla_mode, out.branches.len() - 1).unwrap()
        } else {
            out.state.clone()
        };
        prop_assert!(1.0 - hybrid_fidelity(&whole, &target) < 1e-10);
    }

    #[test]
    fn bred_branches_reassemble(alpha in 0.2..1.0f64, p in -1.0..1.0f64) {
        let out = breed(2, alpha, p, AncillaModel::Approximate).unwrap();
        prop_assert!(1.0 - hybrid_fidelity(&out.reassembled().unwrap(), &out.state) < 1e-10);
    }

    #[test]
    fn qutrit_branches_reassemble(alpha in 0.2..1.2f64, p in -1.0..1.0f64) {
        let out = protocols::qutrit_generate(alpha, p).unwrap();
        prop_assert!(1.0 - hybrid_fidelity(&out.reassembled().unwrap(), &out.state) < 1e-10);
    }

    #[test]
    fn breeding_recursion(alpha in 0.2..1.2f64) {
        let step = hybrid_generate(&LogicalInput::Prepared(bred_input(1, alpha).unwrap()), alpha, 0.0, AncillaModel::Approximate)
            .unwrap()
            .branch(0);
        let second = bred_input(2, alpha).unwrap();
        prop_assert!(1.0 - fid(&second, &step) < 1e-12);
        prop_assert!(second.matches_termwise(&bred_zero(alpha), 1e-12));
        prop_assert!(1.0 - fid(&breed(2, alpha, 0.0, AncillaModel::Approximate).unwrap().branch(0), &second) < 1e-12);
    }

    #[test]
    fn canonicalized_breeding_output_keeps_inner_products(alpha in 0.2..1.2f64, p in -1.0..1.0f64, probe in common::state(1, 4, 1.5)) {
        let b = breed(2, alpha, p, AncillaModel::Approximate).unwrap().branch(0);
        let raw = SuperposedState::from_terms(1, b.terms().iter().chain(b.terms()).cloned().collect()).unwrap();
        let (x, y) = (raw.inner(&probe).unwrap(), raw.canonicalize().inner(&probe).unwrap());
        prop_assert!((x - y).norm() <= 1e-10 * (1.0 + x.norm()));
    }

    #[test]
    fn bred_state_odd_in_its_frame(alpha in 0.2..1.0f64) {
        let spectrum = parity_spectrum(&bred_input(2, alpha).unwrap(), bred_frame(alpha)).unwrap();
        prop_assert!(spectrum.even_weight < 1e-10, "even weight {}", spectrum.even_weight);
        prop_assert!((spectrum.even_weight + spectrum.odd_weight - 1.0).abs() < 1e-9);
    }
}

#[test]
fn deeper_breeding_recurses() {
    let alpha = 0.6;
    let third = bred_input(3, alpha).unwrap();
    let step = hybrid_generate(&LogicalInput::Prepared(bred_input(2, alpha).unwrap()), alpha, 0.0, AncillaModel::Approximate)
        .unwrap()
        .branch(0);
    assert!(1.0 - fid(&third, &step) < 1e-12);
    assert!((third.norm2() - 1.0).abs() < 1e-12);
}

#[test]
fn forbidden_outcome_reported() {
    use hybrid_gkp::Error;
    // a lone odd cat has no density at p = 0
    let cat = SuperposedState::cat(0.5, hybrid_gkp::Parity::Odd, 1, 0).unwrap();
    assert!(cat.homodyne_project(0, 0.0).unwrap().density_amplitude_norm2 < 1e-14);
    assert!(matches!(
        hybrid_generate(&LogicalInput::OddCat, 0.0, 0.0, AncillaModel::Approximate),
        Err(Error::DegenerateState(_))
    ));
}

#[test]
fn qutrit_engines_agree() {
    for alpha in [0.3, 0.5, 0.8] {
        let circuit = qutrit_circuit(alpha, 0.2, PhotonModel::OddCat).unwrap();
        let coherent = circuit.run_coherent().unwrap();
        let run = circuit.run_fock(None).unwrap();
        let converted = coherent.state.to_fock(run.cutoff, None).unwrap();
        assert!(1.0 - fock::fidelity(&converted, &run.state).unwrap() < 1e-8);
        assert!((coherent.density - run.density).abs() < 1e-8 * coherent.density);
    }
}

#[test]
fn qutrit_photon_source_limit() {
    // a normalized split cat tends to the path-entangled photon as α → 0
    let gap = |alpha: f64| {
        let mut cat = qutrit_circuit(alpha, 0.0, PhotonModel::Fock).unwrap();
        cat.inputs[1] = InputSpec::SplitPhoton {
            cat_mode: 2,
            label_mode: 3,
            alpha,
            normalized: true,
        };
        let photon = qutrit_circuit(alpha, 0.0, PhotonModel::Fock).unwrap().run_fock(Some(30)).unwrap();
        1.0 - fock::fidelity(&cat.run_fock(Some(30)).unwrap().state, &photon.state).unwrap()
    };
    let gaps: Vec<f64> = [0.05, 0.1, 0.2, 0.4].into_iter().map(gap).collect();
    assert!(gaps[0] < 1e-3, "{gaps:?}");
    assert!(gaps.windows(2).all(|w| w[0] < w[1]), "{gaps:?}");
}

#[test]
fn equal_amplitude_reduces_to_logical_zero() {
    let alpha = 0.6;
    let a = (1.5f64).sqrt() * alpha;
    let b0 = protocols::equal_amplitude_generate(a, 0.0, AncillaModel::Approximate).unwrap().branch(0);
    let beta = alpha / SQRT_2;
    assert!(b0.matches_termwise(&protocols::states::logical_zero(beta), 1e-12));
}
