//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

mod common;

use std::f64::consts::{FRAC_1_PI, SQRT_2};
use std::time::Instant;

use hybrid_gkp::analysis::{self, TradeoffModel, DEFAULT_P_MAX};
use hybrid_gkp::cli;
use hybrid_gkp::fock::{self, GridSpec};
use hybrid_gkp::protocols::{self, hybrid_circuit, AncillaModel, HybridState, LogicalInput};
use hybrid_gkp::{CoherentTerm, FockState, SuperposedState, C64};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use common::hybrid_fidelity;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn real(terms: &[(f64, f64)]) -> SuperposedState {
    SuperposedState::single_mode_real(terms)
}

fn two_mode(terms: &[(f64, f64, f64)]) -> SuperposedState {
    SuperposedState::from_terms(2, terms.iter().map(|&(w, a, b)| CoherentTerm::real(w, &[a, b])).collect()).unwrap()
}

fn labelled(logical: usize, label: usize, branches: &[SuperposedState]) -> HybridState {
    HybridState::from_components(
        vec![logical],
        vec![label],
        branches.iter().enumerate().map(|(n, b)| (vec![n], b.clone())).collect(),
    )
    .unwrap()
}

fn read_csv(path: &std::path::Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn run_cli(args: &[&str]) -> i32 {
    let mut full = vec!["hybrid-gkp"];
    full.extend_from_slice(args);
    cli::main_with_args(full)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let code = run_cli(&[
        "sweep-fidelity",
        "--alpha-min",
        "0.05",
        "--alpha-max",
        "1.5",
        "--step",
        "0.005",
        "--out",
        out.to_str().unwrap(),
    ]);
    let rows = read_csv(&out);
    let best = rows.iter().max_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
    let (alpha_star, f_star) = analysis::optimal_alpha(0.05, 1.5).unwrap();
    let f_small = analysis::closed_form_fidelity(0.001).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = code == 0
        && (best[1] - 0.964).abs() <= 0.002
        && (best[0] - 0.455).abs() <= 0.01
        && (f_star - 0.964).abs() <= 0.002
        && (alpha_star - 0.455).abs() <= 0.01
        && (f_small - 0.400).abs() <= 0.005
        && secs < 10.0;
    outcome(
        pass,
        format!(
            "grid max F={:.6} at α={:.3}; refined α*={alpha_star:.6} F*={f_star:.6}; F(0.001)={f_small:.5}; {secs:.2}s",
            best[1], best[0]
        ),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (alpha, _) = analysis::optimal_alpha(0.05, 1.5).unwrap();
    let model = TradeoffModel::new(alpha, AncillaModel::Approximate, DEFAULT_P_MAX).unwrap();
    let v_f = model.window_for_fidelity(0.99).unwrap();
    let p_at_f = model.evaluate(v_f).unwrap().probability.unwrap();
    let v_p = model.window_for_probability(0.10).unwrap();
    let f_at_p = model.evaluate(v_p).unwrap().fidelity;
    let half = model.evaluate(0.5).unwrap();
    let (f_half, p_half) = (half.fidelity, half.probability.unwrap());
    let secs = start.elapsed().as_secs_f64();
    let checks = [
        (p_at_f - 0.126).abs() <= 0.010,
        (f_at_p - 0.994).abs() <= 0.003,
        (f_half - 0.90).abs() <= 0.02,
        (p_half - 0.40).abs() <= 0.03,
        secs < 60.0,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "α={alpha:.6}: F=0.99 at v_up={v_f:.4} gives P={p_at_f:.4} [{}]; P=0.10 at v_up={v_p:.4} gives F={f_at_p:.4} [{}]; v_up=0.5 gives F={f_half:.4} [{}] and P={p_half:.4} [{}]; {secs:.2}s",
            ok(checks[0]),
            ok(checks[1]),
            ok(checks[2]),
            ok(checks[3])
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "out of tolerance"
    }
}

fn criterion_3() -> Outcome {
    let alpha = 0.455;
    let b = alpha / SQRT_2;
    let approx = protocols::hybrid_generate(&LogicalInput::OddCat, alpha, 0.0, AncillaModel::Approximate).unwrap();
    let eq6 = [real(&[(1.0, 3.0 * b), (-2.0, b), (1.0, -b)]), real(&[(1.0, 2.0 * b), (-1.0, 0.0)])];
    let branches_ok = approx.branches.len() == 2
        && approx.branch(0).matches_termwise(&eq6[0], 1e-12)
        && approx.branch(1).matches_termwise(&eq6[1], 1e-12)
        && hybrid_fidelity(&approx.state, &labelled(0, 2, &eq6)) > 1.0 - 1e-12;

    let exact = protocols::hybrid_generate(&LogicalInput::OddCat, alpha, 0.0, AncillaModel::Exact).unwrap();
    let eq8 = two_mode(&[(1.0, 3.0 * b, alpha), (-1.0, b, alpha), (-1.0, b, -alpha), (1.0, -b, -alpha)]);
    let exact_ok = exact.state.component(&[]).matches_termwise(&eq8, 1e-12);

    let target = labelled(0, 2, &eq6);
    let mut gaps = Vec::new();
    for (model, out) in [(AncillaModel::Approximate, &approx), (AncillaModel::Exact, &exact)] {
        let run = hybrid_circuit(&LogicalInput::OddCat, alpha, 0.0, model).unwrap().run_fock(None).unwrap();
        let via_fock = fock::fidelity(&target.to_fock(run.cutoff, None).unwrap(), &run.state).unwrap();
        let projected = match out.state.label_modes().is_empty() {
            true => out.state.label_coherent_mode(2, 1).unwrap(),
            false => out.state.clone(),
        };
        let via_coherent = target.inner(&projected).unwrap().norm_sqr() / (target.norm2() * out.state.norm2());
        gaps.push((via_fock - via_coherent).abs());
    }
    let engines_ok = gaps.iter().all(|&g| g < 1e-8);
    outcome(
        branches_ok && exact_ok && engines_ok,
        format!(
            "approximate branches {} ; exact state {} ; engine fidelity gaps {:.1e}, {:.1e}",
            ok(branches_ok),
            ok(exact_ok),
            gaps[0],
            gaps[1]
        ),
    )
}

fn criterion_4() -> Outcome {
    let alpha = 0.455;
    let b = alpha / SQRT_2;
    let mut worst: f64 = 1.0;
    for k in 0..20 {
        let p = -2.0 + 4.0 * k as f64 / 19.0;
        let out = protocols::hybrid_generate(&LogicalInput::OddCat, alpha, p, AncillaModel::Approximate).unwrap();
        let r = |x: f64| C64::new(x, 0.0);
        let phase = C64::from_polar(1.0, alpha * p);
        let zero = SuperposedState::from_terms(
            1,
            vec![
                CoherentTerm::real(1.0, &[3.0 * b]),
                CoherentTerm::real(1.0, &[-b]),
                CoherentTerm::real(-2.0 * (2.0 * alpha * p).cos(), &[b]),
            ],
        )
        .unwrap();
        let one = SuperposedState::from_terms(
            1,
            vec![
                CoherentTerm::new(phase, vec![r(2.0 * b)]),
                CoherentTerm::new(-phase.conj(), vec![r(0.0)]),
            ],
        )
        .unwrap();
        let expected = labelled(0, 2, &[zero, one]);
        worst = worst.min(hybrid_fidelity(&expected, &out.state.normalized().unwrap()));
    }
    outcome(worst >= 1.0 - 1e-8, format!("worst fidelity over 20 outcomes in [-2, 2]: 1 - {:.1e}", 1.0 - worst))
}

fn criterion_5() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for alpha in [0.4, 0.6, 0.9] {
        let y = alpha / SQRT_2;
        let eq15a = real(&[
            (1.0, 1.5 * alpha + y),
            (-1.0, 1.5 * alpha - y),
            (-2.0, 0.5 * alpha + y),
            (2.0, 0.5 * alpha - y),
            (1.0, -0.5 * alpha + y),
            (-1.0, -0.5 * alpha - y),
        ]);
        let case_one = protocols::bred_input(2, alpha).unwrap().matches_termwise(&eq15a, 1e-12);

        let b = alpha / SQRT_2;
        let input = real(&[(1.0, 2.0 * b), (-1.0, 0.0)]).normalized().unwrap();
        let out = protocols::hybrid_generate(&LogicalInput::Prepared(input), alpha, 0.0, AncillaModel::Approximate)
            .unwrap();
        let case_two_zero = real(&[(1.0, alpha + y), (-1.0, alpha - y), (-1.0, y), (1.0, -y)]);
        let case_two_one = real(&[(1.0, alpha), (-1.0, 0.0)]);
        let case_two = out.branch(0).matches_termwise(&case_two_zero, 1e-12)
            && out.branch(1).matches_termwise(&case_two_one, 1e-12)
            && hybrid_fidelity(&out.state, &labelled(0, 2, &[case_two_zero, case_two_one])) > 1.0 - 1e-12;
        pass &= case_one && case_two;
        details.push(format!("α={alpha}: case I {}, case II {}", ok(case_one), ok(case_two)));
    }
    outcome(pass, details.join("; "))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in [0.2, 0.35, 0.5] {
        let frame = C64::new(-beta, 0.0);
        let one = analysis::parity_spectrum(&real(&[(1.0, 2.0 * beta), (-1.0, 0.0)]), frame).unwrap();
        let zero = analysis::parity_spectrum(&real(&[(1.0, 3.0 * beta), (-2.0, beta), (1.0, -beta)]), frame).unwrap();
        worst = worst.max(one.even_weight).max(zero.odd_weight);
    }
    outcome(worst < 1e-10, format!("largest wrong-parity weight {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let alpha = 0.5;
    let y = alpha / SQRT_2;
    let out = protocols::qutrit_generate(alpha, 0.0).unwrap();
    let b0 = real(&[
        (1.0, 1.5 * alpha + y),
        (-1.0, 1.5 * alpha - y),
        (-2.0, 0.5 * alpha + y),
        (2.0, 0.5 * alpha - y),
        (1.0, -0.5 * alpha + y),
        (-1.0, -0.5 * alpha - y),
    ]);
    let b1 = real(&[
        (1.0, 1.5 * alpha),
        (-2.0, 0.5 * alpha),
        (1.0, -0.5 * alpha),
        (1.0, alpha + y),
        (-1.0, alpha - y),
        (-1.0, y),
        (1.0, -y),
    ]);
    let b2 = real(&[(1.0, alpha), (-1.0, 0.0)]);
    // half beam splitter then vacuum on mode 1: a†₃ → a†₃/√2, a†₁a†₃ → |2⟩₃/√2
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let termwise = out.branches.len() == 3
        && out.branch(0).matches_termwise(&b0, 1e-12)
        && out.branch(1).matches_termwise(&b1, 1e-12)
        && out.branch(2).matches_termwise(&b2, 1e-12)
        && hybrid_fidelity(&out.state, &labelled(0, 3, &[b0.clone(), b1.scaled(h), b2.scaled(h)])) > 1.0 - 1e-12;
    let overlap = |a: &SuperposedState, b: &SuperposedState| {
        a.inner(b).unwrap().norm() / (a.norm2() * b.norm2()).sqrt()
    };
    let orth = overlap(&b0, &b1);
    let orth_ok = orth < 1e-6;

    let residuals: Vec<(f64, f64)> = (0..=18)
        .map(|k| {
            let a = 0.3 + 0.05 * k as f64;
            let y = a / SQRT_2;
            let zero = real(&[
                (1.0, 1.5 * a + y),
                (-1.0, 1.5 * a - y),
                (-2.0, 0.5 * a + y),
                (2.0, 0.5 * a - y),
                (1.0, -0.5 * a + y),
                (-1.0, -0.5 * a - y),
            ]);
            (a, overlap(&zero, &real(&[(1.0, a), (-1.0, 0.0)])))
        })
        .collect();
    let monotone = residuals.windows(2).all(|w| w[1].1 < w[0].1);
    let (first, last) = (residuals[0], residuals[residuals.len() - 1]);
    outcome(
        termwise && orth_ok && monotone,
        format!(
            "branches {} ; |<b0|b1>|={orth:.1e} [{}] ; residual |<0|2_qt>| from {:.4} at α={:.2} to {:.4} at α={:.2}, monotone decrease [{}]",
            ok(termwise),
            ok(orth_ok),
            first.1,
            first.0,
            last.1,
            last.0,
            ok(monotone)
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for a in [0.4, 0.557, 0.8] {
        let r3 = 3f64.sqrt();
        let zero = real(&[(1.0, r3 * a), (-2.0, a / r3), (1.0, -a / r3)]);
        let one = real(&[(1.0, 2.0 * a / r3), (-1.0, 0.0)]);
        let out = protocols::equal_amplitude_generate(a, 0.0, AncillaModel::Approximate).unwrap();
        let good = out.branch(0).matches_termwise(&zero, 1e-12)
            && out.branch(1).matches_termwise(&one, 1e-12)
            && hybrid_fidelity(&out.state, &labelled(0, 2, &[zero, one])) > 1.0 - 1e-12;
        pass &= good;
        details.push(format!("A={a}: {}", ok(good)));
    }
    outcome(pass, details.join("; "))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut runner = TestRunner::deterministic();
    let strategy = common::circuit();
    let (mut checked, mut skipped) = (0, 0);
    let mut worst = [0.0f64; 3];
    while checked < 200 {
        let circuit = strategy.new_tree(&mut runner).unwrap().current();
        match common::engine_gaps(&circuit) {
            Some(g) => {
                for k in 0..3 {
                    worst[k] = worst[k].max(g[k]);
                }
                checked += 1;
            }
            None => skipped += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst.iter().all(|&g| g < 1e-8) && secs < 120.0,
        format!(
            "{checked} circuits ({skipped} negligible-outcome draws skipped): worst norm gap {:.1e}, density gap {:.1e}, fidelity gap {:.1e}; {secs:.2}s",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_10() -> Outcome {
    let grid = GridSpec::square(1.0, 3);
    let vacuum = FockState::basis(vec![10], &[0]).unwrap().wigner(&grid).unwrap().value(1, 1);
    let photon = FockState::basis(vec![10], &[1]).unwrap().wigner(&grid).unwrap().value(1, 1);
    let bred = analysis::to_fock_auto(&protocols::bred_input(2, 0.6).unwrap()).unwrap();
    let min = bred.wigner(&GridSpec::square(4.0, 81)).unwrap().min();
    let pass = (vacuum - FRAC_1_PI).abs() < 1e-6 && (photon + FRAC_1_PI).abs() < 1e-6 && min < -0.01;
    outcome(
        pass,
        format!("W_vac(0,0)·π={:.9}; W_1(0,0)·π={:.9}; bred branch-0 min W={min:.4}", vacuum / FRAC_1_PI, photon / FRAC_1_PI),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("optimal amplitude", criterion_1),
        ("trade-off operating points", criterion_2),
        ("first-generation output", criterion_3),
        ("conditional state at p != 0", criterion_4),
        ("breeding cases I and II", criterion_5),
        ("displaced-frame parity", criterion_6),
        ("qutrit branches", criterion_7),
        ("equal-amplitude variant", criterion_8),
        ("random-circuit engine agreement", criterion_9),
        ("Wigner sanity", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
