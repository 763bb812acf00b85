//! One function per subcommand; each returns a table and its diagnostics.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{self, Engine, TradeoffModel};
use crate::coherent::{Parity, SuperposedState};
use crate::error::Error;
use crate::fock::{self, GridSpec};
use crate::protocols::{
    self, breed_circuit, equal_amplitude_circuit, hybrid_circuit, qutrit_circuit, states, AncillaModel, Circuit,
    FockRun, HybridOutput, HybridState, LogicalInput, PhotonModel, ZERO_DENSITY,
};

use super::output::{emit, float, Table};
use super::*;

/// Output of one command before it is written.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub table: Table,
    pub diagnostics: Value,
}

impl Report {
    pub fn emit(&self, cli: &Cli) -> Result<(), CliError> {
        emit(&self.table, cli.out.as_deref(), self.command, cli, &self.diagnostics)
    }
}

/// Executes the parsed command without writing anything.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let engine = cli.engine;
    let (command, (table, diagnostics)) = match &cli.command {
        Command::Simulate(a) => ("simulate", simulate(a, engine)?),
        Command::SweepFidelity(a) => ("sweep-fidelity", sweep_fidelity(a, engine)?),
        Command::Tradeoff(a) => ("tradeoff", tradeoff(a, engine)?),
        Command::Breed(a) => {
            check_positive("alpha", a.alpha)?;
            let circuit = breed_circuit(a.j, a.alpha, a.p, a.ancilla.into())?;
            ("breed", branches(&circuit, 0, 2, engine, a.cutoff)?)
        }
        Command::Qutrit(a) => {
            check_positive("alpha", a.alpha)?;
            let circuit = qutrit_circuit(a.alpha, a.p, PhotonModel::OddCat)?;
            ("qutrit", branches(&circuit, 0, 3, engine, a.cutoff)?)
        }
        Command::EqualAmp(a) => {
            check_positive("a", a.a)?;
            let circuit = equal_amplitude_circuit(a.a, a.p, a.ancilla.into())?;
            ("equal-amp", branches(&circuit, 0, 2, engine, a.cutoff)?)
        }
        Command::Parity(a) => ("parity", parity(a)?),
        Command::Wigner(a) => ("wigner", wigner(a)?),
        Command::ValidateApprox(a) => ("validate-approx", validate_approx(a, engine)?),
    };
    Ok(Report {
        command,
        table,
        diagnostics,
    })
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {x}")))
    }
}

fn grid(a: &SweepArgs) -> Result<Vec<f64>, CliError> {
    check_positive("alpha-min", a.alpha_min)?;
    check_positive("step", a.step)?;
    if a.alpha_max < a.alpha_min {
        return Err(CliError::Config(format!("alpha-max {} is below alpha-min {}", a.alpha_max, a.alpha_min)));
    }
    let count = ((a.alpha_max - a.alpha_min) / a.step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| a.alpha_min + a.step * k as f64).collect())
}

fn disagreement(what: &str, gap: f64) -> Result<(), CliError> {
    if gap > ENGINE_TOLERANCE || gap.is_nan() {
        Err(CliError::Disagreement(format!("{what} differs by {gap:e}")))
    } else {
        Ok(())
    }
}

/// Compares a coherent-engine state with a Fock run over the same modes.
fn compare(coherent: &HybridState, run: &FockRun) -> Result<Value, CliError> {
    let converted = coherent.to_fock(run.cutoff, None)?;
    let fidelity_gap = 1.0 - fock::fidelity(&converted, &run.state)?;
    let density = coherent.norm2();
    let density_gap = (density - run.density).abs() / density.max(f64::MIN_POSITIVE);
    disagreement("fidelity", fidelity_gap)?;
    disagreement("density", density_gap)?;
    Ok(json!({
        "fidelity_gap": fidelity_gap,
        "density_gap": density_gap,
        "cutoff": run.cutoff,
        "truncation_error": run.state.truncation_error(),
    }))
}

fn simulate(a: &SimulateArgs, engine: EngineChoice) -> Result<(Table, Value), CliError> {
    let circuit = CircuitFile::load(&a.circuit)?.to_circuit()?;
    match engine {
        EngineChoice::Fock => {
            let run = circuit.run_fock(a.cutoff)?;
            reject_forbidden(run.density)?;
            let diagnostics = json!({
                "modes": run.modes,
                "cutoff": run.cutoff,
                "density": run.density,
                "truncation_error": run.state.truncation_error(),
            });
            Ok((fock_table(&run), diagnostics))
        }
        EngineChoice::Coherent | EngineChoice::Both => {
            let coherent = circuit.run_coherent()?;
            reject_forbidden(coherent.density)?;
            let mut diagnostics = json!({
                "modes": coherent.state.modes(),
                "density": coherent.density,
                "max_amplitude": coherent.max_amplitude,
            });
            if engine == EngineChoice::Both {
                diagnostics["engine_check"] = compare(&coherent.state, &circuit.run_fock(a.cutoff)?)?;
            }
            Ok((terms_table(&coherent.state), diagnostics))
        }
    }
}

fn reject_forbidden(density: f64) -> Result<(), CliError> {
    if density < ZERO_DENSITY {
        return Err(Error::ZeroDensity(density).into());
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";")
}

fn terms_table(state: &HybridState) -> Table {
    let mut header = vec!["labels".to_string(), "term".into(), "weight_re".into(), "weight_im".into()];
    for m in state.coherent_modes() {
        header.push(format!("mode{m}_re"));
        header.push(format!("mode{m}_im"));
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (key, component) in state.components() {
        for (k, term) in component.terms().iter().enumerate() {
            let mut row = vec![join(key), k.to_string(), float(term.weight.re), float(term.weight.im)];
            for a in &term.amplitudes {
                row.push(float(a.re));
                row.push(float(a.im));
            }
            table.push(row);
        }
    }
    table
}

fn fock_table(run: &FockRun) -> Table {
    let mut table = Table::new(&["occupation", "re", "im"]);
    let cutoffs = run.state.cutoffs().to_vec();
    for (flat, amp) in run.state.amplitudes().iter().enumerate() {
        if *amp == C64::new(0.0, 0.0) {
            continue;
        }
        let mut occupation = vec![0; cutoffs.len()];
        let mut rest = flat;
        for (slot, &c) in occupation.iter_mut().zip(&cutoffs).rev() {
            *slot = rest % c;
            rest /= c;
        }
        table.push(vec![join(&occupation), float(amp.re), float(amp.im)]);
    }
    table
}

fn branch_table(out: &HybridOutput) -> Table {
    let mut table = Table::new(&["branch", "term", "weight_re", "weight_im", "amplitude_re", "amplitude_im"]);
    for (n, branch) in out.branches.iter().enumerate() {
        for (k, t) in branch.terms().iter().enumerate() {
            table.push(vec![
                n.to_string(),
                k.to_string(),
                float(t.weight.re),
                float(t.weight.im),
                float(t.amplitudes[0].re),
                float(t.amplitudes[0].im),
            ]);
        }
    }
    table
}

fn fock_branch_table(run: &FockRun, ancilla: usize) -> Result<Table, CliError> {
    let k = run
        .modes
        .iter()
        .position(|&m| m == ancilla)
        .ok_or_else(|| CliError::Config(format!("mode {ancilla} is not an output mode")))?;
    let mut table = Table::new(&["branch", "n", "re", "im"]);
    for n in 0..run.cutoff {
        let (branch, weight) = run.state.project_fock(k, n)?;
        if weight <= 1e-28 * run.density {
            continue;
        }
        for (m, a) in branch.amplitudes().iter().enumerate() {
            table.push(vec![n.to_string(), m.to_string(), float(a.re), float(a.im)]);
        }
    }
    Ok(table)
}

fn branches(
    circuit: &Circuit,
    logical: usize,
    ancilla: usize,
    engine: EngineChoice,
    cutoff: Option<usize>,
) -> Result<(Table, Value), CliError> {
    if engine == EngineChoice::Fock {
        let run = circuit.run_fock(cutoff)?;
        let diagnostics = json!({
            "cutoff": run.cutoff,
            "density": run.density,
            "truncation_error": run.state.truncation_error(),
        });
        return Ok((fock_branch_table(&run, ancilla)?, diagnostics));
    }
    let run = circuit.run_coherent()?;
    let out = HybridOutput::from_state(run.state, logical, ancilla)?;
    let norms: Vec<f64> = out.branches.iter().map(|b| b.norm2()).collect();
    let mut diagnostics = json!({
        "density": out.density,
        "max_amplitude": run.max_amplitude,
        "branch_norm2": norms,
    });
    if engine == EngineChoice::Both {
        diagnostics["engine_check"] = compare(&out.state, &circuit.run_fock(cutoff)?)?;
    }
    Ok((branch_table(&out), diagnostics))
}

fn sweep_fidelity(a: &SweepArgs, engine: EngineChoice) -> Result<(Table, Value), CliError> {
    let alphas = grid(a)?;
    let closed: Vec<f64> = match engine {
        EngineChoice::Fock => Vec::new(),
        _ => alphas
            .par_iter()
            .map(|&x| analysis::closed_form_fidelity(x))
            .collect::<Result<_, Error>>()?,
    };
    let simulated: Vec<f64> = match engine {
        EngineChoice::Coherent => Vec::new(),
        _ => alphas
            .par_iter()
            .map(|&x| analysis::simulated_fidelity(x, Engine::Fock, None))
            .collect::<Result<_, Error>>()?,
    };
    let mut gap: f64 = 0.0;
    if engine == EngineChoice::Both {
        gap = closed.iter().zip(&simulated).map(|(c, s)| (c - s).abs()).fold(0.0, f64::max);
        disagreement("fidelity", gap)?;
    }
    let values = if closed.is_empty() { &simulated } else { &closed };
    let mut table = Table::new(&["alpha", "fidelity"]);
    for (x, f) in alphas.iter().zip(values) {
        table.push(vec![float(*x), float(*f)]);
    }
    let best = (0..values.len()).max_by(|&i, &j| values[i].total_cmp(&values[j])).expect("nonempty grid");
    let mut diagnostics = json!({
        "points": alphas.len(),
        "grid_argmax": alphas[best],
        "grid_max": values[best],
        "max_engine_gap": gap,
    });
    let (lo, hi) = (alphas[0], *alphas.last().expect("nonempty grid"));
    if hi <= 2.0 {
        let (alpha_star, f_star) = analysis::optimal_alpha(lo, hi)?;
        diagnostics["alpha_star"] = json!(alpha_star);
        diagnostics["fidelity_star"] = json!(f_star);
    }
    Ok((table, diagnostics))
}

fn tradeoff(a: &TradeoffArgs, engine: EngineChoice) -> Result<(Table, Value), CliError> {
    if engine == EngineChoice::Fock {
        return Err(CliError::Config(
            "tradeoff integrates in the coherent engine; use --engine coherent or both".into(),
        ));
    }
    let alpha = match a.alpha.as_str() {
        "auto" => analysis::optimal_alpha(0.05, 1.5)?.0,
        text => text
            .parse()
            .map_err(|_| CliError::Config(format!("alpha must be a number or 'auto', got '{text}'")))?,
    };
    check_positive("alpha", alpha)?;
    check_positive("vup-max", a.vup_max)?;
    if a.points == 0 {
        return Err(CliError::Config("points must be at least 1".into()));
    }
    if a.vup_max > a.p_max {
        return Err(Error::WindowExceedsDomain {
            v_up: a.vup_max,
            p_max: a.p_max,
        }
        .into());
    }
    let model = TradeoffModel::new(alpha, a.ancilla.into(), a.p_max)?;
    let windows: Vec<f64> = (1..=a.points).map(|k| a.vup_max * k as f64 / a.points as f64).collect();
    let records = windows
        .par_iter()
        .map(|&v| model.evaluate(v))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut table = Table::new(&["v_up", "avg_fidelity", "success_prob"]);
    let mut panels: f64 = 0.0;
    for r in &records {
        panels = panels.max(r.diagnostics["panels"]);
        table.push(vec![
            float(r.parameter),
            float(r.fidelity),
            float(r.probability.expect("window records carry a probability")),
        ]);
    }
    let v_f = model.window_for_fidelity(0.99)?;
    let at_f = model.evaluate(v_f)?;
    let v_p = model.window_for_probability(0.10)?;
    let at_p = model.evaluate(v_p)?;
    let mut diagnostics = json!({
        "alpha": alpha,
        "max_panels": panels,
        "fidelity_0.99": { "v_up": v_f, "success_prob": at_f.probability },
        "success_prob_0.10": { "v_up": v_p, "avg_fidelity": at_p.fidelity },
    });
    if engine == EngineChoice::Both {
        let model_kind: AncillaModel = a.ancilla.into();
        let reference = hybrid_circuit(&LogicalInput::OddCat, alpha, 0.0, model_kind)?.run_fock(None)?;
        let mut gaps = Vec::new();
        for p in [0.25, 0.5, 1.0] {
            let run = hybrid_circuit(&LogicalInput::OddCat, alpha, p, model_kind)?.run_fock(Some(reference.cutoff))?;
            let gap = (fock::fidelity(&reference.state, &run.state)? - model.pointwise_fidelity(p)?).abs();
            disagreement("pointwise fidelity", gap)?;
            gaps.push(gap);
        }
        diagnostics["engine_check"] = json!({ "pointwise_fidelity_gaps": gaps, "cutoff": reference.cutoff });
    }
    Ok((table, diagnostics))
}

fn named_state(state: NamedState, amplitude: f64) -> Result<(SuperposedState, f64), CliError> {
    check_positive("amplitude", amplitude)?;
    let half = amplitude / 2.0;
    Ok(match state {
        NamedState::LogicalZero => (states::logical_zero(amplitude), -amplitude),
        NamedState::LogicalOne => (states::logical_one(amplitude), -amplitude),
        NamedState::BredZero => (states::bred_zero(amplitude), -half),
        NamedState::BredOne => (states::bred_one(amplitude), -half),
        NamedState::QutritOne => (states::qutrit_one(amplitude), -half),
        NamedState::QutritTwo => (states::qutrit_two(amplitude), -half),
        NamedState::OddCat => (SuperposedState::cat(amplitude, Parity::Odd, 1, 0)?, 0.0),
    })
}

fn parity(a: &ParityArgs) -> Result<(Table, Value), CliError> {
    let (state, natural) = named_state(a.state, a.amplitude)?;
    let frame = C64::new(a.frame_re.unwrap_or(natural), a.frame_im);
    let spectrum = analysis::parity_spectrum(&state, frame)?;
    let mut table = Table::new(&["n", "weight", "parity"]);
    for (n, w) in spectrum.weights.iter().enumerate() {
        let p = if n % 2 == 0 { "even" } else { "odd" };
        table.push(vec![n.to_string(), float(*w), p.into()]);
    }
    let diagnostics = json!({
        "frame": [frame.re, frame.im],
        "even_weight": spectrum.even_weight,
        "odd_weight": spectrum.odd_weight,
        "cutoff": spectrum.weights.len(),
    });
    Ok((table, diagnostics))
}

fn wigner_state(a: &WignerArgs) -> Result<SuperposedState, CliError> {
    check_positive("alpha", a.alpha)?;
    let model = AncillaModel::Approximate;
    let out = match a.protocol {
        WignerProtocol::OddCat => return Ok(SuperposedState::cat(a.alpha, Parity::Odd, 1, 0)?),
        WignerProtocol::Hybrid => protocols::breed(1, a.alpha, a.p, model)?,
        WignerProtocol::Breed => protocols::breed(a.j, a.alpha, a.p, model)?,
        WignerProtocol::Qutrit => protocols::qutrit_generate(a.alpha, a.p)?,
        WignerProtocol::EqualAmp => protocols::equal_amplitude_generate(a.alpha, a.p, model)?,
    };
    if a.branch >= out.branches.len() {
        return Err(CliError::Config(format!(
            "branch {} does not exist; the output has {}",
            a.branch,
            out.branches.len()
        )));
    }
    Ok(out.branch(a.branch).normalized()?)
}

fn wigner(a: &WignerArgs) -> Result<(Table, Value), CliError> {
    check_positive("extent", a.extent)?;
    if a.points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let state = analysis::to_fock_auto(&wigner_state(a)?)?;
    let w = state.wigner(&GridSpec::square(a.extent, a.points))?;
    let mut table = Table::new(&["x", "p", "W"]);
    for (ix, x) in w.x_axis.iter().enumerate() {
        for (ip, p) in w.p_axis.iter().enumerate() {
            table.push(vec![float(*x), float(*p), float(w.value(ix, ip))]);
        }
    }
    let diagnostics = json!({
        "cutoff": state.cutoffs()[0],
        "truncation_error": state.truncation_error(),
        "min": w.min(),
        "max": w.max(),
        "riemann_sum": w.riemann_sum(),
    });
    Ok((table, diagnostics))
}

fn validate_approx(a: &SweepArgs, engine: EngineChoice) -> Result<(Table, Value), CliError> {
    let alphas = grid(a)?;
    let rows = alphas
        .par_iter()
        .map(|&x| -> Result<[f64; 5], Error> {
            let coherent = match engine {
                EngineChoice::Fock => f64::NAN,
                _ => analysis::approximation_validity(x, Engine::Coherent)?,
            };
            let fock = match engine {
                EngineChoice::Coherent => f64::NAN,
                _ => analysis::approximation_validity(x, Engine::Fock)?,
            };
            Ok([
                x,
                coherent,
                fock,
                analysis::neglected_population(x, true)?,
                analysis::neglected_population(x, false)?,
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut gap: f64 = 0.0;
    if engine == EngineChoice::Both {
        gap = rows.iter().map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
        disagreement("approximation fidelity", gap)?;
    }
    let mut table = Table::new(&["alpha", "fidelity", "neglected_population", "neglected_weight"]);
    for r in &rows {
        let f = if engine == EngineChoice::Fock { r[2] } else { r[1] };
        table.push(vec![float(r[0]), float(f), float(r[3]), float(r[4])]);
    }
    Ok((table, json!({ "points": rows.len(), "max_engine_gap": gap })))
}
