//! First-generation hybrid qubit: branches at p = 0, fidelity against the
//! target and the optimal cat amplitude.

use hybrid_gkp::analysis::{closed_form_fidelity, optimal_alpha, simulated_fidelity, Engine};
use hybrid_gkp::protocols::{hybrid_generate, AncillaModel, LogicalInput};

fn main() -> hybrid_gkp::Result<()> {
    let (alpha, f_star) = optimal_alpha(0.05, 1.5)?;
    println!("optimal alpha {alpha:.6}, fidelity {f_star:.6}");

    let out = hybrid_generate(&LogicalInput::OddCat, alpha, 0.0, AncillaModel::Approximate)?;
    for (n, branch) in out.branches.iter().enumerate() {
        let terms: Vec<String> = branch
            .terms()
            .iter()
            .map(|t| format!("{:+.4}|{:.4}>", t.weight.re, t.amplitudes[0].re))
            .collect();
        println!("ancilla |{n}>: {}", terms.join(" "));
    }

    for a in [0.2, 0.455, 1.0] {
        println!(
            "alpha {a}: closed form {:.10}, coherent engine {:.10}, Fock engine {:.10}",
            closed_form_fidelity(a)?,
            simulated_fidelity(a, Engine::Coherent, None)?,
            simulated_fidelity(a, Engine::Fock, None)?
        );
    }
    Ok(())
}
