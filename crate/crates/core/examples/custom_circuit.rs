//! Loads a circuit file and runs it on both engines.

use hybrid_gkp::cli::CircuitFile;
use hybrid_gkp::fock;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/circuits/hybrid_qubit.toml").into());
    let circuit = CircuitFile::load(path.as_ref())?.to_circuit()?;
    let coherent = circuit.run_coherent()?;
    let run = circuit.run_fock(None)?;
    println!("modes {:?}, density {:.10} (Fock {:.10}, cutoff {})", coherent.state.modes(), coherent.density, run.density, run.cutoff);
    for (labels, component) in coherent.state.components() {
        println!("labels {labels:?}: {} terms", component.len());
    }
    let converted = coherent.state.to_fock(run.cutoff, None)?;
    println!("engine fidelity {:.12}", fock::fidelity(&converted, &run.state)?);
    Ok(())
}
