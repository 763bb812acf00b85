//! Equal-amplitude variant with a 1/3 beam splitter.

use hybrid_gkp::coherent::fidelity;
use hybrid_gkp::protocols::{equal_amplitude_generate, states, AncillaModel};

fn main() -> hybrid_gkp::Result<()> {
    let a = 0.557;
    let out = equal_amplitude_generate(a, 0.0, AncillaModel::Approximate)?;
    let beta = a / 3f64.sqrt();
    for (n, target) in [states::logical_zero(beta), states::logical_one(beta)].iter().enumerate() {
        println!("branch {n}: fidelity with the logical state {:.12}", fidelity(&out.branch(n), target)?);
    }
    let exact = equal_amplitude_generate(a, 0.0, AncillaModel::Exact)?;
    println!("exact ancilla density {:.6}, approximate {:.6}", exact.density, out.density);
    Ok(())
}
