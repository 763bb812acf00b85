//! Odd cat states as single-photon approximations, and their Fock spectra.

use hybrid_gkp::analysis::{odd_cat, single_photon_fidelity, to_fock_auto};

fn main() -> hybrid_gkp::Result<()> {
    println!("alpha   |<1|C->|^2   P(n=1)   P(n=3)");
    for alpha in [0.1, 0.3, 0.455, 0.7, 1.0, 1.5] {
        let spectrum = to_fock_auto(&odd_cat(alpha)?)?.number_distribution()?;
        println!(
            "{alpha:<7} {:<12.6} {:<8.5} {:.5}",
            single_photon_fidelity(alpha)?,
            spectrum[1],
            spectrum.get(3).copied().unwrap_or(0.0)
        );
    }
    Ok(())
}
