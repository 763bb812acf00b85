//! Breeding: the vacuum branch of each generation feeds the next one.

use hybrid_gkp::analysis::{bred_frame, parity_spectrum};
use hybrid_gkp::coherent::fidelity;
use hybrid_gkp::protocols::{bred_input, breed, states, AncillaModel};

fn main() -> hybrid_gkp::Result<()> {
    let alpha = 0.6;
    let second = bred_input(2, alpha)?;
    println!("|0~(2)> has {} coherent terms:", second.len());
    for t in second.terms() {
        println!("  {:+.6} |{:.6}>", t.weight.re, t.amplitudes[0].re);
    }
    println!("fidelity with the closed form: {:.15}", fidelity(&second, &states::bred_zero(alpha))?);

    let s = parity_spectrum(&second, bred_frame(alpha))?;
    println!("parity in the displaced frame: even {:.3e}, odd {:.12}", s.even_weight, s.odd_weight);

    for j in 1..=3 {
        let out = breed(j, alpha, 0.0, AncillaModel::Approximate)?;
        println!(
            "generation {j}: density {:.6}, branch norms {:.6} / {:.6}",
            out.density,
            out.branch(0).norm2(),
            out.branch(1).norm2()
        );
    }
    Ok(())
}
