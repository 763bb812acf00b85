//! Hybrid qutrit circuit: three ancilla branches and their overlaps.

use hybrid_gkp::analysis::qutrit_overlaps;
use hybrid_gkp::protocols::qutrit_generate;

fn main() -> hybrid_gkp::Result<()> {
    let out = qutrit_generate(0.5, 0.0)?;
    for (n, b) in out.branches.iter().enumerate() {
        println!("ancilla |{n}>: {} terms, norm² {:.6}", b.len(), b.norm2());
    }
    println!("alpha   |<b0|b1>|   |<b1|b2>|   |<b0|b2>|");
    for alpha in [0.3, 0.5, 0.8, 1.2] {
        let [a, b, c] = qutrit_overlaps(alpha)?;
        println!("{alpha:<7} {a:<11.3e} {b:<11.5} {c:.5}");
    }
    Ok(())
}
