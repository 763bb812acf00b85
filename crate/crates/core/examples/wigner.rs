//! Wigner function of the bred branch, written as CSV (x, p, W) to stdout.

use hybrid_gkp::analysis::to_fock_auto;
use hybrid_gkp::fock::GridSpec;
use hybrid_gkp::protocols::{breed, AncillaModel};

fn main() -> hybrid_gkp::Result<()> {
    let branch = breed(2, 0.6, 0.0, AncillaModel::Approximate)?.branch(0).normalized()?;
    let w = to_fock_auto(&branch)?.wigner(&GridSpec::square(4.0, 41))?;
    eprintln!("min W = {:.4}, max W = {:.4}, integral {:.6}", w.min(), w.max(), w.riemann_sum());
    println!("x,p,W");
    for (ix, x) in w.x_axis.iter().enumerate() {
        for (ip, p) in w.p_axis.iter().enumerate() {
            println!("{x},{p},{}", w.value(ix, ip));
        }
    }
    Ok(())
}
