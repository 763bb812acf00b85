//! Averaged fidelity and success probability against the homodyne
//! acceptance window, plus the two standard operating points.

use hybrid_gkp::analysis::{optimal_alpha, TradeoffModel, DEFAULT_P_MAX};
use hybrid_gkp::protocols::AncillaModel;

fn main() -> hybrid_gkp::Result<()> {
    let (alpha, _) = optimal_alpha(0.05, 1.5)?;
    let model = TradeoffModel::new(alpha, AncillaModel::Approximate, DEFAULT_P_MAX)?;
    println!("v_up    F        P");
    for k in 1..=12 {
        let v = 0.25 * k as f64;
        let r = model.evaluate(v)?;
        println!("{v:<7} {:.5}  {:.5}", r.fidelity, r.probability.unwrap());
    }
    let v = model.window_for_fidelity(0.99)?;
    println!("F = 0.99 at v_up = {v:.4}: P = {:.4}", model.evaluate(v)?.probability.unwrap());
    let v = model.window_for_probability(0.10)?;
    println!("P = 0.10 at v_up = {v:.4}: F = {:.4}", model.evaluate(v)?.fidelity);
    Ok(())
}
