//! Best 3- and 4-bit quantizers for unit-variance normal noise at s = 0.
use quantcrb::analysis::rho_interval_search;
use quantcrb::NoiseModel;

fn main() -> quantcrb::Result<()> {
    for bits in [2, 3, 4] {
        let best = rho_interval_search(&NoiseModel::StandardNormal, bits, 0.0, 200, 7)?;
        let bps: Vec<String> = best.spec.breakpoints().iter().map(|b| format!("{b:.4}")).collect();
        println!("b={bits} rho={:.10} (restart {})", best.rho, best.restart);
        println!("    [{}]", bps.join(", "));
    }
    Ok(())
}
