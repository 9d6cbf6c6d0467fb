//! Information retained by a few quantizers at several working points.
use quantcrb::fim::{rho1, rho_general};
use quantcrb::{NoiseModel, QuantizerSpec};

fn main() -> quantcrb::Result<()> {
    let normal = NoiseModel::StandardNormal;
    let quantizers = [
        QuantizerSpec::binary(0.0)?,
        QuantizerSpec::equiprobable(&normal, 4)?,
        QuantizerSpec::lloyd_max_4bit(1.0)?,
    ];
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>14}",
        "s", "binary", "equiprob4", "lloydmax4", "rho1/4"
    );
    for s in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let vals: Vec<String> = quantizers
            .iter()
            .map(|q| format!("{:14.10}", rho_general(q, s, &normal)))
            .collect();
        println!("{s:8.2} {} {:14.10}", vals.join(" "), rho1(s) / 4.0);
    }
    println!(
        "rho0 normal = {}, laplace = {}",
        normal.rho0()?,
        NoiseModel::laplace_unit_variance().rho0()?
    );
    Ok(())
}
