//! rho for equiprobable b-bit quantizers under normal and Laplace noise.
use quantcrb::analysis::convergence_study;
use quantcrb::NoiseModel;

fn main() -> quantcrb::Result<()> {
    let bits: Vec<u32> = (1..=16).collect();
    let normal = convergence_study(&NoiseModel::StandardNormal, &bits, 0.0)?;
    let laplace = convergence_study(&NoiseModel::laplace_unit_variance(), &bits, 0.0)?;
    println!("bits  levels  normal            laplace");
    for (n, l) in normal.iter().zip(&laplace) {
        println!("{:4}  {:6}  {:.15}  {:.15}", n.bits, n.levels, n.rho, l.rho);
    }
    Ok(())
}
