//! FIMs at one sweep point, their CRBs, and the Loewner ordering between them.
use std::f64::consts::PI;

use quantcrb::experiment::{Scheme, SweepPoint};
use quantcrb::{crb, loewner_leq};

fn main() -> quantcrb::Result<()> {
    let point = SweepPoint::new(100, 10.0, 0.0)?;
    let j0 = point.fim(Scheme::Unquantized)?;
    let j1 = point.fim(Scheme::Binary0)?;
    let j4 = point.fim(Scheme::LloydMax4)?;
    let j14 = point.fim(Scheme::Binary4bitDacThreshold)?;
    let lb1 = point.lower_bound(Scheme::Binary0)?.expect("quantized scheme");

    for (name, j) in [
        ("unquantized", &j0),
        ("binary0", &j1),
        ("lloydmax4", &j4),
        ("binary4bitdac", &j14),
    ] {
        let c = crb(j);
        let diag: Vec<String> = c.diagonal().iter().map(|v| format!("{v:.3e}")).collect();
        println!(
            "{name:14} cond={:.3e} singular={} diag=[{}]",
            c.condition_number,
            c.singular,
            diag.join(", ")
        );
    }
    println!("lower bound <= J1:     {}", loewner_leq(&lb1, &j1, 1e-9)?);
    println!("J1 <= J4:              {}", loewner_leq(&j1, &j4, 1e-9)?);
    println!("J4 <= J0:              {}", loewner_leq(&j4, &j0, 1e-9)?);
    println!(
        "J14 <= (2/pi) J0:      {}",
        loewner_leq(&j14, &j0.scaled(2.0 / PI), 1e-9)?
    );

    let mut csv = Vec::new();
    crb(&j4).write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
