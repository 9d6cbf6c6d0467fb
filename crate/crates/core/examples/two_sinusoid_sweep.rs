//! CRB of the two frequencies as the second amplitude shrinks, written as CSV.
//!
//! Pass a path to write the CSV there; otherwise a summary is printed.
use quantcrb::experiment::{bowl_shape_check, run_sweep, write_sweep_csv, Scheme, SweepConfig, W1, W2};

fn main() -> quantcrb::Result<()> {
    let cfg = SweepConfig::standard(100);
    let rows = run_sweep(&cfg)?;
    if let Some(path) = std::env::args().nth(1) {
        write_sweep_csv(std::fs::File::create(&path)?, &cfg.schemes, &rows)?;
        println!("wrote {} rows to {path}", rows.len());
    }
    for row in rows.iter().step_by(10) {
        print!("r={:7.2}", row.r);
        for scheme in Scheme::ALL {
            let d = row.crb(scheme).unwrap();
            print!("  {scheme}: w1={:.3e} w2={:.3e}", d[W1], d[W2]);
        }
        println!();
    }
    let bowl = bowl_shape_check(&rows, Scheme::Binary0, W1)?;
    println!(
        "1-bit CRB(w1) is smallest at r = {:.2} (bowl: {})",
        bowl.argmin_r,
        bowl.is_bowl(rows.len())
    );
    Ok(())
}
