//! The 1-bit factor rho1 never exceeds its value at zero offset.
use quantcrb::analysis::{binary_gap, binary_gap_slope, binary_gap_slope_extrema, check_f_nonnegative};
use quantcrb::fim::rho1;

fn main() -> quantcrb::Result<()> {
    for s in [0.0, 0.25, 0.5, 1.0, 2.0, 3.0] {
        println!(
            "s={s:4.2}  rho1={:.10}  f={:.3e}  g={:+.6}",
            rho1(s),
            binary_gap(s),
            binary_gap_slope(s)
        );
    }
    let (min, at) = check_f_nonnegative(-10.0, 10.0, 1e-3)?;
    let (lo, hi) = binary_gap_slope_extrema();
    println!("min f on [-10, 10] = {min:e} at s = {at}");
    println!("g ranges over [{lo:.9}, {hi:.9}]");
    Ok(())
}
