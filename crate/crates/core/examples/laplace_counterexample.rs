//! A quantizer where Laplace noise retains less information than normal noise
//! of the same variance, even though its unquantized information is twice as large.
use quantcrb::analysis::laplace_counterexample_search;

fn main() -> quantcrb::Result<()> {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1);
    let w = laplace_counterexample_search(seed, 100_000)?;
    print!("{w}");
    Ok(())
}
