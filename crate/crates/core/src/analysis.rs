//! Numerical experiments around the information factor `rho`: convergence
//! under refinement, the binary-comparator gap function, a maximizing
//! interval search and the Laplace-versus-normal comparison.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fim::rho_general;
use crate::noise::{normal_cdf, NoiseModel};
use crate::quantizer::QuantizerSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub bits: u32,
    pub levels: usize,
    pub rho: f64,
}

/// `rho` at working point `s` for equiprobable quantizers with `2^b`
/// intervals centred on `s`, for each `b` in `bit_depths`. Successive grids
/// are nested, so the sequence is nondecreasing.
pub fn convergence_study(model: &NoiseModel, bit_depths: &[u32], s: f64) -> Result<Vec<ConvergencePoint>> {
    if bit_depths.iter().any(|&b| b == 0 || b > 24) {
        return Err(Error::Domain("bit depths must lie in 1..=24".into()));
    }
    if bit_depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("bit depths must be strictly increasing".into()));
    }
    bit_depths
        .iter()
        .map(|&bits| {
            let levels = 1usize << bits;
            let spec = QuantizerSpec::equiprobable(model, levels)?.shifted(s)?;
            Ok(ConvergencePoint {
                bits,
                levels,
                rho: rho_general(&spec, s, model),
            })
        })
        .collect()
}

/// `f(s) = 4 Φ(s) Φ(-s) - e^{-s²}`; nonnegative, zero at 0 and ±∞.
pub fn binary_gap(s: f64) -> f64 {
    4.0 * normal_cdf(s) * normal_cdf(-s) - (-s * s).exp()
}

/// `g(s)` with `f'(s) = 2 e^{-s²/2} g(s)`.
pub fn binary_gap_slope(s: f64) -> f64 {
    2.0 / (2.0 * PI).sqrt() * (normal_cdf(-s) - normal_cdf(s)) + s * (-0.5 * s * s).exp()
}

/// `g'(s) = e^{-s²/2} [(1 - 2/π) - s²]`.
pub fn binary_gap_slope_derivative(s: f64) -> f64 {
    (-0.5 * s * s).exp() * ((1.0 - 2.0 / PI) - s * s)
}

/// Stationary points `±sqrt(1 - 2/π)` of `g`: minimum, maximum.
pub fn binary_gap_slope_extrema() -> (f64, f64) {
    let r = (1.0 - 2.0 / PI).sqrt();
    (-r, r)
}

/// Minimum of [`binary_gap`] over `grid_min + i * step` and where it occurs.
pub fn check_f_nonnegative(grid_min: f64, grid_max: f64, step: f64) -> Result<(f64, f64)> {
    if !(step > 0.0) || !(grid_max >= grid_min) || !grid_min.is_finite() || !grid_max.is_finite() {
        return Err(Error::Domain("need a finite grid with step > 0 and max >= min".into()));
    }
    let count = ((grid_max - grid_min) / step + 1e-9).floor() as usize;
    let mut best = (f64::INFINITY, grid_min);
    for i in 0..=count {
        let s = grid_min + step * i as f64;
        let f = binary_gap(s);
        if f < best.0 {
            best = (f, s);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub spec: QuantizerSpec,
    pub rho: f64,
    /// Restart that produced the best quantizer.
    pub restart: usize,
}

pub const SEARCH_RESTARTS: usize = 3;
const SEARCH_GRID: usize = 8;

/// Contribution of `[lo, hi)` to `rho` at working point `s`.
fn interval_term(model: &NoiseModel, lo: f64, hi: f64, s: f64) -> f64 {
    let mass = model.mass(lo - s, hi - s);
    if mass < crate::fim::MIN_INTERVAL_MASS {
        0.0
    } else {
        let d = model.pdf(hi - s) - model.pdf(lo - s);
        d * d / mass
    }
}

/// Coordinate ascent on the breakpoints of a `b`-bit quantizer to maximize
/// `rho` at working point `s`.
///
/// Each sweep moves every breakpoint in turn to the best point of a
/// `2·8 + 1` grid around it, restricted to the open gap between its
/// neighbours; the grid half-width halves after any sweep that moved
/// nothing.
/// Restart 0 starts from the equiprobable partition; the others start from
/// seeded jitter of it in the probability domain.
pub fn rho_interval_search(
    model: &NoiseModel,
    bits: u32,
    s: f64,
    iterations: usize,
    seed: u64,
) -> Result<SearchResult> {
    if !(1..=8).contains(&bits) {
        return Err(Error::Domain(format!("bits must lie in 1..=8, got {bits}")));
    }
    if iterations == 0 {
        return Err(Error::Domain("need at least one iteration".into()));
    }
    let levels = 1usize << bits;
    let mut best: Option<SearchResult> = None;
    for restart in 0..SEARCH_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let start: Vec<f64> = (1..levels)
            .map(|k| {
                let jitter = if restart == 0 { 0.0 } else { rng.gen_range(-0.45..0.45) };
                model.quantile((k as f64 + jitter) / levels as f64).map(|x| x + s)
            })
            .collect::<Result<_>>()?;
        let breakpoints = coordinate_ascent(model, start, s, iterations);
        let spec = QuantizerSpec::new(breakpoints, format!("search-{bits}bit"))?;
        let rho = rho_general(&spec, s, model);
        if !best.as_ref().is_some_and(|b| rho <= b.rho) {
            best = Some(SearchResult { spec, rho, restart });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn coordinate_ascent(model: &NoiseModel, mut t: Vec<f64>, s: f64, iterations: usize) -> Vec<f64> {
    let m = t.len();
    let mut width = 0.5;
    for _ in 0..iterations {
        let mut moved = false;
        for j in 0..m {
            let left = if j == 0 { f64::NEG_INFINITY } else { t[j - 1] };
            let right = if j + 1 == m { f64::INFINITY } else { t[j + 1] };
            let local = |x: f64| interval_term(model, left, x, s) + interval_term(model, x, right, s);
            let mut best_x = t[j];
            let mut best_v = local(t[j]);
            for i in 0..=2 * SEARCH_GRID {
                let x = t[j] + width * (i as f64 / SEARCH_GRID as f64 - 1.0);
                if !(x > left && x < right) {
                    continue;
                }
                let v = local(x);
                if v > best_v {
                    best_v = v;
                    best_x = x;
                }
            }
            moved |= best_x != t[j];
            t[j] = best_x;
        }
        if !moved {
            width *= 0.5;
        }
    }
    t
}

/// A quantizer and working point where unit-variance Laplace noise carries
/// less information than standard-normal noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub spec: QuantizerSpec,
    pub s: f64,
    pub rho_normal: f64,
    pub rho_laplace: f64,
    pub trial: usize,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bps: Vec<String> = self.spec.breakpoints().iter().map(|b| format!("{b:?}")).collect();
        writeln!(f, "trial = {}", self.trial)?;
        writeln!(f, "levels = {}", self.spec.levels())?;
        writeln!(f, "breakpoints = {}", bps.join(", "))?;
        writeln!(f, "s = {:?}", self.s)?;
        writeln!(f, "rho_normal = {:?}", self.rho_normal)?;
        writeln!(f, "rho_laplace = {:?}", self.rho_laplace)
    }
}

/// Required gap `rho_normal - rho_laplace` for a witness.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// Seeded random search for a [`Witness`]. Trial `i` draws from its own
/// ChaCha stream, so the result depends only on `seed` and `trials`.
pub fn laplace_counterexample_search(seed: u64, trials: usize) -> Result<Witness> {
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let normal = NoiseModel::StandardNormal;
    let laplace = NoiseModel::laplace_unit_variance();
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let count = rng.gen_range(1..=7);
        let mut bps: Vec<f64> = (0..count).map(|_| rng.gen_range(-3.0..3.0)).collect();
        bps.sort_by(f64::total_cmp);
        bps.dedup();
        let s = rng.gen_range(-2.0..2.0);
        let spec = QuantizerSpec::new(bps, "random")?;
        let rho_normal = rho_general(&spec, s, &normal);
        let rho_laplace = rho_general(&spec, s, &laplace);
        if rho_laplace < rho_normal - WITNESS_MARGIN {
            return Ok(Witness {
                spec,
                s,
                rho_normal,
                rho_laplace,
                trial,
            });
        }
    }
    Err(Error::NotFound { trials })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_normal() {
        let bits: Vec<u32> = (1..=16).collect();
        let pts = convergence_study(&NoiseModel::StandardNormal, &bits, 0.0).unwrap();
        assert_eq!(pts.len(), 16);
        assert!((pts[0].rho - 2.0 / PI).abs() < 1e-10);
        assert!(pts.windows(2).all(|w| w[1].rho >= w[0].rho));
        assert!(pts[15].rho >= 0.9999 && pts[15].rho <= 1.0 + 1e-8, "{}", pts[15].rho);
        assert_eq!(pts[15].levels, 65536);
    }

    #[test]
    fn convergence_off_center() {
        let pts = convergence_study(&NoiseModel::StandardNormal, &[1, 4, 8, 12], 1.3).unwrap();
        assert!((pts[0].rho - 2.0 / PI).abs() < 1e-12);
        assert!(pts.windows(2).all(|w| w[1].rho >= w[0].rho));
    }

    #[test]
    fn convergence_rejects_bad_depths() {
        assert!(convergence_study(&NoiseModel::StandardNormal, &[2, 1], 0.0).is_err());
        assert!(convergence_study(&NoiseModel::StandardNormal, &[0, 1], 0.0).is_err());
    }

    #[test]
    fn gap_function() {
        assert_eq!(binary_gap(0.0), 0.0);
        let (min, _) = check_f_nonnegative(-10.0, 10.0, 1e-3).unwrap();
        assert!(min >= -1e-12);
        assert!(check_f_nonnegative(0.0, 1.0, 0.0).is_err());
        assert_eq!(binary_gap_slope(0.0), 0.0);
        let (s1, s2) = binary_gap_slope_extrema();
        assert!((s2 - 0.602_810_275_0).abs() < 1e-9);
        assert_eq!(s1, -s2);
        // g' changes sign from + to - across s2; g peaks there
        assert!(binary_gap_slope_derivative(s2 - 1e-3) > 0.0);
        assert!(binary_gap_slope_derivative(s2 + 1e-3) < 0.0);
        assert!(binary_gap_slope(s2) > binary_gap_slope(s2 - 1e-2));
        assert!(binary_gap_slope(s2) > binary_gap_slope(s2 + 1e-2));
        assert!((binary_gap_slope(-40.0) - (2.0 / PI).sqrt()).abs() < 1e-15);
        assert!((binary_gap_slope(40.0) + (2.0 / PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gap_slope_is_derivative() {
        for i in 0..200 {
            let s = -5.0 + 0.05 * i as f64 + 0.0123;
            let h = 1e-5;
            let fd = (binary_gap(s + h) - binary_gap(s - h)) / (2.0 * h);
            let analytic = 2.0 * (-0.5 * s * s).exp() * binary_gap_slope(s);
            assert!((fd - analytic).abs() < 1e-8, "s={s}");
            let fd_g = (binary_gap_slope(s + h) - binary_gap_slope(s - h)) / (2.0 * h);
            assert!((fd_g - binary_gap_slope_derivative(s)).abs() < 1e-8, "s={s}");
        }
    }

    #[test]
    fn search_binary_stays_at_median() {
        let r = rho_interval_search(&NoiseModel::StandardNormal, 1, 0.0, 20, 7).unwrap();
        assert!(r.spec.breakpoints()[0].abs() < 1e-9);
        assert!((r.rho - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn search_is_deterministic_and_bounded() {
        let a = rho_interval_search(&NoiseModel::StandardNormal, 3, 0.4, 30, 11).unwrap();
        let b = rho_interval_search(&NoiseModel::StandardNormal, 3, 0.4, 30, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.rho <= 1.0 + 1e-8);
        assert!(rho_interval_search(&NoiseModel::StandardNormal, 9, 0.0, 1, 0).is_err());
        assert!(rho_interval_search(&NoiseModel::StandardNormal, 2, 0.0, 0, 0).is_err());
    }

    #[test]
    fn counterexample_found_and_rechecked() {
        let w = laplace_counterexample_search(1, 100_000).unwrap();
        let n = rho_general(&w.spec, w.s, &NoiseModel::StandardNormal);
        let l = rho_general(&w.spec, w.s, &NoiseModel::laplace_unit_variance());
        assert_eq!((n, l), (w.rho_normal, w.rho_laplace));
        assert!(l < n - WITNESS_MARGIN);
        assert_eq!(laplace_counterexample_search(1, 100_000).unwrap(), w);
        assert!(w.to_string().contains("rho_laplace = "));
    }
}
