//! Fisher information for quantized and unquantized measurements.
//!
//! Every routine assumes unit noise variance. Use [`normalize`] to bring a
//! signal, quantizer and threshold sequence measured in physical units onto
//! that scale first.
//!
//! All FIMs here share the structure `J = Σ_n w_n g_n g_nᵀ` with
//! `g_n = ∂s_n/∂θ`; only the per-sample weight `w_n` differs:
//!
//! | routine             | weight                                   |
//! |---------------------|------------------------------------------|
//! | [`fim_general`]     | [`rho_general`] of the quantizer at `s_n`|
//! | [`fim_unquantized`] | `rho0` of the noise model                |
//! | [`fim_binary`]      | [`binary_weight`] of `s_n - h_n`         |
//! | [`fim_lower_bound`] | `(2/π) η(n)²`                            |

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::format::{parse_f64, sci17};
use crate::noise::{normal_cdf, normal_log_cdf, NoiseModel};
use crate::quantizer::{QuantizerSpec, ThresholdSequence};
use crate::signal::{ParamVector, SignalModel};

/// Intervals with less probability than this contribute nothing to `rho`.
pub const MIN_INTERVAL_MASS: f64 = 1e-300;

/// `λ_min <= SINGULAR_RATIO * λ_max` marks a FIM as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    GeneralQuantized,
    Unquantized,
    Binary,
    BinaryTimeVarying,
    LowerBoundGeneral,
    LowerBoundBinary,
    /// Loaded from a file or assembled by hand.
    External,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::GeneralQuantized => "general-quantized",
            Provenance::Unquantized => "unquantized",
            Provenance::Binary => "binary",
            Provenance::BinaryTimeVarying => "binary-time-varying",
            Provenance::LowerBoundGeneral => "lower-bound-general",
            Provenance::LowerBoundBinary => "lower-bound-binary",
            Provenance::External => "external",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FimMatrix {
    entries: DMatrix<f64>,
    provenance: Provenance,
    names: Vec<String>,
}

impl FimMatrix {
    pub fn new(entries: DMatrix<f64>, names: Vec<String>, provenance: Provenance) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        if names.len() != entries.nrows() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: names.len(),
            });
        }
        Ok(FimMatrix {
            entries,
            provenance,
            names,
        })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn scaled(&self, factor: f64) -> FimMatrix {
        FimMatrix {
            entries: &self.entries * factor,
            provenance: self.provenance,
            names: self.names.clone(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| (self.entries[(i, j)] - self.entries[(j, i)]).abs() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone()).eigenvalues.min()
    }

    /// Minimum eigenvalue at least `-tol * |trace|`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.trace().abs()
    }

    /// Row-major CSV: a header `param,<names>` followed by one row per
    /// parameter.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write_matrix_csv(&mut out, &self.names, &self.entries)
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let (names, entries) = read_matrix_csv(input)?;
        FimMatrix::new(entries, names, Provenance::External)
    }
}

fn write_matrix_csv<W: Write>(out: &mut W, names: &[String], m: &DMatrix<f64>) -> Result<()> {
    writeln!(out, "param,{}", names.join(","))?;
    for (i, name) in names.iter().enumerate() {
        let row: Vec<String> = (0..m.ncols()).map(|j| sci17(m[(i, j)])).collect();
        writeln!(out, "{name},{}", row.join(","))?;
    }
    Ok(())
}

fn read_matrix_csv<R: BufRead>(input: R) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let mut fields = line.split(',').map(str::trim);
        let first = fields.next().unwrap_or_default();
        match &names {
            None => {
                if first != "param" {
                    return Err(err("header must start with `param`".into()));
                }
                names = Some(fields.map(String::from).collect());
            }
            Some(header) => {
                let row = fields
                    .map(|f| parse_f64(f).ok_or_else(|| err(format!("bad number {f:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != header.len() {
                    return Err(err(format!("expected {} values, got {}", header.len(), row.len())));
                }
                rows.push(row);
            }
        }
    }
    let names = names.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "empty matrix file".into(),
    })?;
    if rows.len() != names.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {} rows, got {}", names.len(), rows.len()),
        });
    }
    let p = names.len();
    Ok((names, DMatrix::from_fn(p, p, |i, j| rows[i][j])))
}

/// Per-sample information factor of quantizer `spec` at signal value `s`:
/// `Σ_k [f(u_k - s) - f(l_k - s)]² / [F(u_k - s) - F(l_k - s)]`.
pub fn rho_general(spec: &QuantizerSpec, s: f64, model: &NoiseModel) -> f64 {
    spec.intervals()
        .map(|(l, u)| {
            let (lo, hi) = (l - s, u - s);
            let mass = model.mass(lo, hi);
            if mass < MIN_INTERVAL_MASS {
                0.0
            } else {
                let d = model.pdf(hi) - model.pdf(lo);
                d * d / mass
            }
        })
        .sum()
}

/// Derivatives `∂P(interval k)/∂s` at signal value `s`. They sum to zero.
pub fn interval_probability_slopes(spec: &QuantizerSpec, s: f64, model: &NoiseModel) -> Vec<f64> {
    spec.intervals()
        .map(|(l, u)| model.pdf(l - s) - model.pdf(u - s))
        .collect()
}

/// `e^{-δ²} / (Φ(δ) Φ(-δ))` for a standard-normal binary comparator, where
/// `δ = s - h`. Equals 4 at `δ = 0`, the maximum.
pub fn rho1(delta: f64) -> f64 {
    if delta.is_infinite() {
        return 0.0;
    }
    if delta.abs() <= 6.0 {
        (-delta * delta).exp() / (normal_cdf(delta) * normal_cdf(-delta))
    } else {
        (-delta * delta - normal_log_cdf(delta) - normal_log_cdf(-delta)).exp()
    }
}

/// Per-sample weight of the binary FIM: `rho1(δ) / (2π)`.
pub fn binary_weight(delta: f64) -> f64 {
    rho1(delta) / (2.0 * PI)
}

/// Lower-bound factor `η` for standard-normal noise: `exp(-min(l̃², ũ²)/2)`
/// over the interval `[l, u)` that contains `s`, with `l̃ = l - s` and
/// `ũ = u - s`. Zero for the trivial one-interval quantizer.
pub fn eta(spec: &QuantizerSpec, s: f64) -> f64 {
    let (l, u) = spec.interval(spec.locate(s)).expect("locate returns a valid interval");
    let (lo, hi) = (l - s, u - s);
    (-0.5 * (lo * lo).min(hi * hi)).exp()
}

/// Signal, quantizer and thresholds rescaled to unit noise variance.
pub struct Normalized {
    pub signal: SignalModel,
    pub spec: Option<QuantizerSpec>,
    pub thresholds: Option<ThresholdSequence>,
}

pub fn normalize(
    signal: &SignalModel,
    spec: Option<&QuantizerSpec>,
    thresholds: Option<&ThresholdSequence>,
    sigma: f64,
) -> Result<Normalized> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let inv = 1.0 / sigma;
    Ok(Normalized {
        signal: signal.scaled(inv),
        spec: spec.map(|q| q.scaled(inv)).transpose()?,
        thresholds: thresholds
            .map(|h| ThresholdSequence::new(h.as_slice().iter().map(|x| x * inv).collect()))
            .transpose()?,
    })
}

/// `Σ_n w(n, s_n) g_n g_nᵀ`, summed sequentially in `n`.
fn weighted_outer_sum<W>(
    signal: &SignalModel,
    theta: &ParamVector,
    provenance: Provenance,
    mut weight: W,
) -> Result<FimMatrix>
where
    W: FnMut(usize, f64) -> Result<f64>,
{
    let p = signal.param_count();
    if theta.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: theta.len(),
        });
    }
    let mut acc = DMatrix::<f64>::zeros(p, p);
    let mut row = vec![0.0; p];
    for n in 1..=signal.len() {
        let s = signal.eval(theta, n)?;
        let w = weight(n, s)?;
        if w == 0.0 {
            continue;
        }
        signal.jacobian_row_into(theta, n, &mut row)?;
        for i in 0..p {
            let wi = w * row[i];
            for j in 0..=i {
                acc[(i, j)] += wi * row[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            acc[(j, i)] = acc[(i, j)];
        }
    }
    FimMatrix::new(acc, theta.names().to_vec(), provenance)
}

pub fn fim_general(
    signal: &SignalModel,
    theta: &ParamVector,
    spec: &QuantizerSpec,
    model: &NoiseModel,
) -> Result<FimMatrix> {
    weighted_outer_sum(signal, theta, Provenance::GeneralQuantized, |_, s| {
        Ok(rho_general(spec, s, model))
    })
}

/// FIM of the unquantized samples, `rho0 · Σ g gᵀ`. Uses the closed-form
/// `rho0` when the model has one.
pub fn fim_unquantized(signal: &SignalModel, theta: &ParamVector, model: &NoiseModel) -> Result<FimMatrix> {
    let rho0 = match model.rho0_closed_form() {
        Some(v) => v,
        None => model.rho0()?,
    };
    weighted_outer_sum(signal, theta, Provenance::Unquantized, |_, _| Ok(rho0))
}

/// FIM of a standard-normal binary comparator with per-sample thresholds.
pub fn fim_binary(
    signal: &SignalModel,
    theta: &ParamVector,
    model: &NoiseModel,
    thresholds: &ThresholdSequence,
) -> Result<FimMatrix> {
    if !model.is_standard_normal() {
        return Err(Error::Unsupported(
            "the closed-form binary FIM needs standard-normal noise; use fim_general".into(),
        ));
    }
    if thresholds.len() != signal.len() {
        return Err(Error::DimensionMismatch {
            expected: signal.len(),
            got: thresholds.len(),
        });
    }
    let h = thresholds.as_slice();
    let constant = h.windows(2).all(|w| w[0] == w[1]);
    let provenance = if constant {
        Provenance::Binary
    } else {
        Provenance::BinaryTimeVarying
    };
    weighted_outer_sum(signal, theta, provenance, |n, s| Ok(binary_weight(s - h[n - 1])))
}

/// Lower bound `(2/π) Σ η(n)² g gᵀ ≤ J` for standard-normal noise.
pub fn fim_lower_bound(
    signal: &SignalModel,
    theta: &ParamVector,
    spec: &QuantizerSpec,
    model: &NoiseModel,
) -> Result<FimMatrix> {
    if !model.is_standard_normal() {
        return Err(Error::Unsupported(
            "the eta lower bound is defined for standard-normal noise only".into(),
        ));
    }
    let provenance = if spec.levels() == 2 {
        Provenance::LowerBoundBinary
    } else {
        Provenance::LowerBoundGeneral
    };
    weighted_outer_sum(signal, theta, provenance, |_, s| {
        let e = eta(spec, s);
        Ok(2.0 / PI * e * e)
    })
}

#[derive(Debug, Clone)]
pub struct CrbResult {
    pub matrix: DMatrix<f64>,
    pub condition_number: f64,
    pub singular: bool,
    pub names: Vec<String>,
}

impl CrbResult {
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# condition_number={},singular={}",
            sci17(self.condition_number),
            self.singular
        )?;
        write_matrix_csv(&mut out, &self.names, &self.matrix)
    }
}

/// `J⁻¹` via a symmetric eigendecomposition of the diagonally equilibrated
/// FIM. Singularity is judged on the raw eigenvalues; a singular FIM yields
/// a matrix of `+inf`.
pub fn crb(fim: &FimMatrix) -> CrbResult {
    let p = fim.dim();
    let j = fim.entries();
    let raw = SymmetricEigen::new(j.clone()).eigenvalues;
    let (lmin, lmax) = (raw.min(), raw.max());
    let singular = !(lmax > 0.0) || lmin <= SINGULAR_RATIO * lmax || (0..p).any(|i| !(j[(i, i)] > 0.0));
    let condition_number = if singular { f64::INFINITY } else { lmax / lmin };
    let matrix = if singular {
        DMatrix::from_element(p, p, f64::INFINITY)
    } else {
        let scale = DVector::from_iterator(p, (0..p).map(|i| 1.0 / j[(i, i)].sqrt()));
        let equilibrated = DMatrix::from_fn(p, p, |r, c| j[(r, c)] * scale[r] * scale[c]);
        let eig = SymmetricEigen::new(equilibrated);
        let v = &eig.eigenvectors;
        let inv_vals = eig.eigenvalues.map(|l| 1.0 / l);
        let inv = v * DMatrix::from_diagonal(&inv_vals) * v.transpose();
        DMatrix::from_fn(p, p, |r, c| {
            let (lo, hi) = (r.min(c), r.max(c));
            0.5 * (inv[(lo, hi)] + inv[(hi, lo)]) * scale[lo] * scale[hi]
        })
    };
    CrbResult {
        matrix,
        condition_number,
        singular,
        names: fim.names().to_vec(),
    }
}

/// `a ≤ b` in the Loewner order: `b - a` is PSD up to `tol`.
///
/// The difference is checked after the congruence `D(b - a)D` with
/// `D = diag(b_ii^{-1/2})`, which leaves the order unchanged and makes the
/// tolerance relative to the trace of the equilibrated `b`.
pub fn loewner_leq(a: &FimMatrix, b: &FimMatrix, tol: f64) -> Result<bool> {
    Ok(loewner_margin(a, b)? >= -tol)
}

/// Smallest eigenvalue of the equilibrated `b - a`, divided by the trace of
/// the equilibrated `b`. Nonnegative iff `a ≤ b`.
pub fn loewner_margin(a: &FimMatrix, b: &FimMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let p = a.dim();
    let bm = b.entries();
    let d: Vec<f64> = (0..p)
        .map(|i| if bm[(i, i)] > 0.0 { 1.0 / bm[(i, i)].sqrt() } else { 1.0 })
        .collect();
    let diff = DMatrix::from_fn(p, p, |r, c| (bm[(r, c)] - a.entries()[(r, c)]) * d[r] * d[c]);
    let scale = (0..p)
        .map(|i| bm[(i, i)] * d[i] * d[i])
        .sum::<f64>()
        .abs()
        .max(f64::MIN_POSITIVE);
    Ok(SymmetricEigen::new(diff).eigenvalues.min() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantizer::LLOYD_MAX_4BIT;

    const TWO_OVER_PI: f64 = 2.0 / PI;

    fn normal() -> NoiseModel {
        NoiseModel::StandardNormal
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_general(&QuantizerSpec::trivial(), 0.3, &normal()), 0.0);
        let b = rho_general(&QuantizerSpec::binary(0.0).unwrap(), 0.0, &normal());
        assert!((b - TWO_OVER_PI).abs() < 1e-15);
        // closed form pdf(0)^2 / 0.25
        let closed = (1.0 / (2.0 * PI)) / 0.25;
        assert!((b - closed).abs() < 1e-15);
        let lm = rho_general(&QuantizerSpec::lloyd_max_4bit(1.0).unwrap(), 0.0, &normal());
        assert!(lm > 0.94 && lm < 1.0, "{lm}");
    }

    #[test]
    fn rho_far_outside_support_of_masses() {
        // every interval but one has (numerically) zero mass
        let q = QuantizerSpec::new(vec![-1.0, 0.0, 1.0], "").unwrap();
        let r = rho_general(&q, 1e4, &normal());
        assert!(r.is_finite() && r >= 0.0);
    }

    #[test]
    fn eta_examples() {
        let bin = QuantizerSpec::binary(0.0).unwrap();
        for s in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            assert!((eta(&bin, s) - (-s * s / 2.0).exp()).abs() < 1e-15);
        }
        let q = QuantizerSpec::new(vec![1.0, 3.0], "").unwrap();
        let e = eta(&q, 2.0);
        assert!((e - (-0.5f64).exp()).abs() < 1e-15);
        let lm = QuantizerSpec::lloyd_max_4bit(1.0).unwrap();
        assert_eq!(eta(&lm, 0.0), 1.0);
        assert_eq!(eta(&QuantizerSpec::trivial(), 0.0), 0.0);
    }

    #[test]
    fn rho1_values() {
        assert_eq!(rho1(0.0), 4.0);
        assert!(rho1(50.0) < 1e-300);
        assert_eq!(rho1(f64::INFINITY), 0.0);
        // both branches agree at the switch point
        let a = rho1(6.0);
        let b = (-36.0 - normal_log_cdf(6.0) - normal_log_cdf(-6.0)).exp();
        assert!(((a - b) / a).abs() < 1e-13);
        // general-path equivalence deep in the tail
        // beyond |δ| ≈ 26 the squared pdf difference of the general path underflows
        assert!(binary_weight(35.0) > 0.0);
        for d in [7.0, 12.0, 20.0, 25.0] {
            let bin = QuantizerSpec::binary(0.0).unwrap();
            let g = rho_general(&bin, d, &normal());
            let c = binary_weight(d);
            assert!(((g - c) / c).abs() < 1e-12, "delta={d}: {g} vs {c}");
        }
    }

    #[test]
    fn fim_examples() {
        let sig = SignalModel::passthrough(1);
        let theta = ParamVector::scalar(0.0);
        let bin = QuantizerSpec::binary(0.0).unwrap();
        let j = fim_general(&sig, &theta, &bin, &normal()).unwrap();
        assert!((j.get(0, 0) - TWO_OVER_PI).abs() < 1e-15);
        let lb = fim_lower_bound(&sig, &theta, &bin, &normal()).unwrap();
        assert!((lb.get(0, 0) - TWO_OVER_PI).abs() < 1e-15);
        let z = fim_general(
            &SignalModel::two_sinusoid(10),
            &two_theta(),
            &QuantizerSpec::trivial(),
            &normal(),
        )
        .unwrap();
        assert!(z.entries().iter().all(|&v| v == 0.0));
        let j0 = fim_unquantized(&SignalModel::passthrough(7), &ParamVector::scalar(0.2), &normal()).unwrap();
        assert_eq!(j0.get(0, 0), 7.0);
        assert_eq!(j0.provenance(), Provenance::Unquantized);
    }

    fn two_theta() -> ParamVector {
        ParamVector::two_sinusoid(1.0, 1.0, 0.25, 0.4, PI / 3.0, PI / 4.0)
    }

    #[test]
    fn unquantized_two_sinusoid_and_laplace() {
        let sig = SignalModel::two_sinusoid(100);
        let j0 = fim_unquantized(&sig, &two_theta(), &normal()).unwrap();
        let oracle: f64 = (1..=100).map(|n| (0.25 * n as f64 + PI / 3.0).sin().powi(2)).sum();
        assert!((j0.get(0, 0) - oracle).abs() < 1e-10);
        assert!((oracle / 50.0 - 1.0).abs() < 0.05);
        let jl = fim_unquantized(&sig, &two_theta(), &NoiseModel::laplace_unit_variance()).unwrap();
        for i in 0..6 {
            for k in 0..6 {
                assert!((jl.get(i, k) - 2.0 * j0.get(i, k)).abs() <= 1e-12 * j0.get(i, k).abs().max(1.0));
            }
        }
    }

    #[test]
    fn binary_requires_normal_and_length() {
        let sig = SignalModel::passthrough(3);
        let theta = ParamVector::scalar(0.0);
        let h = ThresholdSequence::constant(0.0, 3).unwrap();
        assert!(matches!(
            fim_binary(&sig, &theta, &NoiseModel::laplace_unit_variance(), &h),
            Err(Error::Unsupported(_))
        ));
        let short = ThresholdSequence::constant(0.0, 2).unwrap();
        assert!(fim_binary(&sig, &theta, &normal(), &short).is_err());
        let bin = QuantizerSpec::binary(0.0).unwrap();
        assert!(fim_lower_bound(&sig, &theta, &bin, &NoiseModel::laplace_unit_variance()).is_err());
    }

    #[test]
    fn binary_optimal_threshold_attains_two_over_pi() {
        let sig = SignalModel::two_sinusoid(64);
        let theta = two_theta();
        let h: Vec<f64> = (1..=64).map(|n| sig.eval(&theta, n).unwrap()).collect();
        let j1 = fim_binary(&sig, &theta, &normal(), &ThresholdSequence::new(h).unwrap()).unwrap();
        assert_eq!(j1.provenance(), Provenance::BinaryTimeVarying);
        let j0 = fim_unquantized(&sig, &theta, &normal()).unwrap().scaled(TWO_OVER_PI);
        for (a, b) in j1.entries().iter().zip(j0.entries().iter()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn crb_examples() {
        let id = FimMatrix::new(
            DMatrix::identity(3, 3),
            vec!["x".into(), "y".into(), "z".into()],
            Provenance::External,
        )
        .unwrap();
        let c = crb(&id);
        assert!(!c.singular);
        assert!((c.condition_number - 1.0).abs() < 1e-12);
        assert!((c.matrix.clone() - DMatrix::identity(3, 3)).abs().max() < 1e-14);

        let deficient = FimMatrix::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 0.0])),
            vec!["a".into(), "b".into()],
            Provenance::External,
        )
        .unwrap();
        let c = crb(&deficient);
        assert!(c.singular);
        assert!(c.matrix.iter().all(|v| *v == f64::INFINITY));
        assert_eq!(c.condition_number, f64::INFINITY);
    }

    #[test]
    fn crb_residual_two_sinusoid() {
        let j0 = fim_unquantized(&SignalModel::two_sinusoid(100), &two_theta(), &normal()).unwrap();
        let c = crb(&j0);
        assert!(!c.singular);
        assert!(c.diagonal().iter().all(|&v| v > 0.0));
        let resid = j0.entries() * &c.matrix - DMatrix::identity(6, 6);
        assert!(resid.abs().max() < 1e-6, "{}", resid.abs().max());
    }

    #[test]
    fn loewner_examples() {
        let sig = SignalModel::two_sinusoid(100);
        let theta = two_theta();
        let bin = fim_general(&sig, &theta, &QuantizerSpec::binary(0.0).unwrap(), &normal()).unwrap();
        let lm = fim_general(&sig, &theta, &QuantizerSpec::lloyd_max_4bit(1.0).unwrap(), &normal()).unwrap();
        let j0 = fim_unquantized(&sig, &theta, &normal()).unwrap();
        assert!(loewner_leq(&bin, &bin, 0.0).unwrap());
        assert!(loewner_leq(&bin, &lm, 1e-12).unwrap());
        assert!(loewner_leq(&lm, &j0, 1e-12).unwrap());
        assert!(!loewner_leq(&j0, &bin, 1e-9).unwrap());
        let small = FimMatrix::new(
            DMatrix::identity(2, 2),
            vec!["a".into(), "b".into()],
            Provenance::External,
        )
        .unwrap();
        assert!(loewner_leq(&small, &j0, 1e-9).is_err());
        assert_eq!(LLOYD_MAX_4BIT[7], 0.0);
    }

    #[test]
    fn normalization_divides_everything_by_sigma() {
        let sig = SignalModel::two_sinusoid(50);
        let theta = two_theta();
        let q = QuantizerSpec::lloyd_max_4bit(1.0).unwrap();
        let sigma = 0.25;
        let norm = normalize(&sig, Some(&q), None, sigma).unwrap();
        let a = fim_general(&norm.signal, &theta, norm.spec.as_ref().unwrap(), &normal()).unwrap();
        // direct construction: rho at (t - s)/sigma, gradients / sigma
        let mut direct = DMatrix::<f64>::zeros(6, 6);
        for n in 1..=50 {
            let s = sig.eval(&theta, n).unwrap();
            let g = DVector::from_vec(sig.jacobian_row(&theta, n).unwrap()) / sigma;
            let r = rho_general(&q.scaled(1.0 / sigma).unwrap(), s / sigma, &normal());
            direct += &g * g.transpose() * r;
        }
        assert!((a.entries() - direct).abs().max() <= 1e-9 * a.entries().abs().max());
        assert!(normalize(&sig, None, None, 0.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let j0 = fim_unquantized(&SignalModel::two_sinusoid(20), &two_theta(), &normal()).unwrap();
        let mut buf = Vec::new();
        j0.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("param,a1,a2,w1,w2,phi1,phi2\n"));
        let back = FimMatrix::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.entries(), j0.entries());
        assert!(FimMatrix::read_csv("param,a\na,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn deterministic_accumulation() {
        let sig = SignalModel::two_sinusoid(512);
        let q = QuantizerSpec::lloyd_max_4bit(0.7).unwrap();
        let a = fim_general(&sig, &two_theta(), &q, &normal()).unwrap();
        let b = fim_general(&sig, &two_theta(), &q, &normal()).unwrap();
        assert_eq!(a, b);
        assert!(a.is_symmetric(0.0));
    }
}
