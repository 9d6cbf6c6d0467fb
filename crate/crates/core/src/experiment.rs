//! CRB-versus-`r` sweeps for the two-sinusoid signal
//! `s_n = a1 sin(w1 n + phi1) + a2 sin(w2 n + phi2)` with `a1 = 1`,
//! `a2 = 1/r`, `w = (0.25, 0.4)`, `phi = (π/3, π/4)`.
//!
//! The noise level follows the weaker sinusoid: `σ² = a2² / (2 · SNR2)`.
//! Four quantization schemes are compared:
//!
//! * `unquantized`: the standard FIM;
//! * `binary0`: a 1-bit comparator at zero;
//! * `lloydmax4`: the 4-bit Lloyd-Max table scaled by the noiseless RMS
//!   `sqrt((a1² + a2²)/2)`;
//! * `binary4bitdac`: a 1-bit comparator whose threshold `h_n` is the
//!   midpoint reconstruction of `s_n` by that same 4-bit table.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fim::{self, crb, FimMatrix};
use crate::format::sci17;
use crate::noise::NoiseModel;
use crate::quantizer::{QuantizerSpec, ThresholdSequence};
use crate::signal::{ParamVector, SignalModel, TWO_SINUSOID_PARAMS};

pub const OMEGA1: f64 = 0.25;
pub const OMEGA2: f64 = 0.4;
pub const PHI1: f64 = PI / 3.0;
pub const PHI2: f64 = PI / 4.0;
pub const A1: f64 = 1.0;

/// Column of `w1` in the parameter vector.
pub const W1: usize = 2;
/// Column of `w2` in the parameter vector.
pub const W2: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Unquantized,
    Binary0,
    LloydMax4,
    Binary4bitDacThreshold,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::Unquantized,
        Scheme::Binary0,
        Scheme::LloydMax4,
        Scheme::Binary4bitDacThreshold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Unquantized => "unquantized",
            Scheme::Binary0 => "binary0",
            Scheme::LloydMax4 => "lloydmax4",
            Scheme::Binary4bitDacThreshold => "binary4bitdac",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s.trim())
            .ok_or_else(|| Error::Domain(format!("unknown scheme {s:?}")))
    }
}

/// `count` log-spaced points from `lo` to `hi`, endpoints exact.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(Error::Domain(format!("invalid grid [{lo}, {hi}] with {count} points")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln();
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => lo * (ratio * i as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub r_grid: Vec<f64>,
    pub snr2_db: f64,
    pub schemes: Vec<Scheme>,
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    pub const DEFAULT_R_POINTS: usize = 60;

    /// 60 log-spaced `r` in `[1, 200]`, SNR2 = 0 dB, all four schemes.
    pub fn standard(n: usize) -> Self {
        SweepConfig {
            n,
            r_grid: log_grid(1.0, 200.0, Self::DEFAULT_R_POINTS).expect("valid default grid"),
            snr2_db: 0.0,
            schemes: Scheme::ALL.to_vec(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        if self.r_grid.is_empty() || self.r_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Domain("r grid must be non-empty and positive".into()));
        }
        if !self.snr2_db.is_finite() {
            return Err(Error::Domain("snr2_db must be finite".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Domain("at least one scheme is required".into()));
        }
        Ok(())
    }
}

/// `key = value` lines; `#` starts a comment. Keys: `n`, `snr2_db`,
/// `r_min`, `r_max`, `r_points`, `schemes` (comma separated),
/// `output_path`. Missing keys take the defaults of [`SweepConfig::standard`].
impl FromStr for SweepConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::standard(100);
        let (mut r_min, mut r_max, mut r_points) = (1.0, 200.0, Self::DEFAULT_R_POINTS);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|e| err(format!("{key}: {v:?}: {e}")));
            let int = |v: &str| v.parse::<usize>().map_err(|e| err(format!("{key}: {v:?}: {e}")));
            match key {
                "n" => cfg.n = int(value)?,
                "snr2_db" => cfg.snr2_db = num(value)?,
                "r_min" => r_min = num(value)?,
                "r_max" => r_max = num(value)?,
                "r_points" => r_points = int(value)?,
                "schemes" => {
                    cfg.schemes = value
                        .split(',')
                        .map(|s| s.parse::<Scheme>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_>>()?
                }
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        cfg.r_grid = log_grid(r_min, r_max, r_points)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One `r` value of the sweep, with everything normalized to unit noise
/// variance.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub r: f64,
    pub sigma: f64,
    pub theta: ParamVector,
    /// The signal divided by `sigma`.
    pub signal: SignalModel,
    pub binary: QuantizerSpec,
    /// Lloyd-Max breakpoints divided by `sigma`.
    pub lloyd_max: QuantizerSpec,
    /// DAC thresholds divided by `sigma`.
    pub dac_thresholds: ThresholdSequence,
    /// `max_n |s_n - h_n| / sigma`.
    pub max_dac_error: f64,
}

impl SweepPoint {
    pub fn new(n: usize, r: f64, snr2_db: f64) -> Result<Self> {
        if n == 0 || !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("invalid sweep point n={n}, r={r}")));
        }
        let a2 = 1.0 / r;
        let snr = 10f64.powf(snr2_db / 10.0);
        let sigma = (a2 * a2 / (2.0 * snr)).sqrt();
        let theta = ParamVector::two_sinusoid(A1, a2, OMEGA1, OMEGA2, PHI1, PHI2);
        let raw = SignalModel::two_sinusoid(n);
        let rms = ((A1 * A1 + a2 * a2) / 2.0).sqrt();
        let lloyd = QuantizerSpec::lloyd_max_4bit(rms)?;
        let samples: Vec<f64> = (1..=n).map(|k| raw.eval(&theta, k)).collect::<Result<_>>()?;
        let dac: Vec<f64> = samples.iter().map(|&s| lloyd.reconstruct(s)).collect::<Result<_>>()?;
        let max_dac_error = samples.iter().zip(&dac).map(|(s, h)| (s - h).abs()).fold(0.0, f64::max) / sigma;
        let norm = fim::normalize(&raw, Some(&lloyd), Some(&ThresholdSequence::new(dac)?), sigma)?;
        Ok(SweepPoint {
            r,
            sigma,
            theta,
            signal: norm.signal,
            binary: QuantizerSpec::binary(0.0)?,
            lloyd_max: norm.spec.expect("spec was supplied"),
            dac_thresholds: norm.thresholds.expect("thresholds were supplied"),
            max_dac_error,
        })
    }

    pub fn fim(&self, scheme: Scheme) -> Result<FimMatrix> {
        let normal = NoiseModel::StandardNormal;
        match scheme {
            Scheme::Unquantized => fim::fim_unquantized(&self.signal, &self.theta, &normal),
            Scheme::Binary0 => fim::fim_binary(
                &self.signal,
                &self.theta,
                &normal,
                &ThresholdSequence::constant(0.0, self.signal.len())?,
            ),
            Scheme::LloydMax4 => fim::fim_general(&self.signal, &self.theta, &self.lloyd_max, &normal),
            Scheme::Binary4bitDacThreshold => fim::fim_binary(&self.signal, &self.theta, &normal, &self.dac_thresholds),
        }
    }

    /// The `η` lower bound for a quantized scheme; `None` for the others.
    pub fn lower_bound(&self, scheme: Scheme) -> Result<Option<FimMatrix>> {
        let spec = match scheme {
            Scheme::Binary0 => &self.binary,
            Scheme::LloydMax4 => &self.lloyd_max,
            _ => return Ok(None),
        };
        fim::fim_lower_bound(&self.signal, &self.theta, spec, &NoiseModel::StandardNormal).map(Some)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub sigma: f64,
    /// CRB diagonal per scheme, in parameter order; `inf` when singular.
    pub crb: Vec<(Scheme, Vec<f64>)>,
}

impl SweepRow {
    pub fn crb(&self, scheme: Scheme) -> Option<&[f64]> {
        self.crb.iter().find(|(s, _)| *s == scheme).map(|(_, v)| v.as_slice())
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    config
        .r_grid
        .iter()
        .map(|&r| {
            let point = SweepPoint::new(config.n, r, config.snr2_db)?;
            let crb = config
                .schemes
                .iter()
                .map(|&scheme| Ok((scheme, crb(&point.fim(scheme)?).diagonal())))
                .collect::<Result<_>>()?;
            Ok(SweepRow {
                r,
                sigma: point.sigma,
                crb,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(mut out: W, schemes: &[Scheme], rows: &[SweepRow]) -> Result<()> {
    let mut header = vec!["r".to_string(), "sigma".to_string()];
    for scheme in schemes {
        for p in TWO_SINUSOID_PARAMS {
            header.push(format!("{scheme}_crb_{p}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut fields = vec![sci17(row.r), sci17(row.sigma)];
        for &scheme in schemes {
            let diag = row
                .crb(scheme)
                .ok_or_else(|| Error::Domain(format!("row at r={} lacks scheme {scheme}", row.r)))?;
            fields.extend(diag.iter().map(|&v| sci17(v)));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowlVerdict {
    pub argmin_index: usize,
    pub argmin_r: f64,
    /// Mean over the first third of the grid exceeds the minimum.
    pub decreasing_before: bool,
    /// Mean over the last third of the grid exceeds the minimum.
    pub increasing_after: bool,
}

impl BowlVerdict {
    pub fn is_bowl(&self, len: usize) -> bool {
        self.decreasing_before && self.increasing_after && self.argmin_index > 0 && self.argmin_index + 1 < len
    }
}

/// Locate the minimum of one CRB curve and judge whether it falls before
/// and rises after it. Ties resolve to the first index.
pub fn bowl_shape_check(rows: &[SweepRow], scheme: Scheme, param: usize) -> Result<BowlVerdict> {
    if rows.len() < 10 {
        return Err(Error::Domain(format!(
            "need at least 10 grid points, got {}",
            rows.len()
        )));
    }
    let values: Vec<f64> = rows
        .iter()
        .map(|row| {
            row.crb(scheme)
                .and_then(|d| d.get(param).copied())
                .ok_or_else(|| Error::Domain(format!("rows lack {scheme} parameter {param}")))
        })
        .collect::<Result<_>>()?;
    let (argmin_index, &min) = values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &f64)>, (i, v)| match best {
            Some((_, b)) if *b <= *v => best,
            _ => Some((i, v)),
        })
        .expect("non-empty");
    let third = values.len() / 3;
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let last = values.len() - 1;
    Ok(BowlVerdict {
        argmin_index,
        argmin_r: rows[argmin_index].r,
        decreasing_before: argmin_index > 0 && mean(&values[..third]) > min,
        increasing_after: argmin_index < last && mean(&values[values.len() - third..]) > min,
    })
}
