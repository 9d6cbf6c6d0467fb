//! Quantizer intervals.
//!
//! A quantizer with `A` levels is stored as its `A - 1` finite breakpoints
//! `t_1 < ... < t_{A-1}`; interval `k` (0-based here) is `[t_k, t_{k+1})`
//! with `t_0 = -inf` and `t_A = +inf`. Output symbols are not stored since
//! the Fisher information does not depend on them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::noise::NoiseModel;

/// The 4-bit Lloyd-Max breakpoints for a unit-power Gaussian input.
pub const LLOYD_MAX_4BIT: [f64; 15] = [
    -2.401, -1.844, -1.437, -1.099, -0.7996, -0.5224, -0.2582, 0.0, 0.2582, 0.5224, 0.7996, 1.099, 1.437, 1.844, 2.401,
];

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    breakpoints: Vec<f64>,
    label: String,
}

impl QuantizerSpec {
    pub fn new(breakpoints: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if let Some(bad) = breakpoints.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidQuantizer(format!("breakpoint {bad} is not finite")));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuantizer(format!(
                "breakpoints not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        Ok(QuantizerSpec {
            breakpoints,
            label: label.into(),
        })
    }

    /// The trivial quantizer with a single interval covering the real line.
    pub fn trivial() -> Self {
        QuantizerSpec {
            breakpoints: Vec::new(),
            label: "trivial".into(),
        }
    }

    pub fn binary(threshold: f64) -> Result<Self> {
        Self::new(vec![threshold], "binary")
    }

    /// The 4-bit Lloyd-Max table multiplied by `scale`.
    pub fn lloyd_max_4bit(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("scale must be positive, got {scale}")));
        }
        Self::new(LLOYD_MAX_4BIT.iter().map(|t| t * scale).collect(), "lloyd-max-4bit")
    }

    /// Equiprobable partition: breakpoints at the `k/A` quantiles of `model`.
    /// Partitions for `A` and `2A` are nested.
    pub fn equiprobable(model: &NoiseModel, levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::Domain(format!("need at least 2 intervals, got {levels}")));
        }
        let breakpoints = (1..levels)
            .map(|k| model.quantile(k as f64 / levels as f64))
            .collect::<Result<Vec<_>>>()?;
        Self::new(breakpoints, format!("equiprobable-{levels}"))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Number of intervals `A`.
    pub fn levels(&self) -> usize {
        self.breakpoints.len() + 1
    }

    /// Bounds `(l_k, u_k)` of interval `k` (0-based).
    pub fn interval(&self, k: usize) -> Result<(f64, f64)> {
        if k >= self.levels() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.levels(),
            });
        }
        let lower = if k == 0 {
            f64::NEG_INFINITY
        } else {
            self.breakpoints[k - 1]
        };
        let upper = self.breakpoints.get(k).copied().unwrap_or(f64::INFINITY);
        Ok((lower, upper))
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let lowers = std::iter::once(f64::NEG_INFINITY).chain(self.breakpoints.iter().copied());
        let uppers = self.breakpoints.iter().copied().chain(std::iter::once(f64::INFINITY));
        lowers.zip(uppers)
    }

    /// Index of the interval `[l_k, u_k)` containing `x`.
    pub fn locate(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&t| t <= x)
    }

    /// Split interval `k` at the interior point `m`.
    pub fn split(&self, k: usize, m: f64) -> Result<Self> {
        let (lower, upper) = self.interval(k)?;
        if !(m > lower && m < upper) {
            return Err(Error::InvalidQuantizer(format!(
                "split point {m} is not inside ({lower}, {upper})"
            )));
        }
        let mut breakpoints = self.breakpoints.clone();
        breakpoints.insert(k, m);
        Ok(QuantizerSpec {
            breakpoints,
            label: self.label.clone(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {factor}")));
        }
        Ok(QuantizerSpec {
            breakpoints: self.breakpoints.iter().map(|t| t * factor).collect(),
            label: self.label.clone(),
        })
    }

    pub fn shifted(&self, offset: f64) -> Result<Self> {
        Self::new(
            self.breakpoints.iter().map(|t| t + offset).collect(),
            self.label.clone(),
        )
    }

    /// DAC-style reconstruction: the midpoint of the interval containing
    /// `x`. The two unbounded intervals map to the adjacent breakpoint moved
    /// outward by half the width of the neighbouring finite interval.
    pub fn reconstruct(&self, x: f64) -> Result<f64> {
        let b = &self.breakpoints;
        if b.len() < 2 {
            return Err(Error::InvalidQuantizer(
                "reconstruction needs at least one finite interval".into(),
            ));
        }
        let k = self.locate(x);
        let last = b.len();
        Ok(if k == 0 {
            b[0] - 0.5 * (b[1] - b[0])
        } else if k == last {
            b[last - 1] + 0.5 * (b[last - 1] - b[last - 2])
        } else {
            0.5 * (b[k - 1] + b[k])
        })
    }
}

/// Two-line text form:
///
/// ```text
/// label = lloyd-max-4bit
/// breakpoints = -2.401, -1.844, ...
/// ```
impl fmt::Display for QuantizerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "label = {}", self.label)?;
        let joined: Vec<String> = self.breakpoints.iter().map(|b| format!("{b:?}")).collect();
        writeln!(f, "breakpoints = {}", joined.join(", "))
    }
}

impl FromStr for QuantizerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut label = None;
        let mut breakpoints = None;
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err("expected key = value".into()))?;
            match key.trim() {
                "label" => label = Some(value.trim().to_string()),
                "breakpoints" => {
                    let values = value
                        .split(',')
                        .map(str::trim)
                        .filter(|v| !v.is_empty())
                        .map(|v| v.parse::<f64>().map_err(|e| parse_err(format!("{v:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?;
                    breakpoints = Some(values);
                }
                other => return Err(parse_err(format!("unknown key {other:?}"))),
            }
        }
        let breakpoints = breakpoints.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing breakpoints".into(),
        })?;
        QuantizerSpec::new(breakpoints, label.unwrap_or_default())
    }
}

/// Per-sample comparator thresholds for a binary quantizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSequence(Vec<f64>);

impl ThresholdSequence {
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if let Some(bad) = thresholds.iter().find(|h| !h.is_finite()) {
            return Err(Error::Domain(format!("threshold {bad} is not finite")));
        }
        Ok(ThresholdSequence(thresholds))
    }

    pub fn constant(threshold: f64, len: usize) -> Result<Self> {
        Self::new(vec![threshold; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
