//! Parametric signal models `s_n(theta)` with analytic Jacobians.
//!
//! Sample indices run from 1 to `N`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector {
    values: Vec<f64>,
    names: Vec<String>,
}

impl ParamVector {
    pub fn new(values: Vec<f64>, names: Vec<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("parameter vector must be non-empty".into()));
        }
        if values.len() != names.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                got: names.len(),
            });
        }
        Ok(ParamVector { values, names })
    }

    /// `(a1, a2, w1, w2, phi1, phi2)` for the two-sinusoid model.
    pub fn two_sinusoid(a1: f64, a2: f64, w1: f64, w2: f64, phi1: f64, phi2: f64) -> Self {
        ParamVector {
            values: vec![a1, a2, w1, w2, phi1, phi2],
            names: TWO_SINUSOID_PARAMS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn scalar(value: f64) -> Self {
        ParamVector {
            values: vec![value],
            names: vec!["theta".into()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub const TWO_SINUSOID_PARAMS: [&str; 6] = ["a1", "a2", "w1", "w2", "phi1", "phi2"];

pub type EvalFn = Arc<dyn Fn(&[f64], usize) -> f64 + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&[f64], usize, &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub enum SignalKind {
    /// `a1 sin(w1 n + phi1) + a2 sin(w2 n + phi2)`.
    TwoSinusoid,
    /// `s_n = theta` for a scalar theta.
    Passthrough,
    Custom {
        params: usize,
        eval: EvalFn,
        jacobian: JacobianFn,
    },
    /// Another model multiplied by a constant, e.g. `1/sigma` for noise
    /// normalization.
    Scaled { inner: Box<SignalModel>, factor: f64 },
}

impl fmt::Debug for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalKind::TwoSinusoid => f.write_str("TwoSinusoid"),
            SignalKind::Passthrough => f.write_str("Passthrough"),
            SignalKind::Custom { params, .. } => write!(f, "Custom {{ params: {params} }}"),
            SignalKind::Scaled { inner, factor } => write!(f, "Scaled({:?}, {factor})", inner.kind),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignalModel {
    kind: SignalKind,
    len: usize,
}

impl SignalModel {
    pub fn two_sinusoid(len: usize) -> Self {
        SignalModel {
            kind: SignalKind::TwoSinusoid,
            len,
        }
    }

    pub fn passthrough(len: usize) -> Self {
        SignalModel {
            kind: SignalKind::Passthrough,
            len,
        }
    }

    pub fn custom(len: usize, params: usize, eval: EvalFn, jacobian: JacobianFn) -> Self {
        SignalModel {
            kind: SignalKind::Custom { params, eval, jacobian },
            len,
        }
    }

    /// The same model multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        SignalModel {
            kind: SignalKind::Scaled {
                inner: Box::new(self.clone()),
                factor,
            },
            len: self.len,
        }
    }

    pub fn kind(&self) -> &SignalKind {
        &self.kind
    }

    /// Number of samples `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of parameters `p`.
    pub fn param_count(&self) -> usize {
        match &self.kind {
            SignalKind::TwoSinusoid => 6,
            SignalKind::Passthrough => 1,
            SignalKind::Custom { params, .. } => *params,
            SignalKind::Scaled { inner, .. } => inner.param_count(),
        }
    }

    fn check(&self, theta: &ParamVector, n: usize) -> Result<()> {
        if theta.len() != self.param_count() {
            return Err(Error::DimensionMismatch {
                expected: self.param_count(),
                got: theta.len(),
            });
        }
        if n == 0 || n > self.len {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len,
            });
        }
        Ok(())
    }

    pub fn eval(&self, theta: &ParamVector, n: usize) -> Result<f64> {
        self.check(theta, n)?;
        let t = theta.values();
        Ok(match &self.kind {
            SignalKind::TwoSinusoid => {
                let nf = n as f64;
                t[0] * (t[2] * nf + t[4]).sin() + t[1] * (t[3] * nf + t[5]).sin()
            }
            SignalKind::Passthrough => t[0],
            SignalKind::Custom { eval, .. } => eval(t, n),
            SignalKind::Scaled { inner, factor } => factor * inner.eval(theta, n)?,
        })
    }

    /// Row `∂s_n/∂theta`, written into `row` (length `p`).
    pub fn jacobian_row_into(&self, theta: &ParamVector, n: usize, row: &mut [f64]) -> Result<()> {
        self.check(theta, n)?;
        if row.len() != self.param_count() {
            return Err(Error::DimensionMismatch {
                expected: self.param_count(),
                got: row.len(),
            });
        }
        let t = theta.values();
        match &self.kind {
            SignalKind::TwoSinusoid => {
                let nf = n as f64;
                let (sin1, cos1) = (t[2] * nf + t[4]).sin_cos();
                let (sin2, cos2) = (t[3] * nf + t[5]).sin_cos();
                row[0] = sin1;
                row[1] = sin2;
                row[2] = t[0] * nf * cos1;
                row[3] = t[1] * nf * cos2;
                row[4] = t[0] * cos1;
                row[5] = t[1] * cos2;
            }
            SignalKind::Passthrough => row[0] = 1.0,
            SignalKind::Custom { jacobian, .. } => jacobian(t, n, row),
            SignalKind::Scaled { inner, factor } => {
                inner.jacobian_row_into(theta, n, row)?;
                row.iter_mut().for_each(|v| *v *= factor);
            }
        }
        Ok(())
    }

    pub fn jacobian_row(&self, theta: &ParamVector, n: usize) -> Result<Vec<f64>> {
        let mut row = vec![0.0; self.param_count()];
        self.jacobian_row_into(theta, n, &mut row)?;
        Ok(row)
    }
}
