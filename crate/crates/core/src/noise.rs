//! Noise distributions for the measurement model `y = s + e`.
//!
//! Every model is normalized so that the location parameter is zero; the
//! standard normal and the unit-variance Laplace are the two shipped models.
//! Besides the cdf and pdf, the Fisher computations need the pdf derivative
//! and the quantile function. Infinite arguments are accepted everywhere and
//! return the exact limit values.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad;

/// Half-width of the integration window used for `rho0` and the
/// normalization checks, in units of the (unit) noise standard deviation.
pub const TRUNCATION: f64 = 40.0;

const RHO0_REL_TOL: f64 = 1e-11;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied noise distribution.
#[derive(Clone)]
pub struct CustomNoise {
    cdf: ScalarFn,
    pdf: ScalarFn,
    pdf_derivative: ScalarFn,
    variance: f64,
    kinks: Vec<f64>,
}

impl fmt::Debug for CustomNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNoise")
            .field("variance", &self.variance)
            .field("kinks", &self.kinks)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum NoiseModel {
    StandardNormal,
    Laplace { scale: f64 },
    Custom(CustomNoise),
}

impl NoiseModel {
    pub fn laplace(scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("Laplace scale must be positive, got {scale}")));
        }
        Ok(NoiseModel::Laplace { scale })
    }

    /// Laplace distribution with scale `1/sqrt(2)`, i.e. unit variance.
    pub fn laplace_unit_variance() -> Self {
        NoiseModel::Laplace { scale: FRAC_1_SQRT_2 }
    }

    /// Build a custom model and check it against the distribution invariants:
    /// the pdf integrates to one, the declared variance matches the second
    /// moment, and the cdf is monotone with the right limits.
    pub fn custom(
        cdf: ScalarFn,
        pdf: ScalarFn,
        pdf_derivative: ScalarFn,
        variance: f64,
        kinks: Vec<f64>,
    ) -> Result<Self> {
        let model = NoiseModel::Custom(CustomNoise {
            cdf,
            pdf,
            pdf_derivative,
            variance,
            kinks,
        });
        model.validate()?;
        Ok(model)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::StandardNormal => "normal",
            NoiseModel::Laplace { .. } => "laplace",
            NoiseModel::Custom(_) => "custom",
        }
    }

    pub fn is_standard_normal(&self) -> bool {
        matches!(self, NoiseModel::StandardNormal)
    }

    pub fn variance(&self) -> f64 {
        match self {
            NoiseModel::StandardNormal => 1.0,
            NoiseModel::Laplace { scale } => 2.0 * scale * scale,
            NoiseModel::Custom(c) => c.variance,
        }
    }

    /// Points where the pdf is not differentiable.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            NoiseModel::StandardNormal => Vec::new(),
            NoiseModel::Laplace { .. } => vec![0.0],
            NoiseModel::Custom(c) => c.kinks.clone(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        match self {
            NoiseModel::StandardNormal => normal_cdf(x),
            NoiseModel::Laplace { scale } => {
                if x < 0.0 {
                    0.5 * (x / scale).exp()
                } else {
                    1.0 - 0.5 * (-x / scale).exp()
                }
            }
            NoiseModel::Custom(c) => (c.cdf)(x),
        }
    }

    /// Survival function `1 - cdf(x)`, computed without cancellation for the
    /// shipped models.
    pub fn sf(&self, x: f64) -> f64 {
        match self {
            NoiseModel::StandardNormal => self.cdf(-x),
            NoiseModel::Laplace { .. } => self.cdf(-x),
            NoiseModel::Custom(c) => {
                if x == f64::NEG_INFINITY {
                    1.0
                } else if x == f64::INFINITY {
                    0.0
                } else {
                    1.0 - (c.cdf)(x)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return 0.0;
        }
        match self {
            NoiseModel::StandardNormal => normal_pdf(x),
            NoiseModel::Laplace { scale } => (-x.abs() / scale).exp() / (2.0 * scale),
            NoiseModel::Custom(c) => (c.pdf)(x),
        }
    }

    /// Derivative of the pdf. For Laplace the value at the kink is taken as 0.
    pub fn pdf_derivative(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return 0.0;
        }
        match self {
            NoiseModel::StandardNormal => -x * normal_pdf(x),
            NoiseModel::Laplace { scale } => {
                if x == 0.0 {
                    0.0
                } else {
                    -x.signum() * self.pdf(x) / scale
                }
            }
            NoiseModel::Custom(c) => (c.pdf_derivative)(x),
        }
    }

    /// Probability of the interval `[lower, upper)`. Uses the survival
    /// function when the interval lies in the upper tail.
    pub fn mass(&self, lower: f64, upper: f64) -> f64 {
        if lower >= 0.0 {
            self.sf(lower) - self.sf(upper)
        } else {
            self.cdf(upper) - self.cdf(lower)
        }
    }

    /// Inverse cdf. Laplace is inverted in closed form; other models use a
    /// bracketed Newton iteration that falls back to bisection.
    pub fn quantile(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("quantile argument must lie in (0, 1), got {t}")));
        }
        match self {
            NoiseModel::StandardNormal if t == 0.5 => Ok(0.0),
            NoiseModel::Laplace { scale } => Ok(if t < 0.5 {
                scale * (2.0 * t).ln()
            } else {
                -scale * (2.0 * (1.0 - t)).ln()
            }),
            _ => Ok(self.invert_cdf(t)),
        }
    }

    fn invert_cdf(&self, t: f64) -> f64 {
        // Newton on the log of the relevant tail probability, which is close
        // to quadratic in the tails; bisection whenever a step leaves the
        // bracket.
        let upper = t > 0.5;
        let log_target = if upper { (1.0 - t).ln() } else { t.ln() };
        // increasing in x, zero at the quantile; also returns its derivative
        let residual = |x: f64| {
            let tail = if upper { self.sf(x) } else { self.cdf(x) };
            let slope = self.pdf(x) / tail;
            if upper {
                (log_target - tail.ln(), slope)
            } else {
                (tail.ln() - log_target, slope)
            }
        };

        let mut lo = -1.0;
        while residual(lo).0 > 0.0 && lo > -1e300 {
            lo *= 2.0;
        }
        let mut hi = 1.0;
        while residual(hi).0 < 0.0 && hi < 1e300 {
            hi *= 2.0;
        }

        let mut x = if upper { 0.5 } else { -0.5 };
        for _ in 0..200 {
            let (r, slope) = residual(x);
            if r == 0.0 {
                return x;
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let mut next = x - r / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - x).abs() <= 2.0 * f64::EPSILON * x.abs().max(1e-300)
                || hi - lo <= 2.0 * f64::EPSILON * hi.abs().max(lo.abs());
            x = next;
            if done {
                break;
            }
        }
        x
    }

    /// Closed-form value of the location Fisher information constant, when
    /// one is known.
    pub fn rho0_closed_form(&self) -> Option<f64> {
        match self {
            NoiseModel::StandardNormal => Some(1.0),
            NoiseModel::Laplace { scale } => Some(1.0 / (scale * scale)),
            NoiseModel::Custom(_) => None,
        }
    }

    /// Location Fisher information of one unquantized sample,
    /// `∫ f'(x)^2 / f(x) dx`, evaluated by adaptive quadrature over
    /// `[-TRUNCATION, TRUNCATION]`.
    pub fn rho0(&self) -> Result<f64> {
        let mut x = -8.0;
        while x <= 8.0 {
            if !(self.pdf(x) > 0.0) {
                return Err(Error::Domain(format!("pdf vanishes at x = {x}")));
            }
            x += 0.01;
        }
        let tail = self.cdf(-TRUNCATION) + self.sf(TRUNCATION);
        let edge = self.score_density(-TRUNCATION) + self.score_density(TRUNCATION);
        if tail > 1e-12 || edge > 1e-12 {
            return Err(Error::Integration(format!(
                "tails beyond ±{TRUNCATION} are not negligible (mass {tail:e}, integrand {edge:e})"
            )));
        }
        quad::integrate_with_breaks(
            |x| self.score_density(x),
            -TRUNCATION,
            TRUNCATION,
            &self.kinks(),
            RHO0_REL_TOL,
            0.0,
        )
    }

    fn score_density(&self, x: f64) -> f64 {
        let p = self.pdf(x);
        if p > 0.0 {
            let d = self.pdf_derivative(x);
            d * d / p
        } else {
            0.0
        }
    }

    /// Check the distribution invariants numerically.
    pub fn validate(&self) -> Result<()> {
        let kinks = self.kinks();
        let mass = quad::integrate_with_breaks(|x| self.pdf(x), -TRUNCATION, TRUNCATION, &kinks, 1e-12, 0.0)?;
        if (mass - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("pdf integrates to {mass}, not 1")));
        }
        let second = quad::integrate_with_breaks(|x| x * x * self.pdf(x), -TRUNCATION, TRUNCATION, &kinks, 1e-12, 0.0)?;
        if (second - self.variance()).abs() > 1e-6 {
            return Err(Error::Domain(format!(
                "declared variance {} differs from second moment {second}",
                self.variance()
            )));
        }
        if self.cdf(-TRUNCATION) > 1e-9 || self.cdf(TRUNCATION) < 1.0 - 1e-9 {
            return Err(Error::Domain("cdf does not reach its limits".into()));
        }
        let mut prev = 0.0;
        for i in 0..=10_000 {
            let x = -TRUNCATION + 2.0 * TRUNCATION * i as f64 / 10_000.0;
            let c = self.cdf(x);
            if !(0.0..=1.0).contains(&c) || c < prev {
                return Err(Error::Domain(format!("cdf not monotone in [0, 1] at x = {x}")));
            }
            prev = c;
        }
        Ok(())
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn normal_cdf(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        0.0
    } else if x == f64::INFINITY {
        1.0
    } else if x < 0.0 {
        0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
    } else {
        1.0 - 0.5 * libm::erfc(x * FRAC_1_SQRT_2)
    }
}

/// `ln Φ(x)` for the standard normal, accurate deep into the lower tail.
pub fn normal_log_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        0.0
    } else if x == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if x >= 0.0 {
        (-0.5 * libm::erfc(x * FRAC_1_SQRT_2)).ln_1p()
    } else if x > -37.0 {
        (0.5 * libm::erfc(-x / SQRT_2)).ln()
    } else {
        // Mills-ratio asymptotic series; converges fast this far out.
        let t = -x;
        let inv2 = 1.0 / (t * t);
        let mut term = 1.0;
        let mut series = 1.0;
        for k in 1..12 {
            term *= -((2 * k - 1) as f64) * inv2;
            series += term;
        }
        -0.5 * t * t - t.ln() - 0.5 * (2.0 * PI).ln() + series.ln()
    }
}
