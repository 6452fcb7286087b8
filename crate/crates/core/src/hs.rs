//! The hyperbolic-secant location–scale family.
//!
//! `HsDistribution::new(location, scale)` is the law of `location + scale * Y`
//! where `Y` has density `1 / (exp(pi y / 2) + exp(-pi y / 2))`, mean 0 and
//! variance 1. `scale` is therefore the standard deviation.
//!
//! The standard law is also `(2 / pi) * log|C|` for a standard Cauchy `C`,
//! which is how [`HsDistribution::sample`] draws. HS is the generating law
//! of the sixth natural exponential family with quadratic variance function
//! (alongside the Normal, Poisson, Gamma, Binomial and Negative Binomial);
//! exponential tilting is not implemented here.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{check_finite, Error, Result};
use crate::rng::{par_fill, RngStream};
use crate::stats::SampleBatch;

/// `sech(a)` evaluated as `2 e^{-|a|} / (1 + e^{-2|a|})`, finite for every finite `a`.
#[inline]
pub fn sech(a: f64) -> f64 {
    let e = (-a.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// How a standard Cauchy variate is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CauchyMethod {
    /// `tan(pi (U - 1/2))`.
    #[default]
    InverseTransform,
    /// `Z1 / Z2` for independent standard Normals.
    NormalRatio,
}

const MAX_REDRAWS: u64 = 1_000;

/// One standard Cauchy draw and the number of redraws it took.
///
/// Only the ratio construction can redraw (on an exactly zero denominator).
pub fn standard_cauchy_draw(rng: &mut RngStream, method: CauchyMethod) -> (f64, u64) {
    match method {
        CauchyMethod::InverseTransform => ((PI * (rng.uniform_open() - 0.5)).tan(), 0),
        CauchyMethod::NormalRatio => {
            for redraws in 0..MAX_REDRAWS {
                let num = rng.standard_normal();
                let den = rng.standard_normal();
                if den != 0.0 {
                    return (num / den, redraws);
                }
            }
            panic!("normal-ratio Cauchy: {MAX_REDRAWS} consecutive zero denominators");
        }
    }
}

/// One standard HS draw `(2/pi) log|C|`, redrawing when `C` is exactly zero.
pub fn standard_hs_draw(rng: &mut RngStream, method: CauchyMethod) -> (f64, u64) {
    let mut total = 0;
    for _ in 0..MAX_REDRAWS {
        let (c, r) = standard_cauchy_draw(rng, method);
        total += r;
        let y = FRAC_2_PI * c.abs().ln();
        if y.is_finite() {
            return (y, total);
        }
        total += 1;
    }
    panic!("HS draw: {MAX_REDRAWS} consecutive degenerate Cauchy draws");
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsDistribution {
    location: f64,
    scale: f64,
}

impl Default for HsDistribution {
    fn default() -> Self {
        Self::standard()
    }
}

impl HsDistribution {
    pub fn new(location: f64, scale: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::InvalidParameter(format!("location must be finite, got {location}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(Self { location, scale })
    }

    pub fn standard() -> Self {
        Self { location: 0.0, scale: 1.0 }
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        self.location
    }

    pub fn variance(&self) -> f64 {
        self.scale * self.scale
    }

    pub fn median(&self) -> f64 {
        self.location
    }

    #[inline]
    fn standardized_arg(&self, y: f64) -> f64 {
        PI * (y - self.location) / (2.0 * self.scale)
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        check_finite(y)?;
        Ok(self.pdf_unchecked(y))
    }

    /// Density without the finiteness check, for hot loops.
    #[inline]
    pub fn pdf_unchecked(&self, y: f64) -> f64 {
        sech(self.standardized_arg(y)) / (2.0 * self.scale)
    }

    /// `(2/pi) atan(exp(a))`, `a = pi (y - location) / (2 scale)`.
    pub fn cdf(&self, y: f64) -> Result<f64> {
        if y.is_nan() {
            return Err(Error::NonFinite(y));
        }
        Ok(self.cdf_unchecked(y))
    }

    #[inline]
    pub fn cdf_unchecked(&self, y: f64) -> f64 {
        if y == f64::INFINITY {
            return 1.0;
        }
        if y == f64::NEG_INFINITY {
            return 0.0;
        }
        let a = self.standardized_arg(y);
        if a < -745.0 {
            // atan(x) = x to double precision here
            FRAC_2_PI * a.exp()
        } else if a <= 0.0 {
            FRAC_2_PI * a.exp().atan()
        } else {
            1.0 - FRAC_2_PI * (-a).exp().atan()
        }
    }

    /// Upper tail `1 - F(y)`, accurate in the right tail.
    pub fn sf(&self, y: f64) -> Result<f64> {
        let mirrored = 2.0 * self.location - y;
        self.cdf(mirrored)
    }

    /// `location + (2 scale / pi) log tan(pi p / 2)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("quantile needs p in (0, 1), got {p}")));
        }
        Ok(self.location + self.scale * FRAC_2_PI * log_tan_half_pi(p))
    }

    /// Moment generating function `exp(location t) sec(scale t)`, for `|scale t| < pi/2`.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        check_finite(t)?;
        let st = self.scale * t;
        if st.abs() >= FRAC_PI_2 {
            return Err(Error::Domain(format!(
                "mgf diverges for |scale * t| >= pi/2 (scale * t = {st})"
            )));
        }
        Ok((self.location * t).exp() / st.cos())
    }

    /// Characteristic function `exp(i location t) sech(scale t)`, defined for all real `t`.
    ///
    /// Unlike the MGF there is no domain restriction: `sech` is bounded on the real line.
    pub fn cf(&self, t: f64) -> Result<Complex64> {
        check_finite(t)?;
        Ok(Complex64::from_polar(sech(self.scale * t), self.location * t))
    }

    /// `n` draws through the Cauchy representation.
    pub fn sample(&self, rng: &mut RngStream, n: usize) -> Result<SampleBatch> {
        self.sample_with(rng, n, CauchyMethod::default())
    }

    pub fn sample_with(&self, rng: &mut RngStream, n: usize, method: CauchyMethod) -> Result<SampleBatch> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let (seed, stream_id) = (rng.seed(), rng.stream_id());
        let (loc, scale) = (self.location, self.scale);
        let (values, redraws) = par_fill(rng, n, |r| {
            let (y, k) = standard_hs_draw(r, method);
            (loc + scale * y, k)
        });
        let tag = match method {
            CauchyMethod::InverseTransform => "hs:cauchy-inverse",
            CauchyMethod::NormalRatio => "hs:cauchy-normal-ratio",
        };
        SampleBatch::new(values, seed, stream_id, redraws, tag)
    }

    /// `n` draws as `quantile(U)`.
    pub fn sample_by_quantile(&self, rng: &mut RngStream, n: usize) -> Result<SampleBatch> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let (seed, stream_id) = (rng.seed(), rng.stream_id());
        let d = *self;
        let (values, redraws) = par_fill(rng, n, |r| {
            let u = r.uniform_open();
            (d.location + d.scale * FRAC_2_PI * log_tan_half_pi(u), 0)
        });
        SampleBatch::new(values, seed, stream_id, redraws, "hs:quantile")
    }
}

/// `log tan(pi p / 2)` for `p` in (0, 1), accurate at both ends and near 1/2.
pub(crate) fn log_tan_half_pi(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    if (0.25..=0.75).contains(&p) {
        // log tan(pi/4 + x) = 2 atanh(tan x); p - 0.5 is exact here
        let d = p - 0.5;
        return 2.0 * (FRAC_PI_2 * d).tan().atanh();
    }
    if p > 0.5 {
        // exact complement in this range
        return -log_tan_small(1.0 - p);
    }
    log_tan_small(p)
}

fn log_tan_small(p: f64) -> f64 {
    if p < 1e-300 {
        // tan x = x (1 + x^2/3 + ...) and x^2 is far below epsilon
        FRAC_PI_2.ln() + p.ln()
    } else {
        (FRAC_PI_2 * p).tan().ln()
    }
}

/// The three unit-variance densities compared in the classic figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonFamily {
    Hs,
    Normal,
    Logistic,
}

impl ComparisonFamily {
    pub const ALL: [ComparisonFamily; 3] = [Self::Hs, Self::Normal, Self::Logistic];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hs => "hs",
            Self::Normal => "normal",
            Self::Logistic => "logistic",
        }
    }
}

/// Logistic scale giving unit variance: `sqrt(3) / pi`.
pub fn unit_logistic_scale() -> f64 {
    3f64.sqrt() / PI
}

/// Density at `y` of the mean-0, variance-1 member of `family`.
pub fn comparison_pdf(family: ComparisonFamily, y: f64) -> Result<f64> {
    check_finite(y)?;
    Ok(match family {
        ComparisonFamily::Hs => 0.5 * sech(FRAC_PI_2 * y),
        ComparisonFamily::Normal => (-0.5 * y * y).exp() / (2.0 * PI).sqrt(),
        ComparisonFamily::Logistic => {
            let s = unit_logistic_scale();
            let e = (-y.abs() / s).exp();
            e / (s * (1.0 + e) * (1.0 + e))
        }
    })
}
