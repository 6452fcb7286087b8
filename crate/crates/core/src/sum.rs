//! Sums of iid standard HS variables.
//!
//! [`HsSumDistribution`] is the law of `scale * (Y_1 + ... + Y_n)`. Its
//! characteristic function is `sech(scale t)^n`. For `n = 1` everything
//! delegates to [`HsDistribution`]; for `n = 2` the density has the closed
//! form `(u / 2) csch(pi u / 2) / scale` with `u = x / scale`; for larger `n`
//! the density and CDF come from numerically inverting the characteristic
//! function.

use std::f64::consts::{FRAC_PI_2, LN_10, LN_2, PI};
use std::sync::OnceLock;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_finite, Error, Result};
use crate::hs::{sech, standard_hs_draw, CauchyMethod, HsDistribution};
use crate::quadrature::{integrate, GaussLegendre};
use crate::rng::{par_fill, RngStream};
use crate::stats::SampleBatch;

const GL_ORDER: usize = 24;

fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GL_ORDER))
}

/// Standardized half-width beyond which the remaining mass is below 1e-40.
const TAIL_SPAN: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsSumDistribution {
    n: u32,
    scale: f64,
}

impl HsSumDistribution {
    pub fn new(n: u32, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("number of summands must be at least 1".into()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(Self { n, scale })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean(&self) -> f64 {
        0.0
    }

    pub fn variance(&self) -> f64 {
        f64::from(self.n) * self.scale * self.scale
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        check_finite(x)?;
        Ok(self.pdf_unchecked(x))
    }

    pub fn pdf_unchecked(&self, x: f64) -> f64 {
        let u = x / self.scale;
        match self.n {
            1 => HsDistribution::standard().pdf_unchecked(u) / self.scale,
            2 => pair_sum_density(u) / self.scale,
            n => cf_inversion_standard(n, u).max(0.0) / self.scale,
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::NonFinite(x));
        }
        Ok(self.cdf_unchecked(x))
    }

    pub fn cdf_unchecked(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        let u = x / self.scale;
        match self.n {
            1 => HsDistribution::standard().cdf_unchecked(u),
            2 => pair_sum_cdf(u),
            n => cf_inversion_cdf_standard(n, u),
        }
    }

    /// Inverse CDF by bracketing and bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("quantile needs p in (0, 1), got {p}")));
        }
        if p == 0.5 {
            return Ok(0.0);
        }
        if self.n == 1 {
            return HsDistribution::new(0.0, self.scale)?.quantile(p);
        }
        let z = Normal::standard().inverse_cdf(p).abs();
        let half = z * f64::from(self.n).sqrt() * self.scale + 10.0 * self.scale;
        let (mut lo, mut hi) = (-half, half);
        // the Normal-based bracket is too narrow in the far tails; widen until it holds
        while self.cdf_unchecked(lo) > p {
            lo *= 2.0;
        }
        while self.cdf_unchecked(hi) < p {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf_unchecked(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi.abs().max(lo.abs()).max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `m` draws, each the scaled sum of `n` standard HS draws.
    pub fn sample(&self, rng: &mut RngStream, m: usize) -> Result<SampleBatch> {
        if m == 0 {
            return Err(Error::InvalidParameter("sample size must be at least 1".into()));
        }
        let (seed, stream_id) = (rng.seed(), rng.stream_id());
        let (n, scale) = (self.n, self.scale);
        let (values, redraws) = par_fill(rng, m, |r| {
            let mut sum = 0.0;
            let mut redraws = 0;
            for _ in 0..n {
                let (y, k) = standard_hs_draw(r, CauchyMethod::InverseTransform);
                sum += y;
                redraws += k;
            }
            (scale * sum, redraws)
        });
        SampleBatch::new(values, seed, stream_id, redraws, format!("hs-sum:n={n}"))
    }
}

/// Density of `Y_1 + Y_2` at `u`: `(u/2) csch(pi u / 2)`.
///
/// Written as `(1/pi) a csch(a)` with `a = pi |u| / 2`; small `a` uses the
/// even series of `a csch a`.
pub fn pair_sum_density(u: f64) -> f64 {
    let a = FRAC_PI_2 * u.abs();
    let a_csch_a = if a < 5e-5 {
        // a csch a = 1 - a^2/6 + 7 a^4/360 - 31 a^6/15120 + ...
        let a2 = a * a;
        1.0 - a2 / 6.0 + 7.0 * a2 * a2 / 360.0 - 31.0 * a2 * a2 * a2 / 15120.0
    } else {
        // a / sinh a = 2 a e^{-a} / (1 - e^{-2a})
        2.0 * a * (-a).exp() / -(-2.0 * a).exp_m1()
    };
    a_csch_a / PI
}

fn pair_sum_tail(u0: f64) -> f64 {
    integrate(pair_sum_density, u0, u0 + TAIL_SPAN, 1e-300, 1e-13).value
}

/// CDF of `Y_1 + Y_2`: central part by quadrature from 0, tails integrated directly.
fn pair_sum_cdf(u: f64) -> f64 {
    if u == 0.0 {
        return 0.5;
    }
    let au = u.abs();
    if au <= 1.0 {
        let half = integrate(pair_sum_density, 0.0, au, 1e-15, 0.0).value;
        return if u > 0.0 { 0.5 + half } else { 0.5 - half };
    }
    let tail = pair_sum_tail(au);
    if u > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Upper truncation `T` with `sech(T)^n < 1e-18`.
fn truncation(n: u32) -> f64 {
    let nf = f64::from(n);
    (18.0 * LN_10 + nf * LN_2) / nf
}

/// Panel count so each Gauss–Legendre panel spans at most one oscillation
/// period of `cos(t u)` and at most unit length.
fn panel_count(t_max: f64, u: f64) -> usize {
    let period = if u == 0.0 { f64::INFINITY } else { 2.0 * PI / u.abs() };
    let width = period.min(1.0);
    (t_max / width).ceil() as usize
}

/// Standardized density of `Y_1 + ... + Y_n` by inverting `sech(t)^n`.
fn cf_inversion_standard(n: u32, u: f64) -> f64 {
    let t_max = truncation(n);
    let panels = panel_count(t_max, u);
    let integral = gauss_legendre().integrate_panels(
        |t| (t * u).cos() * sech(t).powi(n as i32),
        0.0,
        t_max,
        panels,
    );
    integral / PI
}

/// `F(u) = 1/2 + (1/pi) int_0^T sin(t u) / t sech(t)^n dt`.
fn cf_inversion_cdf_standard(n: u32, u: f64) -> f64 {
    if u == 0.0 {
        return 0.5;
    }
    let t_max = truncation(n);
    let panels = panel_count(t_max, u);
    let integral = gauss_legendre().integrate_panels(
        |t| (t * u).sin() / t * sech(t).powi(n as i32),
        0.0,
        t_max,
        panels,
    );
    (0.5 + integral / PI).clamp(0.0, 1.0)
}

/// Density of `scale * (Y_1 + ... + Y_n)` at `x` by characteristic-function inversion:
/// `(1 / (pi scale)) int_0^inf cos(t x / scale) sech(t)^n dt`.
///
/// Available for every `n` so the closed forms can be checked against it.
pub fn cf_inversion_pdf(n: u32, scale: f64, x: f64) -> Result<f64> {
    HsSumDistribution::new(n, scale)?;
    check_finite(x)?;
    Ok(cf_inversion_standard(n, x / scale) / scale)
}

/// CDF by characteristic-function inversion, for cross-checking the quadrature route.
pub fn cf_inversion_cdf(n: u32, scale: f64, x: f64) -> Result<f64> {
    HsSumDistribution::new(n, scale)?;
    check_finite(x)?;
    Ok(cf_inversion_cdf_standard(n, x / scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn w_law() -> HsSumDistribution {
        HsSumDistribution::new(2, PI).unwrap()
    }

    /// The log-odds density exactly as displayed: w / (pi^2 (e^{w/2} - e^{-w/2})).
    fn f_w_direct(w: f64) -> f64 {
        w / (PI * PI * ((w / 2.0).exp() - (-w / 2.0).exp()))
    }

    #[test]
    fn construction() {
        assert!(HsSumDistribution::new(0, 1.0).is_err());
        assert!(HsSumDistribution::new(2, 0.0).is_err());
        assert_eq!(w_law().variance(), 2.0 * PI * PI);
    }

    #[test]
    fn pdf_examples() {
        assert_relative_eq!(w_law().pdf(0.0).unwrap(), 1.0 / (PI * PI), max_relative = 1e-15);
        assert_relative_eq!(w_law().pdf(2.0).unwrap(), 0.086_216_031_935_930_62, max_relative = 1e-13);
        assert_eq!(HsSumDistribution::new(1, 1.0).unwrap().pdf(0.0).unwrap(), 0.5);
        assert!(w_law().pdf(f64::NAN).is_err());
    }

    #[test]
    fn pair_density_matches_displayed_formula() {
        for w in [-30.0, -5.0, -0.5, 0.01, 1.0, 2.0, 7.5, 40.0] {
            assert_relative_eq!(w_law().pdf(w).unwrap(), f_w_direct(w), max_relative = 1e-13);
        }
    }

    #[test]
    fn removable_singularity() {
        let eps = 1e-8;
        assert!((w_law().pdf(eps).unwrap() - 1.0 / (PI * PI)).abs() < 1e-10);
        // series and exact branch agree across the switch
        let a = 5e-5 / FRAC_PI_2;
        let below = pair_sum_density(a * (1.0 - 1e-9));
        let above = pair_sum_density(a * (1.0 + 1e-9));
        assert!((below - above).abs() < 1e-14);
    }

    #[test]
    fn cf_inversion_examples() {
        assert!((cf_inversion_pdf(1, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-8);
        assert!((cf_inversion_pdf(2, PI, 2.0).unwrap() - 0.086_216_031_935_930_62).abs() < 1e-8);
    }

    #[test]
    fn cf_inversion_agrees_with_closed_forms() {
        for n in [1, 2] {
            for scale in [1.0, PI] {
                let d = HsSumDistribution::new(n, scale).unwrap();
                for k in -40..=40 {
                    let x = k as f64 * 0.5;
                    let diff = (d.pdf(x).unwrap() - cf_inversion_pdf(n, scale, x).unwrap()).abs();
                    assert!(diff < 1e-8, "n={n} scale={scale} x={x}: {diff}");
                }
            }
        }
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(w_law().cdf(0.0).unwrap(), 0.5);
        assert!((w_law().cdf(200.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(w_law().cdf(-200.0).unwrap() < 1e-12);
        assert_eq!(w_law().quantile(0.5).unwrap(), 0.0);
        assert!(matches!(w_law().quantile(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn cdf_routes_agree() {
        for n in [1, 2] {
            let d = HsSumDistribution::new(n, 1.3).unwrap();
            for x in [-9.0, -2.0, -1.3, -0.2, 0.7, 1.3, 1.31, 4.0, 12.0] {
                let a = d.cdf(x).unwrap();
                let b = cf_inversion_cdf(n, 1.3, x).unwrap();
                assert!((a - b).abs() < 1e-10, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn quantile_roundtrip() {
        for n in [1, 2, 3, 5] {
            let d = HsSumDistribution::new(n, 0.8).unwrap();
            for p in [1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9] {
                let q = d.quantile(p).unwrap();
                assert!((d.cdf(q).unwrap() - p).abs() < 1e-9, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn symmetric_on_grid() {
        for n in [2, 3, 4] {
            let d = HsSumDistribution::new(n, 1.0).unwrap();
            for k in 1..40 {
                let x = k as f64 * 0.37;
                assert_eq!(d.pdf(x).unwrap(), d.pdf(-x).unwrap());
            }
        }
    }
}
