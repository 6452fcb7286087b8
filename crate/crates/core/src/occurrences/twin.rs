//! Similarity of twins: the Fisher z-transform of the one-pair intraclass
//! correlation is an HS variate with location `atanh(rho)` and scale `pi/2`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::hs::HsDistribution;
use crate::rng::{par_fill, RngStream};
use crate::stats::SampleBatch;

/// Bivariate Normal pair with common mean `mu`, common SD `sigma` and correlation `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinModel {
    mu: f64,
    sigma: f64,
    rho: f64,
}

impl TwinModel {
    pub fn new(mu: f64, sigma: f64, rho: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu must be finite, got {mu}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie strictly inside (-1, 1), got {rho}"
            )));
        }
        Ok(Self { mu, sigma, rho })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Law of `atanh(R)`: density `(1/pi) sech(v - atanh(rho))`.
    pub fn target(&self) -> HsDistribution {
        HsDistribution::new(self.rho.atanh(), FRAC_PI_2).expect("atanh of |rho| < 1 is finite")
    }

    /// One pair `(X1, X2)`.
    pub fn draw_pair(&self, rng: &mut RngStream) -> (f64, f64) {
        let z1 = rng.standard_normal();
        let z2 = rng.standard_normal();
        let x1 = self.mu + self.sigma * z1;
        let x2 = self.mu + self.sigma * (self.rho * z1 + (1.0 - self.rho * self.rho).sqrt() * z2);
        (x1, x2)
    }

    /// `reps` draws of `V = atanh(R)`. Pairs with `|R| = 1` or an undefined `R`
    /// at floating point are redrawn and counted.
    pub fn simulate(&self, rng: &mut RngStream, reps: usize) -> Result<SampleBatch> {
        if reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        let (seed, stream_id) = (rng.seed(), rng.stream_id());
        let model = *self;
        let (values, redraws) = par_fill(rng, reps, |r| {
            let mut redraws = 0;
            loop {
                let (x1, x2) = model.draw_pair(r);
                match icc(x1, x2, model.mu) {
                    Ok(ic) if ic.abs() < 1.0 => return (ic.atanh(), redraws),
                    _ => redraws += 1,
                }
            }
        });
        SampleBatch::new(values, seed, stream_id, redraws, format!("twin:rho={}", self.rho))
    }
}

/// Intraclass correlation of one pair: `2 a b / (a^2 + b^2)` with `a = x1 - mu`, `b = x2 - mu`.
pub fn icc(x1: f64, x2: f64, mu: f64) -> Result<f64> {
    let a = x1 - mu;
    let b = x2 - mu;
    if a == 0.0 && b == 0.0 {
        return Err(Error::UndefinedIcc);
    }
    // scale first so the squares cannot overflow
    let m = a.abs().max(b.abs());
    let (a, b) = (a / m, b / m);
    Ok((2.0 * a * b / (a * a + b * b)).clamp(-1.0, 1.0))
}

/// `log |(a + b) / (a - b)|`, the closed form of `atanh(icc)`.
pub fn fisher_z_log_form(x1: f64, x2: f64, mu: f64) -> f64 {
    let a = x1 - mu;
    let b = x2 - mu;
    ((a + b) / (a - b)).abs().ln()
}
