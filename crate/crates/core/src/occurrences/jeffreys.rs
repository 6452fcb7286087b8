//! The Jeffreys prior for a 2x2 table and its implied log odds ratio.
//!
//! Under Dirichlet(1/2, 1/2, 1/2, 1/2) cell probabilities (multinomial
//! sampling) or independent Beta(1/2, 1/2) row rates (binomial sampling with
//! fixed row totals), the log odds ratio has the law of `pi (Y_1 + Y_2)` for
//! iid standard HS `Y_i`: density `w / (2 pi^2) csch(w / 2)`, variance `2 pi^2`.
//!
//! Gamma(1/2, 1) variates are drawn as `Z^2 / 2`. Observed cell counts
//! `n_ij` play no role: only the prior's implied law is simulated.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rng::{par_fill, RngStream};
use crate::stats::{ks_one_sample, Alpha, GofReport, SampleBatch};
use crate::sum::HsSumDistribution;

/// How the 2x2 table is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContingencyScheme {
    /// Cell counts jointly multinomial; prior Dirichlet(1/2, 1/2, 1/2, 1/2) on `p_ij`.
    Multinomial,
    /// Independent binomial rows with fixed totals `n_1+`, `n_0+` (metadata only);
    /// independent Beta(1/2, 1/2) priors on the row rates `q_1`, `q_0`.
    Binomial { n_row1: u64, n_row0: u64 },
}

impl ContingencyScheme {
    /// `reps` prior draws of the log odds ratio under this scheme.
    pub fn draw_log_odds(&self, rng: &mut RngStream, reps: usize) -> Result<SampleBatch> {
        match self {
            Self::Multinomial => jeffreys_multinomial_draw(rng, reps),
            Self::Binomial { .. } => jeffreys_binomial_draw(rng, reps),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Multinomial => "multinomial",
            Self::Binomial { .. } => "binomial",
        }
    }
}

/// Analytic law of the prior log odds ratio: `pi (Y_1 + Y_2)`.
pub fn jeffreys_target() -> HsSumDistribution {
    HsSumDistribution::new(2, PI).expect("valid constants")
}

/// Gamma(1/2, 1) as `Z^2 / 2`, redrawing exact zeros.
pub fn gamma_half_draw(rng: &mut RngStream) -> (f64, u64) {
    let mut redraws = 0;
    loop {
        let z = rng.standard_normal();
        let x = 0.5 * z * z;
        if x > 0.0 {
            return (x, redraws);
        }
        redraws += 1;
    }
}

/// Four iid Gamma(1/2, 1) draws `(X11, X10, X01, X00)`.
fn gamma_quadruple(rng: &mut RngStream) -> ([f64; 4], u64) {
    let mut out = [0.0; 4];
    let mut redraws = 0;
    for slot in &mut out {
        let (x, r) = gamma_half_draw(rng);
        *slot = x;
        redraws += r;
    }
    (out, redraws)
}

/// One Dirichlet(1/2, 1/2, 1/2, 1/2) draw of `(p11, p10, p01, p00)` by Gamma normalisation.
pub fn dirichlet_jeffreys_draw(rng: &mut RngStream) -> ([f64; 4], u64) {
    let mut redraws = 0;
    loop {
        let (x, r) = gamma_quadruple(rng);
        redraws += r;
        let total: f64 = x.iter().sum();
        let p = x.map(|v| v / total);
        if p.iter().all(|&v| v > 0.0) {
            return (p, redraws);
        }
        redraws += 1;
    }
}

/// `log(p11 p00 / (p10 p01))`, evaluated as a sum of logs.
pub fn log_odds_ratio(p11: f64, p10: f64, p01: f64, p00: f64) -> Result<f64> {
    for (name, v) in [("p11", p11), ("p10", p10), ("p01", p01), ("p00", p00)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("log odds ratio needs positive cells, {name} = {v}")));
        }
    }
    Ok((p11.ln() + p00.ln()) - (p10.ln() + p01.ln()))
}

/// Log odds ratio of the Dirichlet-normalised cell probabilities.
pub fn jeffreys_multinomial_draw(rng: &mut RngStream, reps: usize) -> Result<SampleBatch> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let (seed, stream_id) = (rng.seed(), rng.stream_id());
    let (values, redraws) = par_fill(rng, reps, |r| {
        let (p, k) = dirichlet_jeffreys_draw(r);
        let w = log_odds_ratio(p[0], p[1], p[2], p[3]).expect("cells are positive");
        (w, k)
    });
    SampleBatch::new(values, seed, stream_id, redraws, "jeffreys:multinomial")
}

/// `log[q1 (1 - q0) / (q0 (1 - q1))]` with `q1 = X11 / (X11 + X10)`, `q0 = X01 / (X01 + X00)`.
pub fn jeffreys_binomial_draw(rng: &mut RngStream, reps: usize) -> Result<SampleBatch> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let (seed, stream_id) = (rng.seed(), rng.stream_id());
    let (values, redraws) = par_fill(rng, reps, |r| {
        let mut redraws = 0;
        loop {
            let (x, k) = gamma_quadruple(r);
            redraws += k;
            let row1 = x[0] + x[1];
            let row0 = x[2] + x[3];
            // complements taken from the Gamma ratio, not by subtraction from 1
            let (q1, not_q1) = (x[0] / row1, x[1] / row1);
            let (q0, not_q0) = (x[2] / row0, x[3] / row0);
            if let Ok(w) = log_odds_ratio(q1, not_q1, q0, not_q0) {
                return (w, redraws);
            }
            redraws += 1;
        }
    });
    SampleBatch::new(values, seed, stream_id, redraws, "jeffreys:binomial")
}

/// Prior draws of the marginals `p1+ = p11 + p10` and `p+1 = p11 + p01`.
pub fn marginal_prior_draws(rng: &mut RngStream, reps: usize) -> Result<(SampleBatch, SampleBatch)> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    let (seed, stream_id) = (rng.seed(), rng.stream_id());
    let family = rng.fork();
    let pairs = crate::rng::par_replicate(family, reps, |r| {
        let (p, k) = dirichlet_jeffreys_draw(r);
        (p[0] + p[1], p[0] + p[2], k)
    });
    let redraws = pairs.iter().map(|t| t.2).sum();
    let row = pairs.iter().map(|t| t.0).collect();
    let col = pairs.iter().map(|t| t.1).collect();
    Ok((
        SampleBatch::new(row, seed, stream_id, redraws, "jeffreys:p1+")?,
        SampleBatch::new(col, seed, stream_id, redraws, "jeffreys:p+1")?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalPriorReport {
    /// KS of `p1+` against Uniform(0, 1).
    pub row: GofReport,
    /// KS of `p+1` against Uniform(0, 1).
    pub column: GofReport,
}

impl MarginalPriorReport {
    pub fn passed(&self) -> bool {
        self.row.passed && self.column.passed
    }
}

/// Checks that both prior marginals are Uniform(0, 1).
pub fn marginal_prior_check(rng: &mut RngStream, reps: usize, alpha: Alpha) -> Result<MarginalPriorReport> {
    let (row, col) = marginal_prior_draws(rng, reps)?;
    let uniform = |x: f64| x.clamp(0.0, 1.0);
    Ok(MarginalPriorReport {
        row: ks_one_sample(&row, uniform, alpha)?,
        column: ks_one_sample(&col, uniform, alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_odds_examples() {
        assert_eq!(log_odds_ratio(0.25, 0.25, 0.25, 0.25).unwrap(), 0.0);
        assert!((log_odds_ratio(0.4, 0.1, 0.1, 0.4).unwrap() - 16f64.ln()).abs() < 1e-15);
        let (a, b, c, d) = (0.13, 0.42, 0.07, 0.38);
        let w = log_odds_ratio(a, b, c, d).unwrap();
        let k = 3.7;
        assert!((w - log_odds_ratio(k * a, k * b, k * c, k * d).unwrap()).abs() < 1e-14);
        // swapping columns negates
        assert!((w + log_odds_ratio(b, a, d, c).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn log_odds_rejects_empty_cells() {
        assert!(matches!(log_odds_ratio(0.0, 0.5, 0.25, 0.25), Err(Error::Domain(_))));
        assert!(matches!(log_odds_ratio(0.5, -0.1, 0.3, 0.3), Err(Error::Domain(_))));
        assert!(log_odds_ratio(0.5, f64::NAN, 0.3, 0.3).is_err());
    }

    #[test]
    fn log_odds_extreme_cells_do_not_underflow() {
        let w = log_odds_ratio(1e-200, 1e-200, 1e-200, 1e-200).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn dirichlet_draws_sum_to_one() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..1000 {
            let (p, _) = dirichlet_jeffreys_draw(&mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(p.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn gamma_half_has_mean_one_half() {
        // Gamma(1/2, 1): mean 1/2, variance 1/2
        let mut rng = RngStream::new(8, 2);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| gamma_half_draw(&mut rng).0).collect();
        let (m, v) = crate::stats::mean_variance(&xs);
        assert!((m - 0.5).abs() < 5.0 * (0.5f64 / n as f64).sqrt());
        assert!((v - 0.5).abs() < 0.02);
    }

    #[test]
    fn scheme_dispatch() {
        let s = ContingencyScheme::Binomial { n_row1: 10, n_row0: 12 };
        let a = s.draw_log_odds(&mut RngStream::new(1, 1), 100).unwrap();
        let b = jeffreys_binomial_draw(&mut RngStream::new(1, 1), 100).unwrap();
        assert_eq!(a, b);
        assert_eq!(s.name(), "binomial");
        assert!(jeffreys_multinomial_draw(&mut RngStream::new(1, 1), 0).is_err());
    }

    #[test]
    fn target_is_pi_scaled_pair_sum() {
        let t = jeffreys_target();
        assert_eq!(t.n(), 2);
        assert!((t.variance() - 19.739_208_802_178_716).abs() < 1e-12);
    }
}
