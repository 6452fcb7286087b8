//! The Wald instrumental-variable estimator when the instrument is invalid.
//!
//! Each replication draws `N` units with a binary assignment `T ~ Bernoulli(p_treat)`
//! independent of everything else, a binary treatment `D ~ Bernoulli(p_d)`, and
//! `Y = slope * D + eps` with `eps ~ N(0, sigma_y^2 (1 - rho^2))` and
//! `slope = rho * sigma_y / sigma_d`. Then `sd(Y) = sigma_y`, `corr(Y, D) = rho`
//! and `sigma_d = sqrt(p_d (1 - p_d))`.
//!
//! With `T` independent of `D`, `beta_iv - beta_ls` tends in law to `eta * C`
//! for a standard Cauchy `C` and `eta = sigma_y sqrt(1 - rho^2) / sigma_d`, so
//! `log|beta_iv - beta_ls|` tends to HS with location `log eta` and scale `pi/2`.
//!
//! The potential-outcome setting (monotonicity, exclusion restriction, the
//! complier effect a valid instrument would identify) is not simulated.

use std::f64::consts::FRAC_PI_2;

use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::hs::HsDistribution;
use crate::rng::{par_replicate, RngStream};
use crate::stats::SampleBatch;

/// `eta = sigma_y sqrt(1 - rho^2) / sigma_d` for arbitrary (not necessarily binary-D) `sigma_d`.
pub fn gap_scale(sigma_y: f64, sigma_d: f64, rho_yd: f64) -> Result<f64> {
    if !(sigma_y > 0.0 && sigma_y.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma_y must be positive, got {sigma_y}")));
    }
    if !(sigma_d > 0.0 && sigma_d.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma_d must be positive, got {sigma_d}")));
    }
    if !(rho_yd.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rho_yd must lie strictly inside (-1, 1), got {rho_yd}"
        )));
    }
    Ok(sigma_y * (1.0 - rho_yd * rho_yd).sqrt() / sigma_d)
}

/// HS(log eta, pi/2), the limit law of `log|beta_iv - beta_ls|`.
pub fn log_gap_target(sigma_y: f64, sigma_d: f64, rho_yd: f64) -> Result<HsDistribution> {
    HsDistribution::new(gap_scale(sigma_y, sigma_d, rho_yd)?.ln(), FRAC_PI_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IvScenario {
    sigma_y: f64,
    p_d: f64,
    rho_yd: f64,
    p_treat: f64,
    n_units: u64,
}

/// How each replication's data are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IvSimulationMode {
    /// Draw the 2x2 (T, D) cell counts and the per-cell error sums directly.
    /// Exact in law and independent of `N` in cost.
    #[default]
    CellSums,
    /// Draw every unit and accumulate the estimators literally.
    UnitLevel,
}

impl IvScenario {
    /// `sigma_d` is implied by `p_d`.
    pub fn new(sigma_y: f64, p_d: f64, rho_yd: f64, p_treat: f64, n_units: u64) -> Result<Self> {
        if !(sigma_y > 0.0 && sigma_y.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma_y must be positive, got {sigma_y}")));
        }
        if !(p_d > 0.0 && p_d < 1.0) {
            return Err(Error::InvalidParameter(format!("p_d must lie in (0, 1), got {p_d}")));
        }
        if !(rho_yd.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho_yd must lie strictly inside (-1, 1), got {rho_yd}"
            )));
        }
        if !(p_treat > 0.0 && p_treat < 1.0) {
            return Err(Error::InvalidParameter(format!("p_treat must lie in (0, 1), got {p_treat}")));
        }
        if n_units < 4 {
            return Err(Error::InvalidParameter(format!("n_units must be at least 4, got {n_units}")));
        }
        Ok(Self { sigma_y, p_d, rho_yd, p_treat, n_units })
    }

    /// As [`IvScenario::new`], additionally checking a user-supplied `sigma_d`
    /// against the one implied by `p_d`.
    pub fn with_sigma_d(
        sigma_y: f64,
        sigma_d: f64,
        p_d: f64,
        rho_yd: f64,
        p_treat: f64,
        n_units: u64,
    ) -> Result<Self> {
        let s = Self::new(sigma_y, p_d, rho_yd, p_treat, n_units)?;
        if !((sigma_d - s.sigma_d()).abs() <= 1e-9 * s.sigma_d()) {
            return Err(Error::InvalidParameter(format!(
                "sigma_d = {sigma_d} is inconsistent with p_d = {p_d} (implies sigma_d = {})",
                s.sigma_d()
            )));
        }
        Ok(s)
    }

    pub fn sigma_y(&self) -> f64 {
        self.sigma_y
    }

    pub fn p_d(&self) -> f64 {
        self.p_d
    }

    pub fn rho_yd(&self) -> f64 {
        self.rho_yd
    }

    pub fn p_treat(&self) -> f64 {
        self.p_treat
    }

    pub fn n_units(&self) -> u64 {
        self.n_units
    }

    pub fn sigma_d(&self) -> f64 {
        (self.p_d * (1.0 - self.p_d)).sqrt()
    }

    /// Probability limit of the least-squares slope: `rho sigma_y / sigma_d`.
    pub fn ls_limit(&self) -> f64 {
        self.rho_yd * self.sigma_y / self.sigma_d()
    }

    /// Cauchy scale of the IV-LS gap: `sigma_y sqrt(1 - rho^2) / sigma_d`.
    pub fn eta(&self) -> f64 {
        self.sigma_y * (1.0 - self.rho_yd * self.rho_yd).sqrt() / self.sigma_d()
    }

    fn error_sd(&self) -> f64 {
        self.sigma_y * (1.0 - self.rho_yd * self.rho_yd).sqrt()
    }

    /// Limit law of `log|beta_iv - beta_ls|`: HS with location `log eta`, scale `pi/2`.
    pub fn log_gap_target(&self) -> HsDistribution {
        log_gap_target(self.sigma_y, self.sigma_d(), self.rho_yd).expect("validated on construction")
    }

    pub fn simulate(&self, rng: &mut RngStream, reps: usize) -> Result<IvBatch> {
        self.simulate_with(rng, reps, IvSimulationMode::default())
    }

    /// `reps` replications, replication `i` on child stream `i` of one fork of `rng`.
    pub fn simulate_with(&self, rng: &mut RngStream, reps: usize, mode: IvSimulationMode) -> Result<IvBatch> {
        if reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        let (seed, stream_id) = (rng.seed(), rng.stream_id());
        let family = rng.fork();
        let scenario = *self;
        let results = par_replicate(family, reps, |r| {
            let mut redraws = 0;
            loop {
                let est = match mode {
                    IvSimulationMode::CellSums => scenario.replicate_cells(r),
                    IvSimulationMode::UnitLevel => scenario.replicate_units(r),
                };
                match est {
                    Some(e) => return (e, redraws),
                    None => redraws += 1,
                }
            }
        });
        let mut beta_iv = Vec::with_capacity(reps);
        let mut beta_ls = Vec::with_capacity(reps);
        let mut redraw_count = 0;
        for (e, k) in results {
            beta_iv.push(e.beta_iv);
            beta_ls.push(e.beta_ls);
            redraw_count += k;
        }
        Ok(IvBatch { beta_iv, beta_ls, seed, stream_id, redraw_count })
    }

    fn replicate_cells(&self, rng: &mut RngStream) -> Option<Estimates> {
        let n = self.n_units;
        let n1 = binomial(rng, n, self.p_treat);
        let n0 = n - n1;
        let n11 = binomial(rng, n1, self.p_d);
        let n01 = binomial(rng, n0, self.p_d);
        let cells = CellCounts { n11, n10: n1 - n11, n01, n00: n0 - n01 };
        if !cells.is_informative() {
            return None;
        }
        let sd = self.error_sd();
        let mut cell_sum = |count: u64| {
            if count == 0 {
                0.0
            } else {
                sd * (count as f64).sqrt() * rng.standard_normal()
            }
        };
        let sums = [cell_sum(cells.n11), cell_sum(cells.n10), cell_sum(cells.n01), cell_sum(cells.n00)];
        Some(cells.estimates(self.ls_limit(), sums))
    }

    fn replicate_units(&self, rng: &mut RngStream) -> Option<Estimates> {
        let slope = self.ls_limit();
        let sd = self.error_sd();
        // per assignment arm: count, sum D, sum Y
        let mut arm = [(0u64, 0u64, 0.0f64); 2];
        let (mut sd_, mut sy, mut syd, mut sdd) = (0u64, 0.0, 0.0, 0u64);
        for _ in 0..self.n_units {
            let t = usize::from(rng.uniform_open() < self.p_treat);
            let d = u64::from(rng.uniform_open() < self.p_d);
            let y = slope * d as f64 + sd * rng.standard_normal();
            arm[t].0 += 1;
            arm[t].1 += d;
            arm[t].2 += y;
            sd_ += d;
            sdd += d * d;
            sy += y;
            syd += y * d as f64;
        }
        let cells = CellCounts {
            n11: arm[1].1,
            n10: arm[1].0 - arm[1].1,
            n01: arm[0].1,
            n00: arm[0].0 - arm[0].1,
        };
        if !cells.is_informative() {
            return None;
        }
        let nf = self.n_units as f64;
        let d_bar = |a: (u64, u64, f64)| a.1 as f64 / a.0 as f64;
        let y_bar = |a: (u64, u64, f64)| a.2 / a.0 as f64;
        let beta_iv = (y_bar(arm[1]) - y_bar(arm[0])) / (d_bar(arm[1]) - d_bar(arm[0]));
        let mean_d = sd_ as f64 / nf;
        let mean_y = sy / nf;
        let cov = syd / nf - mean_d * mean_y;
        let var = sdd as f64 / nf - mean_d * mean_d;
        Some(Estimates { beta_iv, beta_ls: cov / var })
    }
}

fn binomial(rng: &mut RngStream, n: u64, p: f64) -> u64 {
    if n == 0 {
        return 0;
    }
    Binomial::new(n, p).expect("p validated in (0, 1)").sample(rng)
}

#[derive(Debug, Clone, Copy)]
struct Estimates {
    beta_iv: f64,
    beta_ls: f64,
}

/// Counts by (assignment, treatment): `n11` is T=1, D=1 and so on.
#[derive(Debug, Clone, Copy)]
struct CellCounts {
    n11: u64,
    n10: u64,
    n01: u64,
    n00: u64,
}

impl CellCounts {
    /// Both arms nonempty, D not constant, and `D1 - D0 != 0` exactly.
    fn is_informative(&self) -> bool {
        let n1 = self.n11 + self.n10;
        let n0 = self.n01 + self.n00;
        let treated = self.n11 + self.n01;
        let untreated = self.n10 + self.n00;
        n1 > 0
            && n0 > 0
            && treated > 0
            && untreated > 0
            && u128::from(self.n11) * u128::from(n0) != u128::from(self.n01) * u128::from(n1)
    }

    /// Estimators from counts and per-cell error sums `[s11, s10, s01, s00]`.
    fn estimates(&self, slope: f64, sums: [f64; 4]) -> Estimates {
        let n1 = (self.n11 + self.n10) as f64;
        let n0 = (self.n01 + self.n00) as f64;
        let y1 = (slope * self.n11 as f64 + sums[0] + sums[1]) / n1;
        let y0 = (slope * self.n01 as f64 + sums[2] + sums[3]) / n0;
        let d1 = self.n11 as f64 / n1;
        let d0 = self.n01 as f64 / n0;
        let beta_iv = (y1 - y0) / (d1 - d0);
        // with binary D the LS slope is the difference of treated and untreated means
        let treated = (self.n11 + self.n01) as f64;
        let untreated = (self.n10 + self.n00) as f64;
        let beta_ls = slope + (sums[0] + sums[2]) / treated - (sums[1] + sums[3]) / untreated;
        Estimates { beta_iv, beta_ls }
    }
}

/// Per-replication estimator pairs from one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct IvBatch {
    pub beta_iv: Vec<f64>,
    pub beta_ls: Vec<f64>,
    pub seed: u64,
    pub stream_id: u64,
    pub redraw_count: u64,
}

impl IvBatch {
    pub fn len(&self) -> usize {
        self.beta_iv.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta_iv.is_empty()
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.beta_iv.iter().zip(&self.beta_ls).map(|(a, b)| a - b).collect()
    }

    /// `log|beta_iv - beta_ls|`; an exactly zero gap has probability zero and is dropped.
    pub fn log_gaps(&self) -> Result<SampleBatch> {
        let values: Vec<f64> = self
            .gaps()
            .into_iter()
            .filter(|g| *g != 0.0)
            .map(|g| g.abs().ln())
            .collect();
        SampleBatch::new(values, self.seed, self.stream_id, self.redraw_count, "iv:log-gap")
    }

    pub fn iv_batch(&self) -> Result<SampleBatch> {
        SampleBatch::new(self.beta_iv.clone(), self.seed, self.stream_id, self.redraw_count, "iv:beta-iv")
    }

    pub fn ls_batch(&self) -> Result<SampleBatch> {
        SampleBatch::new(self.beta_ls.clone(), self.seed, self.stream_id, self.redraw_count, "iv:beta-ls")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(IvScenario::new(1.0, 0.5, 1.0, 0.5, 100).is_err());
        assert!(IvScenario::new(1.0, 0.5, -1.0, 0.5, 100).is_err());
        assert!(IvScenario::new(0.0, 0.5, 0.2, 0.5, 100).is_err());
        assert!(IvScenario::new(1.0, 0.0, 0.2, 0.5, 100).is_err());
        assert!(IvScenario::new(1.0, 0.5, 0.2, 1.0, 100).is_err());
        assert!(IvScenario::new(1.0, 0.5, 0.2, 0.5, 3).is_err());
        assert!(IvScenario::with_sigma_d(1.0, 0.5, 0.5, 0.2, 0.5, 100).is_ok());
        assert!(IvScenario::with_sigma_d(1.0, 0.4, 0.5, 0.2, 0.5, 100).is_err());
    }

    #[test]
    fn derived_quantities() {
        let s = IvScenario::new(1.0, 0.5, 0.6, 0.5, 10_000).unwrap();
        assert_eq!(s.sigma_d(), 0.5);
        assert!((s.ls_limit() - 1.2).abs() < 1e-15);
        assert!((s.eta() - 1.6).abs() < 1e-15);
        let t = IvScenario::new(1.0, 0.5, 0.0, 0.5, 100).unwrap();
        assert!((t.eta() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_gap_target_examples() {
        // eta = 1 needs sigma_y = sigma_d with rho = 0
        let s = IvScenario::new(0.5, 0.5, 0.0, 0.5, 100).unwrap();
        let t = s.log_gap_target();
        assert_eq!(t.location(), 0.0);
        assert_eq!(t.scale(), FRAC_PI_2);
        // sigma_y = 2 sigma_d, rho = 0.6: eta = 1.6
        let s = IvScenario::new(1.0, 0.5, 0.6, 0.5, 100).unwrap();
        assert!((s.log_gap_target().location() - 1.6f64.ln()).abs() < 1e-15);
        assert!((s.log_gap_target().variance() - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn cell_estimates_match_unit_formulas() {
        // tiny hand-built data set: compare the cell shortcut with direct formulas
        let slope = 0.7;
        // units (t, d, eps)
        let units = [
            (1, 1, 0.3),
            (1, 0, -0.2),
            (1, 1, 0.5),
            (0, 0, 0.1),
            (0, 1, -0.4),
            (0, 0, 0.9),
            (0, 0, -0.6),
        ];
        let mut cells = CellCounts { n11: 0, n10: 0, n01: 0, n00: 0 };
        let mut sums = [0.0; 4];
        for &(t, d, e) in &units {
            let idx = match (t, d) {
                (1, 1) => 0,
                (1, 0) => 1,
                (0, 1) => 2,
                _ => 3,
            };
            sums[idx] += e;
            match idx {
                0 => cells.n11 += 1,
                1 => cells.n10 += 1,
                2 => cells.n01 += 1,
                _ => cells.n00 += 1,
            }
        }
        let est = cells.estimates(slope, sums);
        let ys: Vec<(f64, f64, f64)> = units
            .iter()
            .map(|&(t, d, e)| (t as f64, d as f64, slope * d as f64 + e))
            .collect();
        let mean = |f: &dyn Fn(&(f64, f64, f64)) -> bool, g: &dyn Fn(&(f64, f64, f64)) -> f64| {
            let sel: Vec<f64> = ys.iter().filter(|u| f(u)).map(g).collect();
            sel.iter().sum::<f64>() / sel.len() as f64
        };
        let wald = (mean(&|u| u.0 == 1.0, &|u| u.2) - mean(&|u| u.0 == 0.0, &|u| u.2))
            / (mean(&|u| u.0 == 1.0, &|u| u.1) - mean(&|u| u.0 == 0.0, &|u| u.1));
        let n = ys.len() as f64;
        let md = ys.iter().map(|u| u.1).sum::<f64>() / n;
        let my = ys.iter().map(|u| u.2).sum::<f64>() / n;
        let cov = ys.iter().map(|u| (u.1 - md) * (u.2 - my)).sum::<f64>();
        let var = ys.iter().map(|u| (u.1 - md).powi(2)).sum::<f64>();
        assert!((est.beta_iv - wald).abs() < 1e-12);
        assert!((est.beta_ls - cov / var).abs() < 1e-12);
    }

    #[test]
    fn uninformative_cells_are_rejected() {
        let tie = CellCounts { n11: 2, n10: 2, n01: 3, n00: 3 };
        assert!(!tie.is_informative());
        let empty_arm = CellCounts { n11: 2, n10: 2, n01: 0, n00: 0 };
        assert!(!empty_arm.is_informative());
        let constant_d = CellCounts { n11: 2, n10: 0, n01: 3, n00: 0 };
        assert!(!constant_d.is_informative());
        assert!(CellCounts { n11: 2, n10: 1, n01: 3, n00: 3 }.is_informative());
    }

    #[test]
    fn simulation_reproducible_and_sized() {
        let s = IvScenario::new(1.0, 0.5, 0.6, 0.5, 1_000).unwrap();
        let a = s.simulate(&mut RngStream::new(2, 0), 500).unwrap();
        let b = s.simulate(&mut RngStream::new(2, 0), 500).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        let u = s.simulate_with(&mut RngStream::new(2, 0), 50, IvSimulationMode::UnitLevel).unwrap();
        assert_eq!(u.len(), 50);
        assert!(s.simulate(&mut RngStream::new(2, 0), 0).is_err());
    }
}
