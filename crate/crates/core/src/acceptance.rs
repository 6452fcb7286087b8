//! The release acceptance suite, shared by `hsdist verify` and the
//! `acceptance` integration test.
//!
//! Every criterion runs with fixed seeds and reports one line. Report lines
//! carry measured values but no timings, so two runs produce identical text;
//! runtime budgets are checked and surface only as pass/fail.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::format::g15;
use crate::hs::HsDistribution;
use crate::occurrences::{
    jeffreys_binomial_draw, jeffreys_multinomial_draw, jeffreys_target, marginal_prior_check, IvScenario,
    TwinModel,
};
use crate::quadrature::integrate;
use crate::rng::RngStream;
use crate::stats::{ks_one_sample, ks_two_sample, mean_variance, median, sample_moments, Alpha};
use crate::sum::{cf_inversion_pdf, HsSumDistribution};

/// One acceptance criterion's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl CriterionResult {
    /// The report line: verdict, id, name, measured values. No timing.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("[{verdict}] C{} {}: {}", self.id, self.name, self.detail)
    }
}

/// All criterion ids, in order.
pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Runs one criterion by id.
pub fn run_criterion(id: u8) -> Result<CriterionResult> {
    match id {
        1 => hs_moments(),
        2 => analytic_consistency(),
        3 => twin_identity(),
        4 => jeffreys_log_odds(),
        5 => uniform_marginals(),
        6 => invalid_iv(),
        7 => heavy_mean(),
        8 => ks_null_calibration(),
        9 => determinism(),
        _ => Err(crate::Error::InvalidParameter(format!("no acceptance criterion {id}"))),
    }
}

/// Runs every criterion in order.
pub fn run_all() -> Result<Vec<CriterionResult>> {
    CRITERIA.iter().map(|&id| run_criterion(id)).collect()
}

/// The deterministic report text, one line per criterion.
pub fn report(results: &[CriterionResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&r.line());
        out.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
    out
}

fn finish(
    id: u8,
    name: &'static str,
    start: Instant,
    budget: Option<Duration>,
    checks_passed: bool,
    mut detail: String,
) -> CriterionResult {
    let elapsed = start.elapsed();
    let within = budget.is_none_or(|b| elapsed <= b);
    if let Some(b) = budget {
        detail.push_str(&format!(
            "; runtime {} {}s budget",
            if within { "within" } else { "OVER" },
            b.as_secs()
        ));
    }
    CriterionResult {
        id,
        name,
        passed: checks_passed && within,
        detail,
        elapsed,
        budget,
    }
}

fn fmt(x: f64) -> String {
    format!("{:.6}", x)
}

/// Critical KS distance at alpha = 0.01 for n = 10^5.
pub fn ks_critical_1e5() -> f64 {
    Alpha::OnePercent.threshold(1e5)
}

/// C1: 10^6 standard HS draws through the Cauchy representation.
pub fn hs_moments() -> Result<CriterionResult> {
    let start = Instant::now();
    let batch = HsDistribution::standard().sample(&mut RngStream::new(1, 0), 1_000_000)?;
    let m = sample_moments(&batch)?;
    let ok = m.mean.abs() <= 0.005 && (0.99..=1.01).contains(&m.variance);
    let detail = format!(
        "mean {} in [-0.005, 0.005], variance {} in [0.99, 1.01]",
        fmt(m.mean),
        fmt(m.variance)
    );
    Ok(finish(1, "standard HS moments", start, Some(Duration::from_secs(2)), ok, detail))
}

/// The p grid `1e-6, 1e-5, ..., 0.1, 0.2, ..., 0.9, ..., 1 - 1e-6`.
pub fn roundtrip_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (2..=6).rev().map(|k| 10f64.powi(-k)).collect();
    grid.extend((1..=9).map(|k| k as f64 / 10.0));
    grid.extend((2..=6).map(|k| 1.0 - 10f64.powi(-k)));
    grid
}

/// Largest `|integral of pdf - 1|` over three HS laws, for any candidate density.
pub fn normalisation_error(pdf: impl Fn(&HsDistribution, f64) -> f64) -> Result<f64> {
    let mut err: f64 = 0.0;
    for (loc, scale) in [(0.0, 1.0), (2.0, FRAC_PI_2), (-1.5, 0.3)] {
        let d = HsDistribution::new(loc, scale)?;
        let total = integrate(|y| pdf(&d, y), loc - 40.0 * scale, loc + 40.0 * scale, 1e-12, 0.0).value;
        err = err.max((total - 1.0).abs());
    }
    Ok(err)
}

/// C2: normalisation, CDF/quantile roundtrip, and CF inversion vs closed forms.
pub fn analytic_consistency() -> Result<CriterionResult> {
    let start = Instant::now();
    let norm_err = normalisation_error(|d, y| d.pdf_unchecked(y))?;
    let mut roundtrip_err: f64 = 0.0;
    for (loc, scale) in [(0.0, 1.0), (3.0, 2.0)] {
        let d = HsDistribution::new(loc, scale)?;
        for p in roundtrip_grid() {
            roundtrip_err = roundtrip_err.max((d.cdf(d.quantile(p)?)? - p).abs());
        }
    }
    let mut inversion_err: f64 = 0.0;
    for n in [1, 2] {
        for scale in [1.0, PI] {
            let d = HsSumDistribution::new(n, scale)?;
            for k in -40..=40 {
                let x = 0.5 * k as f64;
                inversion_err = inversion_err.max((d.pdf(x)? - cf_inversion_pdf(n, scale, x)?).abs());
            }
        }
    }
    let ok = norm_err <= 1e-10 && roundtrip_err < 1e-10 && inversion_err < 1e-8;
    let detail = format!(
        "normalisation error {:.1e} <= 1e-10, roundtrip error {:.1e} < 1e-10, inversion error {:.1e} < 1e-8",
        norm_err, roundtrip_err, inversion_err
    );
    Ok(finish(2, "analytic self-consistency", start, Some(Duration::from_secs(10)), ok, detail))
}

pub const TWIN_RHOS: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 0.9];
pub const TWIN_SEEDS: [u64; 3] = [101, 202, 303];

/// C3: KS of 10^5 `atanh(R)` draws against HS(atanh rho, pi/2).
pub fn twin_identity() -> Result<CriterionResult> {
    let start = Instant::now();
    let threshold = ks_critical_1e5();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for &rho in &TWIN_RHOS {
        let model = TwinModel::new(0.0, 1.0, rho)?;
        let target = model.target();
        for &seed in &TWIN_SEEDS {
            let batch = model.simulate(&mut RngStream::new(seed, 0), 100_000)?;
            let r = ks_one_sample(&batch, |v| target.cdf_unchecked(v), Alpha::OnePercent)?;
            worst = worst.max(r.ks_statistic);
            if !(r.ks_statistic < threshold) {
                failures += 1;
            }
        }
    }
    let detail = format!(
        "max KS {} < {} over 5 rho x 3 seeds ({failures} failures)",
        fmt(worst),
        fmt(threshold)
    );
    Ok(finish(3, "twin identity", start, Some(Duration::from_secs(30)), failures == 0, detail))
}

/// C4: Jeffreys log odds ratio variance, KS against pi (Y1 + Y2), and scheme equality.
pub fn jeffreys_log_odds() -> Result<CriterionResult> {
    let start = Instant::now();
    let big = jeffreys_multinomial_draw(&mut RngStream::new(41, 0), 1_000_000)?;
    let var = sample_moments(&big)?.variance;
    let two_pi2 = 2.0 * PI * PI;
    let var_ok = (var - two_pi2).abs() <= 0.02 * two_pi2;

    let target = jeffreys_target();
    let multi = jeffreys_multinomial_draw(&mut RngStream::new(42, 0), 100_000)?;
    let ks = ks_one_sample(&multi, |w| target.cdf_unchecked(w), Alpha::OnePercent)?;
    let threshold = ks_critical_1e5();
    let ks_ok = ks.ks_statistic < threshold;

    let binom = jeffreys_binomial_draw(&mut RngStream::new(43, 0), 100_000)?;
    let two = ks_two_sample(&multi, &binom, Alpha::OnePercent)?;

    let detail = format!(
        "variance {} within 2% of {}, KS vs pi(Y1+Y2) {} < {}, two-sample KS {} < {}",
        fmt(var),
        fmt(two_pi2),
        fmt(ks.ks_statistic),
        fmt(threshold),
        fmt(two.ks_statistic),
        fmt(two.threshold)
    );
    Ok(finish(
        4,
        "Jeffreys log odds ratio",
        start,
        Some(Duration::from_secs(60)),
        var_ok && ks_ok && two.passed,
        detail,
    ))
}

/// C5: both prior marginals are Uniform(0, 1).
pub fn uniform_marginals() -> Result<CriterionResult> {
    let start = Instant::now();
    let r = marginal_prior_check(&mut RngStream::new(51, 0), 100_000, Alpha::OnePercent)?;
    let detail = format!(
        "KS(p1+) {}, KS(p+1) {}, threshold {}",
        fmt(r.row.ks_statistic),
        fmt(r.column.ks_statistic),
        fmt(r.row.threshold)
    );
    Ok(finish(5, "uniform prior marginals", start, None, r.passed(), detail))
}

/// The scenario of C6 and C7: sigma_y = 1, p_d = 1/2, rho = 0.6, p_treat = 1/2, N = 10^4.
pub fn iv_reference_scenario() -> IvScenario {
    IvScenario::new(1.0, 0.5, 0.6, 0.5, 10_000).expect("valid constants")
}

/// C6: invalid-IV medians, log-gap KS, and log-gap variance.
pub fn invalid_iv() -> Result<CriterionResult> {
    let start = Instant::now();
    let s = iv_reference_scenario();
    let run = s.simulate(&mut RngStream::new(61, 0), 100_000)?;
    let med_iv = median(&run.beta_iv);
    let abs_gaps: Vec<f64> = run.gaps().iter().map(|g| g.abs()).collect();
    let med_gap = median(&abs_gaps);
    let log_gaps = run.log_gaps()?;
    let target = s.log_gap_target();
    let ks = ks_one_sample(&log_gaps, |v| target.cdf_unchecked(v), Alpha::OnePercent)?;
    let var = sample_moments(&log_gaps)?.variance;
    let quarter_pi2 = PI * PI / 4.0;

    let med_iv_ok = (med_iv - s.ls_limit()).abs() <= 0.05;
    let med_gap_ok = (med_gap - s.eta()).abs() <= 0.05 * s.eta();
    let ks_ok = ks.ks_statistic < 0.02;
    let var_ok = (var - quarter_pi2).abs() <= 0.05 * quarter_pi2;
    let detail = format!(
        "median beta_iv {} (target {} +- 0.05), median |gap| {} (eta {} +- 5%), log-gap KS {} < 0.02, log-gap variance {} (pi^2/4 {} +- 5%), {} redraws",
        fmt(med_iv),
        fmt(s.ls_limit()),
        fmt(med_gap),
        fmt(s.eta()),
        fmt(ks.ks_statistic),
        fmt(var),
        fmt(quarter_pi2),
        run.redraw_count
    );
    Ok(finish(
        6,
        "invalid instrument",
        start,
        Some(Duration::from_secs(180)),
        med_iv_ok && med_gap_ok && ks_ok && var_ok,
        detail,
    ))
}

/// Seeds for the 10^4-replication runs of C7.
pub fn heavy_mean_small_seeds() -> Vec<u64> {
    (0..20).map(|i| 7000 + i).collect()
}

/// Seeds for the 10^5-replication runs of C7.
pub fn heavy_mean_large_seeds() -> Vec<u64> {
    (0..20).map(|i| 8000 + i).collect()
}

/// Standard deviation across seeds of the per-seed means of `beta_iv` and `beta_ls`.
pub fn per_seed_mean_sd(s: &IvScenario, seeds: &[u64], reps: usize) -> Result<(f64, f64)> {
    let mut iv_means = Vec::with_capacity(seeds.len());
    let mut ls_means = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let run = s.simulate(&mut RngStream::new(seed, 0), reps)?;
        iv_means.push(mean_variance(&run.beta_iv).0);
        ls_means.push(mean_variance(&run.beta_ls).0);
    }
    Ok((mean_variance(&iv_means).1.sqrt(), mean_variance(&ls_means).1.sqrt()))
}

/// C7: per-seed means of `beta_iv` do not settle as replications grow; those of `beta_ls` do.
pub fn heavy_mean() -> Result<CriterionResult> {
    let start = Instant::now();
    let s = iv_reference_scenario();
    let (iv_small, ls_small) = per_seed_mean_sd(&s, &heavy_mean_small_seeds(), 10_000)?;
    let (iv_large, ls_large) = per_seed_mean_sd(&s, &heavy_mean_large_seeds(), 100_000)?;
    let iv_ratio = iv_small / iv_large;
    let ls_ratio = ls_small / ls_large;
    let ok = (0.5..=2.0).contains(&iv_ratio) && (2.5..=4.5).contains(&ls_ratio);
    let detail = format!(
        "beta_iv SD ratio {} in [0.5, 2.0] (SDs {} -> {}), beta_ls SD ratio {} in [2.5, 4.5]",
        fmt(iv_ratio),
        g15(iv_small),
        g15(iv_large),
        fmt(ls_ratio)
    );
    Ok(finish(7, "heavy IV mean", start, None, ok, detail))
}

/// C8: rejection rate at alpha = 0.05 over 200 exact-law batches of 10^3.
pub fn ks_null_calibration() -> Result<CriterionResult> {
    let start = Instant::now();
    let d = HsDistribution::standard();
    let mut rejections = 0;
    for seed in 0..200u64 {
        let batch = d.sample(&mut RngStream::new(90_000 + seed, 0), 1_000)?;
        let r = ks_one_sample(&batch, |y| d.cdf_unchecked(y), Alpha::FivePercent)?;
        if !r.passed {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / 200.0;
    let ok = (0.02..=0.09).contains(&rate);
    let detail = format!("rejection rate {rate:.3} ({rejections}/200) in [0.02, 0.09]");
    Ok(finish(8, "KS null calibration", start, None, ok, detail))
}

/// Every simulator's output on a small fixed workload, as raw bits.
pub fn determinism_fingerprint() -> Result<Vec<u64>> {
    let mut bits = Vec::new();
    let mut push = |v: &[f64]| bits.extend(v.iter().map(|x| x.to_bits()));
    let hs = HsDistribution::new(0.5, 2.0)?;
    push(hs.sample(&mut RngStream::new(42, 0), 50_000)?.values());
    push(hs.sample_with(&mut RngStream::new(42, 1), 20_000, crate::CauchyMethod::NormalRatio)?.values());
    push(HsSumDistribution::new(3, 1.0)?.sample(&mut RngStream::new(43, 0), 20_000)?.values());
    push(TwinModel::new(0.0, 1.0, 0.5)?.simulate(&mut RngStream::new(44, 0), 20_000)?.values());
    push(jeffreys_multinomial_draw(&mut RngStream::new(45, 0), 20_000)?.values());
    push(jeffreys_binomial_draw(&mut RngStream::new(46, 0), 20_000)?.values());
    let (row, col) = crate::occurrences::marginal_prior_draws(&mut RngStream::new(47, 0), 20_000)?;
    push(row.values());
    push(col.values());
    let iv = IvScenario::new(1.0, 0.5, 0.6, 0.5, 1_000)?;
    let run = iv.simulate(&mut RngStream::new(48, 0), 5_000)?;
    push(&run.beta_iv);
    push(&run.beta_ls);
    let unit = iv.simulate_with(&mut RngStream::new(49, 0), 200, crate::occurrences::IvSimulationMode::UnitLevel)?;
    push(&unit.beta_iv);
    Ok(bits)
}

/// Runs `f` inside a dedicated rayon pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

/// C9: identical output across repeated runs and across 1 vs 4 worker threads.
pub fn determinism() -> Result<CriterionResult> {
    let start = Instant::now();
    let single = with_threads(1, determinism_fingerprint)?;
    let multi = with_threads(4, determinism_fingerprint)?;
    let again = with_threads(4, determinism_fingerprint)?;
    let ok = single == multi && multi == again;
    let detail = format!(
        "{} draws bit-identical across 1-thread, 4-thread and repeated runs: {}",
        single.len(),
        if ok { "yes" } else { "no" }
    );
    Ok(finish(9, "determinism", start, None, ok, detail))
}
