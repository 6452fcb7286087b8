//! Empirical-distribution diagnostics: ECDF, one- and two-sample
//! Kolmogorov–Smirnov tests with fixed-level asymptotic thresholds, moment
//! estimates, QQ pairs and histogram densities.

use serde::Serialize;

use crate::error::{Error, Result};

/// A seeded vector of finite draws together with the metadata of its generation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    values: Vec<f64>,
    seed: u64,
    stream_id: u64,
    redraw_count: u64,
    generator_tag: String,
}

impl SampleBatch {
    pub fn new(
        values: Vec<f64>,
        seed: u64,
        stream_id: u64,
        redraw_count: u64,
        generator_tag: impl Into<String>,
    ) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self {
            values,
            seed,
            stream_id,
            redraw_count,
            generator_tag: generator_tag.into(),
        })
    }

    /// Batch without generation provenance, e.g. for data supplied by the caller.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0, 0, 0, "external")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn redraw_count(&self) -> u64 {
        self.redraw_count
    }

    pub fn generator_tag(&self) -> &str {
        &self.generator_tag
    }

    /// A sorted copy of the values; the batch itself is left untouched.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Fixed significance levels with asymptotic Kolmogorov critical constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Alpha {
    #[serde(rename = "0.05")]
    FivePercent,
    #[serde(rename = "0.01")]
    OnePercent,
}

impl Alpha {
    pub fn critical_constant(self) -> f64 {
        match self {
            Alpha::FivePercent => 1.36,
            Alpha::OnePercent => 1.63,
        }
    }

    pub fn level(self) -> f64 {
        match self {
            Alpha::FivePercent => 0.05,
            Alpha::OnePercent => 0.01,
        }
    }

    /// `c(alpha) / sqrt(n)`.
    pub fn threshold(self, n_effective: f64) -> f64 {
        self.critical_constant() / n_effective.sqrt()
    }
}

/// Outcome of a goodness-of-fit check.
///
/// `passed` is `ks_statistic < threshold`. For two-sample reports the moment
/// fields describe the first batch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub ks_statistic: f64,
    pub n_effective: f64,
    pub threshold: f64,
    pub passed: bool,
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
}

impl GofReport {
    fn build(ks_statistic: f64, n_effective: f64, alpha: Alpha, values: &[f64]) -> Self {
        let threshold = alpha.threshold(n_effective);
        let (mean, variance) = mean_variance(values);
        let n = values.len() as f64;
        Self {
            ks_statistic,
            n_effective,
            threshold,
            passed: ks_statistic < threshold,
            mean,
            variance,
            mean_se: if n > 0.0 { (variance / n).sqrt() } else { f64::NAN },
        }
    }
}

/// `(#values <= x) / n`.
pub fn ecdf(batch: &SampleBatch, x: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let count = batch.values().iter().filter(|&&v| v <= x).count();
    Ok(count as f64 / batch.len() as f64)
}

/// ECDF evaluated against already-sorted data, by binary search.
pub fn ecdf_sorted(sorted: &[f64], x: f64) -> f64 {
    sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
}

/// Exact two-sided KS statistic of a sample against a continuous reference CDF.
pub fn ks_one_sample<F>(batch: &SampleBatch, cdf: F, alpha: Alpha) -> Result<GofReport>
where
    F: Fn(f64) -> f64,
{
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let sorted = batch.sorted();
    let d = ks_statistic_sorted(&sorted, cdf)?;
    Ok(GofReport::build(d, sorted.len() as f64, alpha, batch.values()))
}

/// `max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n)` over sorted data.
pub fn ks_statistic_sorted<F>(sorted: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) || f < prev {
            return Err(Error::NonMonotoneCdf { at: x });
        }
        prev = f;
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    Ok(d)
}

/// Two-sample KS: `sup |ECDF_a - ECDF_b|`, thresholded with `n_a n_b / (n_a + n_b)`.
pub fn ks_two_sample(a: &SampleBatch, b: &SampleBatch, alpha: Alpha) -> Result<GofReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let xs = a.sorted();
    let ys = b.sorted();
    let d = ks_two_sample_sorted(&xs, &ys);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    Ok(GofReport::build(d, na * nb / (na + nb), alpha, a.values()))
}

pub fn ks_two_sample_sorted(xs: &[f64], ys: &[f64]) -> f64 {
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

/// Mean, unbiased variance, and their standard errors.
///
/// `variance_se` uses `Var(s^2) ~ (m4 - s^4 (n-3)/(n-1)) / n` with the sample
/// fourth central moment `m4`.
pub fn sample_moments(batch: &SampleBatch) -> Result<Moments> {
    let n = batch.len();
    if n < 2 {
        return Err(Error::TooFewValues { needed: 2, got: n });
    }
    let values = batch.values();
    let (mean, variance) = mean_variance(values);
    let nf = n as f64;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
    let var_of_var = ((m4 - variance * variance * (nf - 3.0) / (nf - 1.0)) / nf).max(0.0);
    Ok(Moments {
        mean,
        variance,
        mean_se: (variance / nf).sqrt(),
        variance_se: var_of_var.sqrt(),
    })
}

/// Two-pass mean and unbiased variance (NaN variance for fewer than two values).
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let (ss, comp) = values.iter().fold((0.0, 0.0), |(ss, c), v| {
        let d = v - mean;
        (ss + d * d, c + d)
    });
    // compensated for the rounding of the mean
    let variance = ((ss - comp * comp / n) / (n - 1.0)).max(0.0);
    (mean, variance)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    median_sorted(&v)
}

pub fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// `(theoretical, empirical)` pairs at plotting positions `(i - 0.5) / k`.
///
/// The empirical coordinate is the order statistic of rank `ceil(p_i n)`, which
/// for `k = n` is exactly the i-th smallest value.
pub fn qq_points<F>(batch: &SampleBatch, quantile_fn: F, k: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> f64,
{
    if k < 2 {
        return Err(Error::InvalidParameter(format!("qq needs k >= 2, got {k}")));
    }
    if k > batch.len() {
        return Err(Error::InvalidParameter(format!(
            "qq needs k <= n, got k = {k} with n = {}",
            batch.len()
        )));
    }
    let sorted = batch.sorted();
    let n = sorted.len();
    Ok((1..=k)
        .map(|i| {
            let p = (i as f64 - 0.5) / k as f64;
            let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
            (quantile_fn(p), sorted[rank - 1])
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub densities: Vec<f64>,
    pub counts: Vec<u64>,
    pub in_range_fraction: f64,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.densities.len() as f64
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + bin as f64 * w, self.lo + (bin + 1) as f64 * w)
    }
}

/// Density histogram over `[lo, hi)` normalised by the full sample size, so
/// the bar areas sum to the in-range fraction.
pub fn histogram(batch: &SampleBatch, lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("histogram needs lo < hi, got [{lo}, {hi}]")));
    }
    if bins == 0 {
        return Err(Error::InvalidParameter("histogram needs at least one bin".into()));
    }
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in batch.values() {
        if v >= lo && v < hi {
            let b = (((v - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let n = batch.len() as f64;
    let in_range: u64 = counts.iter().sum();
    Ok(Histogram {
        lo,
        hi,
        densities: counts.iter().map(|&c| c as f64 / (n * width)).collect(),
        counts,
        in_range_fraction: in_range as f64 / n,
    })
}
