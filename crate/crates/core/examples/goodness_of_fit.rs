//! The checking toolkit: one- and two-sample KS, QQ points and histograms.

use hsdist::stats::{histogram, ks_one_sample, ks_two_sample, qq_points};
use hsdist::{Alpha, HsDistribution, RngStream, SampleBatch};
use statrs::distribution::{ContinuousCDF, Normal};

fn main() -> hsdist::Result<()> {
    let hs = HsDistribution::standard();
    let phi = Normal::new(0.0, 1.0).unwrap();
    let draws = hs.sample(&mut RngStream::new(1, 0), 100_000)?;

    let own = ks_one_sample(&draws, |x| hs.cdf_unchecked(x), Alpha::OnePercent)?;
    let normal = ks_one_sample(&draws, |x| phi.cdf(x), Alpha::OnePercent)?;
    println!("HS draws vs HS cdf:     D = {:.5}, passed {}", own.ks_statistic, own.passed);
    println!("HS draws vs Normal cdf: D = {:.5}, passed {}", normal.ks_statistic, normal.passed);

    let mut rng = RngStream::new(2, 0);
    let gaussian = SampleBatch::from_values((0..100_000).map(|_| rng.standard_normal()).collect())?;
    let two = ks_two_sample(&draws, &gaussian, Alpha::OnePercent)?;
    println!("HS vs Normal samples:   D = {:.5}, passed {}", two.ks_statistic, two.passed);

    // HS is more peaked than the Normal, then heavier beyond about 2.4 sd
    println!("\nQQ against Normal quantiles, k = 1000 (theoretical, empirical):");
    let qq = qq_points(&draws, |p| phi.inverse_cdf(p), 1000)?;
    for i in [0, 1, 2, 250, 500, 750, 997, 998, 999] {
        let (t, e) = qq[i];
        println!("  {t:>8.4} {e:>8.4}");
    }

    let h = histogram(&draws, -4.0, 4.0, 16)?;
    println!("\nhistogram on [-4, 4], {:.4} of the sample in range:", h.in_range_fraction);
    for (i, d) in h.densities.iter().enumerate() {
        let (lo, _) = h.bin_edges(i);
        println!("  {lo:>5.1} {d:.4} {}", "#".repeat((d * 100.0) as usize));
    }
    Ok(())
}
