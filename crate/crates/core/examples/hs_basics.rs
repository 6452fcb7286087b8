//! Density, CDF, quantile, MGF/CF and sampling of the HS location-scale family.

use hsdist::stats::sample_moments;
use hsdist::{HsDistribution, RngStream};

fn main() -> hsdist::Result<()> {
    let hs = HsDistribution::standard();
    println!("standard HS: mean {} variance {}", hs.mean(), hs.variance());
    for y in [0.0, 0.5, 1.0, 2.0, 4.0] {
        println!("  y = {y:>4}: pdf {:.10}  cdf {:.10}", hs.pdf(y)?, hs.cdf(y)?);
    }
    for p in [0.01, 0.25, 0.5, 0.75, 0.99] {
        println!("  Q({p}) = {:.10}", hs.quantile(p)?);
    }
    println!("  MGF(1) = sec(1) = {:.10}", hs.mgf(1.0)?);
    println!("  CF(1) = sech(1) = {:.10}", hs.cf(1.0)?.re);
    // the MGF only exists for |s t| < pi/2
    println!("  MGF(2) -> {}", hs.mgf(2.0).unwrap_err());

    // Y = (2/pi) log|C| for standard Cauchy C
    let batch = hs.sample(&mut RngStream::new(42, 0), 1_000_000)?;
    let m = sample_moments(&batch)?;
    println!("1e6 draws: mean {:.5} (se {:.5}), variance {:.5}", m.mean, m.mean_se, m.variance);

    let shifted = HsDistribution::new(3.0, 2.0)?;
    println!("HS(3, 2): median {} variance {}", shifted.quantile(0.5)?, shifted.variance());
    Ok(())
}
