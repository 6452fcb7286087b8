//! The Fisher z-transform of the twin intraclass correlation, atanh(R), is
//! exactly HS with location atanh(rho) and scale pi/2.

use hsdist::occurrences::icc;
use hsdist::stats::{ks_one_sample, median, sample_moments};
use hsdist::{Alpha, RngStream, TwinModel};

fn main() -> hsdist::Result<()> {
    println!("icc(mu+1, mu+3) = {}", icc(11.0, 13.0, 10.0)?);
    for rho in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        let model = TwinModel::new(100.0, 15.0, rho)?;
        let target = model.target();
        let v = model.simulate(&mut RngStream::new(7, 0), 100_000)?;
        let m = sample_moments(&v)?;
        let ks = ks_one_sample(&v, |x| target.cdf_unchecked(x), Alpha::OnePercent)?;
        println!(
            "rho {rho:>5}: median {:>8.4} (atanh rho {:>8.4}), variance {:.4}, KS {:.5} < {:.5}: {}",
            median(v.values()),
            target.location(),
            m.variance,
            ks.ks_statistic,
            ks.threshold,
            ks.passed
        );
    }
    Ok(())
}
