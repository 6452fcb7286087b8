//! Sums of iid HS variables: the two-summand closed form, characteristic-function
//! inversion for more summands, and the Jeffreys-scale law pi (Y1 + Y2).

use std::f64::consts::PI;

use hsdist::stats::sample_moments;
use hsdist::{cf_inversion_pdf, HsSumDistribution, RngStream};

fn main() -> hsdist::Result<()> {
    let w = HsSumDistribution::new(2, PI)?;
    println!("pi (Y1 + Y2): variance {:.6} (2 pi^2)", w.variance());
    println!("{:>6} {:>16} {:>16}", "x", "closed form", "CF inversion");
    for x in [0.0, 1.0, 2.0, 5.0, 10.0, 20.0] {
        println!("{x:>6} {:>16.12} {:>16.12}", w.pdf(x)?, cf_inversion_pdf(2, PI, x)?);
    }

    for n in [1, 2, 3, 4, 8] {
        let d = HsSumDistribution::new(n, 1.0)?;
        println!(
            "n = {n}: pdf(0) {:.8}, P(S <= 2) {:.8}, 97.5% quantile {:.6}",
            d.pdf(0.0)?,
            d.cdf(2.0)?,
            d.quantile(0.975)?
        );
    }

    let draws = w.sample(&mut RngStream::new(3, 0), 1_000_000)?;
    let m = sample_moments(&draws)?;
    println!("1e6 draws of pi (Y1 + Y2): mean {:.4}, variance {:.4}", m.mean, m.variance);
    Ok(())
}
