//! Under the Jeffreys prior for a 2x2 table, the log odds ratio is distributed
//! as pi (Y1 + Y2), whether the table is sampled multinomially or by rows.

use hsdist::occurrences::{jeffreys_target, marginal_prior_check, ContingencyScheme};
use hsdist::stats::{ks_one_sample, ks_two_sample, sample_moments};
use hsdist::{Alpha, RngStream};

fn main() -> hsdist::Result<()> {
    let target = jeffreys_target();
    let schemes = [
        ContingencyScheme::Multinomial,
        ContingencyScheme::Binomial { n_row1: 40, n_row0: 60 },
    ];
    let mut batches = Vec::new();
    for (i, scheme) in schemes.iter().enumerate() {
        let w = scheme.draw_log_odds(&mut RngStream::new(11, i as u64), 200_000)?;
        let m = sample_moments(&w)?;
        let ks = ks_one_sample(&w, |x| target.cdf_unchecked(x), Alpha::OnePercent)?;
        println!(
            "{:<12} mean {:>7.4} variance {:.4} (2 pi^2 = {:.4}) KS {:.5} passed {}",
            scheme.name(),
            m.mean,
            m.variance,
            target.variance(),
            ks.ks_statistic,
            ks.passed
        );
        batches.push(w);
    }
    let two = ks_two_sample(&batches[0], &batches[1], Alpha::OnePercent)?;
    println!("multinomial vs binomial: KS {:.5} < {:.5}: {}", two.ks_statistic, two.threshold, two.passed);

    let marginals = marginal_prior_check(&mut RngStream::new(12, 0), 100_000, Alpha::OnePercent)?;
    println!(
        "prior marginals vs Uniform(0, 1): KS {:.5} and {:.5}, passed {}",
        marginals.row.ks_statistic,
        marginals.column.ks_statistic,
        marginals.passed()
    );
    Ok(())
}
