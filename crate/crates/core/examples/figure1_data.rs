//! Unit-variance HS, Normal and Logistic densities side by side: the HS law has
//! the sharpest peak and the heaviest tails of the three.

use hsdist::{comparison_pdf, ComparisonFamily};

fn main() -> hsdist::Result<()> {
    print!("{:>5}", "y");
    for f in ComparisonFamily::ALL {
        print!(" {:>10}", f.name());
    }
    println!();
    for i in 0..=16 {
        let y = -4.0 + 0.5 * i as f64;
        print!("{y:>5}");
        for f in ComparisonFamily::ALL {
            print!(" {:>10.6}", comparison_pdf(f, y)?);
        }
        println!();
    }
    // the same grid as CSV, at full resolution
    let csv = hsdist::cli::cmd_figure1(-8.0, 8.0, 0.01)?;
    println!("figure1 CSV: {} rows", csv.lines().count() - 1);
    Ok(())
}
