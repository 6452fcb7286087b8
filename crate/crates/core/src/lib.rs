//! Hyperbolic-secant distributions and three settings in which they arise.
//!
//! - [`hs`]: the HS location–scale family (density, CDF, quantile, MGF, CF,
//!   sampling through the Cauchy representation) and the unit-variance
//!   Normal/Logistic comparison densities.
//! - [`sum`]: sums of iid HS variables, in closed form for two summands and by
//!   characteristic-function inversion beyond.
//! - [`occurrences`]: simulators for the twin intraclass correlation, the
//!   Jeffreys-prior log odds ratio and the invalid instrumental variable, each
//!   with its analytic target law.
//! - [`stats`]: ECDF, Kolmogorov–Smirnov tests, moments, QQ and histograms.
//! - [`rng`]: counter-based streams whose output does not depend on thread count.
//!
//! ```
//! use hsdist::{HsDistribution, RngStream};
//!
//! let hs = HsDistribution::standard();
//! assert_eq!(hs.pdf(0.0).unwrap(), 0.5);
//! let batch = hs.sample(&mut RngStream::new(42, 0), 1000).unwrap();
//! assert_eq!(batch.len(), 1000);
//! ```

// `!(x < y)` is how NaN parameters get rejected; quadrature constants are tabulated
// at full published precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod format;
pub mod hs;
pub mod occurrences;
pub mod quadrature;
pub mod rng;
pub mod stats;
pub mod sum;

pub use error::{Error, Result};
pub use hs::{comparison_pdf, standard_cauchy_draw, CauchyMethod, ComparisonFamily, HsDistribution};
pub use occurrences::{ContingencyScheme, IvScenario, TwinModel};
pub use rng::RngStream;
pub use stats::{Alpha, GofReport, SampleBatch};
pub use sum::{cf_inversion_pdf, HsSumDistribution};
