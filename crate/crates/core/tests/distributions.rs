use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use hsdist::quadrature::integrate;
use hsdist::stats::{ks_two_sample, median, sample_moments};
use hsdist::{
    cf_inversion_pdf, comparison_pdf, standard_cauchy_draw, Alpha, CauchyMethod, ComparisonFamily, Error,
    HsDistribution, HsSumDistribution, RngStream,
};

fn std_hs() -> HsDistribution {
    HsDistribution::standard()
}

#[test]
fn pdf_reference_values() {
    assert_eq!(std_hs().pdf(0.0).unwrap(), 0.5);
    // 1 / (e^{pi/2} + e^{-pi/2}), evaluated to 30 digits with mpmath
    assert_relative_eq!(std_hs().pdf(1.0).unwrap(), 0.199_268_407_669_193_34, max_relative = 1e-14);
    let v = HsDistribution::new(2.0, FRAC_PI_2).unwrap();
    assert_relative_eq!(v.pdf(2.0).unwrap(), 1.0 / PI, max_relative = 1e-15);
    assert!(matches!(std_hs().pdf(f64::NAN), Err(Error::NonFinite(_))));
}

#[test]
fn pdf_matches_cf_inversion_by_quadrature() {
    // f(y) = (1/pi) int_0^inf cos(t y) sech(t) dt, independent of the closed form
    for y in [0.0, 0.3, 1.0, 2.5] {
        let direct = integrate(|t| (t * y).cos() / t.cosh(), 0.0, 60.0, 1e-13, 0.0).value / PI;
        assert!((direct - std_hs().pdf(y).unwrap()).abs() < 1e-11, "y = {y}");
    }
}

#[test]
fn cdf_and_quantile_reference_values() {
    let d = std_hs();
    assert_eq!(d.cdf(0.0).unwrap(), 0.5);
    assert_eq!(d.cdf(f64::INFINITY).unwrap(), 1.0);
    let brute = integrate(|y| d.pdf_unchecked(y), -60.0, 0.5611, 1e-14, 0.0).value;
    assert!((brute - 0.75).abs() < 1e-6);
    assert!((d.cdf(0.5611).unwrap() - brute).abs() < 1e-12);

    assert_eq!(d.quantile(0.5).unwrap(), 0.0);
    assert_relative_eq!(d.quantile(0.75).unwrap(), 0.561_099_852_339_180_1, max_relative = 1e-12);
    assert_eq!(HsDistribution::new(3.0, 2.0).unwrap().quantile(0.5).unwrap(), 3.0);
    assert!(matches!(d.quantile(1.0), Err(Error::Domain(_))));
}

#[test]
fn mgf_and_cf_match_numeric_integrals() {
    let d = std_hs();
    assert_eq!(d.mgf(0.0).unwrap(), 1.0);
    assert_relative_eq!(d.mgf(1.0).unwrap(), 1.850_815_717_680_925_6, max_relative = 1e-14);
    assert_relative_eq!(d.cf(1.0).unwrap().re, 0.648_054_273_663_885_4, max_relative = 1e-14);
    assert_eq!(d.cf(1.0).unwrap().im, 0.0);
    let mgf = integrate(|y| y.exp() * d.pdf_unchecked(y), -80.0, 80.0, 1e-12, 1e-13).value;
    assert!((mgf - 1.0f64.cos().recip()).abs() < 1e-9);
    let cf = integrate(|y| y.cos() * d.pdf_unchecked(y), -80.0, 80.0, 1e-13, 0.0).value;
    assert!((cf - 1.0 / 1.0f64.cosh()).abs() < 1e-11);
    assert!(d.mgf(FRAC_PI_2).is_err());
    // no domain restriction on the CF; sech(1000) underflows cleanly
    assert_eq!(d.cf(1e3).unwrap().re, 0.0);
}

#[test]
fn location_shift_moves_the_cf_phase() {
    let d = HsDistribution::new(0.7, 1.3).unwrap();
    let c = d.cf(0.9).unwrap();
    assert_relative_eq!(c.arg(), 0.7 * 0.9, max_relative = 1e-14);
    assert_relative_eq!(c.norm(), 1.0 / (1.3f64 * 0.9).cosh(), max_relative = 1e-14);
}

#[test]
fn comparison_densities() {
    assert_eq!(comparison_pdf(ComparisonFamily::Hs, 0.0).unwrap(), 0.5);
    assert_relative_eq!(
        comparison_pdf(ComparisonFamily::Logistic, 0.0).unwrap(),
        PI / (4.0 * 3f64.sqrt()),
        max_relative = 1e-15
    );
    assert_relative_eq!(
        comparison_pdf(ComparisonFamily::Normal, 0.0).unwrap(),
        1.0 / (2.0 * PI).sqrt(),
        max_relative = 1e-15
    );
    for y in [0.0, 4.0] {
        let hs = comparison_pdf(ComparisonFamily::Hs, y).unwrap();
        let lo = comparison_pdf(ComparisonFamily::Logistic, y).unwrap();
        let no = comparison_pdf(ComparisonFamily::Normal, y).unwrap();
        assert!(hs > lo && lo > no, "ordering at y = {y}");
    }
}

#[test]
fn comparison_densities_have_unit_variance() {
    // unit panels, so no adaptive rule can step over the peak of a narrow integrand
    let over_panels = |f: &dyn Fn(f64) -> f64| -> f64 {
        (-60..60).map(|k| integrate(f, k as f64, k as f64 + 1.0, 1e-15, 0.0).value).sum()
    };
    for family in ComparisonFamily::ALL {
        let mass = over_panels(&|y| comparison_pdf(family, y).unwrap());
        let second = over_panels(&|y| y * y * comparison_pdf(family, y).unwrap());
        assert!((mass - 1.0).abs() < 1e-10, "{}", family.name());
        assert!((second - 1.0).abs() < 1e-8, "{}: {second}", family.name());
    }
}

#[test]
fn sample_moments_at_one_million() {
    let batch = std_hs().sample(&mut RngStream::new(2024, 0), 1_000_000).unwrap();
    let m = sample_moments(&batch).unwrap();
    assert!(m.mean.abs() <= 0.005, "mean {}", m.mean);
    assert!((0.99..=1.01).contains(&m.variance), "variance {}", m.variance);
}

#[test]
fn sampling_is_reproducible() {
    let a = std_hs().sample(&mut RngStream::new(42, 0), 3).unwrap();
    let b = std_hs().sample(&mut RngStream::new(42, 0), 3).unwrap();
    let bits = |s: &hsdist::SampleBatch| s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.seed(), 42);
    assert_eq!(a.stream_id(), 0);
}

#[test]
fn cauchy_draws() {
    for method in [CauchyMethod::InverseTransform, CauchyMethod::NormalRatio] {
        let mut rng = RngStream::new(5, 1);
        let xs: Vec<f64> = (0..100_000).map(|_| standard_cauchy_draw(&mut rng, method).0).collect();
        assert!(median(&xs).abs() <= 0.02, "{method:?}");
        let inside = xs.iter().filter(|x| x.abs() <= 1.0).count() as f64 / xs.len() as f64;
        assert!((0.49..=0.51).contains(&inside), "{method:?}: {inside}");
    }
}

#[test]
fn both_cauchy_constructions_give_the_same_hs_law() {
    let d = std_hs();
    let a = d.sample_with(&mut RngStream::new(11, 0), 100_000, CauchyMethod::InverseTransform).unwrap();
    let b = d.sample_with(&mut RngStream::new(11, 1), 100_000, CauchyMethod::NormalRatio).unwrap();
    assert!(ks_two_sample(&a, &b, Alpha::OnePercent).unwrap().passed);
}

#[test]
fn sum_density_reference_values() {
    let w = HsSumDistribution::new(2, PI).unwrap();
    assert_relative_eq!(w.pdf(0.0).unwrap(), 1.0 / (PI * PI), max_relative = 1e-15);
    let e = 1f64.exp();
    let closed = 2.0 / (PI * PI * (e - 1.0 / e));
    assert_relative_eq!(w.pdf(2.0).unwrap(), closed, max_relative = 1e-14);
    assert_relative_eq!(closed, 0.086_216_031_935_930_62, max_relative = 1e-14);
    assert!((cf_inversion_pdf(2, PI, 2.0).unwrap() - closed).abs() < 1e-8);
    assert_eq!(HsSumDistribution::new(1, 1.0).unwrap().pdf(0.0).unwrap(), 0.5);
    assert!((cf_inversion_pdf(1, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-8);
}

#[test]
fn sum_cdf_and_quantile() {
    let w = HsSumDistribution::new(2, PI).unwrap();
    assert!((w.cdf(0.0).unwrap() - 0.5).abs() < 1e-14);
    assert!((w.cdf(200.0).unwrap() - 1.0).abs() < 1e-12);
    assert!(w.quantile(0.5).unwrap().abs() < 1e-10);
    assert!(matches!(w.quantile(0.0), Err(Error::Domain(_))));
    for n in [1, 2, 3, 5] {
        let d = HsSumDistribution::new(n, 1.3).unwrap();
        for p in [1e-6, 0.025, 0.3, 0.9, 0.999] {
            let q = d.quantile(p).unwrap();
            assert!((d.cdf(q).unwrap() - p).abs() < 1e-9, "n = {n}, p = {p}");
        }
    }
}

#[test]
fn sum_density_is_a_convolution() {
    let hs = std_hs();
    let two = HsSumDistribution::new(2, 1.0).unwrap();
    let three = HsSumDistribution::new(3, 1.0).unwrap();
    for x in [0.0, 0.8, 2.0, 5.0] {
        let conv2 = integrate(|y| hs.pdf_unchecked(y) * hs.pdf_unchecked(x - y), -60.0, 60.0, 1e-14, 0.0).value;
        assert!((conv2 - two.pdf(x).unwrap()).abs() < 1e-11, "n = 2, x = {x}");
        let conv3 = integrate(|y| two.pdf_unchecked(y) * hs.pdf_unchecked(x - y), -60.0, 60.0, 1e-14, 0.0).value;
        assert!((conv3 - three.pdf(x).unwrap()).abs() < 1e-9, "n = 3, x = {x}");
    }
}

#[test]
fn sum_variance_by_quadrature() {
    for n in [1, 2, 3] {
        let d = HsSumDistribution::new(n, 1.5).unwrap();
        let v = integrate(|x| x * x * d.pdf_unchecked(x), -120.0, 120.0, 1e-10, 1e-12).value;
        assert!((v - d.variance()).abs() < 1e-7, "n = {n}: {v}");
        assert_relative_eq!(d.variance(), n as f64 * 2.25, max_relative = 1e-15);
    }
}

#[test]
fn four_summands_normalise() {
    let mass = integrate(|x| cf_inversion_pdf(4, 1.0, x).unwrap(), -80.0, 80.0, 1e-10, 0.0).value;
    assert!((mass - 1.0).abs() < 1e-6, "{mass}");
}

#[test]
fn jeffreys_scale_sum_sampling() {
    let w = HsSumDistribution::new(2, PI).unwrap();
    let batch = w.sample(&mut RngStream::new(77, 0), 1_000_000).unwrap();
    let m = sample_moments(&batch).unwrap();
    assert!((m.variance - 19.74).abs() <= 0.02 * 19.74, "{}", m.variance);
    assert!(m.mean.abs() <= 0.03, "{}", m.mean);
}
