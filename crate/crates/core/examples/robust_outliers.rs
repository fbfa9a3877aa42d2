//! Cosmic-ray hits: isolated spikes bias the mean-square estimate but barely
//! move the median-based one.

use betasigma::synth::{gaussian_noise, SimRng};
use betasigma::{
    build_beta, estimate, scheme, Center, EstimatorFamily, Sampling, SchemeMode, SeriesData,
};
use rand::{Rng, SeedableRng};

fn main() -> betasigma::Result<()> {
    let n = 20_000;
    let mut rng = SimRng::seed_from_u64(5);
    let mut y: Vec<f64> = gaussian_noise(&mut rng, n, 1.0);
    for _ in 0..n / 100 {
        let i = rng.random_range(0..n);
        y[i] += 500.0;
    }
    let data = SeriesData::from_values(y);
    let s = scheme(SchemeMode::Independent, n, 1, 1)?;
    let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
    for family in [EstimatorFamily::Mv, EstimatorFamily::Robust] {
        for center in [Center::KnownZero, Center::Sample] {
            let e = estimate(&b, family, center)?;
            println!("{:?}: {:.4} ± {:.4}", e.estimator, e.sigma_hat, e.stderr);
        }
    }
    Ok(())
}
