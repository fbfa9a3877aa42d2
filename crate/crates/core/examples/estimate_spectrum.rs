//! Noise level of a synthetic absorption spectrum with the default
//! configuration (first order, jump two, shifted subsets, robust scale).

use betasigma::synth::{gaussian_noise, SimRng};
use betasigma::{
    build_beta, estimate, scheme, Center, EstimatorFamily, Sampling, SchemeMode, SeriesData,
};
use rand::SeedableRng;

fn main() -> betasigma::Result<()> {
    let n = 4000;
    let sigma = 0.02;
    let mut rng = SimRng::seed_from_u64(7);
    let noise = gaussian_noise(&mut rng, n, sigma);
    let flux: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64;
            let line = |c: f64, w: f64, d: f64| d * (-(x - c).powi(2) / (2.0 * w * w)).exp();
            1.0 - line(900.0, 12.0, 0.6) - line(2300.0, 30.0, 0.3) - line(3100.0, 8.0, 0.8)
                + noise[i]
        })
        .collect();
    let data = SeriesData::from_values(flux);

    for order in 0..=3 {
        let s = scheme(SchemeMode::Shifted, n, order, 2)?;
        let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
        let e = estimate(&b, EstimatorFamily::Robust, Center::KnownZero)?;
        println!(
            "N={order}  sigma = {:.5} ± {:.5}  (true {sigma})",
            e.sigma_hat, e.stderr
        );
    }
    Ok(())
}
