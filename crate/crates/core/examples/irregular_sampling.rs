//! Weights solved per tuple for randomly spaced sample positions.

use betasigma::synth::{gaussian_noise, SimRng};
use betasigma::{arbitrary_coefficients, build_beta, estimate, scheme};
use betasigma::{Center, EstimatorFamily, Sampling, SchemeMode, SeriesData};
use rand::{Rng, SeedableRng};

fn main() -> betasigma::Result<()> {
    let c = arbitrary_coefficients(&[0.0, 0.4, 1.5, 1.7], 2)?;
    println!("weights for t = [0, 0.4, 1.5, 1.7]: {:?}", c.coeffs());

    let mut rng = SimRng::seed_from_u64(3);
    let n = 5000;
    let mut t: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 100.0).collect();
    t.sort_by(f64::total_cmp);
    let noise = gaussian_noise(&mut rng, n, 0.05);
    let y: Vec<f64> = t
        .iter()
        .zip(&noise)
        .map(|(x, e)| (x / 7.0).sin() + 0.01 * x + e)
        .collect();
    let data = SeriesData::with_positions(t, y)?;

    for sampling in [Sampling::AssumeEquidistant, Sampling::UsePositions] {
        let s = scheme(SchemeMode::Independent, n, 2, 1)?;
        let b = build_beta(&data, &s, sampling)?;
        let e = estimate(&b, EstimatorFamily::Mv, Center::KnownZero)?;
        println!(
            "{sampling:?}: sigma = {:.4} ± {:.4} (true 0.05)",
            e.sigma_hat, e.stderr
        );
    }
    Ok(())
}
