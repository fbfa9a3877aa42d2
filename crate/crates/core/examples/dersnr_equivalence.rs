use betasigma::synth::{gaussian_noise, SimRng};
use betasigma::{build_beta, der_snr, der_snr_sigma, estimate, scheme};
use betasigma::{Center, EstimatorFamily, Sampling, SchemeMode, SeriesData};
use rand::SeedableRng;

fn main() -> betasigma::Result<()> {
    let mut rng = SimRng::seed_from_u64(11);
    let y: Vec<f64> = gaussian_noise(&mut rng, 2048, 0.5)
        .into_iter()
        .enumerate()
        .map(|(i, e)| 40.0 + 3.0 * (i as f64 / 90.0).cos() + e)
        .collect();

    let classic = der_snr_sigma(&y)?;
    let s = scheme(SchemeMode::Shifted, y.len(), 1, 2)?;
    let b = build_beta(
        &SeriesData::from_values(y.clone()),
        &s,
        Sampling::AssumeEquidistant,
    )?;
    let beta = estimate(&b, EstimatorFamily::Robust, Center::KnownZero)?.sigma_hat;

    println!("DER_SNR noise       {classic:.12}");
    println!("beta-sigma (1, 2)   {beta:.12}");
    println!(
        "relative difference {:.1e}",
        (beta - classic).abs() / classic
    );
    println!("SNR                 {:.2}", der_snr(&y)?);
    Ok(())
}
