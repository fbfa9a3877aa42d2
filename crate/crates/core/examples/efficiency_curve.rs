use betasigma::coefficients::equidistant_coefficients;
use betasigma::synth::{efficiency_curve, format_efficiency};

fn main() -> betasigma::Result<()> {
    let orders: Vec<usize> = (0..=10).collect();
    print!("{}", format_efficiency(&efficiency_curve(&orders)?));
    let c = equidistant_coefficients(2)?;
    println!(
        "\nN=2 weights {:?}, lag correlations {:?}",
        c.coeffs(),
        c.lag_correlations()
    );
    Ok(())
}
