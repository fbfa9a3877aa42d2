use betasigma::synth::{format_correlation_matrix, order_correlation_matrix};

fn main() -> betasigma::Result<()> {
    let reps = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1000);
    let m = order_correlation_matrix(1000, &[0, 1, 2, 3, 4], reps, 1)?;
    println!("correlation of s_E^2 between orders, {reps} repetitions");
    print!("{}", format_correlation_matrix(&m));
    Ok(())
}
