//! Mean deviation of the shifted MV estimate from the input noise on
//! sampled sines; `*` marks cells off by two standard errors or more.
//! Pass the number of repetitions as the first argument (default 50).

use betasigma::synth::{format_deviation_table, sine_deviation_table, SineTableConfig};

fn main() -> betasigma::Result<()> {
    let reps = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    let config = SineTableConfig {
        reps,
        ..Default::default()
    };
    print!(
        "{}",
        format_deviation_table(&sine_deviation_table(&config)?)
    );
    Ok(())
}
