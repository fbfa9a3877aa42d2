//! The alternating series (-1)^i: no order removes it with odd jumps, and
//! even jumps see a constant.

use betasigma::synth::{format_pathological, pathological_series, pathological_table};
use betasigma::{auto_select, AutoSelectConfig};

fn main() -> betasigma::Result<()> {
    print!("{}", format_pathological(&pathological_table(1000, 8)?));
    let r = auto_select(&pathological_series(1000), &AutoSelectConfig::default())?;
    for step in &r.trace {
        println!(
            "N={:<2} j={:<2} sigma={:.4} -> {:?}",
            step.order, step.jump, step.base.sigma_hat, step.decision
        );
    }
    println!("converged: {}", r.converged);
    Ok(())
}
