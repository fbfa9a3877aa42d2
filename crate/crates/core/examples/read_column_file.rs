//! Reads a one- or two-column file and prints the estimate as JSON and TSV.
//!
//!     cargo run --example read_column_file -- path/to/series.dat

use betasigma::io::{
    read_series, write_result, ColumnFormat, OutputFormat, ResultRecord, TSV_HEADER,
};
use betasigma::{build_beta, estimate, scheme, Center, EstimatorFamily, Sampling, SchemeMode};

fn main() -> betasigma::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            let p = std::env::temp_dir().join("betasigma_example.csv");
            let body: String = (0..500)
                .map(|i| {
                    format!(
                        "{},{}\n",
                        i as f64 * 0.1,
                        10.0 + (i as f64 * 0.05).sin() + 0.01 * ((i * 37 % 11) as f64 - 5.0)
                    )
                })
                .collect();
            std::fs::write(&p, format!("time,flux\n{body}")).map_err(|e| betasigma::Error::Io {
                path: p.clone(),
                message: e.to_string(),
            })?;
            p
        }
    };
    let (data, report) = read_series(&path, ColumnFormat::Auto, None)?;
    println!(
        "{}: {} rows, {} dropped, sampling {:?}",
        path.display(),
        report.rows_read,
        report.rows_dropped,
        report.inferred_sampling
    );
    let s = scheme(SchemeMode::Shifted, data.len(), 1, 2)?;
    let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
    let rec =
        ResultRecord::from_estimate(&estimate(&b, EstimatorFamily::Robust, Center::KnownZero)?)
            .with_snr(&data);
    println!("{}", write_result(&rec, OutputFormat::Json));
    println!("{TSV_HEADER}\n{}", write_result(&rec, OutputFormat::Tsv));
    Ok(())
}
