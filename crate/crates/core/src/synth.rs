//! Synthetic data and Monte Carlo harnesses.
//!
//! Every repetition draws from its own ChaCha8 stream seeded by mixing the
//! run seed with the repetition index, and results are collected in
//! repetition order. Output is therefore identical for any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::equidistant_coefficients;
use crate::error::Result;
use crate::estimators::{compensated_sum, mv_estimate, Center};
use crate::sample::{build_beta, independent_scheme, shifted_scheme, Sampling, SeriesData};

pub type SimRng = ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent generator for stream `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> SimRng {
    SimRng::seed_from_u64(splitmix64(seed ^ splitmix64(index)))
}

/// Runs `f` for each repetition in parallel and returns results in
/// repetition order.
pub fn replicate<T, F>(reps: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut SimRng) -> T + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|rep| f(rep, &mut stream_rng(seed, rep as u64)))
        .collect()
}

/// `n` draws from `N(0, σ²)`.
pub fn gaussian_noise(rng: &mut impl Rng, n: usize, sigma: f64) -> Vec<f64> {
    (0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SineSpec {
    pub period: f64,
    pub delta_t: f64,
    pub n_points: usize,
    pub sigma0: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl Default for SineSpec {
    fn default() -> Self {
        Self {
            period: 10.0,
            delta_t: 0.1,
            n_points: 1000,
            sigma0: 0.1,
            amplitude: 1.0,
            seed: 0,
        }
    }
}

fn sine_values(spec: &SineSpec, rng: &mut impl Rng) -> Vec<f64> {
    let omega = 2.0 * std::f64::consts::PI / spec.period;
    (0..spec.n_points)
        .map(|i| {
            let t = i as f64 * spec.delta_t;
            let noise = if spec.sigma0 > 0.0 {
                spec.sigma0 * rng.sample::<f64, _>(StandardNormal)
            } else {
                0.0
            };
            spec.amplitude * (omega * t).sin() + noise
        })
        .collect()
}

/// `y_i = A sin(2π t_i / P) + ε_i` at `t_i = i Δt`.
pub fn generate_sine(spec: &SineSpec) -> SeriesData {
    let mut rng = SimRng::seed_from_u64(spec.seed);
    let y = sine_values(spec, &mut rng);
    let t = (0..spec.n_points)
        .map(|i| i as f64 * spec.delta_t)
        .collect();
    SeriesData::with_positions(t, y).expect("grid is increasing")
}

/// Parameters of the sine benchmark grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineTableConfig {
    /// Samples per period, `P / Δt`.
    pub samples_per_period: Vec<f64>,
    pub orders: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub n_points: usize,
    pub delta_t: f64,
    pub sigma0: f64,
    /// Default 2.0, a signal-to-noise amplitude ratio of 20 at `σ₀ = 0.1`:
    /// the regime in which [`SINE_TABLE_PERIODS`] was benchmarked.
    pub amplitude: f64,
}

/// Samples per period of the reference benchmark.
pub const SINE_TABLE_PERIODS: [f64; 10] =
    [200.0, 100.0, 50.0, 25.0, 12.5, 10.0, 9.0, 8.0, 7.0, 6.0];

impl Default for SineTableConfig {
    fn default() -> Self {
        Self {
            samples_per_period: SINE_TABLE_PERIODS.to_vec(),
            orders: (0..=5).collect(),
            reps: 200,
            seed: 1,
            n_points: 1000,
            delta_t: 0.1,
            sigma0: 0.1,
            amplitude: 2.0,
        }
    }
}

/// Mean relative deviation `d = (s_E - σ₀) / σ_{s_E}` per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub samples_per_period: Vec<f64>,
    pub orders: Vec<usize>,
    pub reps: usize,
    /// `deviation[period][order]`.
    pub deviation: Vec<Vec<f64>>,
}

impl DeviationReport {
    /// Whether a cell is consistent with the input to two standard errors.
    pub fn consistent(&self, period: usize, order: usize) -> bool {
        self.deviation[period][order].abs() < 2.0
    }
}

/// Shifted-subset MV estimates on noisy sines, averaged over repetitions.
/// Each repetition draws one realization per period and evaluates all
/// orders on it.
pub fn sine_deviation_table(config: &SineTableConfig) -> Result<DeviationReport> {
    let mut deviation = Vec::with_capacity(config.samples_per_period.len());
    for (p_idx, &ratio) in config.samples_per_period.iter().enumerate() {
        let spec = SineSpec {
            period: ratio * config.delta_t,
            delta_t: config.delta_t,
            n_points: config.n_points,
            sigma0: config.sigma0,
            amplitude: config.amplitude,
            seed: 0,
        };
        let per_rep: Vec<Result<Vec<f64>>> = replicate(
            config.reps,
            splitmix64(config.seed) ^ p_idx as u64,
            |_, rng| {
                let data = SeriesData::from_values(sine_values(&spec, rng));
                config
                    .orders
                    .iter()
                    .map(|&order| {
                        let s = shifted_scheme(data.len(), order, 1)?;
                        let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
                        let e = mv_estimate(&b, Center::KnownZero)?;
                        Ok((e.sigma_hat - config.sigma0) / e.stderr)
                    })
                    .collect()
            },
        );
        let per_rep: Vec<Vec<f64>> = per_rep.into_iter().collect::<Result<_>>()?;
        let row = (0..config.orders.len())
            .map(|o| compensated_sum(per_rep.iter().map(|r| r[o])) / config.reps as f64)
            .collect();
        deviation.push(row);
    }
    Ok(DeviationReport {
        samples_per_period: config.samples_per_period.clone(),
        orders: config.orders.clone(),
        reps: config.reps,
        deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub orders: Vec<usize>,
    pub values: Vec<Vec<f64>>,
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let sxx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let syy = compensated_sum(y.iter().map(|b| (b - my) * (b - my)));
    sxy / (sxx * syy).sqrt()
}

/// Pearson correlation, across repetitions, of the variance estimates
/// `ŝ_E²` obtained from shifted beta samples of different orders on the
/// same pure-noise series.
pub fn order_correlation_matrix(
    n_points: usize,
    orders: &[usize],
    reps: usize,
    seed: u64,
) -> Result<CorrelationMatrix> {
    let per_rep: Vec<Result<Vec<f64>>> = replicate(reps, seed, |_, rng| {
        let data = SeriesData::from_values(gaussian_noise(rng, n_points, 1.0));
        orders
            .iter()
            .map(|&order| {
                let s = shifted_scheme(n_points, order, 1)?;
                let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
                Ok(mv_estimate(&b, Center::KnownZero)?.sigma_hat.powi(2))
            })
            .collect()
    });
    let per_rep: Vec<Vec<f64>> = per_rep.into_iter().collect::<Result<_>>()?;
    let columns: Vec<Vec<f64>> = (0..orders.len())
        .map(|o| per_rep.iter().map(|r| r[o]).collect())
        .collect();
    let values = (0..orders.len())
        .map(|a| {
            (0..orders.len())
                .map(|b| {
                    if a == b {
                        1.0
                    } else {
                        pearson(&columns[a], &columns[b])
                    }
                })
                .collect()
        })
        .collect();
    Ok(CorrelationMatrix {
        orders: orders.to_vec(),
        values,
    })
}

/// Noise-free `y_i = (-1)^i`.
pub fn pathological_series(n_points: usize) -> SeriesData {
    SeriesData::from_values(
        (0..n_points)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    )
}

/// `2^{N+1} / √C(2N+2, N+1)`: magnitude of every beta value of the
/// alternating series for odd jumps.
pub fn pathological_beta_magnitude(order: usize) -> Result<f64> {
    let c = equidistant_coefficients(order)?;
    Ok(2f64.powi(order as i32 + 1) / c.normalization().sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathologicalRow {
    pub order: usize,
    pub analytic: f64,
    /// `max |β|` for jump 1.
    pub odd_jump: f64,
    /// `max |β|` for jump 2.
    pub even_jump: f64,
    /// `ŝ_E²` for jump 1.
    pub variance: f64,
}

pub fn pathological_table(n_points: usize, max_order: usize) -> Result<Vec<PathologicalRow>> {
    let data = pathological_series(n_points);
    (0..=max_order)
        .map(|order| {
            let max_abs = |jump| -> Result<f64> {
                let s = shifted_scheme(n_points, order, jump)?;
                let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
                Ok(b.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            };
            let s = shifted_scheme(n_points, order, 1)?;
            let b = build_beta(&data, &s, Sampling::AssumeEquidistant)?;
            Ok(PathologicalRow {
                order,
                analytic: pathological_beta_magnitude(order)?,
                odd_jump: max_abs(1)?,
                even_jump: max_abs(2)?,
                variance: mv_estimate(&b, Center::KnownZero)?.sigma_hat.powi(2),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyPoint {
    pub order: usize,
    /// `3σ⁴/n` over the variance of `ŝ_E²` from shifted subsets.
    pub shifted: f64,
    /// `3σ⁴/n` over the variance of `ŝ_E²` from independent subsets.
    pub independent: f64,
}

/// Efficiency of `ŝ_E²` relative to the zeroth-order shifted optimum
/// `3σ⁴/n`, in the large-sample limit where `n` cancels.
///
/// Shifted samples keep `≈ n` values with correlation `ρ_s`, giving
/// `V = 2σ⁴/n (1 + 2Σρ²)`; independent samples have `n/(N+2)` uncorrelated
/// values, giving `V = 2σ⁴ (N+2)/n`.
pub fn efficiency_curve(orders: &[usize]) -> Result<Vec<EfficiencyPoint>> {
    orders
        .iter()
        .map(|&order| {
            let rho = equidistant_coefficients(order)?.lag_correlations();
            let correlated = 1.0 + 2.0 * compensated_sum(rho.iter().map(|r| r * r));
            Ok(EfficiencyPoint {
                order,
                shifted: 1.5 / correlated,
                independent: 1.5 / (order + 2) as f64,
            })
        })
        .collect()
}

/// Draws pure-noise beta samples of the requested layout, for calibration
/// runs: `n_points` Gaussian values turned into a zeroth-order sample.
pub fn noise_beta_sample(
    rng: &mut impl Rng,
    n_points: usize,
    sigma: f64,
    shifted: bool,
) -> Result<crate::sample::BetaSample> {
    let data = SeriesData::from_values(gaussian_noise(rng, n_points, sigma));
    let s = if shifted {
        shifted_scheme(n_points, 0, 1)?
    } else {
        independent_scheme(n_points, 0, 1)?
    };
    build_beta(&data, &s, Sampling::AssumeEquidistant)
}

/// Plain-text rendering of a deviation grid, periods as rows.
pub fn format_deviation_table(report: &DeviationReport) -> String {
    let mut out = String::from("P/dt");
    for o in &report.orders {
        out.push_str(&format!("\t{o}"));
    }
    out.push('\n');
    for (p, row) in report.samples_per_period.iter().zip(&report.deviation) {
        out.push_str(&format!("{p:.1}"));
        for d in row {
            let mark = if d.abs() < 2.0 { ' ' } else { '*' };
            out.push_str(&format!("\t{d:.2}{mark}"));
        }
        out.push('\n');
    }
    out
}

/// Upper triangle of the correlation matrix.
pub fn format_correlation_matrix(m: &CorrelationMatrix) -> String {
    let mut out = String::from("N");
    for o in &m.orders {
        out.push_str(&format!("\t{o}"));
    }
    out.push('\n');
    for (a, row) in m.values.iter().enumerate() {
        out.push_str(&m.orders[a].to_string());
        for (b, v) in row.iter().enumerate() {
            if b < a {
                out.push('\t');
            } else {
                out.push_str(&format!("\t{v:.3}"));
            }
        }
        out.push('\n');
    }
    out
}

pub fn format_efficiency(points: &[EfficiencyPoint]) -> String {
    let mut out = String::from("N\tshifted\tindependent\n");
    for p in points {
        out.push_str(&format!(
            "{}\t{:.6}\t{:.6}\n",
            p.order, p.shifted, p.independent
        ));
    }
    out
}

pub fn format_pathological(rows: &[PathologicalRow]) -> String {
    let mut out = String::from("N\tanalytic\todd_jump\teven_jump\ts_E^2\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{:.12}\t{:.12}\t{:.1}\t{:.12}\n",
            r.order, r.analytic, r.odd_jump, r.even_jump, r.variance
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_without_noise() {
        let spec = SineSpec {
            period: 0.4,
            delta_t: 0.1,
            n_points: 8,
            sigma0: 0.0,
            ..Default::default()
        };
        let data = generate_sine(&spec);
        assert!((data.values()[1] - 1.0).abs() < 1e-15);
        assert!((data.values()[3] + 1.0).abs() < 1e-15);
        assert!((data.positions().unwrap()[5] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sine_is_seeded() {
        let spec = SineSpec {
            seed: 42,
            ..Default::default()
        };
        assert_eq!(generate_sine(&spec), generate_sine(&spec));
        let other = SineSpec { seed: 43, ..spec };
        assert_ne!(generate_sine(&spec), generate_sine(&other));
    }

    #[test]
    fn replicate_is_ordered_and_reproducible() {
        let a = replicate(64, 9, |rep, rng| (rep, rng.random::<u64>()));
        let b = replicate(64, 9, |rep, rng| (rep, rng.random::<u64>()));
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, (rep, _))| i == *rep));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| replicate(64, 9, |rep, rng| (rep, rng.random::<u64>())));
        assert_eq!(a, c);
    }

    #[test]
    fn pathological_small() {
        assert_eq!(pathological_series(4).values(), &[1.0, -1.0, 1.0, -1.0]);
        assert!((pathological_beta_magnitude(0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn efficiency_reference_point() {
        let pts = efficiency_curve(&[0, 1, 2]).unwrap();
        assert_eq!(pts[0].shifted, 1.0);
        assert!((pts[0].independent / pts[2].independent - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_identities() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [2.0, 4.0, 6.0, 8.5];
        assert!((pearson(&x, &x) - 1.0).abs() < 1e-15);
        assert!(pearson(&x, &y) > 0.99);
        let z: Vec<f64> = y.iter().map(|v| -v).collect();
        assert!((pearson(&x, &z) + pearson(&x, &y)).abs() < 1e-15);
    }
}
