//! Scale estimators for beta samples.
//!
//! The beta values have known mean and median zero, so every estimator comes
//! in two flavours: centred on the known zero or on the sample's own
//! location.
//!
//! | kind | centre | formula |
//! |------|--------|---------|
//! | [`Estimator::Mv`] | 0 | `√(Σβ²/n)` |
//! | [`Estimator::MvMean`] | mean | `√(Σ(β-β̄)²/(n-1))` |
//! | [`Estimator::Robust`] | 0 | `k · med|β|` |
//! | [`Estimator::RobustMedianCentered`] | median | `k · med|β - med β|` |
//!
//! Standard errors propagate `V(s²) = 2σ⁴/n (1 + 2 Σ ρ_s²)` to the standard
//! deviation, `σ_s = √(V / 4s²)`. Robust standard errors scale that variance
//! by [`ROBUST_VARIANCE_FACTOR`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{BetaSample, SchemeMode};

/// `1 / Φ⁻¹(3/4)`: makes the median absolute deviation a consistent
/// estimator of a Gaussian standard deviation.
pub const MAD_SCALE: f64 = 1.482_602_218_505_6;

/// Variance of the MAD-based estimate relative to the minimum-variance one
/// for Gaussian samples (asymptotic efficiency of about 37%).
pub const ROBUST_VARIANCE_FACTOR: f64 = 2.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Root mean square about the known zero mean.
    Mv,
    /// Sample standard deviation about the sample mean.
    MvMean,
    /// Scaled median of absolute values.
    Robust,
    /// Scaled median absolute deviation about the sample median.
    RobustMedianCentered,
}

impl Estimator {
    pub fn is_robust(self) -> bool {
        matches!(self, Self::Robust | Self::RobustMedianCentered)
    }
}

/// Family selector used by the higher-level configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorFamily {
    Mv,
    Robust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    /// Use the known location zero of the beta distribution.
    KnownZero,
    /// Estimate the location from the sample (mean or median).
    Sample,
}

impl EstimatorFamily {
    pub fn estimator(self, center: Center) -> Estimator {
        match (self, center) {
            (Self::Mv, Center::KnownZero) => Estimator::Mv,
            (Self::Mv, Center::Sample) => Estimator::MvMean,
            (Self::Robust, Center::KnownZero) => Estimator::Robust,
            (Self::Robust, Center::Sample) => Estimator::RobustMedianCentered,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateFlags {
    /// All deviations vanished; the standard error is reported as zero.
    pub degenerate: bool,
    /// Standard error obtained by scaling the minimum-variance one.
    pub approximate_stderr: bool,
    /// Overlapping subsets with per-subset weights: the correlation term is
    /// unknown and omitted, so the standard error is too small.
    pub correlation_ignored: bool,
}

impl EstimateFlags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.degenerate {
            out.push("degenerate");
        }
        if self.approximate_stderr {
            out.push("approximate_stderr");
        }
        if self.correlation_ignored {
            out.push("correlation_ignored");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub sigma_hat: f64,
    pub stderr: f64,
    pub estimator: Estimator,
    pub order: usize,
    pub jump: usize,
    pub mode: SchemeMode,
    pub n_beta: usize,
    pub flags: EstimateFlags,
}

impl NoiseEstimate {
    /// `[σ̂ - c·stderr, σ̂ + c·stderr]`.
    pub fn interval(&self, sigmas: f64) -> (f64, f64) {
        (
            self.sigma_hat - sigmas * self.stderr,
            self.sigma_hat + sigmas * self.stderr,
        )
    }

    /// Whether the two `sigmas`-wide confidence intervals overlap.
    pub fn consistent_with(&self, other: &NoiseEstimate, sigmas: f64) -> bool {
        (self.sigma_hat - other.sigma_hat).abs() <= sigmas * (self.stderr + other.stderr)
    }
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Median with the mean of the two central values for even lengths.
/// Reorders `values`.
pub fn median_in_place(values: &mut [f64]) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        Some(upper)
    } else {
        let lower_max = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(0.5 * (lower_max + upper))
    }
}

/// Median of a slice (copies).
pub fn median(values: &[f64]) -> Option<f64> {
    median_in_place(&mut values.to_vec())
}

fn correlation_term(rho: &[f64]) -> f64 {
    1.0 + 2.0 * compensated_sum(rho.iter().map(|r| r * r))
}

/// `√(V(s²) / 4s²)` with the large-sample variance `2σ⁴/n (1 + 2Σρ²)`,
/// evaluated at the estimate itself.
fn mv_stderr(sigma_hat: f64, n: usize, rho: &[f64]) -> f64 {
    sigma_hat * (correlation_term(rho) / (2.0 * n as f64)).sqrt()
}

fn finish(
    sample: &BetaSample,
    estimator: Estimator,
    sigma_hat: f64,
    mut stderr: f64,
    degenerate: bool,
) -> NoiseEstimate {
    let robust = estimator.is_robust();
    if robust {
        stderr *= ROBUST_VARIANCE_FACTOR.sqrt();
    }
    let scheme = sample.scheme();
    NoiseEstimate {
        sigma_hat,
        stderr,
        estimator,
        order: scheme.order(),
        jump: scheme.jump(),
        mode: scheme.mode(),
        n_beta: sample.len(),
        flags: EstimateFlags {
            degenerate,
            approximate_stderr: robust,
            correlation_ignored: sample.correlation_unknown(),
        },
    }
}

/// Minimum-variance estimate: `ŝ_E` about zero or `ŝ` about the mean.
pub fn mv_estimate(sample: &BetaSample, center: Center) -> Result<NoiseEstimate> {
    let beta = sample.values();
    let n = beta.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if n < 2 {
        return Err(Error::SampleTooSmall { needed: 2, got: n });
    }
    let (estimator, variance) = match center {
        Center::KnownZero => (
            Estimator::Mv,
            compensated_sum(beta.iter().map(|b| b * b)) / n as f64,
        ),
        Center::Sample => {
            let mean = compensated_sum(beta.iter().copied()) / n as f64;
            let ss = compensated_sum(beta.iter().map(|b| (b - mean) * (b - mean)));
            (Estimator::MvMean, ss / (n - 1) as f64)
        }
    };
    let sigma_hat = variance.sqrt();
    let stderr = mv_stderr(sigma_hat, n, sample.rho());
    Ok(finish(
        sample,
        estimator,
        sigma_hat,
        stderr,
        sigma_hat == 0.0,
    ))
}

/// Robust estimate: `k · med|β|` about zero or the MAD about the median.
pub fn robust_estimate(sample: &BetaSample, center: Center) -> Result<NoiseEstimate> {
    let beta = sample.values();
    let n = beta.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut work = beta.to_vec();
    let estimator = match center {
        Center::KnownZero => {
            work.iter_mut().for_each(|b| *b = b.abs());
            Estimator::Robust
        }
        Center::Sample => {
            let med = median_in_place(&mut work).expect("non-empty");
            work.iter_mut().for_each(|b| *b = (*b - med).abs());
            Estimator::RobustMedianCentered
        }
    };
    let sigma_hat = MAD_SCALE * median_in_place(&mut work).expect("non-empty");
    let stderr = mv_stderr(sigma_hat, n, sample.rho());
    Ok(finish(
        sample,
        estimator,
        sigma_hat,
        stderr,
        sigma_hat == 0.0,
    ))
}

/// Dispatches to [`mv_estimate`] or [`robust_estimate`].
pub fn estimate(
    sample: &BetaSample,
    family: EstimatorFamily,
    center: Center,
) -> Result<NoiseEstimate> {
    match family {
        EstimatorFamily::Mv => mv_estimate(sample, center),
        EstimatorFamily::Robust => robust_estimate(sample, center),
    }
}

/// `E[ŝ_E] / σ` for `n` independent Gaussian values:
/// `√(2/n) Γ(n/2) / Γ((n-1)/2)`.
///
/// Not applied by the estimators; `1 - 3/(4n)` is a good approximation.
pub fn expected_small_sample_bias(n: usize) -> f64 {
    assert!(n >= 2, "bias defined for n >= 2");
    let nf = n as f64;
    let log_ratio = libm::lgamma(nf / 2.0) - libm::lgamma((nf - 1.0) / 2.0);
    (2.0 / nf).sqrt() * log_ratio.exp()
}

/// Exact variance of `ŝ_E²` for a stationary sample of size `n` with lag
/// correlations `rho[s - 1]`: `2σ⁴/n + 4σ⁴/n² Σ (n - s) ρ_s²`.
pub fn estimator_variance(sigma: f64, n: usize, rho: &[f64]) -> f64 {
    let nf = n as f64;
    let s4 = sigma.powi(4);
    let tail = compensated_sum(
        rho.iter()
            .enumerate()
            .map(|(i, r)| (nf - (i + 1) as f64).max(0.0) * r * r),
    );
    2.0 * s4 / nf + 4.0 * s4 / (nf * nf) * tail
}

/// Large-sample form `2σ⁴/n (1 + 2 Σ ρ_s²)` of [`estimator_variance`].
pub fn estimator_variance_asymptotic(sigma: f64, n: usize, rho: &[f64]) -> f64 {
    2.0 * sigma.powi(4) / n as f64 * correlation_term(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::equidistant_coefficients;
    use crate::sample::{independent_scheme, shifted_scheme};

    fn sample_of(values: Vec<f64>) -> BetaSample {
        let n = values.len();
        let scheme = independent_scheme(2 * n.max(1), 0, 1).unwrap();
        BetaSample::from_values(values, scheme, Vec::new())
    }

    /// Γ(x) for positive half-integers from Γ(1) = 1, Γ(1/2) = √π and
    /// Γ(x+1) = xΓ(x).
    fn half_integer_gamma(twice_x: u32) -> f64 {
        let (mut g, mut x) = if twice_x % 2 == 0 {
            (1.0, 1.0)
        } else {
            (std::f64::consts::PI.sqrt(), 0.5)
        };
        while 2.0 * x < twice_x as f64 {
            g *= x;
            x += 1.0;
        }
        g
    }

    #[test]
    fn mad_scale_is_inverse_quartile() {
        // Φ(0.6744897501960817) = 0.75
        assert!((MAD_SCALE - 1.0 / 0.674_489_750_196_081_7).abs() < 1e-12);
    }

    #[test]
    fn zeros_are_degenerate() {
        let s = sample_of(vec![0.0; 10]);
        for e in [
            mv_estimate(&s, Center::KnownZero).unwrap(),
            mv_estimate(&s, Center::Sample).unwrap(),
            robust_estimate(&s, Center::KnownZero).unwrap(),
        ] {
            assert_eq!(e.sigma_hat, 0.0);
            assert_eq!(e.stderr, 0.0);
            assert!(e.flags.degenerate);
        }
        let constant = sample_of(vec![2.5; 10]);
        let e = mv_estimate(&constant, Center::Sample).unwrap();
        assert_eq!(e.sigma_hat, 0.0);
        assert!(e.flags.degenerate);
    }

    #[test]
    fn robust_small_example() {
        let s = sample_of(vec![-1.0, 0.0, 1.0]);
        let e = robust_estimate(&s, Center::KnownZero).unwrap();
        assert_eq!(e.sigma_hat, MAD_SCALE);
        assert!((e.sigma_hat - 1.482602).abs() < 1e-6);
        assert_eq!(e.estimator, Estimator::Robust);
        assert!(e.flags.approximate_stderr);
        let e = robust_estimate(&s, Center::Sample).unwrap();
        assert_eq!(e.estimator, Estimator::RobustMedianCentered);
        assert_eq!(e.sigma_hat, MAD_SCALE);
    }

    #[test]
    fn even_median_averages_center() {
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median(&[5.0]), Some(5.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn empty_and_tiny_samples() {
        let s = sample_of(Vec::new());
        assert_eq!(mv_estimate(&s, Center::KnownZero), Err(Error::EmptySample));
        assert_eq!(
            robust_estimate(&s, Center::KnownZero),
            Err(Error::EmptySample)
        );
        let s = sample_of(vec![1.0]);
        assert!(matches!(
            mv_estimate(&s, Center::KnownZero),
            Err(Error::SampleTooSmall { .. })
        ));
        assert!(robust_estimate(&s, Center::KnownZero).is_ok());
    }

    #[test]
    fn mv_values_and_stderr() {
        let s = sample_of(vec![1.0, -1.0, 2.0, -2.0]);
        let e = mv_estimate(&s, Center::KnownZero).unwrap();
        assert!((e.sigma_hat - 2.5f64.sqrt()).abs() < 1e-15);
        // √(V / 4s²), V = 2s⁴/n
        let v: f64 = 2.0 * 2.5 * 2.5 / 4.0;
        assert!((e.stderr - (v / (4.0 * 2.5)).sqrt()).abs() < 1e-15);
        let e = mv_estimate(&s, Center::Sample).unwrap();
        assert!((e.sigma_hat - (10.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shifted_stderr_uses_correlation() {
        let scheme = shifted_scheme(101, 0, 1).unwrap();
        let values: Vec<f64> = (0..100)
            .map(|i| if i % 3 == 0 { 1.0 } else { -1.0 })
            .collect();
        let s = BetaSample::from_values(values, scheme, vec![-0.5]);
        let e = mv_estimate(&s, Center::KnownZero).unwrap();
        let v = estimator_variance_asymptotic(e.sigma_hat, 100, &[-0.5]);
        assert!((v - 3.0 / 100.0).abs() < 1e-15);
        assert!((e.stderr - (v / (4.0 * e.sigma_hat.powi(2))).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bias_against_gamma_recursion() {
        for n in 2..=60u32 {
            let oracle =
                (2.0 / n as f64).sqrt() * half_integer_gamma(n) / half_integer_gamma(n - 1);
            let got = expected_small_sample_bias(n as usize);
            assert!((got - oracle).abs() < 1e-12 * oracle, "n={n}");
        }
        let b4 = expected_small_sample_bias(4);
        let hand = 0.5f64.sqrt() / (std::f64::consts::PI.sqrt() / 2.0);
        assert!((b4 - hand).abs() < 1e-14);
        assert!((b4 - 0.797_884_560_8).abs() < 1e-10);
        assert!((expected_small_sample_bias(100) - 0.9925).abs() < 1e-4);
        assert!((expected_small_sample_bias(1_000_000) - 1.0).abs() < 1e-6);
        for n in 10..200 {
            let approx = 1.0 - 3.0 / (4.0 * n as f64);
            assert!((expected_small_sample_bias(n) - approx).abs() < 1e-2);
        }
    }

    #[test]
    fn variance_forms() {
        assert!((estimator_variance(1.0, 1000, &[]) - 0.002).abs() < 1e-18);
        let n = 10_000_000;
        let v = estimator_variance(1.0, n, &[-0.5]);
        assert!((v * n as f64 - 3.0).abs() < 1e-5);
        for order in 0..=6 {
            let rho = equidistant_coefficients(order).unwrap().lag_correlations();
            let n = 100 * (order + 2);
            let exact = estimator_variance(1.3, n, &rho);
            let approx = estimator_variance_asymptotic(1.3, n, &rho);
            assert!((exact - approx).abs() / exact < 0.01, "order {order}");
        }
    }

    #[test]
    fn compensated_sum_cancels() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn consistency_rule() {
        let a = NoiseEstimate {
            sigma_hat: 1.0,
            stderr: 0.1,
            estimator: Estimator::Mv,
            order: 0,
            jump: 1,
            mode: SchemeMode::Shifted,
            n_beta: 10,
            flags: EstimateFlags::default(),
        };
        let b = NoiseEstimate {
            sigma_hat: 1.59,
            ..a
        };
        let c = NoiseEstimate {
            sigma_hat: 1.61,
            ..a
        };
        assert!(a.consistent_with(&b, 3.0));
        assert!(!a.consistent_with(&c, 3.0));
        assert_eq!(a.interval(2.0), (0.8, 1.2));
    }
}
