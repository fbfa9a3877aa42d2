//! Weight vectors that annihilate polynomial signal content.
//!
//! A set of `N + 2` weights `a_k` with `Σ a_k t_k^n = 0` for every
//! `0 <= n <= N` cancels any degree-`N` polynomial sampled at the positions
//! `t_k`. Applied to noisy measurements, the weighted sum leaves a pure
//! combination of the noise terms with variance `σ² Σ a_k²`.
//!
//! Equidistant sampling has the closed form `a_k = (-1)^k C(N+1, k)`.
//! Arbitrary sampling takes the null vector of the Vandermonde system with
//! the gauge `a_0 = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order for which every binomial involved, including the
/// normalization `C(2N+2, N+1)`, is an integer below 2^53.
pub const MAX_EQUIDISTANT_ORDER: usize = 27;

const RESIDUAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientKind {
    Equidistant,
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    order: usize,
    coeffs: Vec<f64>,
    normalization: f64,
    kind: CoefficientKind,
    positions: Option<Vec<f64>>,
}

impl CoefficientSet {
    /// Order of the polynomial approximation `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The `N + 2` weights.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f = Σ a_k²`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    /// Sample positions the weights were solved for (arbitrary kind only).
    pub fn positions(&self) -> Option<&[f64]> {
        self.positions.as_deref()
    }

    /// Normalized weighted sum `Σ a_k y_k / √f`.
    pub fn apply(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        let alpha: f64 = self.coeffs.iter().zip(values).map(|(a, y)| a * y).sum();
        alpha / self.normalization.sqrt()
    }

    /// Correlation between two beta values built from the same weights on
    /// index sets shifted by `shift` positions:
    /// `ρ_s = Σ_{k=s}^{N+1} a_k a_{k-s} / f`, zero once the sets no longer
    /// overlap.
    pub fn lag_correlation(&self, shift: usize) -> f64 {
        if shift == 0 {
            return 1.0;
        }
        if shift >= self.coeffs.len() {
            return 0.0;
        }
        let overlap: f64 = self.coeffs[shift..]
            .iter()
            .zip(&self.coeffs)
            .map(|(a, b)| a * b)
            .sum();
        overlap / self.normalization
    }

    /// `ρ_1 ..= ρ_{N+1}`; every further lag is zero.
    pub fn lag_correlations(&self) -> Vec<f64> {
        (1..self.coeffs.len())
            .map(|s| self.lag_correlation(s))
            .collect()
    }
}

/// Exact binomial coefficient. Callers keep `n` small enough for `u128`.
pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Closed-form weights `(-1)^k C(N+1, k)` for equidistant sampling.
pub fn equidistant_coefficients(order: usize) -> Result<CoefficientSet> {
    if order > MAX_EQUIDISTANT_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_EQUIDISTANT_ORDER,
        });
    }
    let m = order as u64 + 1;
    let coeffs = (0..=m)
        .map(|k| {
            let c = binomial(m, k) as f64;
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let normalization = binomial(2 * m, m) as f64;
    Ok(CoefficientSet {
        order,
        coeffs,
        normalization,
        kind: CoefficientKind::Equidistant,
        positions: None,
    })
}

/// Weights for `N + 2` arbitrary, strictly increasing sample positions.
///
/// Positions are shifted to the first one and scaled by the total span;
/// the gauged weights are invariant under that affine change. With
/// `a_0 = 1` the remaining `N + 1` weights solve `T' a' = -e_0`, where `T'`
/// is the Vandermonde matrix of the shifted positions `1..=N+1`. The
/// solution is checked against the full system before it is returned.
pub fn arbitrary_coefficients(positions: &[f64], order: usize) -> Result<CoefficientSet> {
    let m = order + 2;
    if positions.len() != m {
        return Err(Error::PositionCount {
            order,
            expected: m,
            got: positions.len(),
        });
    }
    if let Some(i) = positions.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotonicPositions { index: i + 1 });
    }
    if positions.iter().any(|t| !t.is_finite()) {
        return Err(Error::SingularSystem);
    }

    let t0 = positions[0];
    let span = positions[m - 1] - t0;
    let scaled: Vec<f64> = positions.iter().map(|t| (t - t0) / span).collect();
    if scaled.windows(2).any(|w| !(w[1] > w[0])) {
        // distinct positions collapsed by rounding
        return Err(Error::SingularSystem);
    }

    // The null vector of the (N+1) x (N+2) Vandermonde system is the set of
    // divided-difference weights 1 / Π_{i≠k} (u_k - u_i); dividing by the
    // k = 0 weight gives the a_0 = 1 gauge without an explicit solve.
    let node_product = |k: usize| -> f64 {
        (0..m)
            .filter(|&i| i != k)
            .map(|i| scaled[k] - scaled[i])
            .product()
    };
    let p0 = node_product(0);
    let coeffs: Vec<f64> = (0..m).map(|k| p0 / node_product(k)).collect();
    if coeffs.iter().any(|a| !a.is_finite()) {
        return Err(Error::SingularSystem);
    }

    // Check the full homogeneous system T a = 0.
    let scale = coeffs.iter().fold(0.0_f64, |acc, a| acc.max(a.abs()));
    let mut powers = vec![1.0; m];
    for _ in 0..=order {
        let r: f64 = coeffs.iter().zip(&powers).map(|(a, p)| a * p).sum();
        if !r.is_finite() || r.abs() > RESIDUAL_TOLERANCE * scale {
            return Err(Error::SingularSystem);
        }
        for (p, u) in powers.iter_mut().zip(&scaled) {
            *p *= u;
        }
    }

    let normalization = coeffs.iter().map(|a| a * a).sum();
    Ok(CoefficientSet {
        order,
        coeffs,
        normalization,
        kind: CoefficientKind::Arbitrary,
        positions: Some(positions.to_vec()),
    })
}
