//! The DER_SNR noise estimate for spectra.
//!
//! `σ = k/√6 · med_i |−y_{i−2} + 2y_i − y_{i+2}|` over `2 <= i <= n−3`,
//! and the figure of merit `med(y) / σ`. This is the beta-sigma estimate
//! with order 1, jump 2, shifted subsets and the robust zero-centred
//! estimator.

use crate::error::{Error, Result};
use crate::estimators::{median_in_place, MAD_SCALE};

pub fn der_snr_sigma(y: &[f64]) -> Result<f64> {
    if y.len() < 5 {
        return Err(Error::TooFewPoints {
            needed: 5,
            have: y.len(),
        });
    }
    let mut second: Vec<f64> = (2..y.len() - 2)
        .map(|i| (-y[i - 2] + 2.0 * y[i] - y[i + 2]).abs())
        .collect();
    let med = median_in_place(&mut second).expect("at least one term");
    Ok(MAD_SCALE / 6f64.sqrt() * med)
}

/// Median signal divided by [`der_snr_sigma`].
pub fn der_snr(y: &[f64]) -> Result<f64> {
    let sigma = der_snr_sigma(y)?;
    if sigma == 0.0 {
        return Err(Error::ZeroNoise);
    }
    let med = median_in_place(&mut y.to_vec()).expect("non-empty");
    Ok(med / sigma)
}
