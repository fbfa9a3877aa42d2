//! Noise estimation for sampled data from linear combinations of neighbouring
//! points that annihilate low-order polynomials.
//!
//! A series is split into small tuples, each tuple is collapsed to one
//! `β` value, and the scatter of the `β` sample estimates the noise level.

pub mod autoselect;
pub mod cli;
pub mod coefficients;
pub mod dersnr;
pub mod error;
pub mod estimators;
pub mod io;
pub mod sample;
pub mod synth;

pub use autoselect::{auto_select, beta_sigma, AutoSelectConfig, AutoSelectResult, Decision};
pub use coefficients::{arbitrary_coefficients, equidistant_coefficients, CoefficientSet};
pub use dersnr::{der_snr, der_snr_sigma};
pub use error::{Error, Result};
pub use estimators::{estimate, Center, Estimator, EstimatorFamily, NoiseEstimate};
pub use sample::{build_beta, scheme, BetaSample, Sampling, SchemeMode, SeriesData, SubsetScheme};
