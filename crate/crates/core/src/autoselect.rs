//! Iterative choice of the order of approximation and the jump parameter.
//!
//! Starting from `(N₀, j₀)`, three estimates are compared at every step:
//! `βσ(N, j)`, `βσ(N+1, j)` and `βσ(N+1, j+1)`. If the first two disagree the
//! order is raised; otherwise, if the first and the third disagree, both the
//! order and the jump are raised; otherwise `βσ(N, j)` is accepted. Two
//! estimates agree when their `c`-sigma intervals overlap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate, Center, EstimatorFamily, NoiseEstimate};
use crate::sample::{build_beta, scheme, Sampling, SchemeMode, SeriesData};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutoSelectConfig {
    pub start_order: usize,
    pub start_jump: usize,
    /// Interval half-width in standard errors.
    pub consistency_sigmas: f64,
    /// Highest order accepted; reaching it without agreement stops the search.
    pub max_order: usize,
    pub estimator: EstimatorFamily,
    pub center: Center,
    pub mode: SchemeMode,
    pub sampling: Sampling,
}

impl Default for AutoSelectConfig {
    fn default() -> Self {
        Self {
            start_order: 0,
            start_jump: 1,
            consistency_sigmas: 3.0,
            max_order: 10,
            estimator: EstimatorFamily::Robust,
            center: Center::KnownZero,
            mode: SchemeMode::Independent,
            sampling: Sampling::AssumeEquidistant,
        }
    }
}

impl AutoSelectConfig {
    fn validate(&self) -> Result<()> {
        if self.max_order < self.start_order {
            return Err(Error::InvalidConfig(format!(
                "max_order {} below start_order {}",
                self.max_order, self.start_order
            )));
        }
        if !(self.consistency_sigmas > 0.0) {
            return Err(Error::InvalidConfig(
                "consistency_sigmas must be positive".into(),
            ));
        }
        if self.start_jump == 0 {
            return Err(Error::ZeroJump);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    IncreaseOrder,
    IncreaseOrderAndJump,
    Accept,
    /// Disagreement at `max_order`.
    GiveUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub order: usize,
    pub jump: usize,
    pub base: NoiseEstimate,
    pub higher_order: NoiseEstimate,
    pub higher_order_and_jump: NoiseEstimate,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutoSelectResult {
    #[serde(rename = "final")]
    pub final_estimate: NoiseEstimate,
    pub order: usize,
    pub jump: usize,
    pub trace: Vec<TraceStep>,
    pub converged: bool,
}

/// One beta-sigma estimate `βσ(order, jump)` under `config`.
pub fn beta_sigma(
    data: &SeriesData,
    order: usize,
    jump: usize,
    config: &AutoSelectConfig,
) -> Result<NoiseEstimate> {
    let subsets = scheme(config.mode, data.len(), order, jump)?;
    let sample = build_beta(data, &subsets, config.sampling)?;
    estimate(&sample, config.estimator, config.center)
}

pub fn auto_select(data: &SeriesData, config: &AutoSelectConfig) -> Result<AutoSelectResult> {
    config.validate()?;
    let sigmas = config.consistency_sigmas;
    let mut order = config.start_order;
    let mut jump = config.start_jump;
    let mut trace = Vec::new();

    loop {
        let (base, (higher_order, higher_both)) = rayon::join(
            || beta_sigma(data, order, jump, config),
            || {
                rayon::join(
                    || beta_sigma(data, order + 1, jump, config),
                    || beta_sigma(data, order + 1, jump + 1, config),
                )
            },
        );
        let (base, higher_order, higher_both) = (base?, higher_order?, higher_both?);

        let decision = if !base.consistent_with(&higher_order, sigmas) {
            Decision::IncreaseOrder
        } else if !base.consistent_with(&higher_both, sigmas) {
            Decision::IncreaseOrderAndJump
        } else {
            Decision::Accept
        };
        let decision = if decision != Decision::Accept && order >= config.max_order {
            Decision::GiveUp
        } else {
            decision
        };

        trace.push(TraceStep {
            order,
            jump,
            base,
            higher_order,
            higher_order_and_jump: higher_both,
            decision,
        });

        match decision {
            Decision::Accept | Decision::GiveUp => {
                return Ok(AutoSelectResult {
                    final_estimate: base,
                    order,
                    jump,
                    trace,
                    converged: decision == Decision::Accept,
                });
            }
            Decision::IncreaseOrder => order += 1,
            Decision::IncreaseOrderAndJump => {
                order += 1;
                jump += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_config() {
        let data = SeriesData::from_values(vec![0.0; 100]);
        let bad = AutoSelectConfig {
            start_order: 3,
            max_order: 2,
            ..Default::default()
        };
        assert!(matches!(
            auto_select(&data, &bad),
            Err(Error::InvalidConfig(_))
        ));
        let bad = AutoSelectConfig {
            consistency_sigmas: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            auto_select(&data, &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn too_short_series() {
        let data = SeriesData::from_values(vec![1.0, 2.0, 1.5]);
        assert!(matches!(
            auto_select(&data, &AutoSelectConfig::default()),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn polynomial_data_accepts_immediately() {
        // all three estimates are exactly zero for a constant
        let data = SeriesData::from_values(vec![7.0; 200]);
        let r = auto_select(&data, &AutoSelectConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!((r.order, r.jump), (0, 1));
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.final_estimate.sigma_hat, 0.0);
    }

    #[test]
    fn alternating_data_never_settles() {
        let y: Vec<f64> = (0..2000)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let data = SeriesData::from_values(y);
        let cfg = AutoSelectConfig {
            max_order: 6,
            ..Default::default()
        };
        let r = auto_select(&data, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.order, 6);
        assert_eq!(r.trace.last().unwrap().decision, Decision::GiveUp);
    }
}
