//! Subset selection and construction of the beta sample.
//!
//! Every subset holds `N + 2` indices `i_m, i_m + j, ..., i_m + (N+1) j`
//! with jump parameter `j`. Two layouts are supported:
//!
//! * [`SchemeMode::Independent`]: chunks of `(N+2) j` consecutive points are
//!   split into `j` interleaved subsets (by index mod `j`), so no point is
//!   used twice and the beta values are independent.
//! * [`SchemeMode::Shifted`]: one subset per starting index, slid across the
//!   data. Nearly every point contributes `N + 2` times and neighbouring beta
//!   values are correlated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{
    arbitrary_coefficients, equidistant_coefficients, CoefficientKind, CoefficientSet,
};
use crate::error::{Error, Result};

/// Sampled measurements `(t_i, y_i)`. Without positions the grid is
/// implicitly `t_i = i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    t: Option<Vec<f64>>,
    y: Vec<f64>,
}

impl SeriesData {
    /// Measurements on the implicit grid `t_i = i`.
    pub fn from_values(y: Vec<f64>) -> Self {
        Self { t: None, y }
    }

    /// Measurements at explicit, strictly increasing positions.
    pub fn with_positions(t: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if t.len() != y.len() {
            return Err(Error::LengthMismatch {
                positions: t.len(),
                values: y.len(),
            });
        }
        if let Some(i) = t.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotonicPositions { index: i + 1 });
        }
        Ok(Self { t: Some(t), y })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn positions(&self) -> Option<&[f64]> {
        self.t.as_deref()
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeMode {
    Independent,
    Shifted,
}

/// How weights are obtained for each subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// One shared set of binomial weights; positions are ignored.
    AssumeEquidistant,
    /// Fresh weights solved from each subset's positions.
    UsePositions,
}

/// The subsets used to build a beta sample. Each subset has constant index
/// stride `jump`, so it is stored as its starting index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetScheme {
    mode: SchemeMode,
    order: usize,
    jump: usize,
    n_points: usize,
    starts: Vec<usize>,
}

impl SubsetScheme {
    pub fn mode(&self) -> SchemeMode {
        self.mode
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn jump(&self) -> usize {
        self.jump
    }

    /// Number of data points the scheme was laid out for.
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Points per subset, `N + 2`.
    pub fn subset_len(&self) -> usize {
        self.order + 2
    }

    /// Number of subsets.
    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.starts.is_empty()
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Indices of subset `m`.
    pub fn subset(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.starts[m];
        (0..self.subset_len()).map(move |k| start + k * self.jump)
    }

    /// All subsets as explicit index vectors.
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|m| self.subset(m).collect()).collect()
    }
}

/// Non-overlapping subsets. Consecutive chunks of `(N+2) j` points are
/// divided into `j` subsets collecting the indices with equal `i mod j`;
/// subsets running past the end of the data are dropped.
pub fn independent_scheme(n_points: usize, order: usize, jump: usize) -> Result<SubsetScheme> {
    if jump == 0 {
        return Err(Error::ZeroJump);
    }
    let m = order + 2;
    let chunk = m * jump;
    if n_points < chunk {
        return Err(Error::TooFewPoints {
            needed: chunk,
            have: n_points,
        });
    }
    let span = (m - 1) * jump;
    let starts = (0..n_points)
        .step_by(chunk)
        .flat_map(|base| (base..base + jump).filter(|s| s + span < n_points))
        .collect();
    Ok(SubsetScheme {
        mode: SchemeMode::Independent,
        order,
        jump,
        n_points,
        starts,
    })
}

/// Overlapping subsets starting at every index `0 <= m < n - j (N+1)`.
pub fn shifted_scheme(n_points: usize, order: usize, jump: usize) -> Result<SubsetScheme> {
    if jump == 0 {
        return Err(Error::ZeroJump);
    }
    let span = (order + 1) * jump;
    if n_points <= span {
        return Err(Error::TooFewPoints {
            needed: span + 1,
            have: n_points,
        });
    }
    Ok(SubsetScheme {
        mode: SchemeMode::Shifted,
        order,
        jump,
        n_points,
        starts: (0..n_points - span).collect(),
    })
}

/// Builds the scheme for `mode`.
pub fn scheme(
    mode: SchemeMode,
    n_points: usize,
    order: usize,
    jump: usize,
) -> Result<SubsetScheme> {
    match mode {
        SchemeMode::Independent => independent_scheme(n_points, order, jump),
        SchemeMode::Shifted => shifted_scheme(n_points, order, jump),
    }
}

/// Realizations of `β = Σ a_k y_k / √f`, one per retained subset.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaSample {
    values: Vec<f64>,
    scheme: SubsetScheme,
    coefficient_kind: CoefficientKind,
    rho: Vec<f64>,
    dropped: usize,
}

impl BetaSample {
    /// Wraps precomputed beta values, e.g. draws from a known distribution.
    /// `rho[s - 1]` is the correlation at sample lag `s`.
    pub fn from_values(values: Vec<f64>, scheme: SubsetScheme, rho: Vec<f64>) -> Self {
        Self {
            values,
            scheme,
            coefficient_kind: CoefficientKind::Equidistant,
            rho,
            dropped: 0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scheme(&self) -> &SubsetScheme {
        &self.scheme
    }

    pub fn coefficient_kind(&self) -> CoefficientKind {
        self.coefficient_kind
    }

    /// Lag correlations of the sample, indexed by lag minus one. Empty when
    /// the values are independent or the correlation is not known.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Subsets whose weights could not be solved and were left out.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True for overlapping subsets whose correlation structure is unknown
    /// because every subset carries its own weights.
    pub fn correlation_unknown(&self) -> bool {
        self.scheme.mode == SchemeMode::Shifted && self.rho.is_empty()
    }
}

/// Lag correlations of a shifted sample with jump `j`: subsets overlap only
/// at lags that are multiples of `j`, where `ρ_{j s'} = ρ'_{s'}` of the
/// weights.
fn shifted_rho(cset: &CoefficientSet, jump: usize) -> Vec<f64> {
    let max_lag = cset.order() + 1;
    (1..=max_lag * jump)
        .map(|lag| {
            if lag % jump == 0 {
                cset.lag_correlation(lag / jump)
            } else {
                0.0
            }
        })
        .collect()
}

/// Computes the beta sample of `data` over the subsets of `scheme`.
pub fn build_beta(
    data: &SeriesData,
    scheme: &SubsetScheme,
    sampling: Sampling,
) -> Result<BetaSample> {
    if let Some(last) = scheme.starts.last() {
        let top = last + (scheme.subset_len() - 1) * scheme.jump;
        if top >= data.len() {
            return Err(Error::IndexOutOfRange {
                index: top,
                len: data.len(),
            });
        }
    }
    let y = data.values();
    match sampling {
        Sampling::AssumeEquidistant => {
            let cset = equidistant_coefficients(scheme.order)?;
            let coeffs = cset.coeffs();
            let inv_norm = 1.0 / cset.normalization().sqrt();
            let values = scheme
                .starts
                .iter()
                .map(|&start| {
                    let alpha: f64 = coeffs
                        .iter()
                        .enumerate()
                        .map(|(k, a)| a * y[start + k * scheme.jump])
                        .sum();
                    alpha * inv_norm
                })
                .collect();
            let rho = match scheme.mode {
                SchemeMode::Shifted => shifted_rho(&cset, scheme.jump),
                SchemeMode::Independent => Vec::new(),
            };
            Ok(BetaSample {
                values,
                scheme: scheme.clone(),
                coefficient_kind: CoefficientKind::Equidistant,
                rho,
                dropped: 0,
            })
        }
        Sampling::UsePositions => {
            let t = data.positions().ok_or(Error::MissingPositions)?;
            let per_subset: Vec<Option<f64>> = scheme
                .starts
                .par_iter()
                .map(|&start| {
                    let idx = (0..scheme.subset_len()).map(|k| start + k * scheme.jump);
                    let pos: Vec<f64> = idx.clone().map(|i| t[i]).collect();
                    arbitrary_coefficients(&pos, scheme.order)
                        .ok()
                        .map(|c| c.apply(idx.map(|i| y[i])))
                })
                .collect();
            let dropped = per_subset.iter().filter(|v| v.is_none()).count();
            let values = per_subset.into_iter().flatten().collect();
            Ok(BetaSample {
                values,
                scheme: scheme.clone(),
                coefficient_kind: CoefficientKind::Arbitrary,
                rho: Vec::new(),
                dropped,
            })
        }
    }
}
