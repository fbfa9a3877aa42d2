//! Column-file ingestion and result serialization.
//!
//! Input files hold one value per line (implicit grid) or a position column
//! followed by a value column. Lines starting with `#` and blank lines are
//! skipped. Rows with a non-finite or non-numeric entry are dropped and
//! counted; nothing is imputed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::autoselect::{AutoSelectResult, Decision};
use crate::error::{Error, Result};
use crate::estimators::{median, Estimator, NoiseEstimate};
use crate::sample::{SchemeMode, SeriesData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnFormat {
    /// One column means values only, two or more mean positions then values.
    Auto,
    TwoColumn,
    OneColumn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delimiter {
    Whitespace,
    Comma,
    Semicolon,
}

impl Delimiter {
    fn detect(line: &str) -> Self {
        if line.contains(',') {
            Self::Comma
        } else if line.contains(';') {
            Self::Semicolon
        } else {
            Self::Whitespace
        }
    }

    fn split(self, line: &str) -> Vec<&str> {
        match self {
            Self::Whitespace => line.split_whitespace().collect(),
            Self::Comma => line.split(',').map(str::trim).collect(),
            Self::Semicolon => line.split(';').map(str::trim).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferredSampling {
    Equidistant,
    Irregular,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub monotonicity_ok: bool,
    pub inferred_sampling: InferredSampling,
}

/// Equidistant when every step is within `1e-6` of the median step.
pub fn infer_sampling(t: &[f64]) -> InferredSampling {
    if t.len() < 2 {
        return InferredSampling::Unknown;
    }
    let steps: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let med = median(&steps).expect("non-empty");
    let worst = steps.iter().fold(0.0_f64, |m, s| m.max((s - med).abs()));
    if worst < 1e-6 * med {
        InferredSampling::Equidistant
    } else {
        InferredSampling::Irregular
    }
}

fn parse_field(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses column text. `path` only labels errors.
pub fn parse_series(
    text: &str,
    path: &Path,
    format: ColumnFormat,
    delimiter: Option<Delimiter>,
) -> Result<(SeriesData, IngestReport)> {
    let mut delimiter = delimiter;
    let mut format = format;
    let mut rows_read = 0;
    let mut rows_dropped = 0;
    let mut t = Vec::new();
    let mut y = Vec::new();
    let mut last: Option<(f64, usize)> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let delim = *delimiter.get_or_insert_with(|| Delimiter::detect(line));
        let fields = delim.split(line);
        if format == ColumnFormat::Auto {
            format = if fields.len() >= 2 {
                ColumnFormat::TwoColumn
            } else {
                ColumnFormat::OneColumn
            };
        }
        rows_read += 1;
        match format {
            ColumnFormat::OneColumn => match fields.first().and_then(|f| parse_field(f)) {
                Some(v) => y.push(v),
                None => rows_dropped += 1,
            },
            ColumnFormat::TwoColumn => {
                if fields.len() < 2 {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        line: lineno,
                        message: format!("expected 2 columns, found {}", fields.len()),
                    });
                }
                match (parse_field(fields[0]), parse_field(fields[1])) {
                    (Some(pos), Some(v)) => {
                        if let Some((prev, _)) = last {
                            if !(pos > prev) {
                                return Err(Error::NonMonotonicFile {
                                    path: path.to_path_buf(),
                                    line: lineno,
                                });
                            }
                        }
                        last = Some((pos, lineno));
                        t.push(pos);
                        y.push(v);
                    }
                    _ => rows_dropped += 1,
                }
            }
            ColumnFormat::Auto => unreachable!(),
        }
    }

    if y.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let (data, inferred_sampling) = if format == ColumnFormat::TwoColumn {
        let inferred = infer_sampling(&t);
        (SeriesData::with_positions(t, y)?, inferred)
    } else {
        (SeriesData::from_values(y), InferredSampling::Equidistant)
    };
    Ok((
        data,
        IngestReport {
            rows_read,
            rows_dropped,
            monotonicity_ok: true,
            inferred_sampling,
        },
    ))
}

pub fn read_series(
    path: &Path,
    format: ColumnFormat,
    delimiter: Option<Delimiter>,
) -> Result<(SeriesData, IngestReport)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_series(&text, path, format, delimiter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Tsv,
}

/// Rounds to nine significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("valid float")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub order: usize,
    pub jump: usize,
    pub sigma_hat: f64,
    pub stderr: f64,
    pub higher_order_sigma_hat: f64,
    pub higher_order_stderr: f64,
    pub higher_both_sigma_hat: f64,
    pub higher_both_stderr: f64,
    pub decision: Decision,
}

/// Serializable view of an estimate or auto-selection outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub sigma_hat: f64,
    pub stderr: f64,
    pub estimator: Estimator,
    pub order: usize,
    pub jump: usize,
    pub mode: SchemeMode,
    pub n_beta: usize,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceRecord>>,
}

impl ResultRecord {
    pub fn from_estimate(e: &NoiseEstimate) -> Self {
        Self {
            sigma_hat: round_sig9(e.sigma_hat),
            stderr: round_sig9(e.stderr),
            estimator: e.estimator,
            order: e.order,
            jump: e.jump,
            mode: e.mode,
            n_beta: e.n_beta,
            flags: e.flags.names().into_iter().map(String::from).collect(),
            snr: None,
            converged: None,
            trace: None,
        }
    }

    pub fn from_auto(r: &AutoSelectResult) -> Self {
        let mut rec = Self::from_estimate(&r.final_estimate);
        if !r.converged {
            rec.flags.push("not_converged".into());
        }
        rec.converged = Some(r.converged);
        rec.trace = Some(
            r.trace
                .iter()
                .map(|s| TraceRecord {
                    order: s.order,
                    jump: s.jump,
                    sigma_hat: round_sig9(s.base.sigma_hat),
                    stderr: round_sig9(s.base.stderr),
                    higher_order_sigma_hat: round_sig9(s.higher_order.sigma_hat),
                    higher_order_stderr: round_sig9(s.higher_order.stderr),
                    higher_both_sigma_hat: round_sig9(s.higher_order_and_jump.sigma_hat),
                    higher_both_stderr: round_sig9(s.higher_order_and_jump.stderr),
                    decision: s.decision,
                })
                .collect(),
        );
        rec
    }

    /// Adds `median(y) / σ̂`; skipped when `σ̂` is zero.
    pub fn with_snr(mut self, data: &SeriesData) -> Self {
        if self.sigma_hat > 0.0 {
            if let Some(med) = median(data.values()) {
                self.snr = Some(round_sig9(med / self.sigma_hat));
            }
        }
        self
    }
}

pub const TSV_HEADER: &str =
    "sigma_hat\tstderr\testimator\torder\tjump\tmode\tn_beta\tflags\tsnr\tconverged";

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|j| j.as_str().map(String::from))
        .unwrap_or_default()
}

/// JSON object or a single TSV row (without header) for `record`.
pub fn write_result(record: &ResultRecord, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string(record).expect("serializable"),
        OutputFormat::Tsv => {
            let mut row = String::new();
            let flags = if record.flags.is_empty() {
                "-".to_string()
            } else {
                record.flags.join(",")
            };
            let _ = write!(
                row,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                record.sigma_hat,
                record.stderr,
                enum_name(&record.estimator),
                record.order,
                record.jump,
                enum_name(&record.mode),
                record.n_beta,
                flags,
                record.snr.map_or("-".into(), |s| s.to_string()),
                record.converged.map_or("-".into(), |c| c.to_string()),
            );
            row
        }
    }
}

pub fn parse_result_json(text: &str) -> Result<ResultRecord> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: PathBuf::from("<json>"),
        line: e.line(),
        message: e.to_string(),
    })
}
