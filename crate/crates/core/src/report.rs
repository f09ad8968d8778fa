//! Serialize estimate series and comparison tables to CSV and JSON.
//!
//! All writers are byte-deterministic: fixed 8-decimal numeric formatting
//! (locale-independent), LF line endings, and stable row order. Undefined
//! cells (e.g. CV of a zero-mean series) render as `NA`. The JSON variant
//! carries the same 8-decimal display strings plus full-precision `raw`
//! values and a `gaps` sidecar listing every window an estimator skipped.

use std::io::Write;

use serde_json::{json, Value};
use thiserror::Error;

use crate::metrics::{ComparisonReport, ComparisonRow, EstimateSeries, MetricsError};
use crate::rolling::RollOutput;
use crate::types::{DailySeries, EstimatorKind};

/// Conventional trading-day count used by the annualization display scale.
pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

/// Display scale for reported volatilities.
///
/// Annualization multiplies volatility-dimensioned cells (mean, series
/// values) by sqrt(252) and variance-dimensioned cells (var, mse) by 252.
/// Dimensionless cells (cv, pb, efficiency) and stored raw values are never
/// scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    #[default]
    Daily,
    Annualized,
}

impl Scaling {
    pub fn label(self) -> &'static str {
        match self {
            Scaling::Daily => "daily",
            Scaling::Annualized => "annualized",
        }
    }

    /// Factor applied to volatility-dimensioned values.
    pub fn value_factor(self) -> f64 {
        match self {
            Scaling::Daily => 1.0,
            Scaling::Annualized => TRADING_DAYS_PER_YEAR.sqrt(),
        }
    }

    /// Factor applied to variance-dimensioned values.
    pub fn variance_factor(self) -> f64 {
        match self {
            Scaling::Daily => 1.0,
            Scaling::Annualized => TRADING_DAYS_PER_YEAR,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to write to the output sink")]
    SinkWriteFailure(#[from] std::io::Error),
}

/// Format one numeric cell: fixed 8 decimals, with negative zero normalized
/// so equal values always render identically.
pub fn fmt8(value: f64) -> String {
    let rendered = format!("{value:.8}");
    if rendered == "-0.00000000" {
        "0.00000000".to_string()
    } else {
        rendered
    }
}

fn fmt8_cell(value: Result<f64, MetricsError>) -> String {
    match value {
        Ok(v) => fmt8(v),
        Err(_) => "NA".to_string(),
    }
}

/// Context stamped into every JSON report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportMetadata {
    pub symbol: String,
    pub anchor_date: Option<chrono::NaiveDate>,
    pub entropy_mode: crate::entropy::EntropyMode,
    pub benchmark: EstimatorKind,
    pub scaling: Scaling,
    pub tool_version: String,
}

impl ReportMetadata {
    fn to_value(&self) -> Value {
        json!({
            "symbol": self.symbol,
            "anchor_date": self.anchor_date.map(|d| d.to_string()),
            "entropy_mode": self.entropy_mode.label(),
            "benchmark": self.benchmark.label(),
            "scaling": self.scaling.label(),
            "tool_version": self.tool_version,
        })
    }
}

/// Write comparison tables as CSV: header
/// `n,estimator,mean,var,cv,mse,pb,efficiency,gaps`, then one row per
/// (window length, estimator), n ascending and estimators in canonical order
/// regardless of input order. Returns the number of bytes written.
pub fn write_comparison_csv<W: Write>(
    reports: &[ComparisonReport],
    scaling: Scaling,
    sink: &mut W,
) -> Result<u64, ReportError> {
    let mut rows: Vec<(usize, &ComparisonRow)> = reports
        .iter()
        .flat_map(|report| report.rows.iter().map(move |row| (report.window_n, row)))
        .collect();
    rows.sort_by_key(|&(n, row)| (n, row.estimator));

    let mut out = String::from("n,estimator,mean,var,cv,mse,pb,efficiency,gaps\n");
    for (n, row) in rows {
        let vf = scaling.value_factor();
        let varf = scaling.variance_factor();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            n,
            row.estimator.label(),
            fmt8(row.mean * vf),
            fmt8(row.var * varf),
            fmt8_cell(row.cv),
            fmt8_cell(row.mse.map(|v| v * varf)),
            fmt8_cell(row.pb),
            fmt8_cell(row.efficiency),
            row.gaps,
        ));
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len() as u64)
}

/// Write estimate series in long format: header `date,estimator,n,value`,
/// rows sorted by (date, estimator, n). Returns the number of bytes written.
pub fn write_series_csv<W: Write>(
    series: &[&EstimateSeries],
    scaling: Scaling,
    sink: &mut W,
) -> Result<u64, ReportError> {
    let mut rows: Vec<(chrono::NaiveDate, EstimatorKind, usize, f64)> = series
        .iter()
        .flat_map(|s| {
            s.dates()
                .iter()
                .zip(s.values())
                .map(|(&date, &value)| (date, s.estimator(), s.window_n(), value))
        })
        .collect();
    rows.sort_by_key(|&(date, estimator, n, _)| (date, estimator, n));

    let vf = scaling.value_factor();
    let mut out = String::from("date,estimator,n,value\n");
    for (date, estimator, n, value) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            date,
            estimator.label(),
            n,
            fmt8(value * vf)
        ));
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len() as u64)
}

/// Write a daily series back to CSV with full-precision prices, so that
/// parsing the output reproduces the input series exactly.
pub fn write_daily_csv<W: Write>(
    series: &DailySeries,
    sink: &mut W,
) -> Result<u64, ReportError> {
    let mut out = String::from("Date,Open,High,Low,Close,Volume\n");
    for bar in series.bars() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            bar.date(),
            bar.open(),
            bar.high(),
            bar.low(),
            bar.close(),
            bar.volume()
        ));
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len() as u64)
}

/// A plot-ready JSON document: metadata plus either a comparison table or a
/// long-format series listing, always with the gaps sidecar.
///
/// Numeric cells appear twice: as the same 8-decimal display strings the CSV
/// writers emit, and under `raw` at full double precision (unscaled —
/// annualization is display-only). Undefined display cells are `"NA"` and
/// their raw counterparts `null`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    value: Value,
}

fn gaps_sidecar(rolled: &RollOutput) -> Value {
    let mut entries = Vec::new();
    for (&(estimator, n), rolled_series) in rolled.results() {
        for gap in &rolled_series.gaps {
            entries.push((gap.date, estimator, n, gap.reason.to_string()));
        }
    }
    entries.sort_by_key(|&(date, estimator, n, _)| (date, estimator, n));
    Value::Array(
        entries
            .into_iter()
            .map(|(date, estimator, n, reason)| {
                json!({
                    "date": date.to_string(),
                    "estimator": estimator.label(),
                    "n": n,
                    "reason": reason,
                })
            })
            .collect(),
    )
}

fn raw_cell(value: Result<f64, MetricsError>) -> Value {
    match value {
        Ok(v) => json!(v),
        Err(_) => Value::Null,
    }
}

impl ReportDocument {
    /// Comparison-table document mirroring [`write_comparison_csv`].
    pub fn comparison(
        reports: &[ComparisonReport],
        rolled: &RollOutput,
        meta: &ReportMetadata,
    ) -> ReportDocument {
        let mut rows: Vec<(usize, &ComparisonRow)> = reports
            .iter()
            .flat_map(|report| report.rows.iter().map(move |row| (report.window_n, row)))
            .collect();
        rows.sort_by_key(|&(n, row)| (n, row.estimator));

        let vf = meta.scaling.value_factor();
        let varf = meta.scaling.variance_factor();
        let table: Vec<Value> = rows
            .into_iter()
            .map(|(n, row)| {
                json!({
                    "n": n,
                    "estimator": row.estimator.label(),
                    "mean": fmt8(row.mean * vf),
                    "var": fmt8(row.var * varf),
                    "cv": fmt8_cell(row.cv),
                    "mse": fmt8_cell(row.mse.map(|v| v * varf)),
                    "pb": fmt8_cell(row.pb),
                    "efficiency": fmt8_cell(row.efficiency),
                    "gaps": row.gaps,
                    "pb_skipped": row.pb_skipped,
                    "n_estimates": row.n_estimates,
                    "raw": {
                        "mean": row.mean,
                        "var": row.var,
                        "cv": raw_cell(row.cv),
                        "mse": raw_cell(row.mse),
                        "pb": raw_cell(row.pb),
                        "efficiency": raw_cell(row.efficiency),
                    },
                })
            })
            .collect();

        ReportDocument {
            value: json!({
                "metadata": meta.to_value(),
                "comparison": table,
                "gaps": gaps_sidecar(rolled),
            }),
        }
    }

    /// Long-format series document mirroring [`write_series_csv`].
    pub fn series(rolled: &RollOutput, meta: &ReportMetadata) -> ReportDocument {
        let mut rows: Vec<(chrono::NaiveDate, EstimatorKind, usize, f64)> = rolled
            .results()
            .iter()
            .flat_map(|(&(estimator, n), rolled_series)| {
                rolled_series
                    .series
                    .dates()
                    .iter()
                    .zip(rolled_series.series.values())
                    .map(move |(&date, &value)| (date, estimator, n, value))
            })
            .collect();
        rows.sort_by_key(|&(date, estimator, n, _)| (date, estimator, n));

        let vf = meta.scaling.value_factor();
        let listing: Vec<Value> = rows
            .into_iter()
            .map(|(date, estimator, n, value)| {
                json!({
                    "date": date.to_string(),
                    "estimator": estimator.label(),
                    "n": n,
                    "value": fmt8(value * vf),
                    "raw": value,
                })
            })
            .collect();

        ReportDocument {
            value: json!({
                "metadata": meta.to_value(),
                "series": listing,
                "gaps": gaps_sidecar(rolled),
            }),
        }
    }

    pub fn as_value(&self) -> &Value {
        &self.value
    }

    /// Pretty-print the document followed by a trailing newline. Returns the
    /// number of bytes written.
    pub fn write_to<W: Write>(&self, sink: &mut W) -> Result<u64, ReportError> {
        let mut bytes = serde_json::to_vec_pretty(&self.value)
            .expect("report documents contain only finite numbers and strings");
        bytes.push(b'\n');
        sink.write_all(&bytes)?;
        Ok(bytes.len() as u64)
    }
}
