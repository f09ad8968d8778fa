//! Parse daily OHLCV CSV files and intraday trade CSV files into validated
//! domain series.
//!
//! Daily files are header-addressed (case-insensitive) with columns
//! `Date,Open,High,Low,Close,Volume`; a `Adj Close` column — or any other
//! extra column — is ignored. Trade files carry `Price,Quantity,Timestamp`.
//! Missing or unparseable cells are hard errors, never imputed: volatility
//! estimates are sensitive and silent gap-filling corrupts windows.

use std::io::Read;

use chrono::NaiveDate;
use thiserror::Error;

use crate::types::{BarError, DailySeries, OhlcvBar};

/// One intraday execution: price, quantity, and when it happened.
///
/// `seq` is the 1-based position in the source file. Parsed records always
/// satisfy `price > 0`, `quantity > 0`, and non-decreasing timestamps in
/// file order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeRecord {
    pub seq: u64,
    pub price: f64,
    pub quantity: u64,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: i64,
}

/// Parse failures, with 1-based source line numbers where applicable
/// (line 1 is the header).
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("read failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing required column `{name}`")]
    MissingColumn { name: &'static str },
    #[error("line {line}: {detail}")]
    UnparseableRow { line: u64, detail: String },
    #[error("duplicate date {date}")]
    DuplicateDate { date: NaiveDate },
    #[error("no data rows")]
    EmptySeries,
    #[error("line {line}: invalid bar: {source}")]
    InvalidBar { line: u64, source: BarError },
    #[error("line {line}: timestamp goes backwards")]
    NonMonotoneTimestamp { line: u64 },
    #[error("line {line}: quantity must be positive")]
    NonPositiveQuantity { line: u64 },
    #[error("line {line}: price must be positive")]
    NonPositivePrice { line: u64 },
}

fn csv_reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source)
}

fn map_csv_error(err: csv::Error) -> IngestError {
    if let csv::ErrorKind::Io(_) = err.kind() {
        if let csv::ErrorKind::Io(io) = err.into_kind() {
            return IngestError::Io(io);
        }
        unreachable!();
    }
    let line = err.position().map_or(0, |p| p.line());
    IngestError::UnparseableRow {
        line,
        detail: err.to_string(),
    }
}

/// Locate each required column by case-insensitive header name.
fn column_indices<R: Read>(
    reader: &mut csv::Reader<R>,
    required: &[&'static str],
) -> Result<Vec<usize>, IngestError> {
    let headers = reader.headers().map_err(map_csv_error)?.clone();
    required
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or(IngestError::MissingColumn { name })
        })
        .collect()
}

fn field(record: &csv::StringRecord, idx: usize, line: u64) -> Result<&str, IngestError> {
    record.get(idx).ok_or_else(|| IngestError::UnparseableRow {
        line,
        detail: format!("missing field {}", idx + 1),
    })
}

fn parse_cell<T: std::str::FromStr>(
    text: &str,
    what: &str,
    line: u64,
) -> Result<T, IngestError> {
    text.parse().map_err(|_| IngestError::UnparseableRow {
        line,
        detail: format!("cannot parse {what} from `{text}`"),
    })
}

/// Parse a daily OHLCV CSV into a validated [`DailySeries`].
///
/// Rows are re-sorted ascending by date; duplicate dates are an error.
/// Accepted dates are ISO-8601 (`YYYY-MM-DD`) only, volumes are non-negative
/// integers, and every row must satisfy the bar invariants.
pub fn parse_daily_csv<R: Read>(source: R, symbol: &str) -> Result<DailySeries, IngestError> {
    let mut reader = csv_reader(source);
    let idx = column_indices(
        &mut reader,
        &["Date", "Open", "High", "Low", "Close", "Volume"],
    )?;

    let mut rows: Vec<(NaiveDate, OhlcvBar)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(map_csv_error)?;
        let line = record.position().map_or(0, |p| p.line());

        let date_text = field(&record, idx[0], line)?;
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d").map_err(|_| {
            IngestError::UnparseableRow {
                line,
                detail: format!("cannot parse ISO-8601 date from `{date_text}`"),
            }
        })?;
        let open: f64 = parse_cell(field(&record, idx[1], line)?, "Open", line)?;
        let high: f64 = parse_cell(field(&record, idx[2], line)?, "High", line)?;
        let low: f64 = parse_cell(field(&record, idx[3], line)?, "Low", line)?;
        let close: f64 = parse_cell(field(&record, idx[4], line)?, "Close", line)?;
        let volume: i64 = parse_cell(field(&record, idx[5], line)?, "Volume", line)?;

        let bar = OhlcvBar::new(date, open, high, low, close, volume)
            .map_err(|source| IngestError::InvalidBar { line, source })?;
        rows.push((date, bar));
    }
    if rows.is_empty() {
        return Err(IngestError::EmptySeries);
    }

    rows.sort_by_key(|(date, _)| *date);
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(IngestError::DuplicateDate { date: pair[0].0 });
        }
    }

    let bars = rows.into_iter().map(|(_, bar)| bar).collect();
    Ok(DailySeries::new(symbol, bars).expect("sorted and deduplicated dates"))
}

/// Parse a trade CSV (`Price,Quantity,Timestamp`) into file-ordered records
/// with `seq` assigned 1..N.
///
/// Timestamps are ISO-8601 instants (RFC 3339, e.g.
/// `2021-01-29T09:30:00Z`) or integer epoch milliseconds, and must be
/// non-decreasing in file order.
pub fn parse_trades_csv<R: Read>(source: R) -> Result<Vec<TradeRecord>, IngestError> {
    let mut reader = csv_reader(source);
    let idx = column_indices(&mut reader, &["Price", "Quantity", "Timestamp"])?;

    let mut trades: Vec<TradeRecord> = Vec::new();
    let mut last_timestamp: Option<i64> = None;
    for record in reader.records() {
        let record = record.map_err(map_csv_error)?;
        let line = record.position().map_or(0, |p| p.line());

        let price: f64 = parse_cell(field(&record, idx[0], line)?, "Price", line)?;
        if !(price.is_finite() && price > 0.0) {
            return Err(IngestError::NonPositivePrice { line });
        }
        let quantity: i64 = parse_cell(field(&record, idx[1], line)?, "Quantity", line)?;
        if quantity <= 0 {
            return Err(IngestError::NonPositiveQuantity { line });
        }

        let ts_text = field(&record, idx[2], line)?;
        let timestamp_ms = match ts_text.parse::<i64>() {
            Ok(ms) => ms,
            Err(_) => chrono::DateTime::parse_from_rfc3339(ts_text)
                .map_err(|_| IngestError::UnparseableRow {
                    line,
                    detail: format!(
                        "cannot parse timestamp `{ts_text}` (expected RFC 3339 or epoch ms)"
                    ),
                })?
                .timestamp_millis(),
        };
        if let Some(last) = last_timestamp {
            if timestamp_ms < last {
                return Err(IngestError::NonMonotoneTimestamp { line });
            }
        }
        last_timestamp = Some(timestamp_ms);

        trades.push(TradeRecord {
            seq: trades.len() as u64 + 1,
            price,
            quantity: quantity as u64,
            timestamp_ms,
        });
    }
    Ok(trades)
}
