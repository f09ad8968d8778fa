//! Core domain types: validated OHLCV bars, dated series, normalized
//! log-price components, and estimator identifiers.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use thiserror::Error;

/// Violation of a single bar's invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BarError {
    /// A price field is zero, negative, or not finite; logarithms require
    /// strictly positive prices.
    #[error("prices must be strictly positive and finite")]
    NonPositivePrice,
    /// The open/high/low/close ordering is inconsistent (e.g. close > high).
    #[error("price range violated: low <= open,close <= high must hold")]
    RangeViolation,
    /// Traded volume is negative.
    #[error("volume must be non-negative")]
    NegativeVolume,
}

/// One trading day's open/high/low/close prices and traded volume.
///
/// Instances can only be built through [`OhlcvBar::new`], which enforces
/// `low <= open <= high`, `low <= close <= high`, strictly positive finite
/// prices, and non-negative volume. Zero volume is permitted at the type
/// level (some index feeds report 0) and handled by the entropy estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhlcvBar {
    date: NaiveDate,
    open: f64,
    high: f64,
    low: f64,
    close: f64,
    volume: u64,
}

impl OhlcvBar {
    /// Validate and construct a bar. The volume is accepted as a signed
    /// integer so that negative feed values surface as [`BarError::NegativeVolume`]
    /// instead of being silently reinterpreted.
    pub fn new(
        date: NaiveDate,
        open: f64,
        high: f64,
        low: f64,
        close: f64,
        volume: i64,
    ) -> Result<Self, BarError> {
        for price in [open, high, low, close] {
            if !(price.is_finite() && price > 0.0) {
                return Err(BarError::NonPositivePrice);
            }
        }
        if low > open || open > high || low > close || close > high {
            return Err(BarError::RangeViolation);
        }
        if volume < 0 {
            return Err(BarError::NegativeVolume);
        }
        Ok(OhlcvBar {
            date,
            open,
            high,
            low,
            close,
            volume: volume as u64,
        })
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn open(&self) -> f64 {
        self.open
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn close(&self) -> f64 {
        self.close
    }

    pub fn volume(&self) -> u64 {
        self.volume
    }
}

/// Violation of series-level ordering invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeriesError {
    /// Two consecutive bars are out of order or share a date.
    #[error("bar dates must be strictly increasing: {prev} is not before {next}")]
    NonIncreasingDates { prev: NaiveDate, next: NaiveDate },
}

/// An ordered, validated sequence of daily bars for one symbol.
///
/// Dates are strictly increasing; every bar satisfies [`OhlcvBar`]'s
/// invariants by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DailySeries {
    symbol: String,
    bars: Vec<OhlcvBar>,
}

impl DailySeries {
    pub fn new(symbol: impl Into<String>, bars: Vec<OhlcvBar>) -> Result<Self, SeriesError> {
        for pair in bars.windows(2) {
            if pair[0].date() >= pair[1].date() {
                return Err(SeriesError::NonIncreasingDates {
                    prev: pair[0].date(),
                    next: pair[1].date(),
                });
            }
        }
        Ok(DailySeries {
            symbol: symbol.into(),
            bars,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn bars(&self) -> &[OhlcvBar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }
}

/// Normalized log-price components of one bar relative to the previous close:
///
/// - `o = ln(open / prev_close)` — the opening jump,
/// - `u = ln(high / open)`, `d = ln(low / open)` — the normalized extremes,
/// - `c = ln(close / open)` — the open-to-close move.
///
/// For every valid bar `d <= c <= u` and `d <= u`; `d <= 0 <= u` is *not*
/// guaranteed (the open need not be an extreme).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarComponents {
    pub o: f64,
    pub u: f64,
    pub d: f64,
    pub c: f64,
}

/// Compute the normalized log components of `bar` given the previous close.
///
/// # Panics
///
/// Panics if `prev_close` is not strictly positive and finite; that is a
/// programming error, not a data condition (data validation happens at bar
/// construction and in the ingest layer).
pub fn components(prev_close: f64, bar: &OhlcvBar) -> BarComponents {
    assert!(
        prev_close.is_finite() && prev_close > 0.0,
        "previous close must be strictly positive and finite"
    );
    BarComponents {
        o: (bar.open() / prev_close).ln(),
        u: (bar.high() / bar.open()).ln(),
        d: (bar.low() / bar.open()).ln(),
        c: (bar.close() / bar.open()).ln(),
    }
}

/// Window length and alignment requirements for an estimator run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    /// Window length in trading days; at least 2 (the Yang-Zhang weight
    /// divides by `n - 1`).
    pub n: usize,
    /// Whether the estimator reads the close/volume of the bar immediately
    /// before the window.
    pub requires_preceding_bar: bool,
}

/// Identifier of one volatility estimator.
///
/// The enum order is the canonical presentation order used in reports:
/// `cc, parkinson, gk, rs, yz, entropy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimatorKind {
    CloseToClose,
    Parkinson,
    GarmanKlass,
    RogersSatchell,
    YangZhang,
    IntrinsicEntropy,
}

impl EstimatorKind {
    /// All estimators in canonical report order.
    pub const ALL: [EstimatorKind; 6] = [
        EstimatorKind::CloseToClose,
        EstimatorKind::Parkinson,
        EstimatorKind::GarmanKlass,
        EstimatorKind::RogersSatchell,
        EstimatorKind::YangZhang,
        EstimatorKind::IntrinsicEntropy,
    ];

    /// Short label used in CLI flags and report columns.
    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::CloseToClose => "cc",
            EstimatorKind::Parkinson => "parkinson",
            EstimatorKind::GarmanKlass => "gk",
            EstimatorKind::RogersSatchell => "rs",
            EstimatorKind::YangZhang => "yz",
            EstimatorKind::IntrinsicEntropy => "entropy",
        }
    }

    /// Whether the estimator reads the preceding bar's close (and, for the
    /// entropy estimator, its volume). All window runs require the preceding
    /// bar to exist regardless, which keeps every estimator's sample aligned.
    pub fn requires_preceding_bar(self) -> bool {
        matches!(
            self,
            EstimatorKind::CloseToClose
                | EstimatorKind::YangZhang
                | EstimatorKind::IntrinsicEntropy
        )
    }

    pub fn window_spec(self, n: usize) -> WindowSpec {
        WindowSpec {
            n,
            requires_preceding_bar: self.requires_preceding_bar(),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Error parsing an estimator label.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown estimator `{input}`; valid names: cc, parkinson, gk, rs, yz, entropy")]
pub struct ParseEstimatorError {
    pub input: String,
}

impl FromStr for EstimatorKind {
    type Err = ParseEstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cc" => Ok(EstimatorKind::CloseToClose),
            "parkinson" => Ok(EstimatorKind::Parkinson),
            "gk" => Ok(EstimatorKind::GarmanKlass),
            "rs" => Ok(EstimatorKind::RogersSatchell),
            "yz" => Ok(EstimatorKind::YangZhang),
            "entropy" => Ok(EstimatorKind::IntrinsicEntropy),
            _ => Err(ParseEstimatorError {
                input: s.to_string(),
            }),
        }
    }
}
