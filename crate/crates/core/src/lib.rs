//! Historical-volatility analytics over daily OHLCV bars and intraday trades.
//!
//! The crate provides five classical range-based volatility estimators
//! (close-to-close, Parkinson, Garman-Klass, Rogers-Satchell, Yang-Zhang),
//! an entropy-weighted estimator that scores price moves by their traded
//! volume, a streaming variant of the entropy measure for intraday trade
//! sequences, a rolling n-day window engine, and the comparison statistics
//! (mean/variance/CV, MSE, proportional bias, efficiency) used to rank
//! estimators against a benchmark.
//!
//! All estimates are per-day (non-annualized) volatilities; variance-style
//! quantities use the population 1/n divisor throughout. Estimators consume
//! a [`WindowView`] — n consecutive bars plus the close and volume of the
//! bar immediately preceding the window — so the rolling engine owns all
//! alignment decisions.
//!
//! ```
//! use chrono::NaiveDate;
//! use entrovol::{close_to_close, OhlcvBar, WindowView};
//!
//! let d = |s: &str| s.parse::<NaiveDate>().unwrap();
//! let bars = vec![
//!     OhlcvBar::new(d("2021-01-04"), 100.0, 103.0, 99.0, 102.0, 1200).unwrap(),
//!     OhlcvBar::new(d("2021-01-05"), 101.0, 102.0, 98.0, 99.0, 900).unwrap(),
//! ];
//! let window = WindowView::new(&bars, 100.0, 1000);
//! let vol = close_to_close(&window).unwrap();
//! assert!(vol.value() > 0.0);
//! ```

pub mod classical;
pub mod entropy;
pub mod ingest;
pub mod intraday;
pub mod metrics;
pub mod report;
pub mod rolling;
pub mod types;

pub use classical::{
    close_to_close, garman_klass, parkinson, rogers_satchell, yang_zhang, yang_zhang_k,
    EstimatorError, Volatility, WindowView,
};
pub use entropy::{
    entropic_weights, entropy_cc, entropy_components, intrinsic_entropy_estimate,
    EntropicWeights, EntropyComponents, EntropyMode,
};
pub use ingest::{parse_daily_csv, parse_trades_csv, IngestError, TradeRecord};
pub use intraday::{FractionOrder, IntradayError, IntradayState, ReferencePolicy};
pub use metrics::{
    efficiency, mean_var_cv, mse, proportional_bias, ComparisonReport, ComparisonRow,
    DispersionStats, EstimateSeries, MetricsError, ProportionalBias,
};
pub use report::{
    fmt8, write_comparison_csv, write_daily_csv, write_series_csv, ReportDocument,
    ReportError, ReportMetadata, Scaling, TRADING_DAYS_PER_YEAR,
};
pub use rolling::{
    roll, summarize, Gap, RollOutput, RolledSeries, RollingConfig, RollingError,
    DEFAULT_WINDOWS,
};
pub use types::{
    components, BarComponents, BarError, DailySeries, EstimatorKind, OhlcvBar,
    ParseEstimatorError, SeriesError, WindowSpec,
};

/// Crate version string embedded in report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
