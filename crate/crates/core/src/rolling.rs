//! Slide n-day windows across a daily series, run each selected estimator on
//! every window, and assemble date-aligned estimate series and comparison
//! reports.
//!
//! For a window length `n`, the estimate dated at bar `t` covers bars
//! `t-n+1 ..= t`, with bar `t-n` supplying the preceding close and volume;
//! every estimator therefore needs `n + 1` bars of history, which keeps all
//! estimators' samples date-aligned. Window lengths count trading days
//! (bars), not calendar spans. Individual window failures (e.g. a zero-volume
//! entropy window) are recorded as dated gaps with their reason — never as
//! fabricated values.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rayon::prelude::*;
use thiserror::Error;

use crate::classical::{self, EstimatorError, WindowView};
use crate::entropy::{self, EntropyMode};
use crate::metrics::{self, ComparisonReport, ComparisonRow, EstimateSeries};
use crate::types::{DailySeries, EstimatorKind};

/// Standard window lengths (trading days) for report tables.
pub const DEFAULT_WINDOWS: [usize; 10] = [5, 10, 15, 20, 30, 60, 90, 150, 260, 520];

/// What to roll: window lengths, estimator set, entropy return convention,
/// optional anchor (last) date, and the benchmark for comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct RollingConfig {
    windows: Vec<usize>,
    estimators: Vec<EstimatorKind>,
    entropy_mode: EntropyMode,
    anchor_date: Option<NaiveDate>,
    benchmark: EstimatorKind,
}

/// Engine-level failures (individual window failures become gaps instead).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RollingError {
    #[error("no window lengths configured")]
    NoWindows,
    #[error("window length {n} is below the minimum of 2 days")]
    WindowTooSmall { n: usize },
    #[error("no estimators selected")]
    NoEstimators,
    #[error(
        "series has {len} usable bars but the smallest window needs {needed} \
         (window length + 1 preceding bar)"
    )]
    SeriesTooShort { len: usize, needed: usize },
    #[error("anchor date {date} precedes every bar in the series")]
    AnchorOutOfRange { date: NaiveDate },
    #[error("benchmark estimator `{benchmark}` is not among the rolled estimators")]
    BenchmarkMissing { benchmark: EstimatorKind },
}

impl RollingConfig {
    /// Validate and normalize a configuration: window lengths are sorted and
    /// deduplicated, estimators deduplicated into canonical order. The
    /// benchmark defaults to close-to-close.
    pub fn new(
        windows: &[usize],
        estimators: &[EstimatorKind],
        entropy_mode: EntropyMode,
        anchor_date: Option<NaiveDate>,
    ) -> Result<Self, RollingError> {
        if windows.is_empty() {
            return Err(RollingError::NoWindows);
        }
        if let Some(&n) = windows.iter().find(|&&n| n < 2) {
            return Err(RollingError::WindowTooSmall { n });
        }
        if estimators.is_empty() {
            return Err(RollingError::NoEstimators);
        }
        let mut windows = windows.to_vec();
        windows.sort_unstable();
        windows.dedup();
        let estimators = EstimatorKind::ALL
            .into_iter()
            .filter(|kind| estimators.contains(kind))
            .collect();
        Ok(RollingConfig {
            windows,
            estimators,
            entropy_mode,
            anchor_date,
            benchmark: EstimatorKind::CloseToClose,
        })
    }

    /// Replace the comparison benchmark (close-to-close by default).
    pub fn with_benchmark(mut self, benchmark: EstimatorKind) -> Self {
        self.benchmark = benchmark;
        self
    }

    pub fn windows(&self) -> &[usize] {
        &self.windows
    }

    pub fn estimators(&self) -> &[EstimatorKind] {
        &self.estimators
    }

    pub fn entropy_mode(&self) -> EntropyMode {
        self.entropy_mode
    }

    pub fn anchor_date(&self) -> Option<NaiveDate> {
        self.anchor_date
    }

    pub fn benchmark(&self) -> EstimatorKind {
        self.benchmark
    }
}

impl Default for RollingConfig {
    /// All estimators over the standard windows, relative-return entropy,
    /// anchored at the series end, benchmarked against close-to-close.
    fn default() -> Self {
        RollingConfig::new(
            &DEFAULT_WINDOWS,
            &EstimatorKind::ALL,
            EntropyMode::default(),
            None,
        )
        .expect("static default configuration is valid")
    }
}

/// One window the estimator could not evaluate, and why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gap {
    pub date: NaiveDate,
    pub reason: EstimatorError,
}

/// The estimates one (estimator, n) pair produced, plus its gap log.
/// Every eligible date lands in exactly one of the two.
#[derive(Debug, Clone, PartialEq)]
pub struct RolledSeries {
    pub series: EstimateSeries,
    pub gaps: Vec<Gap>,
}

/// All rolled series, keyed by (estimator, window length) in deterministic
/// iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct RollOutput {
    symbol: String,
    results: BTreeMap<(EstimatorKind, usize), RolledSeries>,
}

impl RollOutput {
    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn results(&self) -> &BTreeMap<(EstimatorKind, usize), RolledSeries> {
        &self.results
    }

    pub fn get(&self, estimator: EstimatorKind, n: usize) -> Option<&RolledSeries> {
        self.results.get(&(estimator, n))
    }

    /// Window lengths present in the output, ascending.
    pub fn window_lengths(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.results.keys().map(|&(_, n)| n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }
}

fn evaluate(
    view: &WindowView,
    estimator: EstimatorKind,
    mode: EntropyMode,
) -> Result<f64, EstimatorError> {
    let vol = match estimator {
        EstimatorKind::CloseToClose => classical::close_to_close(view),
        EstimatorKind::Parkinson => classical::parkinson(view),
        EstimatorKind::GarmanKlass => classical::garman_klass(view),
        EstimatorKind::RogersSatchell => classical::rogers_satchell(view),
        EstimatorKind::YangZhang => classical::yang_zhang(view),
        EstimatorKind::IntrinsicEntropy => entropy::intrinsic_entropy_estimate(view, mode),
    };
    vol.map(|v| v.value())
}

/// Roll every configured (estimator, n) pair across the series.
///
/// Window lengths the series cannot support (fewer than `n + 1` bars at or
/// before the anchor) are dropped; if none fits, the call fails with
/// [`RollingError::SeriesTooShort`]. The work is parallelized across
/// (estimator, n, t); output is deterministic and identical at every
/// parallelism level because each window's estimate is computed independently
/// and collected in input order.
pub fn roll(series: &DailySeries, cfg: &RollingConfig) -> Result<RollOutput, RollingError> {
    let bars = series.bars();
    let end = match cfg.anchor_date() {
        None => bars.len(),
        Some(date) => {
            let idx = bars
                .iter()
                .rposition(|b| b.date() <= date)
                .ok_or(RollingError::AnchorOutOfRange { date })?;
            idx + 1
        }
    };
    let effective = &bars[..end];

    let eligible: Vec<usize> = cfg
        .windows()
        .iter()
        .copied()
        .filter(|&n| effective.len() > n)
        .collect();
    if eligible.is_empty() {
        let needed = cfg.windows().first().copied().unwrap_or(2) + 1;
        return Err(RollingError::SeriesTooShort {
            len: effective.len(),
            needed,
        });
    }

    let pairs: Vec<(EstimatorKind, usize)> = cfg
        .estimators()
        .iter()
        .flat_map(|&est| eligible.iter().map(move |&n| (est, n)))
        .collect();

    let mode = cfg.entropy_mode();
    let computed: Vec<((EstimatorKind, usize), RolledSeries)> = pairs
        .par_iter()
        .map(|&(estimator, n)| {
            let outcomes: Vec<(NaiveDate, Result<f64, EstimatorError>)> = (n..effective.len())
                .into_par_iter()
                .map(|t| {
                    let preceding = &effective[t - n];
                    let view = WindowView::new(
                        &effective[t - n + 1..=t],
                        preceding.close(),
                        preceding.volume(),
                    );
                    (effective[t].date(), evaluate(&view, estimator, mode))
                })
                .collect();

            let mut dates = Vec::new();
            let mut values = Vec::new();
            let mut gaps = Vec::new();
            for (date, outcome) in outcomes {
                match outcome {
                    Ok(value) => {
                        dates.push(date);
                        values.push(value);
                    }
                    Err(reason) => gaps.push(Gap { date, reason }),
                }
            }
            let series = EstimateSeries::new(estimator, n, dates, values)
                .expect("rolled estimates are finite, non-negative, and date-ordered");
            ((estimator, n), RolledSeries { series, gaps })
        })
        .collect();

    Ok(RollOutput {
        symbol: series.symbol().to_string(),
        results: computed.into_iter().collect(),
    })
}

/// Build one comparison report per window length: Mean/Var/CV over each
/// estimator's own estimates, and MSE/PB/Efficiency against the benchmark on
/// date-intersected samples (both variances recomputed on the intersection).
///
/// The benchmark's own row carries the exact identities mse = 0, pb = 0,
/// efficiency = 1. (estimator, n) pairs that produced no estimates at all are
/// omitted from the table; their gap logs remain in the [`RollOutput`].
pub fn summarize(
    rolled: &RollOutput,
    cfg: &RollingConfig,
) -> Result<Vec<ComparisonReport>, RollingError> {
    let benchmark = cfg.benchmark();
    if !cfg.estimators().contains(&benchmark) {
        return Err(RollingError::BenchmarkMissing { benchmark });
    }

    let mut reports = Vec::new();
    for n in rolled.window_lengths() {
        let bench_series = rolled
            .get(benchmark, n)
            .map(|rs| &rs.series)
            .ok_or(RollingError::BenchmarkMissing { benchmark })?;

        let mut rows = Vec::new();
        for kind in EstimatorKind::ALL {
            let Some(rs) = rolled.get(kind, n) else {
                continue;
            };
            if rs.series.is_empty() {
                continue;
            }
            let stats = metrics::mean_var_cv(&rs.series)
                .expect("non-empty series always has dispersion stats");

            let (mse, pb, pb_skipped, efficiency) = if kind == benchmark {
                (Ok(0.0), Ok(0.0), 0, Ok(1.0))
            } else {
                let (est_aligned, bench_aligned) = rs.series.intersect(bench_series);
                let mse = metrics::mse(&est_aligned, &bench_aligned);
                let (pb, skipped) =
                    match metrics::proportional_bias(&est_aligned, &bench_aligned) {
                        Ok(pb) => (Ok(pb.value), pb.skipped),
                        Err(err) => (Err(err), 0),
                    };
                let efficiency = metrics::efficiency(&est_aligned, &bench_aligned);
                (mse, pb, skipped, efficiency)
            };

            rows.push(ComparisonRow {
                estimator: kind,
                mean: stats.mean,
                var: stats.var,
                cv: stats.cv,
                mse,
                pb,
                efficiency,
                pb_skipped,
                gaps: rs.gaps.len(),
                n_estimates: rs.series.len(),
            });
        }
        reports.push(ComparisonReport {
            symbol: rolled.symbol().to_string(),
            window_n: n,
            benchmark,
            rows,
        });
    }
    Ok(reports)
}
