//! Estimator-comparison statistics over aligned estimate series:
//! mean/variance/CV, mean squared error, proportional bias, and efficiency
//! against a benchmark estimator.
//!
//! All variances use the population `1/n` divisor.

use chrono::NaiveDate;
use thiserror::Error;

use crate::types::EstimatorKind;

/// Per-date volatility estimates produced by one estimator over rolling
/// windows of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSeries {
    estimator: EstimatorKind,
    window_n: usize,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

/// Metric failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("series is empty")]
    EmptySeries,
    #[error("series lengths or dates do not match")]
    MisalignedSeries,
    #[error("dates must be strictly increasing")]
    UnorderedDates,
    #[error("values must be finite and non-negative")]
    InvalidValue,
    #[error("coefficient of variation undefined at zero mean")]
    ZeroMeanCv,
    #[error("every benchmark value is zero")]
    AllBenchmarkZero,
    #[error("estimator series has zero variance")]
    ZeroEstimatorVariance,
}

impl EstimateSeries {
    pub fn new(
        estimator: EstimatorKind,
        window_n: usize,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self, MetricsError> {
        if dates.len() != values.len() {
            return Err(MetricsError::MisalignedSeries);
        }
        if dates.windows(2).any(|pair| pair[0] >= pair[1]) {
            return Err(MetricsError::UnorderedDates);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(MetricsError::InvalidValue);
        }
        Ok(EstimateSeries {
            estimator,
            window_n,
            dates,
            values,
        })
    }

    pub fn estimator(&self) -> EstimatorKind {
        self.estimator
    }

    pub fn window_n(&self) -> usize {
        self.window_n
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restrict both series to their common dates, preserving order.
    /// Both inputs have strictly increasing dates, so one merge pass suffices.
    pub fn intersect(&self, other: &EstimateSeries) -> (EstimateSeries, EstimateSeries) {
        let mut dates = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            match self.dates[i].cmp(&other.dates[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    dates.push(self.dates[i]);
                    left.push(self.values[i]);
                    right.push(other.values[j]);
                    i += 1;
                    j += 1;
                }
            }
        }
        let a = EstimateSeries {
            estimator: self.estimator,
            window_n: self.window_n,
            dates: dates.clone(),
            values: left,
        };
        let b = EstimateSeries {
            estimator: other.estimator,
            window_n: other.window_n,
            dates,
            values: right,
        };
        (a, b)
    }
}

/// Population mean and variance of a series, with the coefficient of
/// variation `sqrt(var) / mean`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionStats {
    pub mean: f64,
    pub var: f64,
    /// `Err(ZeroMeanCv)` when the mean is zero; mean and variance are still
    /// meaningful in that case.
    pub cv: Result<f64, MetricsError>,
}

fn population_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Mean, population variance, and coefficient of variation of a series.
pub fn mean_var_cv(series: &EstimateSeries) -> Result<DispersionStats, MetricsError> {
    if series.is_empty() {
        return Err(MetricsError::EmptySeries);
    }
    let (mean, var) = population_stats(series.values());
    let cv = if mean == 0.0 {
        Err(MetricsError::ZeroMeanCv)
    } else {
        Ok(var.sqrt() / mean)
    };
    Ok(DispersionStats { mean, var, cv })
}

fn ensure_aligned(a: &EstimateSeries, b: &EstimateSeries) -> Result<usize, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptySeries);
    }
    if a.len() != b.len() || a.dates() != b.dates() {
        return Err(MetricsError::MisalignedSeries);
    }
    Ok(a.len())
}

/// Mean squared pointwise difference between two date-aligned series.
pub fn mse(est: &EstimateSeries, bench: &EstimateSeries) -> Result<f64, MetricsError> {
    let n = ensure_aligned(est, bench)?;
    let acc: f64 = bench
        .values()
        .iter()
        .zip(est.values())
        .map(|(b, e)| (b - e) * (b - e))
        .sum();
    Ok(acc / n as f64)
}

/// Proportional bias with the count of skipped zero-benchmark points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionalBias {
    pub value: f64,
    /// Points excluded because the benchmark was exactly zero there; kept as
    /// a tally so the omission stays auditable.
    pub skipped: usize,
}

/// Mean of `|V_i - v_i| / V_i` over points where the benchmark `V_i > 0`.
///
/// Zero-benchmark points are skipped and tallied rather than failing the
/// whole comparison; if every point is skipped the bias is undefined and
/// [`MetricsError::AllBenchmarkZero`] is returned.
pub fn proportional_bias(
    est: &EstimateSeries,
    bench: &EstimateSeries,
) -> Result<ProportionalBias, MetricsError> {
    ensure_aligned(est, bench)?;
    let mut acc = 0.0;
    let mut retained = 0usize;
    let mut skipped = 0usize;
    for (b, e) in bench.values().iter().zip(est.values()) {
        if *b > 0.0 {
            acc += (b - e).abs() / b;
            retained += 1;
        } else {
            skipped += 1;
        }
    }
    if retained == 0 {
        return Err(MetricsError::AllBenchmarkZero);
    }
    Ok(ProportionalBias {
        value: acc / retained as f64,
        skipped,
    })
}

/// Efficiency `Var(bench) / Var(est)`, both population variances computed
/// over the same date-aligned sample.
pub fn efficiency(est: &EstimateSeries, bench: &EstimateSeries) -> Result<f64, MetricsError> {
    ensure_aligned(est, bench)?;
    let (_, var_est) = population_stats(est.values());
    let (_, var_bench) = population_stats(bench.values());
    if var_est == 0.0 {
        return Err(MetricsError::ZeroEstimatorVariance);
    }
    Ok(var_bench / var_est)
}

/// One estimator's row in a comparison report. Metric cells that are
/// undefined for the sample carry the causing error instead of a fabricated
/// number; report writers render them as `NA`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub estimator: EstimatorKind,
    pub mean: f64,
    pub var: f64,
    pub cv: Result<f64, MetricsError>,
    pub mse: Result<f64, MetricsError>,
    pub pb: Result<f64, MetricsError>,
    pub efficiency: Result<f64, MetricsError>,
    /// Zero-benchmark points skipped by the proportional bias.
    pub pb_skipped: usize,
    /// Windows where the estimator failed (see the rolling engine's gap log).
    pub gaps: usize,
    /// Number of estimates behind mean/var/cv.
    pub n_estimates: usize,
}

/// Comparison statistics for every estimator at one window length.
/// The benchmark row carries the exact identities mse = 0, pb = 0,
/// efficiency = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub symbol: String,
    pub window_n: usize,
    pub benchmark: EstimatorKind,
    pub rows: Vec<ComparisonRow>,
}
