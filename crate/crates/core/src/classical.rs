//! The five variance-based volatility estimators over a single n-day window:
//! close-to-close, Parkinson, Garman-Klass, Rogers-Satchell, and Yang-Zhang.
//!
//! Every estimator returns a per-day (non-annualized) volatility and uses the
//! population `1/n` divisor; none applies a Bessel correction. Estimators
//! consume a [`WindowView`] rather than a raw series so that the rolling
//! engine owns all alignment decisions.

use std::f64::consts::LN_2;

use thiserror::Error;

use crate::types::{components, OhlcvBar};

/// A borrowed view of one estimation window: the `n` in-window bars plus the
/// close price and traded volume of the bar immediately preceding the window.
///
/// Close-to-close, Yang-Zhang, and the entropy estimator read
/// `preceding_close` (the entropy estimator also reads `preceding_volume`);
/// Parkinson, Garman-Klass, and Rogers-Satchell ignore both, but consuming
/// the same view keeps the engine uniform. Windows shorter than two bars are
/// rejected by every estimator, not at construction, so that the
/// [`EstimatorError::WindowTooShort`] contract stays observable.
#[derive(Debug, Clone, Copy)]
pub struct WindowView<'a> {
    bars: &'a [OhlcvBar],
    preceding_close: f64,
    preceding_volume: u64,
}

impl<'a> WindowView<'a> {
    /// # Panics
    ///
    /// Panics if `preceding_close` is not strictly positive and finite;
    /// validated data cannot trigger this.
    pub fn new(bars: &'a [OhlcvBar], preceding_close: f64, preceding_volume: u64) -> Self {
        assert!(
            preceding_close.is_finite() && preceding_close > 0.0,
            "preceding close must be strictly positive and finite"
        );
        WindowView {
            bars,
            preceding_close,
            preceding_volume,
        }
    }

    pub fn bars(&self) -> &'a [OhlcvBar] {
        self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn preceding_close(&self) -> f64 {
        self.preceding_close
    }

    pub fn preceding_volume(&self) -> u64 {
        self.preceding_volume
    }
}

/// A non-negative, finite per-day volatility estimate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Volatility(f64);

impl Volatility {
    pub(crate) fn new(value: f64) -> Self {
        debug_assert!(value.is_finite() && value >= 0.0, "volatility {value}");
        Volatility(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Failure of one estimator on one window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EstimatorError {
    /// The window holds fewer than two bars.
    #[error("window must contain at least 2 bars, got {got}")]
    WindowTooShort { got: usize },
    /// The Garman-Klass sum of per-day terms came out negative; the estimate
    /// is undefined and is signalled rather than clamped to zero.
    #[error("negative variance sum in range-based estimator")]
    NegativeVarianceSum,
    /// Every in-window bar has zero traded volume, so entropic weights are
    /// undefined.
    #[error("window has zero total traded volume")]
    ZeroTotalVolume,
}

fn ensure_len(w: &WindowView) -> Result<usize, EstimatorError> {
    let n = w.len();
    if n < 2 {
        Err(EstimatorError::WindowTooShort { got: n })
    } else {
        Ok(n)
    }
}

/// Population variance (1/n divisor), two-pass.
fn population_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n
}

/// Close-to-close volatility: the population standard deviation of the
/// per-day total log returns `x_i = o_i + c_i = ln(C_i / C_{i-1})`, with the
/// drift `mu = (1/n) sum x_i` removed.
pub fn close_to_close(w: &WindowView) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    let mut xs = Vec::with_capacity(n);
    let mut prev_close = w.preceding_close();
    for bar in w.bars() {
        let comp = components(prev_close, bar);
        xs.push(comp.o + comp.c);
        prev_close = bar.close();
    }
    Ok(Volatility::new(population_variance(&xs).sqrt()))
}

/// Parkinson volatility: `sqrt( (1/n) sum (u_i - d_i)^2 / (4 ln 2) )`,
/// where `u_i - d_i = ln(H_i / L_i)` is the day's log range.
pub fn parkinson(w: &WindowView) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    let mut acc = 0.0;
    for bar in w.bars() {
        let u = (bar.high() / bar.open()).ln();
        let d = (bar.low() / bar.open()).ln();
        acc += (u - d) * (u - d) / (4.0 * LN_2);
    }
    Ok(Volatility::new((acc / n as f64).sqrt()))
}

/// Per-day Garman-Klass term:
/// `(1/2) ln(H/L)^2 - (2 ln 2 - 1) ln(C/O)^2`.
pub(crate) fn garman_klass_term(bar: &OhlcvBar) -> f64 {
    let hl = (bar.high() / bar.low()).ln();
    let co = (bar.close() / bar.open()).ln();
    0.5 * hl * hl - (2.0 * LN_2 - 1.0) * co * co
}

/// Garman-Klass over raw per-day terms. Split out so the negative-sum branch
/// stays testable: for bars that satisfy the range invariants, each per-day
/// term is provably non-negative (|ln(C/O)| <= ln(H/L) and
/// 2 ln 2 - 1 < 1/2), so a negative sum cannot be produced through the
/// validated public path.
pub(crate) fn garman_klass_from_terms(
    terms: impl IntoIterator<Item = f64>,
    n: usize,
) -> Result<Volatility, EstimatorError> {
    let sum: f64 = terms.into_iter().sum();
    if sum < 0.0 {
        return Err(EstimatorError::NegativeVarianceSum);
    }
    Ok(Volatility::new((sum / n as f64).sqrt()))
}

/// Garman-Klass volatility:
/// `sqrt( (1/n) sum [ (1/2) ln(H_i/L_i)^2 - (2 ln 2 - 1) ln(C_i/O_i)^2 ] )`.
///
/// A negative term sum yields [`EstimatorError::NegativeVarianceSum`] rather
/// than a silently clamped zero.
pub fn garman_klass(w: &WindowView) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    garman_klass_from_terms(w.bars().iter().map(garman_klass_term), n)
}

/// Per-day Rogers-Satchell term `u(u - c) + d(d - c)`, evaluated in the
/// equivalent product form `ln(H/O) ln(H/C) + ln(L/O) ln(L/C)`. Each product
/// pairs factors of equal sign (H >= O, C and L <= O, C), so the term is
/// non-negative even under floating-point rounding.
fn rogers_satchell_term(bar: &OhlcvBar) -> f64 {
    let ho = (bar.high() / bar.open()).ln();
    let hc = (bar.high() / bar.close()).ln();
    let lo = (bar.low() / bar.open()).ln();
    let lc = (bar.low() / bar.close()).ln();
    ho * hc + lo * lc
}

/// Rogers-Satchell volatility:
/// `sqrt( (1/n) sum [ ln(H_i/O_i) ln(H_i/C_i) + ln(L_i/O_i) ln(L_i/C_i) ] )`.
///
/// Drift-neutral: a pure trend day (O = L, C = H) contributes exactly zero.
pub fn rogers_satchell(w: &WindowView) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    let acc: f64 = w.bars().iter().map(rogers_satchell_term).sum();
    Ok(Volatility::new((acc / n as f64).sqrt()))
}

/// The Yang-Zhang drift weight
/// `k = 0.34 / (1.34 + (n + 1) / (n - 1))` for a window of `n >= 2` days.
///
/// Strictly increasing in `n`, bounded in `(0, 0.34 / 2.34)`; it can never
/// reach zero or one.
pub fn yang_zhang_k(n: usize) -> f64 {
    debug_assert!(n >= 2);
    0.34 / (1.34 + (n as f64 + 1.0) / (n as f64 - 1.0))
}

/// Yang-Zhang with an explicit weight; the public estimator fixes
/// `k = yang_zhang_k(n)`. Kept internal as a test seam for the boundary
/// behaviors at k = 0 (overnight + Rogers-Satchell only) and k = 1
/// (overnight + open-to-close only).
pub(crate) fn yang_zhang_with_k(w: &WindowView, k: f64) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    let mut opens = Vec::with_capacity(n);
    let mut closes = Vec::with_capacity(n);
    let mut prev_close = w.preceding_close();
    for bar in w.bars() {
        let comp = components(prev_close, bar);
        opens.push(comp.o);
        closes.push(comp.c);
        prev_close = bar.close();
    }
    let v_open = population_variance(&opens);
    let v_close = population_variance(&closes);
    let v_rs: f64 = w.bars().iter().map(rogers_satchell_term).sum::<f64>() / n as f64;
    Ok(Volatility::new(
        (v_open + k * v_close + (1.0 - k) * v_rs).sqrt(),
    ))
}

/// Yang-Zhang volatility:
/// `sqrt( V_open + k V_close + (1 - k) V_rs )` where `V_open`/`V_close` are
/// the population variances of the overnight and open-to-close log returns,
/// `V_rs` is the mean per-day Rogers-Satchell term (a variance), and `k`
/// comes from [`yang_zhang_k`].
pub fn yang_zhang(w: &WindowView) -> Result<Volatility, EstimatorError> {
    let n = ensure_len(w)?;
    yang_zhang_with_k(w, yang_zhang_k(n))
}
