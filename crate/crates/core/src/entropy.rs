//! The daily entropy-weighted volatility estimator: volume-based weights,
//! the three component entropies (overnight, open-to-close, intraday range),
//! both return conventions, and the combined estimate.
//!
//! Each in-window day receives the weight `p_i = q_i / Q` (its share of the
//! window's total volume `Q`), and price moves are scored by the Shannon-style
//! term `p ln p`. The combined estimate weights the open-to-close and range
//! components with the Yang-Zhang drift weight `k`:
//!
//! `H = | H_co + k H_oc + (1 - k) H_ohlc |`

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::classical::{yang_zhang_k, EstimatorError, Volatility, WindowView};

/// Which return convention the component entropies use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyMode {
    /// Price factors are arithmetic returns, e.g. `O_i / C_{i-1} - 1`.
    #[default]
    Relative,
    /// Price factors are log returns, e.g. `ln(O_i / C_{i-1})`; empirically
    /// slightly smaller magnitudes than the relative form.
    Log,
}

impl EntropyMode {
    pub fn label(self) -> &'static str {
        match self {
            EntropyMode::Relative => "relative",
            EntropyMode::Log => "log",
        }
    }
}

impl fmt::Display for EntropyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Error parsing an entropy-mode label.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown entropy mode `{input}`; valid modes: relative, log")]
pub struct ParseEntropyModeError {
    pub input: String,
}

impl FromStr for EntropyMode {
    type Err = ParseEntropyModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relative" => Ok(EntropyMode::Relative),
            "log" => Ok(EntropyMode::Log),
            _ => Err(ParseEntropyModeError {
                input: s.to_string(),
            }),
        }
    }
}

/// Volume weights for one window: `p[i] = q_i / Q` over the n in-window days
/// (summing to 1), plus `p0 = q_0 / Q` for the bar preceding the window.
///
/// `p0` uses the same denominator but is excluded from the unit sum, so it
/// may exceed any in-window weight.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropicWeights {
    p: Vec<f64>,
    p0: f64,
}

impl EntropicWeights {
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
}

/// `x ln x`, continuously extended with value 0 at x = 0.
fn xlnx(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Compute the entropic volume weights of a window.
///
/// Errors with [`EstimatorError::ZeroTotalVolume`] when every in-window bar
/// has zero volume: the weights (and the estimator) are undefined without
/// volume information, and a silent zero would be indistinguishable from a
/// flat market.
pub fn entropic_weights(w: &WindowView) -> Result<EntropicWeights, EstimatorError> {
    let total: u64 = w.bars().iter().map(|b| b.volume()).sum();
    if total == 0 {
        return Err(EstimatorError::ZeroTotalVolume);
    }
    let q = total as f64;
    let p = w.bars().iter().map(|b| b.volume() as f64 / q).collect();
    let p0 = w.preceding_volume() as f64 / q;
    Ok(EntropicWeights { p, p0 })
}

/// Diagnostic close-to-close entropy:
/// `-sum (C_i / C_{i-1} - 1) p_i ln(p_i)`, with `C_0` the preceding close.
///
/// Mirrors the classical close-to-close estimator's inputs but is not part
/// of the combined estimate; exposed as a standalone diagnostic only.
pub fn entropy_cc(w: &WindowView, weights: &EntropicWeights) -> f64 {
    debug_assert_eq!(w.len(), weights.p().len());
    let mut acc = 0.0;
    let mut prev_close = w.preceding_close();
    for (bar, &p) in w.bars().iter().zip(weights.p()) {
        acc += (bar.close() / prev_close - 1.0) * xlnx(p);
        prev_close = bar.close();
    }
    -acc
}

/// The three signed component entropies of one window. Components may take
/// either sign; only the combined estimate applies an absolute value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyComponents {
    /// Overnight (close-to-open) component; weights each day's opening jump
    /// by the *previous* day's weight, using `p0` for the first day.
    pub h_co: f64,
    /// Open-to-close component.
    pub h_oc: f64,
    /// Intraday range component built from high/low excursions against both
    /// open and close.
    pub h_ohlc: f64,
    pub mode: EntropyMode,
}

/// Compute the three component entropies under the chosen return convention.
///
/// Relative mode:
///
/// - `H_co   = -sum (O_i/C_{i-1} - 1) p_{i-1} ln(p_{i-1})`
/// - `H_oc   = -sum (C_i/O_i - 1) p_i ln(p_i)`
/// - `H_ohlc = -sum [(H_i/O_i - 1)(H_i/C_i - 1) + (L_i/O_i - 1)(L_i/C_i - 1)] p_i ln(p_i)`
///
/// Log mode replaces every price factor with the corresponding logarithm.
/// `x ln x` is 0 at x = 0 in every term.
pub fn entropy_components(
    w: &WindowView,
    weights: &EntropicWeights,
    mode: EntropyMode,
) -> EntropyComponents {
    debug_assert_eq!(w.len(), weights.p().len());
    let mut h_co = 0.0;
    let mut h_oc = 0.0;
    let mut h_ohlc = 0.0;
    let mut prev_close = w.preceding_close();
    for (i, bar) in w.bars().iter().enumerate() {
        let p_i = weights.p()[i];
        let p_prev = if i == 0 { weights.p0() } else { weights.p()[i - 1] };
        let (f_co, f_oc, f_range) = match mode {
            EntropyMode::Relative => (
                bar.open() / prev_close - 1.0,
                bar.close() / bar.open() - 1.0,
                (bar.high() / bar.open() - 1.0) * (bar.high() / bar.close() - 1.0)
                    + (bar.low() / bar.open() - 1.0) * (bar.low() / bar.close() - 1.0),
            ),
            EntropyMode::Log => (
                (bar.open() / prev_close).ln(),
                (bar.close() / bar.open()).ln(),
                (bar.high() / bar.open()).ln() * (bar.high() / bar.close()).ln()
                    + (bar.low() / bar.open()).ln() * (bar.low() / bar.close()).ln(),
            ),
        };
        h_co += f_co * xlnx(p_prev);
        h_oc += f_oc * xlnx(p_i);
        h_ohlc += f_range * xlnx(p_i);
        prev_close = bar.close();
    }
    EntropyComponents {
        h_co: -h_co,
        h_oc: -h_oc,
        h_ohlc: -h_ohlc,
        mode,
    }
}

/// The combined entropy-weighted volatility estimate:
/// `| H_co + k H_oc + (1 - k) H_ohlc |` with the Yang-Zhang weight
/// `k = yang_zhang_k(n)` for the window's length n.
pub fn intrinsic_entropy_estimate(
    w: &WindowView,
    mode: EntropyMode,
) -> Result<Volatility, EstimatorError> {
    let n = w.len();
    if n < 2 {
        return Err(EstimatorError::WindowTooShort { got: n });
    }
    let weights = entropic_weights(w)?;
    let comp = entropy_components(w, &weights, mode);
    let k = yang_zhang_k(n);
    Ok(Volatility::new(
        (comp.h_co + k * comp.h_oc + (1.0 - k) * comp.h_ohlc).abs(),
    ))
}
