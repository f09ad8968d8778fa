//! Deterministic synthetic market data for the benchmark suite.

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Normal};

use entrovol::{DailySeries, OhlcvBar, TradeRecord};

/// A geometric-random-walk daily series with lognormal volumes.
pub fn synthetic_series(seed: u64, len: usize) -> DailySeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intraday: Normal<f64> = Normal::new(0.0, 0.012).unwrap();
    let overnight: Normal<f64> = Normal::new(0.0, 0.004).unwrap();
    let pad: Normal<f64> = Normal::new(0.0, 0.006).unwrap();
    let volume: LogNormal<f64> = LogNormal::new(13.0, 0.6).unwrap();

    let start = NaiveDate::from_ymd_opt(2017, 1, 2).unwrap();
    let mut close = 100.0f64;
    let bars: Vec<OhlcvBar> = (0..len)
        .map(|i| {
            let open = close * f64::exp(overnight.sample(&mut rng));
            let next_close = open * f64::exp(intraday.sample(&mut rng));
            let high = open.max(next_close) * f64::exp(pad.sample(&mut rng).abs());
            let low = open.min(next_close) * f64::exp(-pad.sample(&mut rng).abs());
            close = next_close;
            OhlcvBar::new(
                start + chrono::Days::new(i as u64),
                open,
                high,
                low,
                next_close,
                volume.sample(&mut rng) as i64,
            )
            .expect("synthetic bars are valid")
        })
        .collect();
    DailySeries::new("BENCH", bars).expect("dates ascend by construction")
}

/// A stream of trades with jittered prices and small random quantities.
pub fn synthetic_trades(seed: u64, len: usize) -> Vec<TradeRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut price = 100.0f64;
    (0..len)
        .map(|i| {
            price *= f64::exp(rng.random_range(-0.0005..0.0005));
            TradeRecord {
                seq: i as u64 + 1,
                price,
                quantity: rng.random_range(1..500),
                timestamp_ms: 1_600_000_000_000 + i as i64 * 250,
            }
        })
        .collect()
}
