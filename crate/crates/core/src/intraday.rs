//! Streaming entropy over an intraday trade sequence.
//!
//! Every executed trade contributes the term
//! `-(p_k / p_ref - 1) (q_k / Q_t) ln(q_k / Q_t)` where `Q_t` is the total
//! quantity traded so far; each new trade changes `Q_t` and therefore every
//! existing term, so the entropy is recomputed over the full retained log.

use thiserror::Error;

use crate::ingest::TradeRecord;

/// How the price factor's reference price is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferencePolicy {
    /// Each trade is compared against the previous trade's price. The first
    /// trade uses `session_reference` (typically the previous session's
    /// close); with no reference configured its price factor is 0.
    PreviousTrade { session_reference: Option<f64> },
    /// Every trade is compared against one fixed price.
    Fixed(f64),
}

/// Enumeration order for the moving-base fraction sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionOrder {
    /// `q_1/q_1, q_2/(q_1+q_2), q_3/(q_1+q_2+q_3), ...`
    OldestFirst,
    /// `q_N/q_N, q_{N-1}/(q_N+q_{N-1}), ..., q_1/Q`
    NewestFirst,
}

/// Streaming-entropy failures.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntradayError {
    /// The pushed trade's timestamp precedes the last accepted one.
    #[error("trade timestamp went backwards ({got} after {last}, epoch ms)")]
    NonMonotoneTimestamp { last: i64, got: i64 },
    /// No trades have been accepted yet.
    #[error("no trades recorded")]
    EmptyState,
}

/// Accumulated intraday trade state for one session.
///
/// Single-writer: pushes must be externally serialized; reads may run
/// concurrently while no push is in flight. The state is sendable between
/// threads.
#[derive(Debug, Clone, PartialEq)]
pub struct IntradayState {
    trades: Vec<(f64, u64)>,
    total_quantity: u64,
    last_timestamp: Option<i64>,
    policy: ReferencePolicy,
}

impl IntradayState {
    pub fn new(policy: ReferencePolicy) -> Self {
        IntradayState {
            trades: Vec::new(),
            total_quantity: 0,
            last_timestamp: None,
            policy,
        }
    }

    /// Number of trades accepted so far.
    pub fn trades_seen(&self) -> usize {
        self.trades.len()
    }

    /// Exact running total of traded quantity.
    pub fn total_quantity(&self) -> u64 {
        self.total_quantity
    }

    pub fn policy(&self) -> ReferencePolicy {
        self.policy
    }

    /// Append one trade. Timestamps must be non-decreasing; equal timestamps
    /// are fine (venues batch fills within one instant).
    pub fn push_trade(&mut self, trade: &TradeRecord) -> Result<(), IntradayError> {
        if let Some(last) = self.last_timestamp {
            if trade.timestamp_ms < last {
                return Err(IntradayError::NonMonotoneTimestamp {
                    last,
                    got: trade.timestamp_ms,
                });
            }
        }
        self.trades.push((trade.price, trade.quantity));
        self.total_quantity += trade.quantity;
        self.last_timestamp = Some(trade.timestamp_ms);
        Ok(())
    }

    /// The signed entropy over all retained trades at the current total
    /// quantity. Full recomputation, O(N) per call: every earlier term's
    /// `q_k / Q_t` fraction changes whenever `Q_t` grows, so there is nothing
    /// incremental to reuse without a compensating scheme.
    pub fn entropy_at(&self) -> Result<f64, IntradayError> {
        if self.trades.is_empty() {
            return Err(IntradayError::EmptyState);
        }
        debug_assert!(self.total_quantity > 0, "validated trades have q > 0");
        let q_total = self.total_quantity as f64;
        let mut acc = 0.0;
        let mut reference = match self.policy {
            ReferencePolicy::PreviousTrade { session_reference } => session_reference,
            ReferencePolicy::Fixed(price) => Some(price),
        };
        for &(price, quantity) in &self.trades {
            let fraction = quantity as f64 / q_total;
            let weight = if fraction == 0.0 {
                0.0
            } else {
                fraction * fraction.ln()
            };
            if let Some(r) = reference {
                acc += (price / r - 1.0) * weight;
            }
            if matches!(self.policy, ReferencePolicy::PreviousTrade { .. }) {
                reference = Some(price);
            }
        }
        Ok(-acc)
    }

    /// The cumulative-denominator fraction sequence: each quantity divided by
    /// the running total up to and including it, enumerated from either end.
    /// The first fraction is always exactly 1; the sum strictly exceeds 1
    /// whenever at least two trades are retained.
    pub fn moving_base_fractions(
        &self,
        order: FractionOrder,
    ) -> Result<Vec<f64>, IntradayError> {
        if self.trades.is_empty() {
            return Err(IntradayError::EmptyState);
        }
        let quantities: Vec<u64> = match order {
            FractionOrder::OldestFirst => self.trades.iter().map(|&(_, q)| q).collect(),
            FractionOrder::NewestFirst => self.trades.iter().rev().map(|&(_, q)| q).collect(),
        };
        let mut running: u64 = 0;
        let fractions = quantities
            .iter()
            .map(|&q| {
                running += q;
                q as f64 / running as f64
            })
            .collect();
        Ok(fractions)
    }
}
