use rand::Rng;

use super::decoder::{decode_ternary, DecodeResult, DEFAULT_MAX_ITERS};
use super::degree::DegreeDistribution;
use super::encoder::{bit_to_sign, bsc, LtEncoder};
use super::graph::FactorGraph;
use crate::error::{Error, Result};

/// When the receiver tries to decode while coded bits keep arriving.
#[derive(Debug, Clone, PartialEq)]
pub struct AttemptPolicy {
    /// Symbols collected before the first attempt.
    pub first_attempt: usize,
    /// New symbols between attempts.
    pub step: usize,
    /// Give up after this many symbols.
    pub max_symbols: usize,
    pub max_iters: usize,
    pub channel_weight: u32,
}

impl AttemptPolicy {
    /// First attempt at `n = k`, then every `⌈0.05 k⌉` symbols, up to `20 k`.
    pub fn for_block(k: usize) -> Self {
        Self {
            first_attempt: k,
            step: (k as f64 * 0.05).ceil().max(1.0) as usize,
            max_symbols: 20 * k,
            max_iters: DEFAULT_MAX_ITERS,
            channel_weight: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.first_attempt == 0 {
            return Err(Error::param("first_attempt", "must be at least 1"));
        }
        if self.step == 0 {
            return Err(Error::param("step", "must be at least 1"));
        }
        if self.max_symbols < self.first_attempt {
            return Err(Error::param("max_symbols", "budget is below the first attempt"));
        }
        Ok(())
    }
}

/// Streams LT-coded bits of `message` through a BSC with flip probability
/// `p`, attempting a decode per `policy`, until an attempt converges with
/// every bit decided. The returned result's `realized_rate` is the rate the
/// channel actually allowed.
///
/// If the symbol budget runs out, the last attempt is returned with
/// `converged` forced to `false`.
pub fn run_incremental<R: Rng + ?Sized>(
    message: &[u8],
    dist: &DegreeDistribution,
    p: f64,
    rng: &mut R,
    policy: &AttemptPolicy,
) -> Result<DecodeResult> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::param("p", format!("flip probability {p} outside [0, 0.5)")));
    }
    policy.validate()?;
    let k = message.len();
    let mut encoder = LtEncoder::new(message, dist)?;
    let mut symbols = Vec::with_capacity(policy.first_attempt + 8 * policy.step);
    let mut observations = Vec::with_capacity(symbols.capacity());
    let mut next_attempt = policy.first_attempt;

    loop {
        while symbols.len() < next_attempt {
            let s = encoder.next_symbol(rng);
            observations.push(bit_to_sign(bsc(s.bit, p, rng)));
            symbols.push(s);
        }
        // TODO: append the new symbols to the previous attempt's graph
        // instead of cloning and rebuilding it.
        let graph = FactorGraph::build(symbols.clone(), observations.clone(), k)?;
        let mut result = decode_ternary(&graph, policy.max_iters, policy.channel_weight);
        if result.is_complete() {
            return Ok(result);
        }
        if symbols.len() >= policy.max_symbols {
            result.converged = false;
            return Ok(result);
        }
        next_attempt = (next_attempt + policy.step).min(policy.max_symbols);
    }
}
