//! Hard-decision ternary message passing on an LT factor graph.
//!
//! Messages live in `{-1, 0, +1}` where `+1` stands for bit 0, `-1` for
//! bit 1 and `0` for "no opinion". One iteration is a full flood:
//!
//! * output → input: the output's observation times the product of the
//!   other incoming input → output messages, or 0 if any of them is 0;
//! * input → output: the sign of the sum of the other incoming
//!   output → input messages (plus the weighted direct observation when the
//!   graph carries one), 0 on a tie.
//!
//! Input → output messages start at 0, so only degree-1 outputs speak in the
//! first round. The final decision on each input is the sign of the sum of
//! all its incoming messages; a zero sum leaves the bit unresolved.

use super::graph::FactorGraph;

/// Iteration cap used when the caller has no preference.
pub const DEFAULT_MAX_ITERS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub message_estimate: Vec<u8>,
    /// Inputs whose final vote summed to zero. Their estimate is reported as 0.
    pub unresolved: Vec<bool>,
    pub converged: bool,
    pub iterations_used: usize,
    pub symbols_consumed: usize,
    pub realized_rate: f64,
    pub overhead: f64,
}

impl DecodeResult {
    pub fn k(&self) -> usize {
        self.message_estimate.len()
    }

    pub fn unresolved_count(&self) -> usize {
        self.unresolved.iter().filter(|&&u| u).count()
    }

    /// Converged with every bit decided.
    pub fn is_complete(&self) -> bool {
        self.converged && self.unresolved_count() == 0
    }

    /// Bit errors against `truth`, counting each unresolved bit as half an
    /// error.
    pub fn weighted_errors(&self, truth: &[u8]) -> f64 {
        assert_eq!(truth.len(), self.k(), "reference message has the wrong length");
        self.message_estimate
            .iter()
            .zip(&self.unresolved)
            .zip(truth)
            .map(|((&est, &unres), &t)| {
                if unres {
                    0.5
                } else if est != t {
                    1.0
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn bit_error_rate(&self, truth: &[u8]) -> f64 {
        self.weighted_errors(truth) / self.k() as f64
    }
}

#[inline]
fn sign(x: i32) -> i8 {
    x.signum() as i8
}

/// Runs the ternary schedule to a fixed point or `max_iters` floods.
///
/// `channel_weight` scales the vote of direct input observations and has no
/// effect on graphs without them.
pub fn decode_ternary(graph: &FactorGraph, max_iters: usize, channel_weight: u32) -> DecodeResult {
    let max_iters = max_iters.max(1);
    let k = graph.k();
    let n = graph.n();
    let edges = graph.edge_count();
    let obs = graph.observations();
    let priors = graph.input_observations();
    let weight = channel_weight as i32;

    let mut to_output = vec![0i8; edges];
    let mut to_input = vec![0i8; edges];
    let mut converged = false;
    let mut iterations_used = max_iters;

    for iter in 1..=max_iters {
        let mut changed = false;

        for j in 0..n {
            let range = graph.check_edges(j);
            let mut product = obs[j];
            let mut zeros = 0usize;
            let mut zero_edge = usize::MAX;
            for e in range.clone() {
                match to_output[e] {
                    0 => {
                        zeros += 1;
                        zero_edge = e;
                    }
                    m => product *= m,
                }
            }
            for e in range {
                let msg = match zeros {
                    0 => product * to_output[e],
                    1 if e == zero_edge => product,
                    _ => 0,
                };
                if msg != to_input[e] {
                    to_input[e] = msg;
                    changed = true;
                }
            }
        }

        for i in 0..k {
            let ids = graph.input_edge_ids(i);
            let base = priors.map_or(0, |p| weight * p[i] as i32);
            let total: i32 = base + ids.iter().map(|&e| to_input[e] as i32).sum::<i32>();
            for &e in ids {
                let msg = sign(total - to_input[e] as i32);
                if msg != to_output[e] {
                    to_output[e] = msg;
                    changed = true;
                }
            }
        }

        if !changed {
            converged = true;
            iterations_used = iter;
            break;
        }
    }

    let mut message_estimate = vec![0u8; k];
    let mut unresolved = vec![false; k];
    for i in 0..k {
        let base = priors.map_or(0, |p| weight * p[i] as i32);
        let total: i32 = base
            + graph
                .input_edge_ids(i)
                .iter()
                .map(|&e| to_input[e] as i32)
                .sum::<i32>();
        match total.signum() {
            1 => message_estimate[i] = 0,
            -1 => message_estimate[i] = 1,
            _ => unresolved[i] = true,
        }
    }

    DecodeResult {
        message_estimate,
        unresolved,
        converged,
        iterations_used,
        symbols_consumed: n,
        realized_rate: k as f64 / n as f64,
        overhead: n as f64 / k as f64 - 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encoder::{bit_to_sign, CodedSymbol};

    fn graph_for(message: &[u8], checks: &[&[usize]]) -> FactorGraph {
        let symbols: Vec<CodedSymbol> = checks
            .iter()
            .enumerate()
            .map(|(j, c)| CodedSymbol::from_neighbors(j, c.to_vec(), message).unwrap())
            .collect();
        let obs = symbols.iter().map(|s| bit_to_sign(s.bit)).collect();
        FactorGraph::build(symbols, obs, message.len()).unwrap()
    }

    #[test]
    fn direct_copy_code_recovers_in_two_iterations() {
        let message = [1, 0, 1, 1, 0];
        let g = graph_for(&message, &[&[0], &[1], &[2], &[3], &[4]]);
        let r = decode_ternary(&g, DEFAULT_MAX_ITERS, 1);
        assert_eq!(r.message_estimate, message);
        assert!(r.is_complete());
        assert!(r.iterations_used <= 2);
        assert_eq!(r.realized_rate, 1.0);
        assert_eq!(r.overhead, 0.0);
    }

    #[test]
    fn flipped_observations_on_copy_code_complement_the_estimate() {
        let message = [1, 0, 1, 1, 0];
        let g = graph_for(&message, &[&[0], &[1], &[2], &[3], &[4]]).with_flipped_observations();
        let r = decode_ternary(&g, DEFAULT_MAX_ITERS, 1);
        let complement: Vec<u8> = message.iter().map(|b| b ^ 1).collect();
        assert_eq!(r.message_estimate, complement);
    }

    #[test]
    fn peels_a_chain() {
        // 0 is seeded by a degree-1 output, then each degree-2 output hands
        // the value down the chain.
        let message = [1, 1, 0, 1];
        let g = graph_for(&message, &[&[0], &[0, 1], &[1, 2], &[2, 3]]);
        let r = decode_ternary(&g, DEFAULT_MAX_ITERS, 1);
        assert!(r.is_complete());
        assert_eq!(r.message_estimate, message);
    }

    #[test]
    fn no_degree_one_output_means_nothing_resolves() {
        let message = [1, 0, 1];
        let g = graph_for(&message, &[&[0, 1], &[1, 2]]);
        let r = decode_ternary(&g, 10, 1);
        assert!(r.converged);
        assert_eq!(r.unresolved_count(), 3);
        assert_eq!(r.weighted_errors(&message), 1.5);
    }

    #[test]
    fn direct_observations_are_weighted() {
        // One parity check against a systematic observation of input 0:
        // with weight 3 the prior outvotes the two checks on input 0.
        let message = [0, 0];
        let g = graph_for(&message, &[&[0], &[0]])
            .with_input_observations(vec![-1, 1])
            .unwrap();
        let heavy = decode_ternary(&g, 10, 3);
        assert_eq!(heavy.message_estimate[0], 1);
        let light = decode_ternary(&g, 10, 1);
        assert_eq!(light.message_estimate[0], 0);
        // input 1 has only its prior
        assert_eq!(light.message_estimate[1], 0);
        assert!(!light.unresolved[1]);
    }

    #[test]
    fn iteration_cap_is_respected() {
        let message = [1, 1, 0, 1];
        let g = graph_for(&message, &[&[0], &[0, 1], &[1, 2], &[2, 3]]);
        let r = decode_ternary(&g, 1, 1);
        assert_eq!(r.iterations_used, 1);
        assert!(!r.converged);
    }
}
