//! Fixtures shared by the criterion benches.

use implantphy_core::codec::{bit_to_sign, bsc};
use implantphy_core::{DegreeDistribution, FactorGraph, LtEncoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_message(k: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| rng.random_range(0..2u8)).collect()
}

/// `n` coded symbols of a random `k`-bit message seen through a BSC(p).
pub fn noisy_graph(k: usize, n: usize, p: f64, seed: u64) -> FactorGraph {
    let msg = random_message(k, seed);
    let dist = DegreeDistribution::implant();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let mut enc = LtEncoder::new(&msg, &dist).unwrap();
    let symbols: Vec<_> = (0..n).map(|_| enc.next_symbol(&mut rng)).collect();
    let obs = symbols.iter().map(|s| bit_to_sign(bsc(s.bit, p, &mut rng))).collect();
    FactorGraph::build(symbols, obs, k).unwrap()
}
