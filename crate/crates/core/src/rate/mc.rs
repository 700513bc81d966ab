use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codec::{run_incremental, AttemptPolicy, DegreeDistribution};
use crate::error::{Error, Result};
use crate::phy::{channel_bit_error, db_to_linear, BerConvention};

/// Outcome of a batch of seeded incremental-decoding trials.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// Mean realized rate over trials that met the BER target; 0 if none did.
    pub mean_rate: f64,
    pub std_rate: f64,
    /// Weighted bit errors over all trials divided by all bits sent.
    pub achieved_ber: f64,
    pub successes: usize,
    pub trials: usize,
    pub channel_p: f64,
}

/// Generator for trial `trial` of a batch seeded with `seed`. Independent of
/// thread scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn mc_rate_estimate(m: u32, snr_db: f64, pb_target: f64, k: usize, trials: usize, seed: u64) -> Result<McEstimate> {
    mc_rate_estimate_with(
        &DegreeDistribution::implant(),
        &AttemptPolicy::for_block(k),
        BerConvention::PerBit,
        m,
        snr_db,
        pb_target,
        k,
        trials,
        seed,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn mc_rate_estimate_with(
    dist: &DegreeDistribution,
    policy: &AttemptPolicy,
    conv: BerConvention,
    m: u32,
    snr_db: f64,
    pb_target: f64,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    if k < 256 {
        return Err(Error::param("k", format!("{k} is below 256")));
    }
    if trials < 10 {
        return Err(Error::param("trials", format!("{trials} is below 10")));
    }
    if !(pb_target > 0.0 && pb_target < 0.5) {
        return Err(Error::param("pb_target", format!("{pb_target} outside (0, 0.5)")));
    }
    let channel_p = channel_bit_error(db_to_linear(snr_db), m, conv);
    if channel_p >= 0.5 {
        return Err(Error::param("snr_db", format!("channel is useless at {snr_db} dB")));
    }

    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let message: Vec<u8> = (0..k).map(|_| rng.random_range(0..2u8)).collect();
            let res = run_incremental(&message, dist, channel_p, &mut rng, policy)?;
            Ok((res.realized_rate, res.weighted_errors(&message)))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;

    let total_errors: f64 = outcomes.iter().map(|o| o.1).sum();
    let good: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.1 / k as f64 <= pb_target)
        .map(|o| o.0)
        .collect();
    let (mean_rate, std_rate) = if good.is_empty() {
        (0.0, 0.0)
    } else {
        let n = good.len() as f64;
        let mean = good.iter().sum::<f64>() / n;
        let var = good.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    };
    Ok(McEstimate {
        mean_rate,
        std_rate,
        achieved_ber: total_errors / (k * trials) as f64,
        successes: good.len(),
        trials,
        channel_p,
    })
}
