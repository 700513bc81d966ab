//! Frame timeline and end-to-end link runs over one `L`-bit frame.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::codec::{bsc, run_incremental, AttemptPolicy, DegreeDistribution};
use crate::energy::{energy_coded, energy_uncoded, optimize, EnergyBreakdown, ScenarioConfig, Scheme};
use crate::error::{Error, Result};
use crate::phy::{channel_bit_error, db_to_linear, linear_to_db, required_snr, LinkBudget};
use crate::rate::{trial_rng, RateGainRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Transient,
    Active,
    Sleep,
}

/// One frame period split into start-up, active and sleep time. Sleep is
/// whatever is left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSchedule {
    pub t_l: f64,
    pub t_tr: f64,
    pub t_ac: f64,
    pub t_sl: f64,
}

impl FrameSchedule {
    pub fn new(t_l: f64, t_tr: f64, t_ac: f64) -> Result<Self> {
        if !(t_l > 0.0) || !(t_tr >= 0.0) || !(t_ac >= 0.0) {
            return Err(Error::param("schedule", "durations must be nonnegative, T_L positive"));
        }
        if t_ac > t_l - t_tr {
            return Err(Error::InfeasibleFrame {
                active_s: t_ac,
                budget_s: t_l - t_tr,
            });
        }
        Ok(Self {
            t_l,
            t_tr,
            t_ac,
            t_sl: t_l - t_tr - t_ac,
        })
    }

    pub fn for_link(link: &LinkBudget, rate: f64) -> Result<Self> {
        Self::new(link.t_l_s, link.t_tr_s, link.active_duration() / rate)
    }

    pub fn modes(&self) -> [(Mode, f64); 3] {
        [
            (Mode::Transient, self.t_tr),
            (Mode::Active, self.t_ac),
            (Mode::Sleep, self.t_sl),
        ]
    }

    pub fn duty_cycle(&self) -> f64 {
        self.t_ac / self.t_l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeChoice {
    Uncoded,
    Coded,
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkRunConfig {
    pub distance_m: f64,
    pub scheme: SchemeChoice,
    pub block_size: usize,
    pub seed: u64,
    pub dist: DegreeDistribution,
    /// Built per block from the block length.
    pub max_iters: usize,
    pub channel_weight: u32,
    /// Replaces the SNR implied by the operating point.
    pub snr_override_db: Option<f64>,
}

impl LinkRunConfig {
    pub fn new(distance_m: f64, seed: u64) -> Self {
        Self {
            distance_m,
            scheme: SchemeChoice::Auto,
            block_size: 1024,
            seed,
            dist: DegreeDistribution::implant(),
            max_iters: crate::codec::DEFAULT_MAX_ITERS,
            channel_weight: 1,
            snr_override_db: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRecord {
    pub block: usize,
    pub k: usize,
    pub symbols_sent: usize,
    pub realized_rate: f64,
    /// Erasures count one half.
    pub bit_errors: f64,
    pub ber: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkRunReport {
    pub scheme: Scheme,
    pub m: u32,
    /// Coded operating point; `None` for uncoded.
    pub row: Option<RateGainRow>,
    pub channel_snr_db: f64,
    pub channel_p: f64,
    pub blocks: Vec<BlockRecord>,
    pub energy: EnergyBreakdown,
    pub schedule: FrameSchedule,
}

impl LinkRunReport {
    pub fn frame_ber(&self) -> f64 {
        let bits: usize = self.blocks.iter().map(|b| b.k).sum();
        self.blocks.iter().map(|b| b.bit_errors).sum::<f64>() / bits as f64
    }

    /// Information bits over coded bits for the whole frame.
    pub fn realized_rate(&self) -> f64 {
        let bits: usize = self.blocks.iter().map(|b| b.k).sum();
        let sent: usize = self.blocks.iter().map(|b| b.symbols_sent).sum();
        bits as f64 / sent as f64
    }
}

fn pick_operating_point(run: &LinkRunConfig, cfg: &ScenarioConfig) -> Result<(Scheme, u32, Option<RateGainRow>)> {
    let best = optimize(run.distance_m, cfg)?;
    let scheme = match run.scheme {
        SchemeChoice::Uncoded => Scheme::Uncoded,
        SchemeChoice::Coded => Scheme::Coded,
        SchemeChoice::Auto => best.winner(),
    };
    Ok(match scheme {
        Scheme::Uncoded => (scheme, best.uncoded.m, None),
        Scheme::Coded => (scheme, best.coded.energy.m, Some(best.coded.row)),
    })
}

/// Simulates one frame: split into `block_size` blocks, send each either
/// raw or LT-coded through the BSC the operating point implies, decode and
/// count errors. Deterministic in `run.seed`.
pub fn link_run(run: &LinkRunConfig, cfg: &ScenarioConfig) -> Result<LinkRunReport> {
    if run.block_size == 0 {
        return Err(Error::param("block_size", "must be positive"));
    }
    cfg.validate()?;
    let (scheme, m, row) = pick_operating_point(run, cfg)?;
    let energy = match &row {
        Some(r) => energy_coded(run.distance_m, m, r, cfg)?,
        None => energy_uncoded(run.distance_m, m, cfg)?,
    };
    let link = cfg.link.with_m(m);
    let schedule = FrameSchedule::new(link.t_l_s, link.t_tr_s, energy.t_ac_effective)?;

    // The transmitter is powered so the receiver sees exactly the SNR the
    // operating point was designed for.
    let design_snr_db = match &row {
        Some(r) => linear_to_db(required_snr(cfg.pb_target, m, cfg.ber_convention)?) - r.gain_db,
        None => linear_to_db(required_snr(cfg.pb_target, m, cfg.ber_convention)?),
    };
    let channel_snr_db = run.snr_override_db.unwrap_or(design_snr_db);
    let channel_p = channel_bit_error(db_to_linear(channel_snr_db), m, cfg.ber_convention);

    let mut msg_rng = ChaCha8Rng::seed_from_u64(run.seed);
    let message: Vec<u8> = (0..link.frame_bits).map(|_| msg_rng.random_range(0..2u8)).collect();
    let blocks = message
        .chunks(run.block_size)
        .enumerate()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(j, block)| {
            let mut rng = trial_rng(run.seed, j as u64 + 1);
            run_block(j, block, scheme, channel_p, run, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LinkRunReport {
        scheme,
        m,
        row,
        channel_snr_db,
        channel_p,
        blocks,
        energy,
        schedule,
    })
}

fn run_block<R: Rng>(j: usize, block: &[u8], scheme: Scheme, p: f64, run: &LinkRunConfig, rng: &mut R) -> Result<BlockRecord> {
    let k = block.len();
    let (symbols_sent, bit_errors, converged) = match scheme {
        Scheme::Uncoded => {
            let flips = block.iter().filter(|&&b| bsc(b, p, rng) != b).count();
            (k, flips as f64, true)
        }
        Scheme::Coded => {
            let policy = AttemptPolicy {
                max_iters: run.max_iters,
                channel_weight: run.channel_weight,
                ..AttemptPolicy::for_block(k)
            };
            let res = run_incremental(block, &run.dist, p, rng, &policy)?;
            (res.symbols_consumed, res.weighted_errors(block), res.converged)
        }
    };
    Ok(BlockRecord {
        block: j,
        k,
        symbols_sent,
        realized_rate: k as f64 / symbols_sent as f64,
        bit_errors,
        ber: bit_errors / k as f64,
        converged,
    })
}

/// Active time and duty cycle of one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DutyCycleRow {
    pub m: u32,
    pub bandwidth_hz: f64,
    pub rate: f64,
    pub t_ac_s: f64,
    pub t_ac_coded_s: f64,
    pub duty_cycle: f64,
}

pub fn duty_cycle_row(link: &LinkBudget, rate: f64) -> Result<DutyCycleRow> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::param("rate", format!("{rate} outside (0, 1]")));
    }
    link.validate()?;
    let t_ac = link.active_duration();
    let t_ac_coded = t_ac / rate;
    Ok(DutyCycleRow {
        m: link.m,
        bandwidth_hz: link.bandwidth_hz,
        rate,
        t_ac_s: t_ac,
        t_ac_coded_s: t_ac_coded,
        duty_cycle: t_ac_coded / link.t_l_s,
    })
}

/// `T_ac` at the link's bandwidth divided by `T_ac` at `other_hz`, same
/// `(M, L)`.
pub fn active_time_ratio(link: &LinkBudget, other_hz: f64) -> f64 {
    let other = LinkBudget {
        bandwidth_hz: other_hz,
        ..*link
    };
    link.active_duration() / other.active_duration()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_sums_to_frame() {
        let s = FrameSchedule::for_link(&LinkBudget::default(), 0.37).unwrap();
        let total: f64 = s.modes().iter().map(|m| m.1).sum();
        assert!((total - s.t_l).abs() < 1e-12);
        assert!(s.t_sl >= 0.0);
    }

    #[test]
    fn schedule_rejects_overlong_activity() {
        assert!(matches!(FrameSchedule::new(1.0, 0.1, 0.95), Err(Error::InfeasibleFrame { .. })));
    }

    #[test]
    fn active_time_and_ratio() {
        let link = LinkBudget::default();
        let row = duty_cycle_row(&link, 1.0).unwrap();
        assert!((row.t_ac_s - 0.027306666666666665).abs() < 1e-15);
        assert!((active_time_ratio(&link, 62.5e3) - 62.5 / 300.0).abs() < 1e-15);
        let half = duty_cycle_row(&link, 0.5).unwrap();
        assert_eq!(half.duty_cycle, 2.0 * row.duty_cycle);
    }

    #[test]
    fn eight_blocks_per_frame() {
        let cfg = ScenarioConfig::default();
        let mut run = LinkRunConfig::new(0.1, 3);
        run.scheme = SchemeChoice::Coded;
        run.snr_override_db = Some(f64::INFINITY);
        let rep = link_run(&run, &cfg).unwrap();
        assert_eq!(rep.blocks.len(), 8);
        assert!(rep.blocks.iter().all(|b| b.bit_errors == 0.0 && b.converged));
        assert_eq!(rep.channel_p, 0.0);
    }

    #[test]
    fn uncoded_run_flips_at_target_rate() {
        let cfg = ScenarioConfig::default();
        let mut run = LinkRunConfig::new(0.05, 11);
        run.scheme = SchemeChoice::Uncoded;
        let rep = link_run(&run, &cfg).unwrap();
        assert!((rep.channel_p - 1e-3).abs() < 1e-12);
        assert!(rep.frame_ber() > 1e-4 && rep.frame_ber() < 4e-3, "{}", rep.frame_ber());
        assert_eq!(rep.realized_rate(), 1.0);
    }
}
