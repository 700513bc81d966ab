//! Density evolution for the ternary LT decoder on a binary symmetric
//! channel.
//!
//! The all-zero codeword is assumed, so `p_plus` is the probability that an
//! input → output message is correct, `p_minus` that it is wrong and `p_zero`
//! that it carries no opinion. Output degrees follow the edge-perspective
//! law `ω_d = d Ω_d / Ω'(1)`; input degrees are Poisson with mean
//! `λ = Ω'(1) / R`, for which node and edge perspectives coincide, so the
//! final-decision statistics equal the message statistics.

use rayon::prelude::*;

use crate::codec::DegreeDistribution;
use crate::phy::{channel_bit_error, db_to_linear, BerConvention};
use crate::rate::tables::{uncoded_reference_snr, RateGainRow, RateGainTable};
use crate::error::Result;

pub const DE_MAX_ITERS: usize = 200;
pub const RATE_RESOLUTION: f64 = 1e-3;

/// Message-value probabilities after `iteration` updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeState {
    pub p_minus: f64,
    pub p_zero: f64,
    pub p_plus: f64,
    pub iteration: usize,
}

impl DeState {
    pub fn initial() -> Self {
        Self {
            p_minus: 0.0,
            p_zero: 1.0,
            p_plus: 0.0,
            iteration: 0,
        }
    }

    /// Decision error probability with erasures counted as half an error.
    pub fn residual(&self) -> f64 {
        self.p_minus + 0.5 * self.p_zero
    }

    pub fn total(&self) -> f64 {
        self.p_minus + self.p_zero + self.p_plus
    }
}

/// Poisson pmf restricted to the window where it carries mass.
struct PoissonWindow {
    start: usize,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl PoissonWindow {
    fn new(mean: f64) -> Self {
        if mean <= 0.0 {
            return Self {
                start: 0,
                pmf: vec![1.0],
                cdf: vec![1.0],
            };
        }
        let spread = 12.0 * mean.sqrt() + 30.0;
        let start = (mean - spread).floor().max(0.0) as usize;
        let end = (mean + spread).ceil() as usize;
        let ln_mean = mean.ln();
        // ln(start!) by direct summation; start is at most a few thousand.
        let mut ln_fact: f64 = (2..=start).map(|i| (i as f64).ln()).sum();
        let mut pmf = Vec::with_capacity(end - start + 1);
        for n in start..=end {
            if n > start {
                ln_fact += (n as f64).ln();
            }
            pmf.push((-mean + n as f64 * ln_mean - ln_fact).exp());
        }
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { start, pmf, cdf }
    }

    fn pmf(&self, n: usize) -> f64 {
        n.checked_sub(self.start)
            .and_then(|i| self.pmf.get(i).copied())
            .unwrap_or(0.0)
    }

    /// `P(N ≤ n)`.
    fn cdf(&self, n: usize) -> f64 {
        match n.checked_sub(self.start) {
            None => 0.0,
            Some(i) => *self.cdf.get(i).unwrap_or(self.cdf.last().unwrap()),
        }
    }

    fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.pmf.len()
    }
}

/// `(P(A > B), P(A = B), P(A < B))` for independent Poisson `A`, `B`.
fn skellam_signs(mean_a: f64, mean_b: f64) -> (f64, f64, f64) {
    let a = PoissonWindow::new(mean_a);
    let b = PoissonWindow::new(mean_b);
    let tie: f64 = a.range().map(|n| a.pmf(n) * b.pmf(n)).sum();
    let a_less: f64 = b
        .range()
        .filter(|&n| n > 0)
        .map(|n| b.pmf(n) * a.cdf(n - 1))
        .sum();
    let a_more: f64 = a
        .range()
        .filter(|&n| n > 0)
        .map(|n| a.pmf(n) * b.cdf(n - 1))
        .sum();
    (a_more, tie, a_less)
}

/// Density-evolution engine for one degree law.
#[derive(Debug, Clone)]
pub struct DensityEvolution {
    edge_degrees: Vec<(usize, f64)>,
    mean_degree: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeOutcome {
    pub success: bool,
    pub state: DeState,
}

impl DensityEvolution {
    pub fn new(dist: &DegreeDistribution) -> Self {
        let mean_degree = dist.mean();
        let edge_degrees = dist
            .entries()
            .iter()
            .map(|&(d, p)| (d, d as f64 * p / mean_degree))
            .collect();
        Self {
            edge_degrees,
            mean_degree,
        }
    }

    pub fn mean_degree(&self) -> f64 {
        self.mean_degree
    }

    /// One flood: output-node update followed by input-node update, at
    /// channel flip probability `p` and code rate `rate`.
    pub fn step(&self, state: &DeState, p: f64, rate: f64) -> DeState {
        let nonzero = state.p_plus + state.p_minus;
        let bias = state.p_plus - state.p_minus;
        let (mut r_plus, mut r_minus) = (0.0, 0.0);
        for &(d, w) in &self.edge_degrees {
            let others = (d - 1) as i32;
            let all = nonzero.powi(others);
            let signed = bias.powi(others);
            let even = 0.5 * (all + signed);
            let odd = 0.5 * (all - signed);
            r_plus += w * ((1.0 - p) * even + p * odd);
            r_minus += w * (p * even + (1.0 - p) * odd);
        }
        let lambda = self.mean_degree / rate;
        let (plus, zero, minus) = skellam_signs(lambda * r_plus, lambda * r_minus);
        let total = plus + zero + minus;
        DeState {
            p_minus: minus / total,
            p_zero: zero / total,
            p_plus: plus / total,
            iteration: state.iteration + 1,
        }
    }

    /// Iterates from the all-erased state until the residual drops to
    /// `pb_target` or `max_iters` updates have run.
    pub fn run(&self, p: f64, rate: f64, pb_target: f64, max_iters: usize) -> DeOutcome {
        let mut state = DeState::initial();
        for _ in 0..max_iters {
            state = self.step(&state, p, rate);
            if state.residual() <= pb_target {
                return DeOutcome {
                    success: true,
                    state,
                };
            }
        }
        DeOutcome {
            success: false,
            state,
        }
    }

    /// Largest rate (to [`RATE_RESOLUTION`]) at which DE reaches `pb_target`,
    /// or `None` if even the lowest rate fails.
    pub fn threshold_rate(&self, p: f64, pb_target: f64) -> Option<f64> {
        let ok = |r: f64| self.run(p, r, pb_target, DE_MAX_ITERS).success;
        if ok(1.0) {
            return Some(1.0);
        }
        let (mut lo, mut hi) = (RATE_RESOLUTION, 1.0);
        if !ok(lo) {
            return None;
        }
        while hi - lo > RATE_RESOLUTION {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

/// DE result at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DePoint {
    pub snr_db: f64,
    pub channel_p: f64,
    /// 0 when no rate reaches the target.
    pub rate: f64,
    pub decodable: bool,
    pub gain_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeRateCurve {
    pub m: u32,
    pub pb_target: f64,
    pub uncoded_ref_db: f64,
    pub points: Vec<DePoint>,
}

impl DeRateCurve {
    /// Decodable points as a rate/gain table. Gains are `ref − snr` by
    /// construction, so the column-constant check holds exactly.
    pub fn table(&self) -> Result<RateGainTable> {
        let mut rows: Vec<RateGainRow> = self
            .points
            .iter()
            .filter(|p| p.decodable)
            .map(|p| RateGainRow {
                snr_db: p.snr_db,
                rate: p.rate,
                gain_db: p.gain_db,
            })
            .collect();
        rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        rows.dedup_by(|a, b| a.snr_db == b.snr_db);
        RateGainTable::new(self.m, self.pb_target, rows)
    }
}

/// Decoding-threshold rate versus SNR for the implant degree law.
pub fn de_rate_curve(m: u32, pb_target: f64, snr_grid: &[f64]) -> Result<DeRateCurve> {
    de_rate_curve_with(&DegreeDistribution::implant(), m, pb_target, snr_grid, BerConvention::PerBit)
}

pub fn de_rate_curve_with(
    dist: &DegreeDistribution,
    m: u32,
    pb_target: f64,
    snr_grid: &[f64],
    conv: BerConvention,
) -> Result<DeRateCurve> {
    if snr_grid.is_empty() {
        return Err(crate::error::Error::param("snr_grid", "must not be empty"));
    }
    let uncoded_ref_db = uncoded_reference_snr(m, pb_target, conv)?;
    let de = DensityEvolution::new(dist);
    let points = snr_grid
        .par_iter()
        .map(|&snr_db| {
            let channel_p = channel_bit_error(db_to_linear(snr_db), m, conv);
            let rate = de.threshold_rate(channel_p, pb_target);
            DePoint {
                snr_db,
                channel_p,
                rate: rate.unwrap_or(0.0),
                decodable: rate.is_some(),
                gain_db: uncoded_ref_db - snr_db,
            }
        })
        .collect();
    Ok(DeRateCurve {
        m,
        pb_target,
        uncoded_ref_db,
        points,
    })
}
