//! Per-frame energy of uncoded and LT-coded NC-MFSK, the operating-point
//! optimizer and the coded/uncoded crossover distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::DegreeDistribution;
use crate::error::{Error, Result};
use crate::phy::{
    exceeds_eirp_cap, required_snr, BerConvention, LinkBudget, NoiseModel, TissuePathLoss,
};
use crate::rate::{de_rate_curve_with, embedded_table, RateGainRow, RateGainTable};

/// Modulation orders the optimizer considers.
pub const MODULATION_ORDERS: [u32; 2] = [2, 4];

/// Which shadowing realization `χ` the energy curves are evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiPolicy {
    /// `χ = 0 dB`.
    #[default]
    Median,
    /// `χ = z σ` dB; positive `z` is a lossier than median link.
    Percentile(f64),
}

impl ChiPolicy {
    pub fn chi_db(self, sigma_db: f64) -> f64 {
        match self {
            ChiPolicy::Median => 0.0,
            ChiPolicy::Percentile(z) => z * sigma_db,
        }
    }
}

/// How the noise level enters the RF energy term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFloor {
    /// In-band noise power `N0 B` (W), the −110.91 dBm figure.
    #[default]
    BandPower,
    /// Spectral density `N0` (W/Hz).
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateSource {
    /// The published calibration tables.
    #[default]
    Embedded,
    /// Density-evolution thresholds on the same SNR grid.
    DensityEvolution,
}

/// Default implant-side encoding cost: 1 nJ per XOR-byte, `Ω'(1)/8` per bit.
pub fn default_encoding_energy() -> f64 {
    1e-9 * DegreeDistribution::implant().mean() / 8.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub path_loss: TissuePathLoss,
    pub noise: NoiseModel,
    pub link: LinkBudget,
    pub pb_target: f64,
    /// Joules per information bit.
    pub e_enc: f64,
    pub e_dec: f64,
    pub chi_policy: ChiPolicy,
    pub ber_convention: BerConvention,
    pub noise_floor: NoiseFloor,
    pub rate_source: RateSource,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            path_loss: TissuePathLoss::deep_tissue(),
            noise: NoiseModel::default(),
            link: LinkBudget::default(),
            pb_target: 1e-3,
            e_enc: default_encoding_energy(),
            e_dec: 0.0,
            chi_policy: ChiPolicy::Median,
            ber_convention: BerConvention::PerBit,
            noise_floor: NoiseFloor::BandPower,
            rate_source: RateSource::Embedded,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.path_loss.validate()?;
        self.noise.validate()?;
        self.link.validate()?;
        if !(self.pb_target > 0.0 && self.pb_target < 0.5) {
            return Err(Error::param("pb_target", format!("{} outside (0, 0.5)", self.pb_target)));
        }
        if !(self.e_enc >= 0.0) || !(self.e_dec >= 0.0) {
            return Err(Error::param("e_enc/e_dec", "coding energies must be nonnegative"));
        }
        Ok(())
    }

    /// Noise level plugged into the RF term, per [`NoiseFloor`].
    pub fn noise_level(&self) -> f64 {
        match self.noise_floor {
            NoiseFloor::BandPower => self.noise.band_noise_power(self.link.bandwidth_hz),
            NoiseFloor::Density => self.noise.noise_density(),
        }
    }

    pub fn chi_db(&self) -> f64 {
        self.chi_policy.chi_db(self.path_loss.sigma_chi_db)
    }

    pub fn coding_energy(&self) -> f64 {
        self.e_enc + self.e_dec
    }

    /// Rate/gain table for modulation order `m` from the configured source.
    pub fn rate_table(&self, m: u32) -> Result<RateGainTable> {
        let published = embedded_table(m, self.pb_target)?;
        match self.rate_source {
            RateSource::Embedded => Ok(published),
            RateSource::DensityEvolution => {
                let grid: Vec<f64> = published.rows.iter().map(|r| r.snr_db).collect();
                de_rate_curve_with(
                    &DegreeDistribution::implant(),
                    m,
                    self.pb_target,
                    &grid,
                    self.ber_convention,
                )?
                .table()
            }
        }
    }

    /// Tables for every order in [`MODULATION_ORDERS`].
    pub fn rate_tables(&self) -> Result<Vec<RateGainTable>> {
        MODULATION_ORDERS.iter().map(|&m| self.rate_table(m)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub m: u32,
    pub rate: f64,
    pub rf: f64,
    pub circuit: f64,
    pub transient: f64,
    pub coding: f64,
    pub total: f64,
    pub t_ac_effective: f64,
    pub duty_cycle: f64,
    /// Radiated power while active, W.
    pub tx_power: f64,
}

impl EnergyBreakdown {
    pub fn exceeds_eirp(&self) -> bool {
        exceeds_eirp_cap(self.tx_power)
    }
}

fn evaluate(d_m: f64, m: u32, rate: f64, gain_db: f64, coding_per_bit: f64, cfg: &ScenarioConfig) -> Result<EnergyBreakdown> {
    if !(d_m > 0.0) {
        return Err(Error::param("distance", format!("{d_m} m is not positive")));
    }
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::param("rate", format!("{rate} outside (0, 1]")));
    }
    cfg.validate()?;
    let link = cfg.link.with_m(m);
    link.validate()?;

    let t_ac = link.active_duration() / rate;
    let budget = link.t_l_s - link.t_tr_s;
    if t_ac > budget {
        return Err(Error::InfeasibleFrame {
            active_s: t_ac,
            budget_s: budget,
        });
    }

    let bits = link.frame_bits as f64;
    let symbols = bits / (m.trailing_zeros() as f64);
    let gamma = required_snr(cfg.pb_target, m, cfg.ber_convention)?;
    let path_gain = cfg.path_loss.gain_factor(d_m, cfg.chi_db())?;
    let e_sym = gamma * path_gain * cfg.noise_level() / 10f64.powf(gain_db / 10.0);

    let rf = (1.0 + link.alpha) * e_sym * symbols / rate;
    let circuit = link.circuit_powers(0.0).fixed() * t_ac;
    let transient = link.transient_energy();
    let coding = bits * coding_per_bit / rate;
    Ok(EnergyBreakdown {
        m,
        rate,
        rf,
        circuit,
        transient,
        coding,
        total: rf + circuit + transient + coding,
        t_ac_effective: t_ac,
        duty_cycle: t_ac / link.t_l_s,
        tx_power: e_sym / link.symbol_duration(),
    })
}

/// Frame energy without coding.
pub fn energy_uncoded(d_m: f64, m: u32, cfg: &ScenarioConfig) -> Result<EnergyBreakdown> {
    evaluate(d_m, m, 1.0, 0.0, 0.0, cfg)
}

/// Frame energy of the LT-coded link at operating point `row`.
pub fn energy_coded(d_m: f64, m: u32, row: &RateGainRow, cfg: &ScenarioConfig) -> Result<EnergyBreakdown> {
    if !row.gain_db.is_finite() {
        return Err(Error::param("gain_db", "must be finite"));
    }
    evaluate(d_m, m, row.rate, row.gain_db, cfg.coding_energy(), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodedChoice {
    pub row: RateGainRow,
    pub energy: EnergyBreakdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Uncoded,
    Coded,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Uncoded => "uncoded",
            Scheme::Coded => "coded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub uncoded: EnergyBreakdown,
    pub coded: CodedChoice,
}

impl Optimum {
    /// Coded wins only when strictly cheaper.
    pub fn winner(&self) -> Scheme {
        if self.coded.energy.total < self.uncoded.total {
            Scheme::Coded
        } else {
            Scheme::Uncoded
        }
    }

    /// `coded − uncoded` total.
    pub fn margin(&self) -> f64 {
        self.coded.energy.total - self.uncoded.total
    }
}

fn better(a: &EnergyBreakdown, b: &EnergyBreakdown) -> bool {
    match a.total.total_cmp(&b.total) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => (a.m, -a.rate) < (b.m, -b.rate),
    }
}

/// Cheapest uncoded and cheapest coded operating point at distance `d_m`.
pub fn optimize(d_m: f64, cfg: &ScenarioConfig) -> Result<Optimum> {
    optimize_with(d_m, cfg, &cfg.rate_tables()?)
}

/// [`optimize`] over caller-supplied tables, one per modulation order.
pub fn optimize_with(d_m: f64, cfg: &ScenarioConfig, tables: &[RateGainTable]) -> Result<Optimum> {
    let mut uncoded: Option<EnergyBreakdown> = None;
    let mut coded: Option<CodedChoice> = None;
    for table in tables {
        match energy_uncoded(d_m, table.m, cfg) {
            Ok(e) if uncoded.as_ref().is_none_or(|u| better(&e, u)) => uncoded = Some(e),
            Ok(_) | Err(Error::InfeasibleFrame { .. }) => {}
            Err(e) => return Err(e),
        }
        for row in &table.rows {
            match energy_coded(d_m, table.m, row, cfg) {
                Ok(e) if coded.as_ref().is_none_or(|c| better(&e, &c.energy)) => {
                    coded = Some(CodedChoice { row: *row, energy: e })
                }
                Ok(_) | Err(Error::InfeasibleFrame { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    match (uncoded, coded) {
        (Some(uncoded), Some(coded)) => Ok(Optimum { uncoded, coded }),
        _ => Err(Error::NoFeasiblePoint { distance_m: d_m }),
    }
}

/// Crossover distance for one `(M, row)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossover {
    /// `G R ≤ 1`: coding never pays for its extra air time.
    None,
    At {
        /// Closed form; ignores coding energy.
        closed_form_m: f64,
        /// Root of `uncoded − coded` at the same `M`, coding energy
        /// included. `None` if the bracket search failed.
        bisection_m: Option<f64>,
    },
}

const BISECTION_MAX_M: f64 = 1e3;

/// Distance beyond which `row` at order `m` beats uncoded `m`.
pub fn threshold_distance(m: u32, row: &RateGainRow, cfg: &ScenarioConfig) -> Result<Crossover> {
    cfg.validate()?;
    let link = cfg.link.with_m(m);
    link.validate()?;
    let g = row.gain_linear();
    let r = row.rate;
    if g * r <= 1.0 {
        return Ok(Crossover::None);
    }
    let c = cfg.ber_convention.snr_scale(m);
    let ln_term = (m as f64 / (4.0 * cfg.pb_target)).ln();
    let fixed = link.circuit_powers(0.0).fixed();
    let l0 = 10f64.powf(cfg.path_loss.l0_db / 10.0);
    let chi = 10f64.powf(cfg.chi_db() / 10.0);
    let base = m as f64 * fixed
        / (4.0 * (1.0 + link.alpha) * cfg.noise_level() * link.bandwidth_hz * c * l0 * chi * ln_term)
        * g
        * (1.0 - r)
        / (g * r - 1.0);
    let closed_form_m = cfg.path_loss.d0_m * base.powf(1.0 / cfg.path_loss.eta);
    Ok(Crossover::At {
        closed_form_m,
        bisection_m: bisect_pair(m, row, cfg),
    })
}

fn bisect_pair(m: u32, row: &RateGainRow, cfg: &ScenarioConfig) -> Option<f64> {
    let diff = |d: f64| -> Option<f64> {
        Some(energy_uncoded(d, m, cfg).ok()?.total - energy_coded(d, m, row, cfg).ok()?.total)
    };
    bisect_sign_change(diff, 1e-6, BISECTION_MAX_M)
}

/// Root of an increasing `f` on `[lo, hi]`, searched geometrically for a
/// bracket first.
fn bisect_sign_change(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64) -> Option<f64> {
    let mut a = lo;
    if f(a)? >= 0.0 {
        return Some(a);
    }
    let mut b = a;
    while f(b)? < 0.0 {
        a = b;
        b *= 2.0;
        if b > hi {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if f(mid)? < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-9 {
            break;
        }
    }
    Some(0.5 * (a + b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub d_m: f64,
    pub outcome: Result<Optimum>,
}

/// [`optimize`] at every grid distance, in grid order.
pub fn sweep_energy_vs_distance(d_grid: &[f64], cfg: &ScenarioConfig) -> Result<Vec<SweepPoint>> {
    if d_grid.is_empty() {
        return Err(Error::param("d_grid", "must not be empty"));
    }
    if d_grid.iter().any(|d| !(*d > 0.0)) || d_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("d_grid", "distances must be positive and strictly increasing"));
    }
    cfg.validate()?;
    let tables = cfg.rate_tables()?;
    Ok(d_grid
        .par_iter()
        .map(|&d_m| SweepPoint {
            d_m,
            outcome: optimize_with(d_m, cfg, &tables),
        })
        .collect())
}

/// Distances where the optimized winner changes, each refined by bisection
/// between the bracketing grid points.
pub fn detect_crossovers(points: &[SweepPoint], cfg: &ScenarioConfig) -> Result<Vec<f64>> {
    let tables = cfg.rate_tables()?;
    let margin = |d: f64| optimize_with(d, cfg, &tables).ok().map(|o| -o.margin());
    let mut found = Vec::new();
    for w in points.windows(2) {
        let (Ok(a), Ok(b)) = (&w[0].outcome, &w[1].outcome) else {
            continue;
        };
        if a.winner() == b.winner() {
            continue;
        }
        let (lo, hi) = (w[0].d_m, w[1].d_m);
        let sign = if a.winner() == Scheme::Uncoded { 1.0 } else { -1.0 };
        let mut x = (lo, hi);
        for _ in 0..100 {
            let mid = 0.5 * (x.0 + x.1);
            match margin(mid) {
                Some(v) if sign * v < 0.0 => x.0 = mid,
                Some(_) => x.1 = mid,
                None => break,
            }
        }
        found.push(0.5 * (x.0 + x.1));
    }
    Ok(found)
}

/// Evenly spaced grid from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
