//! In-body channel and uncoded NC-MFSK link formulas.
//!
//! Distances are in meters, powers in watts, energies in joules. Path gain
//! `L_d = P_t / P_r` is a loss factor (≥ 1 in practice).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BOLTZMANN: f64 = 1.3806503e-23;

/// MICS effective isotropic radiated power cap, −16 dBm.
pub const EIRP_CAP_W: f64 = 25e-6;

/// Minimum data rate a MICS link has to sustain.
pub const MICS_MIN_RATE_BPS: f64 = 250e3;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn watts_to_dbm(w: f64) -> f64 {
    linear_to_db(w / 1e-3)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::param("M", format!("{m} is not a power of two ≥ 2")));
    }
    Ok(())
}

fn bits_per_symbol(m: u32) -> f64 {
    m.trailing_zeros() as f64
}

/// Log-normal in-body path-loss parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TissuePathLoss {
    /// Gain factor at the reference distance, dB.
    pub l0_db: f64,
    /// Path-loss exponent.
    pub eta: f64,
    /// Shadowing standard deviation, dB.
    pub sigma_chi_db: f64,
    /// Reference distance, meters.
    pub d0_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TissueScenario {
    DeepTissue,
    NearSurface,
}

impl TissuePathLoss {
    pub fn new(l0_db: f64, eta: f64, sigma_chi_db: f64, d0_m: f64) -> Result<Self> {
        let pl = Self {
            l0_db,
            eta,
            sigma_chi_db,
            d0_m,
        };
        pl.validate()?;
        Ok(pl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::param("eta", "path-loss exponent must be positive"));
        }
        if !(self.sigma_chi_db >= 0.0) {
            return Err(Error::param("sigma_chi_db", "must be nonnegative"));
        }
        if !(self.d0_m > 0.0) {
            return Err(Error::param("d0_m", "reference distance must be positive"));
        }
        if !self.l0_db.is_finite() {
            return Err(Error::param("l0_db", "must be finite"));
        }
        Ok(())
    }

    /// Digestive-endoscopy style deep implant at 403.5 MHz.
    pub fn deep_tissue() -> Self {
        Self {
            l0_db: 47.14,
            eta: 4.26,
            sigma_chi_db: 7.85,
            d0_m: 0.030,
        }
    }

    /// Pectoral pacemaker style near-surface implant at 403.5 MHz.
    pub fn near_surface() -> Self {
        Self {
            l0_db: 49.81,
            eta: 4.22,
            sigma_chi_db: 6.81,
            d0_m: 0.030,
        }
    }

    pub fn for_scenario(s: TissueScenario) -> Self {
        match s {
            TissueScenario::DeepTissue => Self::deep_tissue(),
            TissueScenario::NearSurface => Self::near_surface(),
        }
    }

    /// `L0 + 10 η log10(d/d0) + χ` in dB.
    pub fn gain_factor_db(&self, d_m: f64, chi_db: f64) -> Result<f64> {
        if !(d_m > 0.0) {
            return Err(Error::param("d", format!("distance {d_m} m must be positive")));
        }
        Ok(self.l0_db + 10.0 * self.eta * (d_m / self.d0_m).log10() + chi_db)
    }

    /// Linear gain factor `L_d`. Pass `chi_db = 0` for the median channel or
    /// a draw from `Normal(0, σχ²)` for a shadowed realization.
    pub fn gain_factor(&self, d_m: f64, chi_db: f64) -> Result<f64> {
        self.gain_factor_db(d_m, chi_db).map(db_to_linear)
    }
}

/// Receiver front-end thermal noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    pub kappa: f64,
    /// Body temperature, K.
    pub t0_k: f64,
    pub nf_db: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            kappa: BOLTZMANN,
            t0_k: 310.0,
            nf_db: 8.0,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0_k > 0.0) {
            return Err(Error::param("t0_k", "temperature must be positive"));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::param("kappa", "must be positive"));
        }
        Ok(())
    }

    /// One-sided noise power spectral density `N0 = κ T0 10^(NF/10)`, W/Hz.
    pub fn noise_density(&self) -> f64 {
        self.kappa * self.t0_k * db_to_linear(self.nf_db)
    }

    /// Noise power in a band of `bandwidth_hz`, W.
    pub fn band_noise_power(&self, bandwidth_hz: f64) -> f64 {
        self.noise_density() * bandwidth_hz
    }
}

/// How the SNR in the BER bound is normalized for `M > 2`.
///
/// `PerBit` divides the per-symbol SNR by `log2 M` inside the exponent; this
/// is the form under which the published M = 4 rate/gain tables are
/// self-consistent. `PerSymbol` is the literal `M/4 · exp(−γ/2)` bound. Both
/// coincide for `M = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BerConvention {
    #[default]
    PerBit,
    PerSymbol,
}

impl BerConvention {
    /// Factor `c` in `P_b = M/4 · exp(−γ / (2c))`.
    pub fn snr_scale(self, m: u32) -> f64 {
        match self {
            BerConvention::PerBit => bits_per_symbol(m),
            BerConvention::PerSymbol => 1.0,
        }
    }
}

/// Upper bound on the NC-MFSK bit error probability at per-symbol SNR
/// `gamma` (linear), clamped to 1/2.
pub fn channel_bit_error(gamma: f64, m: u32, conv: BerConvention) -> f64 {
    let gamma = gamma.max(0.0);
    let pb = m as f64 / 4.0 * (-gamma / (2.0 * conv.snr_scale(m))).exp();
    pb.min(0.5)
}

/// Per-symbol SNR (linear) at which [`channel_bit_error`] equals `pb`.
pub fn required_snr(pb: f64, m: u32, conv: BerConvention) -> Result<f64> {
    check_m(m)?;
    if !(pb > 0.0) || pb >= m as f64 / 4.0 {
        return Err(Error::IllPosedTarget { pb, m });
    }
    Ok(2.0 * conv.snr_scale(m) * (m as f64 / (4.0 * pb)).ln())
}

/// Transmit energy per symbol needed to hit `pb` through a channel with gain
/// factor `path_gain` and noise level `n0`.
pub fn required_symbol_energy(pb: f64, m: u32, path_gain: f64, n0: f64, conv: BerConvention) -> Result<f64> {
    Ok(required_snr(pb, m, conv)? * path_gain * n0)
}

/// `T_s = M / (2B)`.
pub fn symbol_duration(m: u32, bandwidth_hz: f64) -> f64 {
    m as f64 / (2.0 * bandwidth_hz)
}

/// `R = 2B log2(M) / M`, bits per second.
pub fn data_rate(m: u32, bandwidth_hz: f64) -> f64 {
    2.0 * bandwidth_hz * bits_per_symbol(m) / m as f64
}

/// Air time for `frame_bits` uncoded bits: `M L / (2 B log2 M)`.
pub fn active_duration(m: u32, frame_bits: f64, bandwidth_hz: f64) -> f64 {
    m as f64 * frame_bits / (2.0 * bandwidth_hz * bits_per_symbol(m))
}

pub fn meets_mics_rate(m: u32, bandwidth_hz: f64) -> bool {
    data_rate(m, bandwidth_hz) >= MICS_MIN_RATE_BPS
}

pub fn exceeds_eirp_cap(p_t: f64) -> bool {
    p_t > EIRP_CAP_W
}

/// Modulation, bandwidth, frame and circuit-power parameters of the uplink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBudget {
    pub m: u32,
    pub bandwidth_hz: f64,
    /// Message bits per frame, `L`.
    pub frame_bits: u32,
    /// Power-amplifier overhead, `P_Amp = α P_t`.
    pub alpha: f64,
    pub p_sy_w: f64,
    pub p_filt_w: f64,
    pub p_filr_w: f64,
    pub p_lna_w: f64,
    pub p_ed_w: f64,
    pub p_ifa_w: f64,
    pub p_adc_w: f64,
    /// Sleep → active start-up time, s.
    pub t_tr_s: f64,
    /// Frame period, s.
    pub t_l_s: f64,
    /// First carrier frequency. Carried for the record only.
    pub f0_hz: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            m: 2,
            bandwidth_hz: 300e3,
            frame_bits: 8192,
            alpha: 0.33,
            p_sy_w: 10e-3,
            p_filt_w: 2.5e-3,
            p_filr_w: 2.5e-3,
            p_lna_w: 9e-3,
            p_ed_w: 3e-3,
            p_ifa_w: 3e-3,
            p_adc_w: 7e-3,
            t_tr_s: 5e-6,
            t_l_s: 1.4,
            f0_hz: 403.5e6,
        }
    }
}

/// Circuit power split for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitPowers {
    /// Transmitter (implant) circuitry, amplifier included.
    pub p_ct: f64,
    /// Receiver (controller) circuitry.
    pub p_cr: f64,
    pub p_c: f64,
    pub p_amp: f64,
}

impl CircuitPowers {
    /// `P_c − P_Amp`: everything that does not scale with transmit power.
    pub fn fixed(&self) -> f64 {
        self.p_c - self.p_amp
    }
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        check_m(self.m)?;
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::param("bandwidth_hz", "must be positive"));
        }
        if self.frame_bits == 0 {
            return Err(Error::param("frame_bits", "must be positive"));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::param("alpha", "must be nonnegative"));
        }
        let powers = [
            ("p_sy_w", self.p_sy_w),
            ("p_filt_w", self.p_filt_w),
            ("p_filr_w", self.p_filr_w),
            ("p_lna_w", self.p_lna_w),
            ("p_ed_w", self.p_ed_w),
            ("p_ifa_w", self.p_ifa_w),
            ("p_adc_w", self.p_adc_w),
        ];
        for (name, p) in powers {
            if !(p >= 0.0) {
                return Err(Error::param(name, "power must be nonnegative"));
            }
        }
        if !(self.t_tr_s >= 0.0) {
            return Err(Error::param("t_tr_s", "must be nonnegative"));
        }
        if !(self.t_l_s > 0.0) {
            return Err(Error::param("t_l_s", "must be positive"));
        }
        Ok(())
    }

    pub fn with_m(&self, m: u32) -> Self {
        Self { m, ..*self }
    }

    pub fn symbol_duration(&self) -> f64 {
        symbol_duration(self.m, self.bandwidth_hz)
    }

    pub fn data_rate(&self) -> f64 {
        data_rate(self.m, self.bandwidth_hz)
    }

    /// Uncoded air time of one frame.
    pub fn active_duration(&self) -> f64 {
        active_duration(self.m, self.frame_bits as f64, self.bandwidth_hz)
    }

    /// Minimum carrier spacing `1 / (2 T_s)`. Record only.
    pub fn tone_spacing(&self) -> f64 {
        1.0 / (2.0 * self.symbol_duration())
    }

    pub fn circuit_powers(&self, p_t: f64) -> CircuitPowers {
        let p_amp = self.alpha * p_t;
        let p_ct = self.p_sy_w + self.p_filt_w + p_amp;
        let p_cr = self.p_lna_w + self.m as f64 * (self.p_filr_w + self.p_ed_w) + self.p_ifa_w + self.p_adc_w;
        CircuitPowers {
            p_ct,
            p_cr,
            p_c: p_ct + p_cr,
            p_amp,
        }
    }

    /// Start-up energy, `1.75 P_Sy T_tr`.
    pub fn transient_energy(&self) -> f64 {
        1.75 * self.p_sy_w * self.t_tr_s
    }
}
