//! TOML scenario files.
//!
//! ```toml
//! [path_loss]
//! scenario = "deep_tissue"   # or near_surface; individual fields override
//! eta = 4.26
//!
//! [noise]
//! nf_db = 8.0
//!
//! [link]
//! bandwidth_hz = 300e3
//!
//! [energy]
//! pb_target = 1e-3
//! chi_policy = "median"      # or { percentile = 1.28 }
//!
//! [codec]
//! block_size = 1024
//! ```
//!
//! Every section and key is optional; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::codec::{AttemptPolicy, DegreeDistribution, DEFAULT_MAX_ITERS};
use crate::energy::{default_encoding_energy, ChiPolicy, NoiseFloor, RateSource, ScenarioConfig};
use crate::error::{Error, Result};
use crate::phy::{BerConvention, LinkBudget, NoiseModel, TissuePathLoss, TissueScenario};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathLossSection {
    pub scenario: Option<TissueScenario>,
    pub l0_db: Option<f64>,
    pub eta: Option<f64>,
    pub sigma_chi_db: Option<f64>,
    pub d0_m: Option<f64>,
}

impl PathLossSection {
    pub fn resolve(&self) -> TissuePathLoss {
        let base = TissuePathLoss::for_scenario(self.scenario.unwrap_or(TissueScenario::DeepTissue));
        TissuePathLoss {
            l0_db: self.l0_db.unwrap_or(base.l0_db),
            eta: self.eta.unwrap_or(base.eta),
            sigma_chi_db: self.sigma_chi_db.unwrap_or(base.sigma_chi_db),
            d0_m: self.d0_m.unwrap_or(base.d0_m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergySection {
    pub pb_target: f64,
    pub e_enc_j: f64,
    pub e_dec_j: f64,
    pub chi_policy: ChiPolicy,
    pub ber_convention: BerConvention,
    pub noise_floor: NoiseFloor,
    pub rate_source: RateSource,
}

impl Default for EnergySection {
    fn default() -> Self {
        Self {
            pb_target: 1e-3,
            e_enc_j: default_encoding_energy(),
            e_dec_j: 0.0,
            chi_policy: ChiPolicy::Median,
            ber_convention: BerConvention::PerBit,
            noise_floor: NoiseFloor::BandPower,
            rate_source: RateSource::Embedded,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodecSection {
    pub block_size: usize,
    pub max_iters: usize,
    pub channel_weight: u32,
    /// Two-column `degree probability` file; the implant law if absent.
    pub degree_distribution: Option<PathBuf>,
}

impl Default for CodecSection {
    fn default() -> Self {
        Self {
            block_size: 1024,
            max_iters: DEFAULT_MAX_ITERS,
            channel_weight: 1,
            degree_distribution: None,
        }
    }
}

impl CodecSection {
    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::param("block_size", "must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters", "must be positive"));
        }
        Ok(())
    }

    pub fn policy(&self, k: usize) -> AttemptPolicy {
        AttemptPolicy {
            max_iters: self.max_iters,
            channel_weight: self.channel_weight,
            ..AttemptPolicy::for_block(k)
        }
    }

    pub fn distribution(&self) -> Result<DegreeDistribution> {
        match &self.degree_distribution {
            Some(path) => DegreeDistribution::load(path),
            None => Ok(DegreeDistribution::implant()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub path_loss: PathLossSection,
    pub noise: NoiseModel,
    pub link: LinkBudget,
    pub energy: EnergySection,
    pub codec: CodecSection,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.scenario()?;
        cfg.codec.validate()?;
        Ok(cfg)
    }

    /// Reads `path`; a relative `degree_distribution` is taken relative to
    /// the config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        if let (Some(dd), Some(dir)) = (&cfg.codec.degree_distribution, path.parent()) {
            if dd.is_relative() {
                cfg.codec.degree_distribution = Some(dir.join(dd));
            }
        }
        Ok(cfg)
    }

    pub fn scenario(&self) -> Result<ScenarioConfig> {
        let s = ScenarioConfig {
            path_loss: self.path_loss.resolve(),
            noise: self.noise,
            link: self.link,
            pb_target: self.energy.pb_target,
            e_enc: self.energy.e_enc_j,
            e_dec: self.energy.e_dec_j,
            chi_policy: self.energy.chi_policy,
            ber_convention: self.energy.ber_convention,
            noise_floor: self.energy.noise_floor,
            rate_source: self.energy.rate_source,
        };
        s.validate()?;
        Ok(s)
    }
}
