//! Energy and link model for an LT-coded NC-MFSK implant uplink.
//!
//! * [`codec`]: LT encoder, factor graph, ternary message-passing decoder.
//! * [`phy`]: in-body path loss, thermal noise, NC-MFSK error and timing.
//! * [`rate`]: SNR → LT rate/coding gain (published tables, density
//!   evolution, Monte-Carlo).
//! * [`energy`]: per-frame energy, operating-point search, crossover distance.
//! * [`sim`]: frame timeline and end-to-end link runs.
//! * [`config`]: TOML scenario files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod config;
pub mod energy;
pub mod error;
pub mod phy;
pub mod rate;
pub mod sim;

pub use codec::{
    decode_ternary, run_incremental, AttemptPolicy, CodedSymbol, DecodeResult, DegreeDistribution, FactorGraph,
    LtEncoder,
};
pub use config::SimConfig;
pub use energy::{
    energy_coded, energy_uncoded, optimize, sweep_energy_vs_distance, threshold_distance, ChiPolicy, Crossover,
    EnergyBreakdown, NoiseFloor, Optimum, RateSource, ScenarioConfig, Scheme,
};
pub use error::{Error, Result};
pub use phy::{BerConvention, LinkBudget, NoiseModel, TissuePathLoss, TissueScenario};
pub use rate::{de_rate_curve, embedded_table, mc_rate_estimate, RateGainRow, RateGainTable};
pub use sim::{link_run, FrameSchedule, LinkRunConfig, LinkRunReport, SchemeChoice};
