//! SNR → achievable LT rate and coding gain.

pub mod de;
pub mod mc;
pub mod tables;

pub use de::{de_rate_curve, de_rate_curve_with, DeOutcome, DePoint, DeRateCurve, DeState, DensityEvolution};
pub use mc::{mc_rate_estimate, mc_rate_estimate_with, trial_rng, McEstimate};
pub use tables::{embedded_csv, embedded_table, uncoded_reference_snr, RateGainRow, RateGainTable, EMBEDDED_TARGETS};
