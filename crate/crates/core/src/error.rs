use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),

    #[error("length mismatch: {symbols} coded symbols but {observations} observations")]
    LengthMismatch { symbols: usize, observations: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("target bit error rate {pb} is unreachable for M = {m} (must be below M/4)")]
    IllPosedTarget { pb: f64, m: u32 },

    #[error("no embedded rate table for M = {m}, Pb = {pb:e}; generate one with de_rate_curve")]
    UnsupportedTable { m: u32, pb: f64 },

    #[error("infeasible frame: active time {active_s:.6e} s exceeds the {budget_s:.6e} s budget")]
    InfeasibleFrame { active_s: f64, budget_s: f64 },

    #[error("no feasible operating point at d = {distance_m} m")]
    NoFeasiblePoint { distance_m: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
