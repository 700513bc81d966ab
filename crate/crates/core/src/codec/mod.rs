//! LT encoding, factor graphs and ternary message-passing decoding.

pub mod decoder;
pub mod degree;
pub mod encoder;
pub mod golden;
pub mod graph;
pub mod incremental;

pub use decoder::{decode_ternary, DecodeResult, DEFAULT_MAX_ITERS};
pub use degree::{DegreeDistribution, IMPLANT_OMEGA};
pub use encoder::{bit_to_sign, bsc, CodedSymbol, LtEncoder};
pub use graph::FactorGraph;
pub use incremental::{run_incremental, AttemptPolicy};
