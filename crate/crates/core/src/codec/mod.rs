//! Random-binning distributed encoder, typical sets and the exhaustive decoder.

mod decoder;
mod params;
mod simulate;
mod typical;

pub use decoder::{
    decode_exhaustive, encode_with, Candidate, DecodeOutcome, TypicalIndex, MAX_DECODER_N, MAX_MARGINAL_ENUMERATION,
    MAX_PAIR_CHECKS,
};
pub use params::{encode, marginal_bytes, Bin, BinSpace, Binner, CodeParams, MATERIALIZE_LIMIT};
pub use simulate::{simulate, wilson, ErrorEvent, Outcome, Rate, SimSummary, Simulator, TrialRecord};
pub use typical::{typical_cm, typical_er, ConditionCheck, TypicalSpec, TypicalityReport};
