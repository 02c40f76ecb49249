//! Classical design criteria unified by the coincidence machinery:
//! word-length and deviation patterns with their benchmarks, the
//! two-factor nonorthogonality averages, and the discrepancy identities.

mod chi2;
mod discrepancy;
mod pattern;

pub use chi2::{ave_chi2, ave_chi2_bound_integer_mean, ave_chi2_oracle, e_s2, AveChi2, Es2};
pub use discrepancy::{
    categorical_discrepancy, categorical_discrepancy_oracle, l2_discrepancy,
    CategoricalDiscrepancy, DiscrepancyParams, L2Discrepancy, L2Kind,
};
pub use pattern::{
    aberration_order, deviation_pattern, distance_distribution, gwp, pattern_benchmarks,
    psi_combinatorial, psi_combinatorial_oracle, AberrationOrder, DeviationPattern,
    DistanceDistribution, PatternBenchmarks, WordLengthPattern,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClassicalError {
    #[error("projection order j={j} out of range 1..={s}")]
    OutOfRange { j: usize, s: usize },
    #[error(
        "word-length routes disagree at j={j}: PC route {pc}, MacWilliams route {macwilliams}"
    )]
    RouteMismatch {
        j: usize,
        pc: String,
        macwilliams: String,
    },
    #[error("deviation/word-length relation fails at j={j}: B_j^2 = {direct}, linear relation gives {relation}")]
    RelationMismatch {
        j: usize,
        direct: String,
        relation: String,
    },
    #[error("criterion needs at least 2 factors, got {s}")]
    TooFewFactors { s: usize },
    #[error("criterion needs q={expected} levels, design has q={got}")]
    WrongLevelCount { expected: u32, got: u32 },
    #[error("invalid discrepancy parameters: {0}")]
    InvalidDiscrepancyParams(String),
    #[error("{kind} discrepancy has no coincidence identity for q={q}")]
    UnsupportedLevelCount { kind: &'static str, q: u32 },
    #[error(transparent)]
    Krawtchouk(#[from] crate::krawtchouk::KrawtchoukError),
}
