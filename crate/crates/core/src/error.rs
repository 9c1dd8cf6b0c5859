use thiserror::Error;

use crate::ordinal::Ordinal;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ordinal nesting depth exceeds the cap of {cap}")]
    DepthCap { cap: usize },

    #[error("ordinal coefficient {value} exceeds the cap of {cap}")]
    CoefficientCap { value: u64, cap: u64 },

    #[error("the last exponent of 0 is undefined")]
    ZeroHasNoTerms,

    #[error("point {point} lies outside the space [0, {top}]")]
    PointOutOfSpace { point: Ordinal, top: Ordinal },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid clopen block ({low}, {high}]")]
    InvalidBlock { low: Ordinal, high: Ordinal },

    #[error("rank-{rank} slice of ({low}, {high}] is infinite; restrict the block")]
    InfiniteSlice { rank: Ordinal, low: Ordinal, high: Ordinal },

    #[error("invalid ladder `{id}`: {msg}")]
    InvalidLadder { id: String, msg: String },

    #[error("unknown ladder `{0}`")]
    UnknownLadder(String),

    #[error("unknown residue label `{label}` on ladder `{ladder}`")]
    UnknownLabel { ladder: String, label: String },

    #[error("{0} is an infinite prime; functions are only defined on finite primes")]
    InfinitePrime(Ordinal),

    #[error("{0} is not a point carrying a ladder")]
    NoLadder(Ordinal),

    #[error("elements live over different ambient spaces")]
    AmbientMismatch,

    #[error("tail on ladder `{ladder}` is not integral from index {start}")]
    NotIntegral { ladder: String, start: u64 },

    #[error("element is not divisible by {0}")]
    NotDivisible(String),

    #[error("element vanishes on ladder `{0}`")]
    ZeroOnLadder(String),

    #[error("probe window does not separate the given elements: {0}")]
    AmbiguousProbe(String),

    #[error("every generator vanishes at {0}")]
    AllZeroAt(Ordinal),

    #[error("no semibasic element at {point} among combinations of at most {max_terms} generators with coefficients in [-{bound}, {bound}]")]
    SearchExhausted { point: Ordinal, bound: i64, max_terms: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no semibasic element supplied for {0}")]
    MissingSemibasic(Ordinal),

    #[error("residue group is not of rank one: {0}")]
    ResidueNotRankOne(String),

    #[error("no preimage found for residue {0}")]
    PreimageExhausted(String),

    #[error("required membership failed: {0}")]
    WitnessNotFound(String),

    #[error("no finite prime of rank {rank} inside ({low}, {high}]")]
    NoPaddingPoint { rank: Ordinal, low: Ordinal, high: Ordinal },

    #[error("clopen blocks overlap: {0}")]
    BlockOverlap(String),

    #[error("infinite prime {0} is not covered by any block")]
    UncoveredInfinitePrime(Ordinal),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
