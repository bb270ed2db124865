//! Error taxonomy shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A critical point of the ramifying function is not rational; the
    /// offending irreducible factor (canonical text) is reported.
    #[error("ramification point is not rational: unresolved factor {factor}")]
    NonRationalRamification { factor: String },

    /// A zero of the differential is not simple.
    #[error("unsupported ramification profile: {0}")]
    UnsupportedRamificationProfile(String),

    /// One of the standing assumptions (simple, distinct, other branch
    /// regular and unramified) fails.
    #[error("curve assumption violated: {0}")]
    AssumptionViolated(String),

    /// The curve data itself is unusable (constant function, zero
    /// differential, bad variable set).
    #[error("invalid spectral curve: {0}")]
    InvalidCurve(String),

    /// A series was requested above its actual leading order.
    #[error("empty series: requested window ends at {requested} but the leading order is {leading}")]
    EmptySeries { requested: i64, leading: i64 },

    /// A series operation cannot deliver the requested order.
    #[error("truncation shortfall: only order {achievable} is achievable, {requested} requested")]
    TruncationShortfall { achievable: i64, requested: i64 },

    /// An operation was invoked outside its contract.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Correlator entries required by a formula are missing.
    #[error("missing correlator entries: {0:?}")]
    MissingEntries(Vec<(u32, u32)>),

    /// The operator-series evaluation stayed unstable after a retry.
    #[error("operator series unstable: results at successive u-orders disagree")]
    SeriesInstability,

    /// Series identification point is invalid for this curve.
    #[error("no valid expansion point: {0}")]
    NoExpansionPoint(String),

    /// Expression parsing failed; `offset` is a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Cache file handling.
    #[error("cache error: {0}")]
    Cache(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
