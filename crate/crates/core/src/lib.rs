//! Exact computation of topological-recursion correlators for genus-zero
//! rational spectral curves, the closed-form x-y swap of those correlators
//! (decorated-graph and operator-series evaluations), and the induced
//! higher-order moment/free-cumulant transforms.
//!
//! Everything is computed over the rationals; there is no floating point
//! anywhere. Correlators are rational functions on the z-plane, swap results
//! are compared by canonical-form equality, and series are truncated with
//! explicit validity bookkeeping.

pub mod algebra;
pub mod curve;
// pub mod emit;  // (staged)
pub mod error;
pub mod expr;
pub mod freeprob;
pub mod graphs;
pub mod recursion;
pub mod swap;

pub use error::{Error, Result};

/// Engine version string; participates in the cache key so stale cache
/// entries from older engines are ignored.
pub const ENGINE_VERSION: &str = concat!("trx-", env!("CARGO_PKG_VERSION"));
