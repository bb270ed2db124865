//! Exact arithmetic kernel: rationals, sparse multivariate polynomials,
//! canonical rational functions, and truncated Laurent series.
//!
//! All values are immutable after construction and safe to share across
//! threads; exact arithmetic makes any summation order equivalent.

pub mod laurent;
pub mod poly;
pub mod rational;
pub mod ratfunc;
pub mod semifrac;
pub mod symbol;

pub use laurent::{eval_ratfunc_at, local_param_symbol, Laurent, EXACT};
pub use poly::{Monomial, MultiPoly};
pub use rational::{factorial, int, parse_rational, rat, render_rational, s_coefficient, Rational};
pub use ratfunc::{poly_eval_map, RatFunc};
pub use symbol::Symbol;
