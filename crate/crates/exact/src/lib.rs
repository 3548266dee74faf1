//! Exact arithmetic for q-series computations.
//!
//! Scalars are rational functions over ℚ in `s = q^(1/2)` and free parameters
//! ([`ParamField`]); series are truncated Laurent-offset expansions in `z` or
//! in `w = z^{-1}` ([`PowerSeries`]).

pub mod error;
pub mod field;
pub mod gcd;
pub mod parse;
pub mod poly;
pub mod series;
pub mod symbol;

pub use error::ArithError;
pub use field::ParamField;
pub use parse::{parse_field, ParamDecls, ParseError};
pub use poly::Poly;
pub use series::{Direction, PowerSeries};
pub use symbol::Symbol;
