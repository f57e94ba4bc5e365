//! Arithmetic substrate: exact rationals, truncated q-series,
//! configurable-precision complex numbers and the q-numbers `[x]_q`,
//! `[x]_{-q}`.

pub mod algebra;
pub mod context;
pub mod numeric;
pub mod rational;
pub mod series;

pub use algebra::{NumericAlgebra, QAlgebra, RationalAlgebra, Residual, SeriesAlgebra};
pub use context::{q_bracket, q_bracket_series, required_scale, Algebra, Backend, BracketSign, QContext, QValue};
pub use numeric::{numeric_pow, PrecComplex};
pub use rational::{parse_rational, ComplexRational, Rational};
pub use series::{series_arith, series_eval_numeric, series_monomial, Operand, QSeries, SeriesOp};
