//! Expression algebra for real-valued functions on the half-line, with
//! exact rational evaluation on the piecewise-linear fragment and
//! fixed-precision evaluation elsewhere.

pub mod curve;
pub mod expr;
pub mod fixed;
pub mod rat;
pub mod real;
pub mod schema;
pub mod seq;
pub mod window;

pub use curve::PlCurve;
pub use expr::{AffineTail, EtaFn, EvalError, ExprError, FnExpr, PlSpec};
pub use fixed::{Fixed, Rounding};
pub use rat::{Rat, fmt_decimal, fmt_rat, parse_rat, rat, rat_int};
pub use real::RealScalar;
pub use schema::{ParseError, parse, parse_seq, serialize, serialize_seq};
pub use seq::{Seq, SeqError};
pub use window::{WindowExtrema, slope_bound, sup_abs_on, window_diam, window_extrema, window_extrema_res};
