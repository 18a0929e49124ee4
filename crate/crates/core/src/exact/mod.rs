//! Exact coefficient arithmetic: big rationals, polynomials in the
//! equivariant parameters, rational-function fields, and truncated series.

mod frac;
pub mod linalg;
mod parse;
mod ring;
mod series;
mod tpoly;
mod upoly;

use thiserror::Error;

pub use frac::{Frac, FracBase, QPoly, QRat, TRat};
pub use parse::{parse_qrat, parse_trat};
pub use ring::{is_integer, parse_rational, rat, Field, GcdDomain, Rational, Ring};
pub use series::{laurent_u_substitute, s_expand, series_expand, LaurentU, QSeries, SExpansion};
pub use tpoly::{canonical_cmp, TPoly, T2Poly};
pub use upoly::UPoly;

pub(crate) use tpoly::rational_to_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("denominator vanishes at q = 0")]
    PoleAtZero,
    #[error("denominator vanishes identically after substitution ({0})")]
    ZeroDenominator(String),
    #[error("coefficient of v^{0} is imaginary after v = iu")]
    ImaginaryCoefficient(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular matrix")]
    Singular,
}
