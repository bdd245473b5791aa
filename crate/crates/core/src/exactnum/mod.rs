//! Exact arithmetic: rationals, real number fields, dyadic interval enclosures.

pub mod dyadic;
pub mod field;
pub mod parse;
pub mod poly;

pub use dyadic::{format_scientific, Dyadic, IntervalReal, Rounding};
pub use field::{elem_arith, nearest_integer_split, ArithOp, FieldElement, FieldOptions, NumberField};
pub use parse::{parse_element, parse_element_in, parse_field, parse_poly, parse_rational};
pub use poly::Poly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("minimal polynomial has degree zero")]
    ZeroDegree,
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial is reducible over Q")]
    Reducible,
    #[error("irreducibility of a degree-{degree} polynomial cannot be checked; assert it explicitly")]
    IrreducibilityUnchecked { degree: usize },
    #[error("field degree {degree} exceeds the configured bound {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("polynomial has no sign change on the root interval")]
    NoSignChange,
    #[error("root interval contains more than one root")]
    NotIsolating,
    #[error("square root of a non-positive number is not real")]
    NotReal,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} coordinates, got {got}")]
    CoordLength { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
