//! Real algebraic numbers, real root isolation and exact sign evaluation at
//! sample points with irrational coordinates.

mod isolate;
mod number;
mod sample;
mod sign;
mod upoly;

use thiserror::Error;

use crate::poly::Polynomial;

pub use isolate::isolate_real_roots;
pub use number::{AlgebraicRoot, RealAlgebraic};
pub use sample::{pick_value_in, Bound, Interval, SamplePoint};
pub use sign::{eval_partial, isolate_roots_at, sign_at, PartialEval, RootsAt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RalgError {
    #[error("cannot isolate the roots of the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial {0} is not univariate")]
    NotUnivariate(Polynomial),
    #[error("empty range ({0}, {1})")]
    EmptyRange(Bound, Bound),
}
