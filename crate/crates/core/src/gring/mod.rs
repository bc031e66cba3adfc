//! Symbolic model of the subring of the Grothendieck ring generated by a
//! catalog of variety classes.
//!
//! Elements are finite integer combinations of monomials (sorted multisets of
//! generator ids). Multiplication is free; the relations of a [`Context`]
//! are applied only by [`normalize`]. Equalities obtained this way hold in the
//! actual ring; inequalities are only ever reported with a measure witness
//! (see [`is_zero_modulo`]).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::ToBigInt;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Signed};
use thiserror::Error;

mod context;
mod element;
mod normalize;
mod parse;

pub use context::{
    AsanumaParams, Context, ContextBuilder, ContextId, CountModel, Generator, GeneratorKind, Mode,
    Relations,
};
pub use element::{Monomial, RingElement, TermJson};
pub use normalize::{is_zero_modulo, normalize, normalize_monomial, Witness, ZeroTest};
pub use parse::{parse, ParseError};

/// Integer-like coefficient ring for [`RingElement`] and the monoid ring.
///
/// `BigInt` is the default; `i64` works for small computations and panics
/// on overflow instead of wrapping.
pub trait Coefficient:
    Clone
    + CheckedAdd
    + CheckedMul
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + FromStr
    + Signed
    + FromPrimitive
    + ToBigInt
    + Send
    + Sync
    + 'static
{
}

impl<T> Coefficient for T where
    T: Clone
        + CheckedAdd
        + CheckedMul
        + Eq
        + Ord
        + Hash
        + Debug
        + Display
        + FromStr
        + Signed
        + FromPrimitive
        + ToBigInt
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GringError {
    #[error("elements belong to different contexts")]
    ContextMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("generator {0:?} is already registered")]
    DuplicateGenerator(String),
    #[error("{0:?} is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator {0:?} is not complete and cannot be registered in complete mode")]
    NotComplete(String),
    #[error("generator {id:?}: j = {j} is {actual} but was registered as {claimed}")]
    SupersingularMismatch {
        id: String,
        j: String,
        claimed: &'static str,
        actual: &'static str,
    },
    #[error("only one affine line may be registered (already have {0:?})")]
    SecondAffineLine(String),
    #[error("generator {0:?} lives in a different characteristic")]
    WrongCharacteristic(String),
    #[error("generator {id:?} counts over q = {q}, but the context counts over {base:?}")]
    CountBaseMismatch { id: String, q: u64, base: Option<u64> },
    #[error("generator {0:?}: curve model has a different j-invariant")]
    ModelMismatch(String),
    #[error("elliptic generators need characteristic at least 5")]
    NoEllipticModels,
    #[error("alias {0:?}: {1}")]
    BadAlias(String, String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Supersingular(#[from] crate::ss::SsError),
    #[error(transparent)]
    Curve(#[from] crate::ec::CurveError),
}

pub(crate) fn coeff_add<C: Coefficient>(a: &C, b: &C) -> C {
    a.checked_add(b).expect("coefficient overflow")
}

pub(crate) fn coeff_mul<C: Coefficient>(a: &C, b: &C) -> C {
    a.checked_mul(b).expect("coefficient overflow")
}

/// `|c|` as a decimal string; exact even for the most negative machine integer.
pub(crate) fn coeff_abs_string<C: Coefficient>(c: &C) -> String {
    let big = c.to_bigint().expect("integer coefficients");
    num_traits::Signed::abs(&big).to_string()
}

