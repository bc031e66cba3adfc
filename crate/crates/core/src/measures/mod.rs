//! Motivic measures out of the symbolic ring: the Albanese measure into the
//! monoid ring of abelian-variety classes, point counting over `F_{q^n}`, and
//! the blow-up (Bittner) compatibility check.

use thiserror::Error;

mod albanese;
mod bittner;
mod count;

pub use albanese::{
    albanese_measure, albanese_of_monomial, AVClass, AVClassJson, AvMonoid, AvTermJson,
    EllipticClass, MonoidRingElement, OpaqueFactor,
};
pub use bittner::{bittner_catalog, bittner_defect, BlowupDatum};
pub use count::{generator_count, point_count_measure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("generator {id:?} is outside the domain of the {measure} measure")]
    Domain { id: String, measure: &'static str },
    #[error("the Albanese measure needs a complete-mode context")]
    NotComplete,
    #[error("point counts need an extension degree n >= 1")]
    ZeroDegree,
    #[error("the context has no point-count base field")]
    NoCountBase,
    #[error("blow-up datum is inconsistent: {0}")]
    InconsistentBlowup(String),
    #[error("malformed abelian-variety class: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ring(#[from] crate::gring::GringError),
    #[error(transparent)]
    Curve(#[from] crate::ec::CurveError),
}
