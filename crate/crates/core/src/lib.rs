//! Exact arithmetic for a symbolic Grothendieck ring of varieties over `F_p`:
//! finite fields, elliptic curves, supersingular j-invariants, normal forms,
//! motivic measures and zero-divisor certificates.

pub mod ec;
pub mod certify;
pub mod cli;
pub mod ff;
pub mod gring;
pub mod measures;
pub mod ss;

pub use ec::{CurveFp, CurveFp2};
pub use ff::{Fp, Fp2};
pub use gring::{Context, Mode};

/// Ring elements with arbitrary-precision coefficients (the default).
pub type RingElement = gring::RingElement<num_bigint::BigInt>;
/// Ring elements with machine-word coefficients; arithmetic overflow panics.
pub type SmallRingElement = gring::RingElement<i64>;
/// Monoid-ring elements with arbitrary-precision coefficients.
pub type MonoidRingElement = measures::MonoidRingElement<num_bigint::BigInt>;
