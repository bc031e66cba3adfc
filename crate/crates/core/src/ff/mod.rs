//! Exact arithmetic in `F_p`, `F_{p^2}` and univariate polynomials over either.
//!
//! Every element carries its modulus, so values are self-describing and
//! operations need no external context. Mixing elements of different fields
//! is a logic error and is caught by debug assertions.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

mod fp;
mod fp2;
mod poly;

pub use fp::{find_nonresidue, is_prime, FieldElement, Fp, PrimeField, MAX_MODULUS};
pub use fp2::{Fp2, QuadExtElement, QuadField};
pub use poly::{power_coefficient, roots_in_quadratic_extension, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} exceeds capacity (largest supported prime is {MAX_MODULUS})")]
    Capacity(u64),
    #[error("the zero polynomial vanishes everywhere")]
    ZeroPolynomial,
    #[error("malformed field element {0:?}")]
    Malformed(String),
}

/// Common interface of the two finite fields used throughout the crate.
///
/// Constants are produced from an existing element (`zero_like`, `one_like`)
/// because the modulus is a runtime value.
pub trait FiniteField:
    Copy
    + Eq
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn characteristic(&self) -> u64;
    /// Number of elements of the field.
    fn order(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// `x^((q-1)/2)` as -1, 0 or 1.
    fn quadratic_character(&self) -> i8;
    /// Every element of the field, in canonical order.
    fn elements_like(&self) -> Vec<Self>;
    /// Embeds a prime-field element into this element's field.
    fn lift(&self, base: Fp) -> Self;
    /// `x -> x^p`.
    fn frobenius(&self) -> Self;
    /// The norm down to `F_p`, as a residue in `0..p`.
    fn base_norm(&self) -> u64;

    fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

/// Legendre symbols of `0..p`, indexed by residue; with [`FiniteField::base_norm`]
/// this gives the quadratic character of any field without exponentiation.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    for x in 1..p {
        table[(x * x % p) as usize] = 1;
    }
    table
}
