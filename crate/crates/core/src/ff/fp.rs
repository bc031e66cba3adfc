use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldError, FiniteField};

/// Largest supported modulus: `p^4` must fit in a `u64`.
pub const MAX_MODULUS: u64 = 65_521;

/// Deterministic trial-division primality test; moduli here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_modulus(p: u64) -> Result<(), FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p == 2 {
        return Err(FieldError::EvenCharacteristic);
    }
    if p > MAX_MODULUS {
        return Err(FieldError::Capacity(p));
    }
    Ok(())
}

/// Handle for the prime field `F_p`, validated once at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn zero(&self) -> Fp {
        Fp::raw(self.p, 0)
    }

    pub fn one(&self) -> Fp {
        Fp::raw(self.p, 1)
    }

    pub fn elem(&self, value: u64) -> Fp {
        Fp::raw(self.p, value % self.p)
    }

    pub fn from_i64(&self, value: i64) -> Fp {
        Fp::raw(self.p, value.rem_euclid(self.p as i64) as u64)
    }

    /// All elements `0, 1, ..., p-1`.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| Fp::raw(self.p, v))
    }
}

/// An element of `F_p` for an odd prime `p`.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    p: u64,
    value: u64,
}

/// Field elements of the prime field go by this name in the public API.
pub type FieldElement = Fp;

impl Fp {
    /// Checked constructor; reduces `value` modulo `p`.
    pub fn new(p: u64, value: u64) -> Result<Self, FieldError> {
        check_modulus(p)?;
        Ok(Self::raw(p, value % p))
    }

    #[inline]
    pub(crate) const fn raw(p: u64, value: u64) -> Self {
        Self { p, value }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    /// Legendre symbol via Euler's criterion.
    pub fn legendre(&self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if FiniteField::pow(self, (self.p - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!(self.p, other.p, "mixed moduli");
        self.value == other.value
    }
}

impl Eq for Fp {}

impl Hash for Fp {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl PartialOrd for Fp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.value + rhs.value;
        Fp::raw(self.p, if s >= self.p { s - self.p } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.p - rhs.value
        };
        Fp::raw(self.p, v)
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp::raw(self.p, self.value * rhs.value % self.p)
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp::raw(self.p, self.p - self.value)
        }
    }
}

impl FiniteField for Fp {
    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> u32 {
        1
    }

    fn zero_like(&self) -> Self {
        Fp::raw(self.p, 0)
    }

    fn one_like(&self) -> Self {
        Fp::raw(self.p, 1)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Fp::raw(self.p, n.rem_euclid(self.p as i64) as u64)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // Extended Euclid on (value, p).
        let (mut r0, mut r1) = (self.p as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(Fp::raw(self.p, t0.rem_euclid(self.p as i64) as u64))
    }

    fn quadratic_character(&self) -> i8 {
        self.legendre()
    }

    fn elements_like(&self) -> Vec<Self> {
        self.field().elements().collect()
    }

    fn lift(&self, base: Fp) -> Self {
        base
    }

    fn frobenius(&self) -> Self {
        *self
    }

    fn base_norm(&self) -> u64 {
        self.value
    }
}

/// Least quadratic non-residue in `[2, p)`.
pub fn find_nonresidue(p: u64) -> Result<Fp, FieldError> {
    let field = PrimeField::new(p)?;
    (2..p)
        .map(|r| field.elem(r))
        .find(|r| r.legendre() == -1)
        .ok_or(FieldError::NotPrime(p))
}
