use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::fp::{find_nonresidue, Fp, PrimeField};
use super::{FieldError, FiniteField};

/// `F_{p^2} = F_p[t]/(t^2 - c)` with `c` the least quadratic non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    p: u64,
    c: u64,
}

impl QuadField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        let c = find_nonresidue(p)?;
        Ok(Self { p, c: c.value() })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nonresidue(&self) -> Fp {
        Fp::raw(self.p, self.c)
    }

    pub fn base(&self) -> PrimeField {
        Fp::raw(self.p, 0).field()
    }

    pub fn zero(&self) -> Fp2 {
        self.elem(0, 0)
    }

    pub fn one(&self) -> Fp2 {
        self.elem(1, 0)
    }

    /// The generator `t` with `t^2 = c`.
    pub fn t(&self) -> Fp2 {
        self.elem(0, 1)
    }

    pub fn elem(&self, c0: u64, c1: u64) -> Fp2 {
        Fp2::raw(self.p, self.c, c0 % self.p, c1 % self.p)
    }

    pub fn from_i64(&self, n: i64) -> Fp2 {
        self.elem(n.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn embed(&self, x: Fp) -> Fp2 {
        debug_assert_eq!(x.modulus(), self.p);
        self.elem(x.value(), 0)
    }

    /// All `p^2` elements in canonical `(c0, c1)` lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        (0..self.p).flat_map(move |c0| (0..self.p).map(move |c1| self.elem(c0, c1)))
    }

    /// Parses the canonical text form `"c0"` or `"c0+c1*t"`.
    pub fn parse(&self, text: &str) -> Result<Fp2, FieldError> {
        let bad = || FieldError::Malformed(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let residue = |part: &str| -> Result<u64, FieldError> {
            let v: u64 = part.parse().map_err(|_| bad())?;
            if v >= self.p {
                return Err(bad());
            }
            Ok(v)
        };
        match s.split_once('+') {
            None => Ok(self.elem(residue(&s)?, 0)),
            Some((a, b)) => {
                let b = b.strip_suffix("*t").ok_or_else(bad)?;
                Ok(self.elem(residue(a)?, residue(b)?))
            }
        }
    }
}

/// An element `c0 + c1*t` of `F_{p^2}`.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    p: u64,
    c: u64,
    c0: u64,
    c1: u64,
}

pub type QuadExtElement = Fp2;

impl Fp2 {
    #[inline]
    pub(crate) const fn raw(p: u64, c: u64, c0: u64, c1: u64) -> Self {
        Self { p, c, c0, c1 }
    }

    pub fn field(&self) -> QuadField {
        QuadField {
            p: self.p,
            c: self.c,
        }
    }

    pub fn c0(&self) -> Fp {
        Fp::raw(self.p, self.c0)
    }

    pub fn c1(&self) -> Fp {
        Fp::raw(self.p, self.c1)
    }

    /// Coordinates `(c0, c1)` as plain residues.
    pub fn coords(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    pub fn in_base_field(&self) -> bool {
        self.c1 == 0
    }

    pub fn conjugate(&self) -> Fp2 {
        Fp2::raw(self.p, self.c, self.c0, (self.p - self.c1) % self.p)
    }

    /// `N(x) = x * x^p = c0^2 - c*c1^2`.
    pub fn norm(&self) -> Fp {
        let (p, c) = (self.p, self.c);
        let a = self.c0 * self.c0 % p;
        let b = c * (self.c1 * self.c1 % p) % p;
        Fp::raw(p, (a + p - b) % p)
    }
}

impl PartialEq for Fp2 {
    fn eq(&self, other: &Self) -> bool {
        debug_assert_eq!((self.p, self.c), (other.p, other.c), "mixed fields");
        self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl Eq for Fp2 {}

impl Hash for Fp2 {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.c0, self.c1).hash(state);
    }
}

impl PartialOrd for Fp2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fp2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.c0, self.c1).cmp(&(other.c0, other.c1))
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}*t", self.c0, self.c1)
        }
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    #[inline]
    fn add(self, rhs: Fp2) -> Fp2 {
        let p = self.p;
        Fp2::raw(p, self.c, (self.c0 + rhs.c0) % p, (self.c1 + rhs.c1) % p)
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    #[inline]
    fn sub(self, rhs: Fp2) -> Fp2 {
        let p = self.p;
        Fp2::raw(
            p,
            self.c,
            (self.c0 + p - rhs.c0) % p,
            (self.c1 + p - rhs.c1) % p,
        )
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    #[inline]
    fn mul(self, rhs: Fp2) -> Fp2 {
        let (p, c) = (self.p, self.c);
        let a0b0 = self.c0 * rhs.c0 % p;
        let a1b1 = self.c1 * rhs.c1 % p;
        let c0 = (a0b0 + c * a1b1) % p;
        let c1 = (self.c0 * rhs.c1 + self.c1 * rhs.c0) % p;
        Fp2::raw(p, c, c0, c1)
    }
}

impl Neg for Fp2 {
    type Output = Fp2;
    #[inline]
    fn neg(self) -> Fp2 {
        let p = self.p;
        Fp2::raw(p, self.c, (p - self.c0) % p, (p - self.c1) % p)
    }
}

impl FiniteField for Fp2 {
    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.p * self.p
    }

    fn degree(&self) -> u32 {
        2
    }

    fn zero_like(&self) -> Self {
        Fp2::raw(self.p, self.c, 0, 0)
    }

    fn one_like(&self) -> Self {
        Fp2::raw(self.p, self.c, 1, 0)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.field().from_i64(n)
    }

    fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    fn inv(&self) -> Option<Self> {
        let n_inv = self.norm().inv()?;
        let conj = self.conjugate();
        Some(Fp2::raw(
            self.p,
            self.c,
            conj.c0 * n_inv.value() % self.p,
            conj.c1 * n_inv.value() % self.p,
        ))
    }

    /// `x^((q-1)/2) = N(x)^((p-1)/2)`, so the character is the Legendre symbol of the norm.
    fn quadratic_character(&self) -> i8 {
        self.norm().legendre()
    }

    fn elements_like(&self) -> Vec<Self> {
        self.field().elements().collect()
    }

    fn lift(&self, base: Fp) -> Self {
        self.field().embed(base)
    }

    fn frobenius(&self) -> Self {
        self.conjugate()
    }

    fn base_norm(&self) -> u64 {
        self.norm().value()
    }
}
