use std::fmt;

use super::fp::Fp;
use super::fp2::{Fp2, QuadField};
use super::{FieldError, FiniteField};

/// Dense univariate polynomial, lowest degree first, never storing a
/// trailing zero. The zero polynomial has no coefficients.
#[derive(Clone, Debug)]
pub struct UniPoly<F: FiniteField> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: FiniteField> UniPoly<F> {
    /// Builds a polynomial from coefficients `c_0, c_1, ...`; `sample` fixes the field.
    pub fn new(sample: F, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self {
            coeffs,
            zero: sample.zero_like(),
        }
    }

    pub fn from_i64(sample: F, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| sample.from_i64_like(c)).collect();
        Self::new(sample, coeffs)
    }

    pub fn zero(sample: F) -> Self {
        Self::new(sample, Vec::new())
    }

    pub fn one(sample: F) -> Self {
        Self::new(sample, vec![sample.one_like()])
    }

    pub fn monomial(coeff: F, degree: usize) -> Self {
        let mut coeffs = vec![coeff.zero_like(); degree + 1];
        coeffs[degree] = coeff;
        Self::new(coeff, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).copied().unwrap_or(self.zero)
    }

    pub fn eval(&self, x: F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(self.zero, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::new(self.zero, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::new(self.zero, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, usize::MAX)
    }

    /// Product with every term of degree above `max_degree` dropped.
    fn mul_truncated(&self, other: &Self, max_degree: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.zero);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_degree.saturating_add(1));
        let mut out = vec![self.zero; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(self.zero, out)
    }

    /// Maps coefficients into another field.
    pub fn map<G: FiniteField>(&self, sample: G, f: impl Fn(F) -> G) -> UniPoly<G> {
        UniPoly::new(sample, self.coeffs.iter().map(|&c| f(c)).collect())
    }
}

impl<F: FiniteField> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: FiniteField> Eq for UniPoly<F> {}

impl<F: FiniteField> fmt::Display for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Coefficient of `x^k` in `f^e`.
///
/// Strips the lowest power of `x` from `f`, then uses the power-series
/// recurrence for `g^e` obtained from `g (g^e)' = e g' g^e` while the target
/// index stays below the characteristic, and truncated square-and-multiply
/// otherwise.
pub fn power_coefficient<F: FiniteField>(f: &UniPoly<F>, e: u64, k: usize) -> F {
    let zero = f.zero;
    let one = zero.one_like();
    if e == 0 {
        return if k == 0 { one } else { zero };
    }
    let Some(valuation) = f.coeffs.iter().position(|c| !c.is_zero()) else {
        return zero;
    };
    let shift = (valuation as u128) * (e as u128);
    if shift > k as u128 {
        return zero;
    }
    let n = k - shift as usize;
    let g = &f.coeffs[valuation..];
    let p = zero.characteristic();
    if (n as u64) < p {
        power_series_coefficient(g, e, n)
    } else {
        truncated_power(&UniPoly::new(zero, g.to_vec()), e, n).coeff(n)
    }
}

/// `h = g^e` coefficient by coefficient, valid while `i * g_0` is invertible.
fn power_series_coefficient<F: FiniteField>(g: &[F], e: u64, n: usize) -> F {
    let g0 = g[0];
    let p = g0.characteristic();
    let g0_inv = g0.inv().expect("leading coefficient after valuation shift is nonzero");
    let mut h = Vec::with_capacity(n + 1);
    h.push(g0.pow(e));
    let e_mod = (e % p) as i64;
    // inv[i] = -(p / i) * inv[p mod i], all below p.
    let mut inv = vec![0u64, 1];
    for i in 2..=n as u64 {
        inv.push((p - (p / i) * inv[(p % i) as usize] % p) % p);
    }
    for i in 1..=n {
        let mut acc = g0.zero_like();
        for (j, &gj) in g.iter().enumerate().take(i + 1).skip(1) {
            if gj.is_zero() {
                continue;
            }
            // (e + 1) * j - i
            let factor = (e_mod + 1) * j as i64 - i as i64;
            acc = acc + g0.from_i64_like(factor) * gj * h[i - j];
        }
        h.push(acc * g0.from_i64_like(inv[i] as i64) * g0_inv);
    }
    h[n]
}

fn truncated_power<F: FiniteField>(f: &UniPoly<F>, mut e: u64, max_degree: usize) -> UniPoly<F> {
    let mut base = f.clone();
    let mut acc = UniPoly::one(f.zero);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_truncated(&base, max_degree);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_truncated(&base, max_degree);
        }
    }
    acc
}

/// Every root of `f` in `F_{p^2}`, found by evaluating at all `p^2` elements.
/// Results come back in canonical `(c0, c1)` order.
pub fn roots_in_quadratic_extension(f: &UniPoly<Fp>) -> Result<Vec<Fp2>, FieldError> {
    if f.is_zero() {
        return Err(FieldError::ZeroPolynomial);
    }
    let k = QuadField::new(f.zero.modulus())?;
    let lifted = f.map(k.zero(), |c| k.embed(c));
    Ok(k.elements().filter(|&x| lifted.eval(x).is_zero()).collect())
}
