//! Short-Weierstrass elliptic curves `y^2 = x^3 + a4 x + a6` over `F_p` and `F_{p^2}`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ff::{legendre_table, FiniteField, Fp2};
use crate::ss;

/// Largest field size accepted by the naive point counter.
pub const MAX_COUNT_FIELD: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular curve: discriminant vanishes")]
    Singular,
    #[error("short Weierstrass models need characteristic at least 5, got {0}")]
    UnsupportedCharacteristic(u64),
    #[error("field of size {0} is too large for naive point counting")]
    Capacity(u64),
    #[error("trace {trace} violates the Hasse bound for q = {q}")]
    HasseBound { trace: i64, q: u64 },
    #[error("j = {0} is not supersingular")]
    NotSupersingular(String),
    #[error("no maximal model found for j = {0}")]
    SearchExhausted(String),
    #[error(transparent)]
    Field(#[from] crate::ff::FieldError),
}

/// A nonsingular curve with optionally cached point count over its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveModel<F: FiniteField> {
    a4: F,
    a6: F,
    count: Option<u64>,
}

impl<F: FiniteField> CurveModel<F> {
    pub fn new(a4: F, a6: F) -> Result<Self, CurveError> {
        let p = a4.characteristic();
        if p < 5 {
            return Err(CurveError::UnsupportedCharacteristic(p));
        }
        if discriminant(a4, a6).is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self {
            a4,
            a6,
            count: None,
        })
    }

    pub fn a4(&self) -> F {
        self.a4
    }

    pub fn a6(&self) -> F {
        self.a6
    }

    pub fn characteristic(&self) -> u64 {
        self.a4.characteristic()
    }

    /// Size `q = p^f` of the coefficient field.
    pub fn field_order(&self) -> u64 {
        self.a4.order()
    }

    pub fn ext_degree(&self) -> u32 {
        self.a4.degree()
    }

    pub fn j_invariant(&self) -> F {
        j_invariant(self.a4, self.a6).expect("model is nonsingular")
    }

    pub fn discriminant(&self) -> F {
        discriminant(self.a4, self.a6)
    }

    /// Cached point count, if [`CurveModel::with_count`] has run.
    pub fn cached_count(&self) -> Option<u64> {
        self.count
    }

    pub fn cached_trace(&self) -> Option<i64> {
        self.count
            .map(|n| self.field_order() as i64 + 1 - n as i64)
    }

    /// Returns the model with its point count and trace cached.
    pub fn with_count(mut self) -> Result<Self, CurveError> {
        if self.count.is_none() {
            self.count = Some(count_points_naive(&self)?);
        }
        Ok(self)
    }

    pub fn trace(&self) -> Result<i64, CurveError> {
        match self.cached_trace() {
            Some(t) => Ok(t),
            None => {
                let n = count_points_naive(self)?;
                Ok(self.field_order() as i64 + 1 - n as i64)
            }
        }
    }

    /// `y^2 = x^3 + d^2 a4 x + d^3 a6`, isomorphic to `self` over `F(sqrt d)`.
    pub fn twist(&self, d: F) -> Result<Self, CurveError> {
        Self::new(d * d * self.a4, d * d * d * self.a6)
    }

    fn rhs(&self, x: F) -> F {
        (x * x + self.a4) * x + self.a6
    }
}

pub type CurveFp = CurveModel<crate::ff::Fp>;
pub type CurveFp2 = CurveModel<Fp2>;

/// `-16 (4 a4^3 + 27 a6^2)`.
pub fn discriminant<F: FiniteField>(a4: F, a6: F) -> F {
    let k = |n| a4.from_i64_like(n);
    k(-16) * (k(4) * a4 * a4 * a4 + k(27) * a6 * a6)
}

/// `1728 * 4 a4^3 / (4 a4^3 + 27 a6^2)`.
pub fn j_invariant<F: FiniteField>(a4: F, a6: F) -> Result<F, CurveError> {
    let k = |n| a4.from_i64_like(n);
    let num = k(4) * a4 * a4 * a4;
    let den = num + k(27) * a6 * a6;
    if a4.characteristic() < 5 {
        return Err(CurveError::UnsupportedCharacteristic(a4.characteristic()));
    }
    let den_inv = den.inv().ok_or(CurveError::Singular)?;
    Ok(k(1728) * num * den_inv)
}

/// A model with the given j-invariant: `(0, 1)` for `j = 0`, `(1, 0)` for
/// `j = 1728`, otherwise `a4 = 3j(1728 - j)`, `a6 = 2j(1728 - j)^2`.
pub fn model_for_j<F: FiniteField>(j: F) -> Result<CurveModel<F>, CurveError> {
    let k = |n| j.from_i64_like(n);
    if j.is_zero() {
        return CurveModel::new(k(0), k(1));
    }
    let m = k(1728) - j;
    if m.is_zero() {
        return CurveModel::new(k(1), k(0));
    }
    CurveModel::new(k(3) * j * m, k(2) * j * m * m)
}

/// `N = 1 + sum_x (1 + chi(x^3 + a4 x + a6))`, including the point at infinity.
pub fn count_points_naive<F: FiniteField>(curve: &CurveModel<F>) -> Result<u64, CurveError> {
    let q = curve.field_order();
    if q > MAX_COUNT_FIELD {
        return Err(CurveError::Capacity(q));
    }
    let chi = legendre_table(curve.characteristic());
    let affine: i64 = curve
        .a4
        .elements_like()
        .into_iter()
        .map(|x| 1 + chi[curve.rhs(x).base_norm() as usize] as i64)
        .sum();
    let n = (1 + affine) as u64;
    check_hasse(q as i64 + 1 - n as i64, q)?;
    Ok(n)
}

fn check_hasse(trace: i64, q: u64) -> Result<(), CurveError> {
    if (trace as i128) * (trace as i128) > 4 * q as i128 {
        return Err(CurveError::HasseBound { trace, q });
    }
    Ok(())
}

/// `#E(F_{q^n}) = q^n + 1 - t_n` with `t_0 = 2`, `t_1 = a`, `t_m = a t_{m-1} - q t_{m-2}`.
pub fn extension_count(trace: i64, q: u64, n: u32) -> Result<BigInt, CurveError> {
    check_hasse(trace, q)?;
    let a = BigInt::from(trace);
    let qb = BigInt::from(q);
    let (mut prev, mut cur) = (BigInt::from(2), a.clone());
    if n == 0 {
        return Ok(BigInt::zero());
    }
    for _ in 1..n {
        let next = &a * &cur - &qb * &prev;
        prev = cur;
        cur = next;
    }
    Ok(num_traits::pow(qb, n as usize) + BigInt::one() - cur)
}

/// Supersingular iff the Frobenius trace is divisible by `p`.
pub fn is_supersingular<F: FiniteField>(curve: &CurveModel<F>) -> Result<bool, CurveError> {
    let p = curve.characteristic() as i64;
    Ok(curve.trace()? % p == 0)
}

/// A model over `F_{p^2}` with `j` as its j-invariant and Frobenius `-p`,
/// i.e. exactly `(p + 1)^2` points. Memoized per class.
///
/// Walks the twist family `(d^2 a4, d^3 a6)`, which for `j != 0, 1728`
/// exhausts every pair with this j-invariant; for `j = 0` and `j = 1728` it
/// walks `(0, d a6)` and `(d a4, 0)` instead, one `d` per twist class.
pub fn maximal_model(j: Fp2) -> Result<CurveFp2, CurveError> {
    // Keyed by the characteristic too: elements of different fields compare by coordinates.
    static CACHE: OnceLock<Mutex<HashMap<(u64, (u64, u64)), CurveFp2>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (j.characteristic(), j.coords());
    if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
        return Ok(*hit);
    }
    let model = search_maximal_model(j)?;
    cache.lock().expect("cache lock").insert(key, model);
    Ok(model)
}

fn search_maximal_model(j: Fp2) -> Result<CurveFp2, CurveError> {
    let p = j.characteristic();
    if p < 5 {
        return Err(CurveError::UnsupportedCharacteristic(p));
    }
    if !ss::is_supersingular_j(j)? {
        return Err(CurveError::NotSupersingular(j.to_string()));
    }
    let base = model_for_j(j)?;
    let target = (p + 1) * (p + 1);
    let k = j.field();
    let zero_j = j.is_zero();
    let j1728 = (j - j.from_i64_like(1728)).is_zero();
    // Counts only depend on d modulo k-th powers (k = 6, 4, 2 for j = 0, 1728, other).
    let classes = if zero_j { 6 } else if j1728 { 4 } else { 2 };
    let mut seen = BTreeSet::new();
    for d in k.elements().skip(1) {
        if !seen.insert(d.pow((p * p - 1) / classes)) {
            continue;
        }
        let candidate = if zero_j {
            CurveModel::new(k.zero(), d * base.a6)?
        } else if j1728 {
            CurveModel::new(d * base.a4, k.zero())?
        } else {
            base.twist(d)?
        };
        let candidate = candidate.with_count()?;
        if candidate.count == Some(target) {
            return Ok(candidate);
        }
    }
    Err(CurveError::SearchExhausted(j.to_string()))
}

/// JSON shape `{p, f, a4, a6, j, N, trace}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CurveJson {
    pub p: u64,
    pub f: u32,
    pub a4: String,
    pub a6: String,
    pub j: String,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub trace: Option<i64>,
}

impl<F: FiniteField> CurveModel<F> {
    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            p: self.characteristic(),
            f: self.ext_degree(),
            a4: self.a4.to_string(),
            a6: self.a6.to_string(),
            j: self.j_invariant().to_string(),
            n: self.count,
            trace: self.cached_trace(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{PrimeField, QuadField};

    fn curve(p: u64, a4: i64, a6: i64) -> CurveFp {
        let f = PrimeField::new(p).unwrap();
        CurveModel::new(f.from_i64(a4), f.from_i64(a6)).unwrap()
    }

    #[test]
    fn j_invariant_examples() {
        let f = PrimeField::new(7).unwrap();
        assert!(j_invariant(f.zero(), f.elem(3)).unwrap().is_zero());
        assert_eq!(j_invariant(f.elem(2), f.zero()).unwrap(), f.from_i64(1728));
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(j_invariant(f5.one(), f5.one()).unwrap().value(), 2);
        assert_eq!(j_invariant(f5.zero(), f5.zero()), Err(CurveError::Singular));
        assert_eq!(
            CurveModel::new(f5.zero(), f5.zero()),
            Err(CurveError::Singular)
        );
    }

    #[test]
    fn naive_count_examples() {
        assert_eq!(count_points_naive(&curve(5, 1, 0)).unwrap(), 4);
        assert_eq!(count_points_naive(&curve(5, 0, 1)).unwrap(), 6);
        assert_eq!(count_points_naive(&curve(7, 0, 2)).unwrap(), 9);
        assert_eq!(count_points_naive(&curve(7, 1, 0)).unwrap(), 8);
    }

    #[test]
    fn cached_trace() {
        let e = curve(5, 1, 0).with_count().unwrap();
        assert_eq!(e.cached_count(), Some(4));
        assert_eq!(e.cached_trace(), Some(2));
        assert_eq!(e.to_json().n, Some(4));
    }

    #[test]
    fn supersingular_examples() {
        assert!(is_supersingular(&curve(5, 0, 1)).unwrap());
        assert!(!is_supersingular(&curve(5, 1, 0)).unwrap());
        assert!(is_supersingular(&curve(7, 1, 0)).unwrap());
    }

    #[test]
    fn extension_count_examples() {
        for p in [5u64, 7, 11] {
            assert_eq!(
                extension_count(0, p, 2).unwrap(),
                BigInt::from((p + 1) * (p + 1))
            );
        }
        assert_eq!(extension_count(2, 5, 1).unwrap(), BigInt::from(4));
        assert_eq!(extension_count(-22, 121, 1).unwrap(), BigInt::from(144));
        assert!(matches!(
            extension_count(5, 5, 1),
            Err(CurveError::HasseBound { .. })
        ));
    }

    #[test]
    fn extension_count_matches_naive_over_quadratic_field() {
        // #E(F_{p^2}) from the F_p trace agrees with direct enumeration.
        for p in [5u64, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            let k = QuadField::new(p).unwrap();
            for a4 in 0..p {
                for a6 in 0..p {
                    let Ok(e) = CurveModel::new(f.elem(a4), f.elem(a6)) else {
                        continue;
                    };
                    let lifted = CurveModel::new(k.elem(a4, 0), k.elem(a6, 0)).unwrap();
                    let expected = count_points_naive(&lifted).unwrap();
                    assert_eq!(
                        extension_count(e.trace().unwrap(), p, 2).unwrap(),
                        BigInt::from(expected)
                    );
                }
            }
        }
    }

    #[test]
    fn hasse_bound_and_twist_pairing() {
        for p in [5u64, 7, 11, 13, 17] {
            let f = PrimeField::new(p).unwrap();
            let nonsquare = crate::ff::find_nonresidue(p).unwrap();
            for a4 in f.elements() {
                for a6 in f.elements() {
                    let Ok(e) = CurveModel::new(a4, a6) else {
                        continue;
                    };
                    let t = e.trace().unwrap();
                    assert!(t * t <= 4 * p as i64);
                    assert_eq!(extension_count(t, p, 1).unwrap(), BigInt::from(p as i64 + 1 - t));
                    let twisted = e.twist(nonsquare).unwrap();
                    assert_eq!(twisted.j_invariant(), e.j_invariant());
                    assert_eq!(twisted.trace().unwrap() + t, 0);
                }
            }
        }
    }

    #[test]
    fn model_for_j_hits_every_j() {
        let k = QuadField::new(13).unwrap();
        for j in k.elements() {
            assert_eq!(model_for_j(j).unwrap().j_invariant(), j);
        }
    }

    #[test]
    fn maximal_model_examples() {
        let k = QuadField::new(11).unwrap();
        for j in [0, 1] {
            let e = maximal_model(k.elem(j, 0)).unwrap();
            assert_eq!(e.j_invariant(), k.elem(j, 0));
            assert_eq!(e.cached_count(), Some(144));
            assert_eq!(count_points_naive(&e).unwrap(), 144);
            assert_eq!(e.cached_trace(), Some(-22));
        }
        let k13 = QuadField::new(13).unwrap();
        assert_eq!(
            maximal_model(k13.zero()),
            Err(CurveError::NotSupersingular("0".into()))
        );
    }

    #[test]
    fn rejects_small_characteristic() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(
            CurveModel::new(f.one(), f.one()),
            Err(CurveError::UnsupportedCharacteristic(3))
        );
    }
}
