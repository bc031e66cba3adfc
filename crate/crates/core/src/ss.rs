//! Supersingular j-invariants in characteristic `p`.
//!
//! Two independent enumerations are provided: a scan of all `j` in `F_{p^2}`
//! with a Hasse-invariant test, and the roots of the Deuring polynomial
//! pushed through the Legendre-to-j map. The class count is compared against
//! `floor((p - 1) / 12) + eps_p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ec::{self, CurveError, CurveModel};
use crate::ff::{
    is_prime, power_coefficient, roots_in_quadratic_extension, FieldError, FiniteField, Fp, Fp2,
    PrimeField, QuadField, UniPoly,
};

/// Largest characteristic accepted by the enumerations.
pub const MAX_ENUMERATION_PRIME: u64 = 1000;
/// Up to this bound the default method runs both enumerations.
pub const CROSS_CHECK_LIMIT: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported by this operation")]
    Unsupported(u64),
    #[error("p = {0} exceeds the enumeration bound {MAX_ENUMERATION_PRIME}")]
    Capacity(u64),
    #[error("lambda = {0} is degenerate (must avoid 0 and 1)")]
    DegenerateLambda(String),
    #[error("enumerations disagree at p = {p}: hasse scan {hasse:?}, deuring roots {deuring:?}")]
    MethodDisagreement {
        p: u64,
        hasse: Vec<String>,
        deuring: Vec<String>,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[serde(rename = "hasse")]
    HasseScan,
    #[serde(rename = "deuring")]
    DeuringRoots,
    #[serde(rename = "cross")]
    CrossChecked,
}

impl Method {
    /// Cross-checked up to [`CROSS_CHECK_LIMIT`], Deuring roots above.
    pub fn default_for(p: u64) -> Self {
        if p <= CROSS_CHECK_LIMIT {
            Method::CrossChecked
        } else {
            Method::DeuringRoots
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::HasseScan => "hasse",
            Method::DeuringRoots => "deuring",
            Method::CrossChecked => "cross",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hasse" => Ok(Method::HasseScan),
            "deuring" => Ok(Method::DeuringRoots),
            "cross" => Ok(Method::CrossChecked),
            other => Err(format!("unknown method {other:?} (expected hasse, deuring or cross)")),
        }
    }
}

/// `delta_p = floor((p - 1) / 12) + eps_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaCount {
    pub delta: u64,
    pub epsilon: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularData {
    pub p: u64,
    /// Sorted by `(c0, c1)`, duplicate free.
    pub js: Vec<Fp2>,
    pub delta: u64,
    pub epsilon: u64,
    pub method: Method,
}

impl SupersingularData {
    /// Whether the enumerated count matches the residue-table formula.
    pub fn formula_agrees(&self) -> bool {
        delta_formula(self.p).is_ok_and(|d| d.delta == self.delta)
    }

    pub fn j_strings(&self) -> Vec<String> {
        self.js.iter().map(|j| j.to_string()).collect()
    }

    /// The least supersingular class in canonical order.
    pub fn canonical(&self) -> Option<Fp2> {
        self.js.first().copied()
    }
}

/// Coefficient of `x^(p-1)` in `(x^3 + a4 x + a6)^((p-1)/2)` over any field of characteristic `p`.
pub fn hasse_coefficient<F: FiniteField>(a4: F, a6: F) -> F {
    let p = a4.characteristic();
    let cubic = UniPoly::new(a4, vec![a6, a4, a4.zero_like(), a4.one_like()]);
    power_coefficient(&cubic, (p - 1) / 2, (p - 1) as usize)
}

/// Hasse invariant of `y^2 = x^3 + a4 x + a6` over `F_p`; zero iff supersingular.
pub fn hasse_invariant(a4: Fp, a6: Fp) -> Result<Fp, SsError> {
    CurveModel::new(a4, a6)?;
    Ok(hasse_coefficient(a4, a6))
}

/// Frobenius trace modulo `p` of a curve over `F_{p^2}`: the norm of its Hasse coefficient.
pub fn trace_mod_p(curve: &CurveModel<Fp2>) -> Fp {
    hasse_coefficient(curve.a4(), curve.a6()).norm()
}

/// Supersingularity of the class `j`, tested on one model over the smallest field containing `j`.
pub fn is_supersingular_j(j: Fp2) -> Result<bool, CurveError> {
    let p = j.characteristic();
    if p < 5 {
        // Only j = 0 is supersingular in characteristic 3.
        return Ok(j.is_zero());
    }
    if j.in_base_field() {
        let e = ec::model_for_j(j.c0())?;
        Ok(hasse_coefficient(e.a4(), e.a6()).is_zero())
    } else {
        let e = ec::model_for_j(j)?;
        Ok(trace_mod_p(&e).is_zero())
    }
}

/// `H_p(lambda) = sum_{i=0}^{m} C(m, i)^2 lambda^i` with `m = (p - 1)/2`.
pub fn deuring_polynomial(p: u64) -> Result<UniPoly<Fp>, SsError> {
    let field = PrimeField::new(p)?;
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = field.one();
    coeffs.push(binom);
    for i in 1..=m {
        // C(m, i) = C(m, i-1) * (m - i + 1) / i, with i < p invertible.
        binom = binom * field.elem(m - i + 1) * field.elem(i).inv().expect("i < p");
        coeffs.push(binom * binom);
    }
    Ok(UniPoly::new(field.zero(), coeffs))
}

/// `2^8 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2)`.
pub fn lambda_to_j(lambda: Fp2) -> Result<Fp2, SsError> {
    let one = lambda.one_like();
    let den = lambda * lambda * (lambda - one) * (lambda - one);
    let den_inv = den
        .inv()
        .ok_or_else(|| SsError::DegenerateLambda(lambda.to_string()))?;
    let s = lambda * lambda - lambda + one;
    Ok(lambda.from_i64_like(256) * s * s * s * den_inv)
}

pub fn delta_formula(p: u64) -> Result<DeltaCount, SsError> {
    if !is_prime(p) {
        return Err(SsError::NotPrime(p));
    }
    if p == 2 || p == 3 {
        return Ok(DeltaCount {
            delta: 1,
            epsilon: 1,
        });
    }
    let epsilon = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => unreachable!("primes above 3 are units mod 12"),
    };
    Ok(DeltaCount {
        delta: (p - 1) / 12 + epsilon,
        epsilon,
    })
}

/// Enumerates the supersingular classes. Results are memoized per `(p, method)`.
pub fn supersingular_js(p: u64, method: Method) -> Result<SupersingularData, SsError> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, Method), SupersingularData>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(p, method)) {
        return Ok(hit.clone());
    }
    let data = enumerate(p, method)?;
    cache.lock().expect("cache lock").insert((p, method), data.clone());
    Ok(data)
}

fn enumerate(p: u64, method: Method) -> Result<SupersingularData, SsError> {
    if !is_prime(p) {
        return Err(SsError::NotPrime(p));
    }
    if p == 2 {
        return Err(SsError::Unsupported(2));
    }
    if p > MAX_ENUMERATION_PRIME {
        return Err(SsError::Capacity(p));
    }
    let js = match method {
        Method::HasseScan => hasse_scan(p)?,
        Method::DeuringRoots => deuring_roots(p)?,
        Method::CrossChecked => {
            let hasse = hasse_scan(p)?;
            let deuring = deuring_roots(p)?;
            if hasse != deuring {
                return Err(SsError::MethodDisagreement {
                    p,
                    hasse: hasse.iter().map(ToString::to_string).collect(),
                    deuring: deuring.iter().map(ToString::to_string).collect(),
                });
            }
            hasse
        }
    };
    let epsilon = delta_formula(p)?.epsilon;
    Ok(SupersingularData {
        p,
        delta: js.len() as u64,
        js,
        epsilon,
        method,
    })
}

/// Hasse coefficient of the model `(3j(1728 - j), 2j(1728 - j)^2)` as a
/// polynomial in `j` over `F_p`.
///
/// Expanding `(x^3 + a4 x + a6)^m`, `m = (p - 1)/2`, the coefficient of
/// `x^(p-1)` collects `m!/(i! k! l!) a4^k a6^l` over `i + k + l = m`,
/// `3i + k = p - 1`.
pub fn hasse_j_polynomial(p: u64) -> Result<UniPoly<Fp>, SsError> {
    if p < 5 || !is_prime(p) {
        return Err(SsError::Unsupported(p));
    }
    let f = PrimeField::new(p)?;
    let m = ((p - 1) / 2) as usize;
    let mut fact = vec![f.one()];
    for i in 1..=m {
        fact.push(fact[i - 1] * f.elem(i as u64));
    }
    let inv = |x: Fp| x.inv().expect("factorials below p are units");
    let u = UniPoly::from_i64(f.zero(), &[1728, -1]);
    // a4 = 3 j u, a6 = 2 j u^2, so a4^k a6^l = 3^k 2^l j^(k+l) u^(k+2l).
    let mut u_pow = vec![UniPoly::one(f.zero())];
    for t in 1..=2 * m {
        u_pow.push(u_pow[t - 1].mul(&u));
    }
    let mut out = UniPoly::zero(f.zero());
    for i in 0..=m {
        let Some(k) = (p as usize - 1).checked_sub(3 * i) else { break };
        let Some(l) = m.checked_sub(i + k) else { continue };
        let c = fact[m] * inv(fact[i] * fact[k] * fact[l])
            * FiniteField::pow(&f.elem(3), k as u64)
            * FiniteField::pow(&f.elem(2), l as u64);
        let term = UniPoly::monomial(c, k + l).mul(&u_pow[k + 2 * l]);
        out = out.add(&term);
    }
    Ok(out)
}

fn hasse_scan(p: u64) -> Result<Vec<Fp2>, SsError> {
    let k = QuadField::new(p)?;
    if p == 3 {
        return Ok(vec![k.zero()]);
    }
    let h = hasse_j_polynomial(p)?.map(k.zero(), |c| k.embed(c));
    let specials = [k.zero(), k.from_i64(1728)];
    let found: Result<Vec<Vec<Fp2>>, CurveError> = (0..p)
        .into_par_iter()
        .map(|c0| {
            let mut hits = Vec::new();
            for c1 in 0..p {
                let j = k.elem(c0, c1);
                // The j-line model degenerates at 0 and 1728; test those on their own models.
                let supersingular = if specials.contains(&j) {
                    is_supersingular_j(j)?
                } else {
                    h.eval(j).is_zero()
                };
                if supersingular {
                    hits.push(j);
                }
            }
            Ok(hits)
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

fn deuring_roots(p: u64) -> Result<Vec<Fp2>, SsError> {
    let k = QuadField::new(p)?;
    if p == 3 {
        return Ok(vec![k.zero()]);
    }
    let mut js = roots_in_quadratic_extension(&deuring_polynomial(p)?)?
        .into_iter()
        .map(lambda_to_j)
        .collect::<Result<Vec<_>, _>>()?;
    // j = 0 and j = 1728 have fewer than six Legendre parameters; test them directly.
    for special in [k.zero(), k.from_i64(1728)] {
        if is_supersingular_j(special)? {
            js.push(special);
        }
    }
    js.sort();
    js.dedup();
    Ok(js)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ec::count_points_naive;

    #[test]
    fn j_line_polynomial_matches_per_curve_test() {
        for p in (5u64..=61).filter(|&p| is_prime(p)) {
            let k = QuadField::new(p).unwrap();
            let h = hasse_j_polynomial(p).unwrap().map(k.zero(), |c| k.embed(c));
            for j in k.elements() {
                if j.is_zero() || j == k.from_i64(1728) {
                    continue;
                }
                assert_eq!(h.eval(j).is_zero(), is_supersingular_j(j).unwrap(), "p={p} j={j}");
            }
        }
    }

    fn fp(p: u64, v: i64) -> Fp {
        PrimeField::new(p).unwrap().from_i64(v)
    }

    #[test]
    fn hasse_invariant_examples() {
        assert_eq!(hasse_invariant(fp(5, 0), fp(5, 1)).unwrap().value(), 0);
        assert_eq!(hasse_invariant(fp(5, 1), fp(5, 0)).unwrap().value(), 2);
        assert_eq!(hasse_invariant(fp(7, 1), fp(7, 0)).unwrap().value(), 0);
        assert!(hasse_invariant(fp(7, 0), fp(7, 0)).is_err());
    }

    #[test]
    fn deuring_examples() {
        let vals = |p| -> Vec<u64> {
            deuring_polynomial(p)
                .unwrap()
                .coeffs()
                .iter()
                .map(|c| c.value())
                .collect()
        };
        assert_eq!(vals(3), [1, 1]);
        assert_eq!(vals(5), [1, 4, 1]);
        assert_eq!(vals(7), [1, 2, 2, 1]);
        assert_eq!(deuring_polynomial(2).unwrap_err(), SsError::Field(FieldError::EvenCharacteristic));
    }

    #[test]
    fn lambda_examples() {
        for p in [5u64, 7, 11, 13] {
            let k = QuadField::new(p).unwrap();
            assert_eq!(lambda_to_j(k.from_i64(-1)).unwrap(), k.from_i64(1728));
            assert!(lambda_to_j(k.zero()).is_err());
            assert!(lambda_to_j(k.one()).is_err());
            for l in k.elements() {
                if (l * l - l + k.one()).is_zero() {
                    assert!(lambda_to_j(l).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_formula(11).unwrap().delta, 2);
        assert_eq!(delta_formula(13).unwrap().delta, 1);
        assert_eq!(delta_formula(37).unwrap(), DeltaCount { delta: 3, epsilon: 0 });
        assert_eq!(delta_formula(2).unwrap().delta, 1);
        assert_eq!(delta_formula(3).unwrap().delta, 1);
        assert_eq!(delta_formula(15), Err(SsError::NotPrime(15)));
    }

    #[test]
    fn enumeration_examples() {
        let d11 = supersingular_js(11, Method::HasseScan).unwrap();
        assert_eq!(d11.j_strings(), ["0", "1"]);
        let d13 = supersingular_js(13, Method::CrossChecked).unwrap();
        assert_eq!(d13.delta, 1);
        assert!(d13.js[0].in_base_field());
        let d23 = supersingular_js(23, Method::CrossChecked).unwrap();
        assert_eq!(d23.delta, 3);
        let mut conj: Vec<Fp2> = d23.js.iter().map(|j| j.pow(23)).collect();
        conj.sort();
        assert_eq!(conj, d23.js);
        assert_eq!(supersingular_js(3, Method::CrossChecked).unwrap().j_strings(), ["0"]);
        assert_eq!(supersingular_js(2, Method::HasseScan), Err(SsError::Unsupported(2)));
        assert_eq!(supersingular_js(1009, Method::DeuringRoots), Err(SsError::Capacity(1009)));
    }

    #[test]
    fn reported_js_have_trace_divisible_by_p() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let data = supersingular_js(p, Method::DeuringRoots).unwrap();
            assert!(data.formula_agrees(), "p = {p}");
            for &j in &data.js {
                let e = ec::model_for_j(j).unwrap();
                let n = count_points_naive(&e).unwrap() as i64;
                let trace = (p * p) as i64 + 1 - n;
                assert_eq!(trace.rem_euclid(p as i64), 0, "p = {p}, j = {j}");
                assert_eq!(trace_mod_p(&e).value() as i64, trace.rem_euclid(p as i64));
            }
        }
    }

    #[test]
    fn trace_mod_p_matches_naive_count() {
        // Manin's congruence on a sample of curves over F_{p^2}.
        for p in [5u64, 7, 11, 13] {
            let k = QuadField::new(p).unwrap();
            for (i, j) in k.elements().enumerate().filter(|(i, _)| i % 3 == 0) {
                let e = ec::model_for_j(j).unwrap();
                let e = e.twist(k.elem(i as u64 % p + 1, 1)).unwrap();
                let n = count_points_naive(&e).unwrap() as i64;
                let trace = (p * p) as i64 + 1 - n;
                assert_eq!(trace_mod_p(&e).value() as i64, trace.rem_euclid(p as i64));
            }
        }
    }
}
