//! Machine-checkable certificates: an elliptic class that is a zero divisor,
//! and the conditional relations coming from Asanuma algebras.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{is_prime, Fp2, QuadField};
use crate::gring::{
    normalize, AsanumaParams, Context, ContextBuilder, GringError, Mode, RingElement, TermJson,
};
use crate::measures::{albanese_measure, point_count_measure, AvTermJson, MeasureError};
use crate::ss::{self, SsError};

/// Version stamped into every serialized certificate.
pub const CERTIFICATE_SCHEMA: u32 = 1;
/// Extension degrees `n` (over `F_{p^2}`) recorded in `zeta_check`.
pub const ZETA_DEGREES: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("p = {0} has delta = {1} supersingular classes; at least two are needed")]
    DeltaTooSmall(u64, u64),
    #[error("{0} is not a supersingular j-invariant for this p")]
    NotSupersingular(String),
    #[error("the pair needs two distinct j-invariants, got {0} twice")]
    SamePair(String),
    #[error("Asanuma parameters must be positive, got {0}")]
    NonPositive(AsanumaParams),
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Supersingular(#[from] SsError),
    #[error(transparent)]
    Ring(#[from] GringError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaRow {
    pub n: u32,
    /// `#(E_a x E_a)(F_{p^(2n)})`.
    pub count_u_side: String,
    /// `#(E_a x E_b)(F_{p^(2n)})`.
    pub count_v_side: String,
}

/// `u = [E_a]` and `v = [E_a] - [E_b]` with `u v = 0` but both nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema: u32,
    pub p: u64,
    pub j1: String,
    pub j2: String,
    pub u: Vec<TermJson>,
    pub v: Vec<TermJson>,
    pub product_nf: Vec<TermJson>,
    pub alb_u: Vec<AvTermJson>,
    pub alb_v: Vec<AvTermJson>,
    pub zeta_check: Vec<ZetaRow>,
    pub verdict: bool,
}

fn admissible(p: u64) -> Result<(), CertifyError> {
    let d = ss::delta_formula(p)?;
    if p < 5 || d.delta < 2 {
        return Err(CertifyError::DeltaTooSmall(p, d.delta));
    }
    Ok(())
}

/// Certificate for the two least supersingular classes.
pub fn zero_divisor_certificate(p: u64) -> Result<Certificate, CertifyError> {
    admissible(p)?;
    let ctx = Context::standard_with_models(p, Mode::Complete)?;
    let ids = ctx.supersingular_ids();
    build(&ctx, ids[0], ids[1])
}

/// Certificate for an arbitrary pair of distinct supersingular classes,
/// given as field-element strings (`"c0"` or `"c0+c1*t"`); order does not matter.
pub fn zero_divisor_certificate_for_pair(
    p: u64,
    j1: &str,
    j2: &str,
) -> Result<Certificate, CertifyError> {
    admissible(p)?;
    let ctx = Context::standard_with_models(p, Mode::Complete)?;
    let k = QuadField::new(p).map_err(SsError::from)?;
    let lookup = |text: &str| -> Result<Fp2, CertifyError> {
        let j = k
            .parse(text)
            .map_err(|_| CertifyError::NotSupersingular(text.to_string()))?;
        ctx.id_for_j(j)
            .map(|_| j)
            .ok_or_else(|| CertifyError::NotSupersingular(text.to_string()))
    };
    let (a, b) = (lookup(j1)?, lookup(j2)?);
    if a == b {
        return Err(CertifyError::SamePair(a.to_string()));
    }
    let (a, b) = (a.min(b), a.max(b));
    let (ia, ib) = (ctx.id_for_j(a).unwrap(), ctx.id_for_j(b).unwrap());
    build(&ctx, ia, ib)
}

fn build(ctx: &Context, ia: &str, ib: &str) -> Result<Certificate, CertifyError> {
    let j_of = |id: &str| match ctx.generator(id).map(|g| &g.kind) {
        Some(crate::gring::GeneratorKind::Elliptic { j, .. }) => *j,
        _ => unreachable!("supersingular ids name elliptic generators"),
    };
    let ea = RingElement::<BigInt>::generator(ctx, ia)?;
    let eb = RingElement::<BigInt>::generator(ctx, ib)?;
    let u = ea.clone();
    let v = ea.sub(&eb)?;
    let product_nf = normalize(&u.mul(&v)?, ctx)?;
    let alb_u = albanese_measure(&u, ctx)?;
    let alb_v = albanese_measure(&v, ctx)?;

    let uu = u.mul(&u)?;
    let uv = ea.mul(&eb)?;
    let mut zeta_check = Vec::new();
    for n in 1..=ZETA_DEGREES {
        zeta_check.push(ZetaRow {
            n,
            count_u_side: point_count_measure(&uu, n, ctx)?.to_string(),
            count_v_side: point_count_measure(&uv, n, ctx)?.to_string(),
        });
    }
    let verdict = product_nf.is_zero()
        && !alb_u.is_zero()
        && !alb_v.is_zero()
        && zeta_check.iter().all(|r| r.count_u_side == r.count_v_side);
    Ok(Certificate {
        schema: CERTIFICATE_SCHEMA,
        p: ctx.p(),
        j1: j_of(ia).to_string(),
        j2: j_of(ib).to_string(),
        u: u.to_json(),
        v: v.to_json(),
        product_nf: product_nf.to_json(),
        alb_u: alb_u.to_json(),
        alb_v: alb_v.to_json(),
        zeta_check,
        verdict,
    })
}

fn reject<T>(why: impl Into<String>) -> Result<T, CertifyError> {
    Err(CertifyError::Rejected(why.into()))
}

/// Re-checks a certificate from scratch: the claimed elements are decoded in
/// a fresh context, the product is re-normalized, both Albanese images and
/// every zeta row are recomputed, and each stored field must coincide with
/// its canonical encoding. Returns `Ok` only for a certificate whose verdict
/// is `true` and fully justified.
pub fn verify_certificate(cert: &Certificate) -> Result<(), CertifyError> {
    if cert.schema != CERTIFICATE_SCHEMA {
        return reject(format!("unsupported schema {}", cert.schema));
    }
    if !is_prime(cert.p) || cert.p > ss::MAX_ENUMERATION_PRIME {
        return reject(format!("p = {} is not an admissible prime", cert.p));
    }
    admissible(cert.p).or_else(|e| reject(e.to_string()))?;
    let ctx = Context::standard_with_models(cert.p, Mode::Complete)?;
    let k = QuadField::new(cert.p).map_err(SsError::from)?;

    let class = |text: &str, field: &str| -> Result<(Fp2, String), CertifyError> {
        let j = k.parse(text).or_else(|_| reject(format!("{field} is not an element of F_p^2")))?;
        if j.to_string() != text {
            return reject(format!("{field} is not in canonical form"));
        }
        match ctx.id_for_j(j) {
            Some(id) => Ok((j, id.to_string())),
            None => reject(format!("{field} = {text} is not supersingular")),
        }
    };
    let (j1, ia) = class(&cert.j1, "j1")?;
    let (j2, ib) = class(&cert.j2, "j2")?;
    if j1 >= j2 {
        return reject("j1 must precede j2 in canonical order");
    }

    let decode = |terms: &[TermJson], field: &str| -> Result<RingElement<BigInt>, CertifyError> {
        let e = RingElement::<BigInt>::from_json(&ctx, terms)
            .or_else(|err| reject(format!("{field}: {err}")))?;
        if e.to_json() != terms {
            return reject(format!("{field} is not in canonical form"));
        }
        Ok(e)
    };
    let u = decode(&cert.u, "u")?;
    let v = decode(&cert.v, "v")?;
    let product_nf = decode(&cert.product_nf, "product_nf")?;

    let ea = RingElement::<BigInt>::generator(&ctx, &ia)?;
    let eb = RingElement::<BigInt>::generator(&ctx, &ib)?;
    if u != ea {
        return reject("u is not the class of the first curve");
    }
    if v != ea.sub(&eb)? {
        return reject("v is not the difference of the two curve classes");
    }
    if normalize(&u.mul(&v)?, &ctx)? != product_nf {
        return reject("product_nf is not the normal form of u*v");
    }
    if !product_nf.is_zero() {
        return reject("u*v does not vanish");
    }

    for (claimed, element, field) in [(&cert.alb_u, &u, "alb_u"), (&cert.alb_v, &v, "alb_v")] {
        let image = albanese_measure(element, &ctx)?;
        if image.to_json() != *claimed {
            return reject(format!("{field} is not the Albanese image"));
        }
        if image.is_zero() {
            return reject(format!("{field} vanishes"));
        }
    }

    if cert.zeta_check.len() != ZETA_DEGREES as usize {
        return reject(format!("zeta_check must have {ZETA_DEGREES} rows"));
    }
    let uu = ea.mul(&ea)?;
    let uv = ea.mul(&eb)?;
    for (i, row) in cert.zeta_check.iter().enumerate() {
        let n = i as u32 + 1;
        if row.n != n {
            return reject(format!("zeta_check row {i} has n = {}, expected {n}", row.n));
        }
        let lhs = point_count_measure(&uu, n, &ctx)?.to_string();
        let rhs = point_count_measure(&uv, n, &ctx)?.to_string();
        if row.count_u_side != lhs || row.count_v_side != rhs {
            return reject(format!("zeta_check row n = {n} does not match the maximal models"));
        }
        if lhs != rhs {
            return reject(format!("zeta_check row n = {n} disagrees"));
        }
    }
    if !cert.verdict {
        return reject("verdict is false although every check passed");
    }
    Ok(())
}

/// Parses and verifies a serialized certificate.
pub fn verify_certificate_json(text: &str) -> Result<Certificate, CertifyError> {
    let cert: Certificate =
        serde_json::from_str(text).or_else(|e| reject(format!("malformed certificate: {e}")))?;
    verify_certificate(&cert)?;
    Ok(cert)
}

/// What a report may claim. Asanuma relations never make `L` a proven zero divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Conditional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Validity {
    pub valid: bool,
    /// The violated constraint, when invalid.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    /// The relation element, rendered.
    pub element: String,
    /// Its normal form under the Asanuma rewrite.
    pub normal_form: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsanumaReport {
    pub p: u64,
    pub params: AsanumaParams,
    pub second: Option<AsanumaParams>,
    pub validity: Validity,
    pub relation_elements: Vec<RelationCheck>,
    pub status: Status,
    pub open_question: String,
}

const OPEN_QUESTION: &str = "It is unknown whether [Spec A] differs from L^3, i.e. whether L \
    is actually a zero divisor, and whether different parameter triples give different classes.";

/// `p`-adic valuation of a positive integer.
fn valuation(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// The two divisibility constraints on `(e, s)`: `p^e` must not divide `s p`,
/// and `s p` must not divide `p^e`. Decided through valuations, so no power
/// is ever materialized.
pub fn asanuma_validity(p: u64, params: AsanumaParams) -> Validity {
    let AsanumaParams { e, s, .. } = params;
    let vs = valuation(p, s as u64);
    // p^e | s p  <=>  e <= v_p(s) + 1.
    if e <= vs + 1 {
        return Validity {
            valid: false,
            reason: Some(format!("p^e = {p}^{e} divides s*p = {}*{p}", s)),
        };
    }
    // s p | p^e  <=>  s is a power of p and v_p(s) + 1 <= e.
    let s_is_power = p.checked_pow(vs).is_some_and(|pv| pv == s as u64);
    if s_is_power && vs < e {
        return Validity {
            valid: false,
            reason: Some(format!("s*p = {}*{p} divides p^e = {p}^{e}", s)),
        };
    }
    Validity {
        valid: true,
        reason: None,
    }
}

/// Builds the general-mode context with `A` (and `A2`), the affine line and
/// the Asanuma rewrite, and reports the normal forms of `(A - L^3) L` and
/// `A L - A2 L`. Invalid parameters give a report with `valid = false` and
/// no relation elements.
pub fn asanuma_relation(
    p: u64,
    params: AsanumaParams,
    second: Option<AsanumaParams>,
) -> Result<AsanumaReport, CertifyError> {
    if !is_prime(p) {
        return Err(GringError::NotPrime(p).into());
    }
    for t in std::iter::once(params).chain(second) {
        if t.e == 0 || t.m == 0 || t.s == 0 {
            return Err(CertifyError::NonPositive(t));
        }
    }
    let mut validity = asanuma_validity(p, params);
    if let (true, Some(t)) = (validity.valid, second) {
        let v = asanuma_validity(p, t);
        if !v.valid {
            validity = Validity {
                valid: false,
                reason: v.reason.map(|r| format!("second triple: {r}")),
            };
        }
    }
    let mut report = AsanumaReport {
        p,
        params,
        second,
        validity,
        relation_elements: Vec::new(),
        status: Status::Conditional,
        open_question: OPEN_QUESTION.to_string(),
    };
    if !report.validity.valid {
        return Ok(report);
    }

    let pack: Vec<AsanumaParams> = std::iter::once(params).chain(second).collect();
    let mut b = ContextBuilder::new(p, Mode::General)?
        .affine_line("L")?
        .asanuma("A", params)?;
    if let Some(t) = second {
        b = b.asanuma("A2", t)?;
    }
    let ctx = b.asanuma_pack(&pack).build()?;
    let g = |id: &str| RingElement::<BigInt>::generator(&ctx, id);
    let l = g("L")?;
    let a = g("A")?;
    let mut elements = vec![a.sub(&l.pow(3))?.mul(&l)?];
    if second.is_some() {
        elements.push(a.mul(&l)?.sub(&g("A2")?.mul(&l)?)?);
    }
    for e in elements {
        report.relation_elements.push(RelationCheck {
            element: e.to_string(),
            normal_form: normalize(&e, &ctx)?.to_string(),
        });
    }
    Ok(report)
}

impl AsanumaReport {
    /// Every reported relation element normalizes to zero.
    pub fn relations_hold(&self) -> bool {
        self.validity.valid && self.relation_elements.iter().all(|r| r.normal_form == "0")
    }
}
