use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::context::{Context, GeneratorKind, Mode};
use super::element::{Monomial, RingElement};
use super::{Coefficient, GringError};
use crate::measures::{self, MonoidRingElement};

/// Rewrites one monomial to its normal form.
///
/// Deligne: two or more supersingular factors all become the canonical
/// supersingular class (the global least j, never a per-monomial minimum).
/// Asanuma (general mode): `[Spec A] * L -> L^4` for each enabled parameter
/// triple, repeated while both factors are present.
pub fn normalize_monomial(m: &Monomial, ctx: &Context) -> Monomial {
    let mut ids: Vec<String> = m.ids().to_vec();

    if ctx.relations().deligne {
        if let Some(canonical) = ctx.canonical_ss() {
            let supersingular = ids.iter().filter(|id| ctx.is_supersingular(id)).count();
            if supersingular >= 2 {
                for id in ids.iter_mut().filter(|id| ctx.is_supersingular(id)) {
                    *id = canonical.to_string();
                }
            }
        }
    }

    if ctx.mode() == Mode::General && !ctx.relations().asanuma.is_empty() {
        if let Some(line) = ctx.affine_line() {
            let rewritable = |id: &str| {
                matches!(
                    ctx.generator(id).map(|g| &g.kind),
                    Some(GeneratorKind::AsanumaSpec(params)) if ctx.relations().asanuma.contains(params)
                )
            };
            while ids.iter().any(|id| id == line) {
                let Some(pos) = ids.iter().position(|id| rewritable(id)) else {
                    break;
                };
                ids.swap_remove(pos);
                ids.extend(std::iter::repeat_n(line.to_string(), 3));
            }
        }
    }

    Monomial::new(ids)
}

/// Applies every enabled relation and merges coefficients. Idempotent.
pub fn normalize<C: Coefficient>(
    e: &RingElement<C>,
    ctx: &Context,
) -> Result<RingElement<C>, GringError> {
    if e.context_id() != ctx.id() {
        return Err(GringError::ContextMismatch);
    }
    let mut out = RingElement::from_parts(ctx.id(), BTreeMap::new());
    for (m, c) in e.terms() {
        out.add_term(normalize_monomial(m, ctx), c.clone());
    }
    Ok(out)
}

/// Evidence that an element is nonzero in the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<C> {
    /// Nonzero image in the monoid ring of abelian-variety classes.
    Albanese(MonoidRingElement<C>),
    /// Nonzero point count over `F_{q^n}`.
    PointCount { n: u32, value: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroTest<C> {
    Zero,
    NonzeroCertified(Witness<C>),
    Unknown,
}

/// Largest extension degree tried by the point-count witness search.
const COUNT_WITNESS_DEGREES: u32 = 4;

/// Three-valued zero test: `Zero` when the normal form vanishes, a witness
/// when a measure separates the element from zero (Albanese in complete
/// mode, point counts in general mode), `Unknown` otherwise.
pub fn is_zero_modulo<C: Coefficient>(
    e: &RingElement<C>,
    ctx: &Context,
) -> Result<ZeroTest<C>, GringError> {
    let nf = normalize(e, ctx)?;
    if nf.is_zero() {
        return Ok(ZeroTest::Zero);
    }
    match ctx.mode() {
        Mode::Complete => {
            if let Ok(image) = measures::albanese_measure(&nf, ctx) {
                if !image.is_zero() {
                    return Ok(ZeroTest::NonzeroCertified(Witness::Albanese(image)));
                }
            }
        }
        Mode::General => {
            for n in 1..=COUNT_WITNESS_DEGREES {
                match measures::point_count_measure(&nf, n, ctx) {
                    Ok(value) if !value.is_zero() => {
                        return Ok(ZeroTest::NonzeroCertified(Witness::PointCount { n, value }))
                    }
                    Ok(_) => {}
                    Err(_) => break,
                }
            }
        }
    }
    Ok(ZeroTest::Unknown)
}
