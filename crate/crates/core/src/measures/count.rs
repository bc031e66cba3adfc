use num_bigint::BigInt;
use num_traits::Zero;

use super::MeasureError;
use crate::ec::extension_count;
use crate::gring::{Coefficient, Context, CountModel, Generator, GringError, RingElement};

/// `#X(F_{q^n})` for a single generator, `q` being the context's count base.
pub fn generator_count(gen: &Generator, n: u32, ctx: &Context) -> Result<BigInt, MeasureError> {
    if n == 0 {
        return Err(MeasureError::ZeroDegree);
    }
    match &gen.count {
        None => Err(MeasureError::Domain {
            id: gen.id.clone(),
            measure: "point-count",
        }),
        Some(CountModel::Polynomial(coeffs)) => {
            let q = ctx.count_base().ok_or(MeasureError::NoCountBase)?;
            let qn = num_traits::pow(BigInt::from(q), n as usize);
            // Horner in q^n.
            Ok(coeffs
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, &c| acc * &qn + BigInt::from(c)))
        }
        Some(CountModel::Trace { q, trace }) => Ok(extension_count(*trace, *q, n)?),
    }
}

/// The ring homomorphism `[X] -> #X(F_{q^n})`.
pub fn point_count_measure<C: Coefficient>(
    e: &RingElement<C>,
    n: u32,
    ctx: &Context,
) -> Result<BigInt, MeasureError> {
    if e.context_id() != ctx.id() {
        return Err(GringError::ContextMismatch.into());
    }
    if n == 0 {
        return Err(MeasureError::ZeroDegree);
    }
    let mut total = BigInt::zero();
    for (m, c) in e.terms() {
        let mut value = c.to_bigint().expect("integer coefficients");
        for id in m.ids() {
            let gen = ctx
                .generator(id)
                .ok_or_else(|| GringError::UnknownGenerator(id.clone()))?;
            value *= generator_count(gen, n, ctx)?;
        }
        total += value;
    }
    Ok(total)
}
