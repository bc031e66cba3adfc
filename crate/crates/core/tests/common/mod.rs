#![allow(dead_code)]

use kvar::gring::{Context, Monomial, RingElement};
use num_bigint::BigInt;
use rand::Rng;

/// A random element over `ids`: up to `max_terms` monomials of degree at most
/// `max_degree`, small coefficients with an occasional huge one.
pub fn random_element<R: Rng>(
    rng: &mut R,
    ctx: &Context,
    ids: &[&str],
    max_terms: usize,
    max_degree: usize,
) -> RingElement<BigInt> {
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let degree = rng.gen_range(0..=max_degree);
        let m = Monomial::new((0..degree).map(|_| ids[rng.gen_range(0..ids.len())]));
        let c = if rng.gen_bool(0.05) {
            BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<i64>())
        } else {
            BigInt::from(rng.gen_range(-6i64..=6))
        };
        (m, c)
    });
    RingElement::from_terms(ctx, terms.collect::<Vec<_>>()).expect("registered ids")
}

pub fn ids(ctx: &Context) -> Vec<String> {
    ctx.generators().map(|g| g.id.clone()).collect()
}
