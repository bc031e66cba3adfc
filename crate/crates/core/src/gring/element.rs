use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::context::{Context, ContextId};
use super::{coeff_abs_string, coeff_add, coeff_mul, Coefficient, GringError};

/// Product of generators, stored as a sorted multiset of ids.
///
/// Ordered by degree first, then lexicographically by id sequence; this is
/// the order terms are printed in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<String>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Self {
        let mut ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        ids.sort();
        Monomial(ids)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut ids = Vec::with_capacity(self.0.len() + other.0.len());
        ids.extend_from_slice(&self.0);
        ids.extend_from_slice(&other.0);
        ids.sort();
        Monomial(ids)
    }

    /// `(id, exponent)` runs.
    pub fn powers(&self) -> Vec<(&str, usize)> {
        let mut out: Vec<(&str, usize)> = Vec::new();
        for id in &self.0 {
            match out.last_mut() {
                Some((last, n)) if *last == id.as_str() => *n += 1,
                _ => out.push((id.as_str(), 1)),
            }
        }
        out
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        for (i, (id, n)) in self.powers().into_iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if n == 1 {
                write!(f, "{id}")?;
            } else {
                write!(f, "{id}^{n}")?;
            }
        }
        Ok(())
    }
}

/// Finite integer combination of monomials; never stores a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement<C> {
    ctx: ContextId,
    terms: BTreeMap<Monomial, C>,
}

/// JSON shape of one term: `{monomial: [id], coeff: "integer"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub monomial: Vec<String>,
    pub coeff: String,
}

impl<C: Coefficient> RingElement<C> {
    pub fn zero(ctx: &Context) -> Self {
        Self {
            ctx: ctx.id(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::constant(ctx, C::one())
    }

    pub fn constant(ctx: &Context, c: C) -> Self {
        Self::from_terms(ctx, [(Monomial::unit(), c)]).expect("unit monomial is always valid")
    }

    pub fn generator(ctx: &Context, id: &str) -> Result<Self, GringError> {
        Self::from_terms(ctx, [(Monomial::new([id]), C::one())])
    }

    /// Builds an element, merging repeated monomials and checking every id is registered.
    pub fn from_terms(
        ctx: &Context,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self, GringError> {
        let mut out = Self::zero(ctx);
        for (m, c) in terms {
            if let Some(bad) = m.ids().iter().find(|id| ctx.generator(id).is_none()) {
                return Err(GringError::UnknownGenerator(bad.clone()));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub(crate) fn from_parts(ctx: ContextId, terms: BTreeMap<Monomial, C>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Self { ctx, terms }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = coeff_add(o.get(), &c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn context_id(&self) -> ContextId {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in printing order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    fn same_context(&self, other: &Self) -> Result<(), GringError> {
        if self.ctx != other.ctx {
            return Err(GringError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GringError> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GringError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-C::one())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = Self {
            ctx: self.ctx,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), coeff_mul(c, k));
        }
        out
    }

    /// Distributive product; monomials concatenate, no relations are applied.
    pub fn mul(&self, other: &Self) -> Result<Self, GringError> {
        self.same_context(other)?;
        let mut out = Self {
            ctx: self.ctx,
            terms: BTreeMap::new(),
        };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), coeff_mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self {
            ctx: self.ctx,
            terms: BTreeMap::from([(Monomial::unit(), C::one())]),
        };
        for _ in 0..e {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// Largest monomial degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Canonical text form; `parse` reads it back to the same element.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(m, c)| TermJson {
                monomial: m.ids().to_vec(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_json(ctx: &Context, terms: &[TermJson]) -> Result<Self, GringError> {
        let parsed = terms
            .iter()
            .map(|t| {
                let c = t
                    .coeff
                    .parse::<C>()
                    .map_err(|_| super::ParseError::BadInteger(t.coeff.clone()))?;
                Ok((Monomial::new(t.monomial.iter().cloned()), c))
            })
            .collect::<Result<Vec<_>, GringError>>()?;
        Self::from_terms(ctx, parsed)
    }
}

impl<C: Coefficient> fmt::Display for RingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = coeff_abs_string(c);
            match (i, negative) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
