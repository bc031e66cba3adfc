use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::MeasureError;
use crate::ff::{Fp2, QuadField};
use crate::gring::{
    coeff_abs_string, coeff_add, coeff_mul, Coefficient, Context, GringError, Mode, Monomial,
    RingElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllipticClass {
    pub j: Fp2,
    pub supersingular: bool,
}

/// An abelian variety known only by name and dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpaqueFactor {
    pub label: String,
    pub dim: u32,
}

/// Isomorphism class of a product of elliptic curves and opaque factors.
///
/// Kept Deligne-normalized: whenever two or more supersingular elliptic
/// factors occur they are all stored as the canonical supersingular class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AVClass {
    elliptic: Vec<EllipticClass>,
    opaque: Vec<OpaqueFactor>,
}

/// `{elliptic: [j], opaque: [{label, dim}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AVClassJson {
    pub elliptic: Vec<String>,
    pub opaque: Vec<OpaqueFactor>,
}

impl AVClass {
    /// The zero-dimensional abelian variety; maps to the ring unit.
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn elliptic(j: Fp2, supersingular: bool) -> Self {
        Self {
            elliptic: vec![EllipticClass { j, supersingular }],
            opaque: Vec::new(),
        }
    }

    pub fn opaque(label: &str, dim: u32) -> Self {
        Self {
            elliptic: Vec::new(),
            opaque: vec![OpaqueFactor {
                label: label.to_string(),
                dim,
            }],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.elliptic.is_empty() && self.opaque.is_empty()
    }

    pub fn dimension(&self) -> u32 {
        self.elliptic.len() as u32 + self.opaque.iter().map(|o| o.dim).sum::<u32>()
    }

    pub fn elliptic_part(&self) -> &[EllipticClass] {
        &self.elliptic
    }

    pub fn opaque_part(&self) -> &[OpaqueFactor] {
        &self.opaque
    }

    /// Sorts the factors and collapses any supersingular sub-multiset of size
    /// at least two onto `canonical` (or onto its own least member when no
    /// canonical class is given).
    pub fn normalized(mut self, canonical: Option<Fp2>) -> Self {
        self.elliptic.sort();
        self.opaque.sort();
        let supersingular: Vec<Fp2> = self
            .elliptic
            .iter()
            .filter(|c| c.supersingular)
            .map(|c| c.j)
            .collect();
        if supersingular.len() >= 2 {
            let target = canonical.unwrap_or_else(|| *supersingular.iter().min().expect("non-empty"));
            for c in self.elliptic.iter_mut().filter(|c| c.supersingular) {
                c.j = target;
            }
            self.elliptic.sort();
        }
        self
    }

    pub fn product(&self, other: &AVClass, canonical: Option<Fp2>) -> AVClass {
        let mut out = self.clone();
        out.elliptic.extend_from_slice(&other.elliptic);
        out.opaque.extend(other.opaque.iter().cloned());
        out.normalized(canonical)
    }

    pub fn to_json(&self) -> AVClassJson {
        AVClassJson {
            elliptic: self.elliptic.iter().map(|c| c.j.to_string()).collect(),
            opaque: self.opaque.clone(),
        }
    }

    /// Reads a class back; supersingularity of each `j` is recomputed.
    pub fn from_json(json: &AVClassJson, field: QuadField) -> Result<Self, MeasureError> {
        let mut elliptic = Vec::with_capacity(json.elliptic.len());
        for text in &json.elliptic {
            let j = field
                .parse(text)
                .map_err(|e| MeasureError::Malformed(e.to_string()))?;
            let supersingular = crate::ss::is_supersingular_j(j)?;
            elliptic.push(EllipticClass { j, supersingular });
        }
        Ok(Self {
            elliptic,
            opaque: json.opaque.clone(),
        })
    }
}

impl fmt::Display for AVClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let parts = self
            .elliptic
            .iter()
            .map(|c| format!("E({})", c.j))
            .chain(self.opaque.iter().map(|o| format!("{}[{}]", o.label, o.dim)));
        f.write_str("[")?;
        for (i, part) in parts.enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(&part)?;
        }
        f.write_str("]")
    }
}

/// Multiplication in the monoid of classes, which needs the canonical supersingular class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct AvMonoid {
    pub canonical: Option<Fp2>,
}

impl AvMonoid {
    pub fn for_context(ctx: &Context) -> Self {
        Self {
            canonical: ctx.canonical_ss_j(),
        }
    }

    pub fn mul(&self, a: &AVClass, b: &AVClass) -> AVClass {
        a.product(b, self.canonical)
    }
}

/// Element of the monoid ring `Z[AV]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoidRingElement<C> {
    terms: BTreeMap<AVClass, C>,
}

/// `{class, coeff}` with the coefficient as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvTermJson {
    pub class: AVClassJson,
    pub coeff: String,
}

impl<C: Coefficient> MonoidRingElement<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_class(AVClass::identity(), C::one())
    }

    pub fn from_class(class: AVClass, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(class, c);
        out
    }

    fn add_term(&mut self, class: AVClass, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = coeff_add(&self.coeff(&class), &c);
        if sum.is_zero() {
            self.terms.remove(&class);
        } else {
            self.terms.insert(class, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AVClass, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, class: &AVClass) -> C {
        self.terms.get(class).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), coeff_mul(c, &-C::one())))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self, monoid: &AvMonoid) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(monoid.mul(a, b), coeff_mul(ca, cb));
            }
        }
        out
    }

    pub fn to_json(&self) -> Vec<AvTermJson> {
        self.terms
            .iter()
            .map(|(k, c)| AvTermJson {
                class: k.to_json(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn from_json(terms: &[AvTermJson], field: QuadField) -> Result<Self, MeasureError> {
        let mut out = Self::zero();
        for t in terms {
            let class = AVClass::from_json(&t.class, field)?;
            let c: C = t
                .coeff
                .parse()
                .map_err(|_| MeasureError::Malformed(format!("coefficient {:?}", t.coeff)))?;
            out.add_term(class, c);
        }
        Ok(out)
    }
}

impl<C: Coefficient> fmt::Display for MonoidRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (class, c)) in self.terms.iter().enumerate() {
            let abs = coeff_abs_string(c);
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if class.is_identity() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{class}")?;
            } else {
                write!(f, "{abs}*{class}")?;
            }
        }
        Ok(())
    }
}

fn albanese_of_generator<'a>(id: &str, ctx: &'a Context) -> Result<&'a AVClass, MeasureError> {
    let g = ctx
        .generator(id)
        .ok_or_else(|| GringError::UnknownGenerator(id.to_string()))?;
    g.albanese.as_ref().ok_or_else(|| MeasureError::Domain {
        id: id.to_string(),
        measure: "Albanese",
    })
}

/// Product of the per-generator Albanese classes: rational varieties give
/// the identity, an elliptic curve its own class, an abelian symbol itself,
/// and a catalogued blow-up its declared class.
pub fn albanese_of_monomial(m: &Monomial, ctx: &Context) -> Result<AVClass, MeasureError> {
    let monoid = AvMonoid::for_context(ctx);
    m.ids().iter().try_fold(AVClass::identity(), |acc, id| {
        Ok(monoid.mul(&acc, albanese_of_generator(id, ctx)?))
    })
}

/// Linear extension of [`albanese_of_monomial`].
pub fn albanese_measure<C: Coefficient>(
    e: &RingElement<C>,
    ctx: &Context,
) -> Result<MonoidRingElement<C>, MeasureError> {
    if ctx.mode() != Mode::Complete {
        return Err(MeasureError::NotComplete);
    }
    if e.context_id() != ctx.id() {
        return Err(GringError::ContextMismatch.into());
    }
    let mut out = MonoidRingElement::zero();
    for (m, c) in e.terms() {
        out.add_term(albanese_of_monomial(m, ctx)?, c.clone());
    }
    Ok(out)
}
