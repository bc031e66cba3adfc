use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::element::{Monomial, RingElement};
use super::{Coefficient, GringError};
use crate::ec::CurveFp2;
use crate::ff::{is_prime, FiniteField, Fp2};
use crate::measures::AVClass;
use crate::ss::{self, Method};

static NEXT_CONTEXT: AtomicU64 = AtomicU64::new(1);

/// Identity of a [`Context`]; elements remember the context they were built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextId(u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Smooth complete varieties with blow-up relations.
    Complete,
    /// All varieties; admits the affine line and affine algebras.
    General,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Complete => "complete",
            Mode::General => "general",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" => Ok(Mode::Complete),
            "general" => Ok(Mode::General),
            other => Err(format!("unknown mode {other:?} (expected complete or general)")),
        }
    }
}

/// Parameters `(e, m, s)` of `k[x,y,z,w]/(x^m y + z^(p^e) + w + w^(sp))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AsanumaParams {
    pub e: u32,
    pub m: u32,
    pub s: u32,
}

impl fmt::Display for AsanumaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(e={}, m={}, s={})", self.e, self.m, self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Point,
    AffineLine,
    Projective(u32),
    Elliptic {
        j: Fp2,
        supersingular: bool,
        model: Option<CurveFp2>,
    },
    AbelianSymbol {
        dim: u32,
        label: String,
    },
    AsanumaSpec(AsanumaParams),
    BlowupVariety {
        label: String,
    },
}

impl GeneratorKind {
    pub fn is_complete(&self) -> bool {
        !matches!(self, GeneratorKind::AffineLine | GeneratorKind::AsanumaSpec(_))
    }

    pub fn is_supersingular(&self) -> bool {
        matches!(
            self,
            GeneratorKind::Elliptic {
                supersingular: true,
                ..
            }
        )
    }
}

/// How a generator counts points over `F_{q^n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountModel {
    /// `sum_i c_i q^(i n)`.
    Polynomial(Vec<i64>),
    /// An elliptic curve over `F_q` with the given Frobenius trace.
    Trace { q: u64, trace: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub kind: GeneratorKind,
    /// `None` exactly for the non-complete kinds.
    pub albanese: Option<AVClass>,
    pub count: Option<CountModel>,
}

/// Enabled relation packs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relations {
    pub deligne: bool,
    pub asanuma: Vec<AsanumaParams>,
}

/// Immutable catalog of generators plus the relations used by `normalize`.
#[derive(Clone, Debug)]
pub struct Context {
    id: ContextId,
    p: u64,
    mode: Mode,
    registry: BTreeMap<String, Generator>,
    relations: Relations,
    canonical_ss: Option<String>,
    affine_line: Option<String>,
    count_base: Option<u64>,
    aliases: BTreeMap<String, Vec<(Monomial, i64)>>,
}

impl Context {
    pub fn builder(p: u64, mode: Mode) -> Result<ContextBuilder, GringError> {
        ContextBuilder::new(p, mode)
    }

    /// The default catalog: `pt`, `P1`..`P3`, every supersingular class as
    /// `E1`, `E2`, ... in canonical j-order, and `L` (the affine line in
    /// general mode, the alias `P1 - pt` in complete mode). Deligne relations on.
    pub fn standard(p: u64, mode: Mode) -> Result<Context, GringError> {
        Self::standard_builder(p, mode, false)?.build()
    }

    /// [`Context::standard`] with a maximal model attached to every
    /// supersingular class, so that the point-count measure is available
    /// over `F_{p^2}`.
    pub fn standard_with_models(p: u64, mode: Mode) -> Result<Context, GringError> {
        Self::standard_builder(p, mode, true)?.build()
    }

    pub fn standard_builder(p: u64, mode: Mode, models: bool) -> Result<ContextBuilder, GringError> {
        if p < 5 {
            return Err(GringError::NoEllipticModels);
        }
        let data = ss::supersingular_js(p, Method::default_for(p))?;
        let mut b = ContextBuilder::new(p, mode)?
            .count_base(p * p)
            .point("pt")?
            .projective("P1", 1)?
            .projective("P2", 2)?
            .projective("P3", 3)?;
        for (i, &j) in data.js.iter().enumerate() {
            let model = if models {
                Some(crate::ec::maximal_model(j)?)
            } else {
                None
            };
            b = b.elliptic(&format!("E{}", i + 1), j, true, model)?;
        }
        b = match mode {
            Mode::General => b.affine_line("L")?,
            Mode::Complete => b.alias("L", "P1 - pt"),
        };
        Ok(b)
    }

    pub fn id(&self) -> ContextId {
        self.id
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn relations(&self) -> &Relations {
        &self.relations
    }

    pub fn generator(&self, id: &str) -> Option<&Generator> {
        self.registry.get(id)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.registry.values()
    }

    /// Id of the least registered supersingular class.
    pub fn canonical_ss(&self) -> Option<&str> {
        self.canonical_ss.as_deref()
    }

    pub fn canonical_ss_j(&self) -> Option<Fp2> {
        let id = self.canonical_ss.as_deref()?;
        match &self.registry[id].kind {
            GeneratorKind::Elliptic { j, .. } => Some(*j),
            _ => None,
        }
    }

    pub fn affine_line(&self) -> Option<&str> {
        self.affine_line.as_deref()
    }

    /// Field size over which point counts are taken.
    pub fn count_base(&self) -> Option<u64> {
        self.count_base
    }

    /// Supersingular generator ids in canonical j-order.
    pub fn supersingular_ids(&self) -> Vec<&str> {
        let mut ids: Vec<(Fp2, &str)> = self
            .registry
            .values()
            .filter_map(|g| match &g.kind {
                GeneratorKind::Elliptic {
                    j,
                    supersingular: true,
                    ..
                } => Some((*j, g.id.as_str())),
                _ => None,
            })
            .collect();
        ids.sort();
        ids.into_iter().map(|(_, id)| id).collect()
    }

    /// Generator id of the elliptic class with invariant `j`.
    pub fn id_for_j(&self, j: Fp2) -> Option<&str> {
        self.registry.values().find_map(|g| match &g.kind {
            GeneratorKind::Elliptic { j: gj, .. } if *gj == j => Some(g.id.as_str()),
            _ => None,
        })
    }

    pub fn is_supersingular(&self, id: &str) -> bool {
        self.registry
            .get(id)
            .is_some_and(|g| g.kind.is_supersingular())
    }

    pub(crate) fn alias(&self, name: &str) -> Option<&[(Monomial, i64)]> {
        self.aliases.get(name).map(Vec::as_slice)
    }

    /// The Lefschetz class: `[L]` in general mode, `[P1] - [pt]` in complete mode.
    pub fn lefschetz<C: Coefficient>(&self) -> Result<RingElement<C>, GringError> {
        if let Some(line) = &self.affine_line {
            return RingElement::generator(self, line);
        }
        let p1 = self
            .registry
            .values()
            .find(|g| g.kind == GeneratorKind::Projective(1))
            .ok_or_else(|| GringError::UnknownGenerator("P1".into()))?;
        let pt = self
            .registry
            .values()
            .find(|g| g.kind == GeneratorKind::Point)
            .ok_or_else(|| GringError::UnknownGenerator("pt".into()))?;
        RingElement::generator(self, &p1.id)?.sub(&RingElement::generator(self, &pt.id)?)
    }
}

/// Collects generators and relation packs, validating everything at `build`.
#[derive(Debug)]
pub struct ContextBuilder {
    p: u64,
    mode: Mode,
    registry: BTreeMap<String, Generator>,
    relations: Relations,
    count_base: Option<u64>,
    aliases: Vec<(String, String)>,
}

fn valid_identifier(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl ContextBuilder {
    pub fn new(p: u64, mode: Mode) -> Result<Self, GringError> {
        if !is_prime(p) {
            return Err(GringError::NotPrime(p));
        }
        Ok(Self {
            p,
            mode,
            registry: BTreeMap::new(),
            relations: Relations {
                deligne: true,
                asanuma: Vec::new(),
            },
            count_base: None,
            aliases: Vec::new(),
        })
    }

    pub fn count_base(mut self, q: u64) -> Self {
        self.count_base = Some(q);
        self
    }

    pub fn deligne(mut self, enabled: bool) -> Self {
        self.relations.deligne = enabled;
        self
    }

    /// Enables the Asanuma rewrite for generators with these parameters.
    pub fn asanuma_pack(mut self, params: &[AsanumaParams]) -> Self {
        for p in params {
            if !self.relations.asanuma.contains(p) {
                self.relations.asanuma.push(*p);
            }
        }
        self
    }

    /// `name` expands to the expression `text` when parsing.
    pub fn alias(mut self, name: &str, text: &str) -> Self {
        self.aliases.push((name.to_string(), text.to_string()));
        self
    }

    pub fn register(
        mut self,
        id: &str,
        kind: GeneratorKind,
        albanese: Option<AVClass>,
        count: Option<CountModel>,
    ) -> Result<Self, GringError> {
        if !valid_identifier(id) {
            return Err(GringError::InvalidIdentifier(id.to_string()));
        }
        if self.registry.contains_key(id) || self.aliases.iter().any(|(a, _)| a == id) {
            return Err(GringError::DuplicateGenerator(id.to_string()));
        }
        if self.mode == Mode::Complete && !kind.is_complete() {
            return Err(GringError::NotComplete(id.to_string()));
        }
        if kind == GeneratorKind::AffineLine {
            if let Some(line) = self
                .registry
                .values()
                .find(|g| g.kind == GeneratorKind::AffineLine)
            {
                return Err(GringError::SecondAffineLine(line.id.clone()));
            }
        }
        if let GeneratorKind::Elliptic {
            j,
            supersingular,
            model,
        } = &kind
        {
            if j.characteristic() != self.p {
                return Err(GringError::WrongCharacteristic(id.to_string()));
            }
            if self.p < 5 {
                return Err(GringError::NoEllipticModels);
            }
            let actual = ss::is_supersingular_j(*j)?;
            if actual != *supersingular {
                let word = |b| if b { "supersingular" } else { "ordinary" };
                return Err(GringError::SupersingularMismatch {
                    id: id.to_string(),
                    j: j.to_string(),
                    claimed: word(*supersingular),
                    actual: word(actual),
                });
            }
            if let Some(m) = model {
                if m.j_invariant() != *j {
                    return Err(GringError::ModelMismatch(id.to_string()));
                }
            }
        }
        if let Some(CountModel::Trace { q, .. }) = &count {
            if self.count_base != Some(*q) {
                return Err(GringError::CountBaseMismatch {
                    id: id.to_string(),
                    q: *q,
                    base: self.count_base,
                });
            }
        }
        let albanese = if kind.is_complete() { albanese } else { None };
        self.registry.insert(
            id.to_string(),
            Generator {
                id: id.to_string(),
                kind,
                albanese,
                count,
            },
        );
        Ok(self)
    }

    pub fn point(self, id: &str) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::Point,
            Some(AVClass::identity()),
            Some(CountModel::Polynomial(vec![1])),
        )
    }

    pub fn affine_line(self, id: &str) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::AffineLine,
            None,
            Some(CountModel::Polynomial(vec![0, 1])),
        )
    }

    pub fn projective(self, id: &str, n: u32) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::Projective(n),
            Some(AVClass::identity()),
            Some(CountModel::Polynomial(vec![1; n as usize + 1])),
        )
    }

    /// An elliptic class. A model with a cached count supplies the point-count data.
    pub fn elliptic(
        self,
        id: &str,
        j: Fp2,
        supersingular: bool,
        model: Option<CurveFp2>,
    ) -> Result<Self, GringError> {
        let model = model.map(|m| m.with_count()).transpose()?;
        let count = model.map(|m| CountModel::Trace {
            q: m.field_order(),
            trace: m.cached_trace().expect("count cached above"),
        });
        self.register(
            id,
            GeneratorKind::Elliptic {
                j,
                supersingular,
                model,
            },
            Some(AVClass::elliptic(j, supersingular)),
            count,
        )
    }

    pub fn abelian(self, id: &str, label: &str, dim: u32) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::AbelianSymbol {
                dim,
                label: label.to_string(),
            },
            Some(AVClass::opaque(label, dim)),
            None,
        )
    }

    /// `Spec A` for the given parameters; it has `q^(3n)` points over `F_{q^n}`
    /// since `Spec A x A^1` is `A^4`.
    pub fn asanuma(self, id: &str, params: AsanumaParams) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::AsanumaSpec(params),
            None,
            Some(CountModel::Polynomial(vec![0, 0, 0, 1])),
        )
    }

    /// A catalogued variety with a declared Albanese class.
    pub fn blowup(
        self,
        id: &str,
        label: &str,
        albanese: AVClass,
        count: Option<CountModel>,
    ) -> Result<Self, GringError> {
        self.register(
            id,
            GeneratorKind::BlowupVariety {
                label: label.to_string(),
            },
            Some(albanese),
            count,
        )
    }

    pub fn build(self) -> Result<Context, GringError> {
        let canonical_ss = self
            .registry
            .values()
            .filter_map(|g| match &g.kind {
                GeneratorKind::Elliptic {
                    j,
                    supersingular: true,
                    ..
                } => Some((*j, g.id.clone())),
                _ => None,
            })
            .min()
            .map(|(_, id)| id);
        let affine_line = self
            .registry
            .values()
            .find(|g| g.kind == GeneratorKind::AffineLine)
            .map(|g| g.id.clone());
        let mut ctx = Context {
            id: ContextId(NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed)),
            p: self.p,
            mode: self.mode,
            registry: self.registry,
            relations: self.relations,
            canonical_ss,
            affine_line,
            count_base: self.count_base,
            aliases: BTreeMap::new(),
        };
        for (name, text) in self.aliases {
            if !valid_identifier(&name) {
                return Err(GringError::InvalidIdentifier(name));
            }
            // Aliases may only refer to generators, never to other aliases.
            let expanded: RingElement<BigInt> = super::parse(&text, &ctx)
                .map_err(|e| GringError::BadAlias(name.clone(), e.to_string()))?;
            let terms = expanded
                .terms()
                .map(|(m, c)| {
                    let c = i64::try_from(c)
                        .map_err(|_| GringError::BadAlias(name.clone(), "coefficient too large".into()))?;
                    Ok((m.clone(), c))
                })
                .collect::<Result<Vec<_>, GringError>>()?;
            ctx.aliases.insert(name, terms);
        }
        Ok(ctx)
    }
}
