use super::{albanese_of_monomial, AVClass, MeasureError};
use crate::gring::{
    Coefficient, Context, ContextBuilder, CountModel, GringError, Mode, Monomial, RingElement,
};

/// A blow-up `Bl` of `X` along `Y` with exceptional divisor `exc`, all registered generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupDatum {
    pub x: String,
    pub y: String,
    pub bl: String,
    pub exc: String,
}

impl BlowupDatum {
    /// Checks registration and the declared Albanese classes:
    /// `Alb(Bl) = Alb(X)` and `Alb(exc) = Alb(Y)`.
    pub fn new(ctx: &Context, x: &str, y: &str, bl: &str, exc: &str) -> Result<Self, MeasureError> {
        for id in [x, y, bl, exc] {
            if ctx.generator(id).is_none() {
                return Err(GringError::UnknownGenerator(id.to_string()).into());
            }
        }
        let alb = |id: &str| albanese_of_monomial(&Monomial::new([id]), ctx);
        if alb(bl)? != alb(x)? {
            return Err(MeasureError::InconsistentBlowup(format!(
                "Alb({bl}) differs from Alb({x})"
            )));
        }
        if alb(exc)? != alb(y)? {
            return Err(MeasureError::InconsistentBlowup(format!(
                "Alb({exc}) differs from Alb({y})"
            )));
        }
        Ok(Self {
            x: x.to_string(),
            y: y.to_string(),
            bl: bl.to_string(),
            exc: exc.to_string(),
        })
    }
}

/// `[Bl] - [exc] - [X] + [Y]`, which vanishes in the blow-up presentation.
pub fn bittner_defect<C: Coefficient>(
    d: &BlowupDatum,
    ctx: &Context,
) -> Result<RingElement<C>, MeasureError> {
    let g = |id: &str| RingElement::<C>::generator(ctx, id);
    Ok(g(&d.bl)?.sub(&g(&d.exc)?)?.sub(&g(&d.x)?)?.add(&g(&d.y)?)?)
}

/// The standard complete-mode catalog for `p` extended with a handful of
/// blow-ups whose Albanese classes follow from the absence of non-constant
/// maps from projective space to an abelian variety:
///
/// * `Bl_pt P2` with exceptional `P1`;
/// * `Bl_pt(E1 x P1)` over a surface `X` with `Alb(X) = E1`;
/// * `Bl_pt A` for an abelian surface `A`;
/// * `Bl_E1 P3`, exceptional divisor a `P1`-bundle over `E1`;
/// * `Bl_line P3`, exceptional divisor `P1 x P1`.
pub fn bittner_catalog(p: u64) -> Result<(Context, Vec<BlowupDatum>), MeasureError> {
    let base = Context::standard_builder(p, Mode::Complete, false)?;
    let e1 = {
        let probe = Context::standard(p, Mode::Complete)?;
        probe.canonical_ss_j().expect("every p >= 5 has a supersingular class")
    };
    let e1_class = AVClass::elliptic(e1, true);
    let rational = AVClass::identity;
    let ctx: Context = extend(base, &e1_class, rational())?.build()?;
    let data = vec![
        BlowupDatum::new(&ctx, "P2", "pt", "BlP2", "P1")?,
        BlowupDatum::new(&ctx, "XE", "pt", "BlXE", "P1")?,
        BlowupDatum::new(&ctx, "A", "pt", "BlA", "P1")?,
        BlowupDatum::new(&ctx, "P3", "E1", "BlP3E", "ExcE")?,
        BlowupDatum::new(&ctx, "P3", "P1", "BlP3L", "Q")?,
    ];
    Ok((ctx, data))
}

fn extend(
    b: ContextBuilder,
    e1: &AVClass,
    identity: AVClass,
) -> Result<ContextBuilder, GringError> {
    let poly = |c: &[i64]| Some(CountModel::Polynomial(c.to_vec()));
    b.abelian("A", "A", 2)?
        .blowup("BlP2", "Bl_pt P2", identity.clone(), poly(&[1, 2, 1]))?
        .blowup("XE", "E1 x P1", e1.clone(), None)?
        .blowup("BlXE", "Bl_pt(E1 x P1)", e1.clone(), None)?
        .blowup("BlA", "Bl_pt A", AVClass::opaque("A", 2), None)?
        .blowup("BlP3E", "Bl_E1 P3", identity.clone(), None)?
        .blowup("ExcE", "P(N_E1)", e1.clone(), None)?
        .blowup("Q", "P1 x P1", identity.clone(), poly(&[1, 2, 1]))?
        .blowup("BlP3L", "Bl_line P3", identity, poly(&[1, 2, 2, 1]))
}
