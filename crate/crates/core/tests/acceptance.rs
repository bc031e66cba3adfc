//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each, and exits non-zero if any failed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kvar::certify::{self, Certificate};
use kvar::ec::{count_points_naive, CurveModel};
use kvar::ff::{is_prime, FiniteField, PrimeField};
use kvar::gring::{
    is_zero_modulo, normalize, normalize_monomial, parse, AsanumaParams, Context, Mode,
    RingElement, ZeroTest,
};
use kvar::measures::{
    albanese_measure, bittner_catalog, bittner_defect, generator_count, point_count_measure,
    AvMonoid,
};
use kvar::ss::{self, Method};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::random_element;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))?;
    Ok(t)
}

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

fn threshold() -> Check {
    let start = Instant::now();
    let mut admissible = 0;
    for p in primes(5, 293) {
        let data = ss::supersingular_js(p, Method::default_for(p)).map_err(|e| e.to_string())?;
        let expected = p > 13 || p == 11;
        ensure((data.delta >= 2) == expected, || {
            format!("p = {p}: delta = {}, expected delta >= 2 to be {expected}", data.delta)
        })?;
        admissible += expected as usize;
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{admissible} primes with delta >= 2, exactly p = 11 and p > 13 ({t:.1?})"))
}

fn count_formula() -> Check {
    let all = primes(5, 293);
    for &p in &all {
        let hasse = ss::supersingular_js(p, Method::HasseScan).map_err(|e| e.to_string())?;
        let deuring = ss::supersingular_js(p, Method::DeuringRoots).map_err(|e| e.to_string())?;
        let formula = ss::delta_formula(p).map_err(|e| e.to_string())?.delta;
        ensure(hasse.delta == formula && deuring.delta == formula, || {
            format!("p = {p}: hasse {}, deuring {}, formula {formula}", hasse.delta, deuring.delta)
        })?;
        ensure(hasse.js == deuring.js, || format!("p = {p}: the two j-sets differ"))?;
    }
    Ok(format!("{} primes, both j-sets equal and of formula size", all.len()))
}

#[derive(Clone, Debug)]
enum Seg {
    Key(String),
    Index(usize),
}

fn leaves(v: &Value, path: &mut Vec<Seg>, out: &mut Vec<Vec<Seg>>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                path.push(Seg::Key(k.clone()));
                leaves(child, path, out);
                path.pop();
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                path.push(Seg::Index(i));
                leaves(child, path, out);
                path.pop();
            }
        }
        _ => out.push(path.clone()),
    }
}

fn at<'a>(doc: &'a mut Value, path: &[Seg]) -> &'a mut Value {
    path.iter().fold(doc, |cur, seg| match seg {
        Seg::Key(k) => &mut cur[k.as_str()],
        Seg::Index(i) => &mut cur[*i],
    })
}

fn perturb(v: Value) -> Value {
    match v {
        Value::Bool(b) => Value::Bool(!b),
        Value::Number(n) => Value::from(n.as_u64().expect("naturals") + 1),
        Value::String(s) => Value::String(match s.parse::<BigInt>() {
            Ok(n) => (n + BigInt::from(1)).to_string(),
            Err(_) => format!("{s}x"),
        }),
        other => other,
    }
}

/// Every single-leaf perturbation of the serialized certificate, plus a few
/// structural ones.
fn mutations(cert: &Certificate) -> Vec<(String, String)> {
    let base = serde_json::to_value(cert).unwrap();
    let mut paths = Vec::new();
    leaves(&base, &mut Vec::new(), &mut paths);
    let mut mutants = Vec::new();
    for path in paths {
        let mut doc = base.clone();
        let leaf = at(&mut doc, &path);
        *leaf = perturb(leaf.take());
        mutants.push((format!("{path:?}"), doc.to_string()));
    }
    let structural: [(&str, fn(&mut Value)); 6] = [
        ("swap j1/j2", |d| {
            let j1 = d["j1"].take();
            d["j1"] = d["j2"].take();
            d["j2"] = j1;
        }),
        ("drop zeta row", |d| {
            d["zeta_check"].as_array_mut().unwrap().pop();
        }),
        ("empty u", |d| d["u"] = Value::Array(vec![])),
        ("nonzero product", |d| d["product_nf"] = d["u"].clone()),
        ("extra field", |d| d["note"] = Value::from("x")),
        ("missing verdict", |d| {
            d.as_object_mut().unwrap().remove("verdict");
        }),
    ];
    for (name, f) in structural {
        let mut doc = base.clone();
        f(&mut doc);
        mutants.push((name.to_string(), doc.to_string()));
    }
    mutants
}

fn certificates() -> Check {
    let start = Instant::now();
    let (mut certs, mut mutants) = (0, 0);
    for p in primes(5, 293) {
        let result = certify::zero_divisor_certificate(p);
        if !(p > 13 || p == 11) {
            ensure(matches!(result, Err(certify::CertifyError::DeltaTooSmall(q, 1)) if q == p), || {
                format!("p = {p}: expected DeltaTooSmall, got {result:?}")
            })?;
            continue;
        }
        let cert = result.map_err(|e| format!("p = {p}: {e}"))?;
        ensure(cert.verdict, || format!("p = {p}: verdict false"))?;
        let text = serde_json::to_string_pretty(&cert).unwrap();
        certify::verify_certificate_json(&text).map_err(|e| format!("p = {p}: {e}"))?;
        for (what, doc) in mutations(&cert) {
            ensure(certify::verify_certificate_json(&doc).is_err(), || {
                format!("p = {p}: mutation {what} was accepted")
            })?;
            mutants += 1;
        }
        certs += 1;
    }
    let t = within(Duration::from_secs(120), start)?;
    Ok(format!("{certs} certificates verified, {mutants} mutants rejected ({t:.1?})"))
}

fn theorem_identity() -> Check {
    let ctx = Context::standard(11, Mode::Complete).map_err(|e| e.to_string())?;
    let el = |s: &str| parse::<BigInt>(s, &ctx).unwrap();
    let (u, v) = (el("E1"), el("E1 - E2"));
    let nf = normalize(&u.mul(&v).unwrap(), &ctx).unwrap();
    ensure(nf.is_zero(), || format!("normal form of u*v is {nf}"))?;
    for (name, x) in [("[E1]", &u), ("[E1]-[E2]", &v)] {
        let image = albanese_measure(x, &ctx).map_err(|e| e.to_string())?;
        ensure(!image.is_zero(), || format!("Albanese image of {name} vanishes"))?;
        ensure(
            matches!(is_zero_modulo(x, &ctx), Ok(ZeroTest::NonzeroCertified(_))),
            || format!("{name} not certified nonzero"),
        )?;
    }
    Ok("E1*(E1 - E2) -> 0; images [E(0)] and [E(0)] - [E(1)] nonzero".into())
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut curves = 0;
    let mut supersingular = 0;
    for p in [5u64, 7, 11, 13] {
        let f = PrimeField::new(p).unwrap();
        for a4 in f.elements() {
            for a6 in f.elements() {
                let Ok(curve) = CurveModel::new(a4, a6) else { continue };
                let hasse = ss::hasse_invariant(a4, a6).map_err(|e| e.to_string())?;
                let n = count_points_naive(&curve).map_err(|e| e.to_string())?;
                let trace = p as i64 + 1 - n as i64;
                ensure(hasse.is_zero() == (trace == 0), || {
                    format!("p = {p}, (a4, a6) = ({a4}, {a6}): hasse {hasse}, trace {trace}")
                })?;
                curves += 1;
                supersingular += hasse.is_zero() as usize;
            }
        }
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("{curves} curves, {supersingular} supersingular ({t:.1?})"))
}

fn zeta_shadow() -> Check {
    let mut pairs = 0;
    for p in [11u64, 23] {
        let ctx = Context::standard_with_models(p, Mode::Complete).map_err(|e| e.to_string())?;
        let ids: Vec<String> = ctx.supersingular_ids().iter().map(|s| s.to_string()).collect();
        for a in &ids {
            for n in 1..=4u32 {
                let expected = {
                    let pn = BigInt::from(p).pow(n);
                    let s = if n % 2 == 0 { pn - 1 } else { pn + 1 };
                    &s * &s
                };
                let got = generator_count(ctx.generator(a).unwrap(), n, &ctx).unwrap();
                ensure(got == expected, || format!("p = {p}, {a}, n = {n}: {got} != {expected}"))?;
            }
            for b in ids.iter().filter(|b| *b != a) {
                let e = parse::<BigInt>(&format!("{a}^2 - {a}*{b}"), &ctx).unwrap();
                for n in 1..=4 {
                    let c = point_count_measure(&e, n, &ctx).unwrap();
                    ensure(c.is_zero(), || format!("p = {p}: count of {e} at n = {n} is {c}"))?;
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs, n = 1..4"))
}

fn homomorphy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (alb_ctx, data) = bittner_catalog(23).map_err(|e| e.to_string())?;
    let alb_ids: Vec<String> = common::ids(&alb_ctx);
    let alb_ids: Vec<&str> = alb_ids.iter().map(String::as_str).collect();
    let monoid = AvMonoid::for_context(&alb_ctx);

    let params = AsanumaParams { e: 2, m: 1, s: 2 };
    let cnt_ctx = Context::standard_builder(11, Mode::General, true)
        .and_then(|b| b.asanuma("A", params))
        .map(|b| b.asanuma_pack(&[params]))
        .and_then(|b| b.build())
        .map_err(|e| e.to_string())?;
    let cnt_ids: Vec<String> = common::ids(&cnt_ctx);
    let cnt_ids: Vec<&str> = cnt_ids.iter().map(String::as_str).collect();

    for case in 0..200 {
        let x = random_element(&mut rng, &alb_ctx, &alb_ids, 4, 3);
        let y = random_element(&mut rng, &alb_ctx, &alb_ids, 4, 3);
        let m = |e: &RingElement<BigInt>| albanese_measure(e, &alb_ctx).unwrap();
        ensure(m(&x.mul(&y).unwrap()) == m(&x).mul(&m(&y), &monoid), || {
            format!("Albanese product law fails on case {case}: {x} ; {y}")
        })?;
        ensure(m(&x.add(&y).unwrap()) == m(&x).add(&m(&y)), || {
            format!("Albanese sum law fails on case {case}")
        })?;
        ensure(m(&normalize(&x, &alb_ctx).unwrap()) == m(&x), || {
            format!("Albanese does not factor through normalize: {x}")
        })?;

        let x = random_element(&mut rng, &cnt_ctx, &cnt_ids, 4, 3);
        let y = random_element(&mut rng, &cnt_ctx, &cnt_ids, 4, 3);
        let n = 1 + case % 4;
        let c = |e: &RingElement<BigInt>| point_count_measure(e, n, &cnt_ctx).unwrap();
        ensure(c(&x.mul(&y).unwrap()) == c(&x) * c(&y), || {
            format!("count product law fails on case {case}: {x} ; {y}")
        })?;
        ensure(c(&x.add(&y).unwrap()) == c(&x) + c(&y), || {
            format!("count sum law fails on case {case}")
        })?;
        ensure(c(&normalize(&x, &cnt_ctx).unwrap()) == c(&x), || {
            format!("count does not factor through normalize: {x}")
        })?;
    }
    let mut blowups = 0;
    for p in [5u64, 11, 23, 293] {
        let (ctx, data) = if p == 23 {
            (alb_ctx.clone(), data.clone())
        } else {
            bittner_catalog(p).map_err(|e| e.to_string())?
        };
        for d in &data {
            let defect: RingElement<BigInt> = bittner_defect(d, &ctx).unwrap();
            let image = albanese_measure(&defect, &ctx).unwrap();
            ensure(image.is_zero(), || format!("p = {p}: {defect} maps to {image}"))?;
            blowups += 1;
        }
    }
    Ok(format!("200 cases x 3 laws x 2 measures; {blowups} blow-up data map to 0"))
}

fn rewriting() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let complete = Context::standard(23, Mode::Complete).map_err(|e| e.to_string())?;
    let ids: Vec<String> = common::ids(&complete);
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    for _ in 0..1000 {
        let e = random_element(&mut rng, &complete, &ids, 6, 5);
        let nf = normalize(&e, &complete).unwrap();
        ensure(normalize(&nf, &complete).unwrap() == nf, || format!("not idempotent on {e}"))?;
        for (m, _) in e.terms() {
            let image = normalize_monomial(m, &complete);
            ensure(image.degree() == m.degree(), || format!("{m} changed degree to {image}"))?;
        }
        ensure(nf.degree() <= e.degree(), || format!("degree grew on {e}"))?;
    }

    let params = AsanumaParams { e: 2, m: 1, s: 2 };
    let general = Context::standard_builder(23, Mode::General, false)
        .and_then(|b| b.asanuma("A", params))
        .map(|b| b.asanuma_pack(&[params]))
        .and_then(|b| b.build())
        .map_err(|e| e.to_string())?;
    let gids: Vec<String> = common::ids(&general);
    let gids: Vec<&str> = gids.iter().map(String::as_str).collect();
    for _ in 0..1000 {
        let e = random_element(&mut rng, &general, &gids, 6, 5);
        let nf = normalize(&e, &general).unwrap();
        ensure(normalize(&nf, &general).unwrap() == nf, || format!("not idempotent on {e}"))?;
    }

    let el = |s: &str| parse::<BigInt>(s, &complete).unwrap();
    let nf = normalize(&el("E1*E2*E3 - E1^3"), &complete).unwrap();
    ensure(nf.is_zero(), || format!("E1*E2*E3 - E1^3 normalizes to {nf}"))?;
    Ok("1000 + 1000 elements idempotent, Deligne rewrite degree-preserving; E1*E2*E3 = E1^3".into())
}

fn round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let params = AsanumaParams { e: 2, m: 1, s: 2 };
    let ctx = Context::standard_builder(23, Mode::General, false)
        .and_then(|b| b.asanuma("A", params))
        .and_then(|b| b.build())
        .map_err(|e| e.to_string())?;
    let ids: Vec<String> = common::ids(&ctx);
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    for _ in 0..500 {
        let e = random_element(&mut rng, &ctx, &ids, 6, 4);
        let text = e.to_string();
        let back = parse::<BigInt>(&text, &ctx).map_err(|err| format!("{text:?}: {err}"))?;
        ensure(back == e, || format!("parse(render(e)) != e for {text:?}"))?;
        ensure(back.to_string() == text, || format!("render(parse({text:?})) changed"))?;
    }
    Ok("500 random elements".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("threshold reproduction", threshold),
        ("count formula cross-check", count_formula),
        ("certificate suite", certificates),
        ("theorem identity at p = 11", theorem_identity),
        ("Hasse / point-count oracle equivalence", oracle_equivalence),
        ("zeta shadow of the Deligne relation", zeta_shadow),
        ("measure homomorphy and quotient factoring", homomorphy),
        ("rewriting discipline", rewriting),
        ("parser round-trip", round_trip),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
