//! Command-line front end. [`run`] is pure apart from reading `--cert` and
//! writing `--json`; `main` only prints what it returns.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::certify::{self, CertifyError};
use crate::gring::{self, is_zero_modulo, normalize, AsanumaParams, Context, Mode, Witness, ZeroTest};
use crate::measures::{self, MeasureError};
use crate::ss::{self, Method, SsError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;
/// Version stamped into every payload.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub payload: Value,
    /// What goes to standard output: a summary, or the payload in JSON mode.
    pub stdout: String,
    /// Diagnostics (usage text, file errors).
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kvar", version, about = "Exact computations in a symbolic Grothendieck ring of varieties")]
struct Cli {
    /// Output format on standard output.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Also write the JSON payload to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate supersingular j-invariants.
    Ss {
        #[arg(long)]
        p: u64,
        /// hasse, deuring or cross (default: cross for p <= 300, deuring above).
        #[arg(long)]
        method: Option<Method>,
    },
    /// The closed-form count of supersingular classes.
    Delta {
        #[arg(long)]
        p: u64,
    },
    /// Parse an expression in the standard catalog.
    Eval {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        expr: String,
        /// Apply the relations and run the zero test.
        #[arg(long)]
        normalize: bool,
    },
    /// Evaluate a motivic measure.
    Measure {
        #[arg(long, value_enum)]
        kind: MeasureKind,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        expr: String,
        /// Extension degree over F_{p^2} (count only).
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Build a zero-divisor certificate.
    Certify(CertifyArgs),
    /// Check a certificate file.
    Verify {
        #[arg(long, value_name = "PATH")]
        cert: PathBuf,
    },
    /// Report the conditional relation of one or two Asanuma algebras.
    Asanuma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, requires_all = ["m2", "s2"])]
        e2: Option<u32>,
        #[arg(long, requires_all = ["e2", "s2"])]
        m2: Option<u32>,
        #[arg(long, requires_all = ["e2", "m2"])]
        s2: Option<u32>,
    },
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    p: u64,
    /// First j-invariant of the pair, e.g. "1" or "3+5*t".
    #[arg(long, requires = "j2")]
    j1: Option<String>,
    #[arg(long, requires = "j1")]
    j2: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureKind {
    Alb,
    Count,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

/// An error payload plus its exit code.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn hypothesis(kind: &'static str, message: impl ToString) -> Self {
        Self {
            code: EXIT_HYPOTHESIS,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<SsError> for Failure {
    fn from(e: SsError) -> Self {
        match e {
            SsError::MethodDisagreement { .. } => Failure {
                code: EXIT_INCONSISTENT,
                kind: "MethodDisagreement",
                message: e.to_string(),
            },
            SsError::NotPrime(_) => Failure::hypothesis("NotPrime", e),
            SsError::Unsupported(_) => Failure::hypothesis("Unsupported", e),
            SsError::Capacity(_) => Failure::hypothesis("Capacity", e),
            _ => Failure::hypothesis("Supersingular", e),
        }
    }
}

impl From<gring::GringError> for Failure {
    fn from(e: gring::GringError) -> Self {
        match e {
            gring::GringError::Supersingular(inner) => inner.into(),
            gring::GringError::NotPrime(_) => Failure::hypothesis("NotPrime", e),
            gring::GringError::NoEllipticModels => Failure::hypothesis("NoEllipticModels", e),
            _ => Failure::hypothesis("Ring", e),
        }
    }
}

impl From<gring::ParseError> for Failure {
    fn from(e: gring::ParseError) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "ParseError",
            message: e.to_string(),
        }
    }
}

impl From<MeasureError> for Failure {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Ring(inner) => inner.into(),
            MeasureError::Domain { .. } => Failure::hypothesis("DomainError", e),
            _ => Failure::hypothesis("MeasureError", e),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::DeltaTooSmall(..) => Failure::hypothesis("DeltaTooSmall", e),
            CertifyError::NotSupersingular(_) => Failure::hypothesis("NotSupersingular", e),
            CertifyError::SamePair(_) => Failure::hypothesis("SamePair", e),
            CertifyError::NonPositive(_) => Failure {
                code: EXIT_USAGE,
                kind: "NonPositive",
                message: e.to_string(),
            },
            CertifyError::Rejected(_) => Failure {
                code: EXIT_INCONSISTENT,
                kind: "Rejected",
                message: e.to_string(),
            },
            CertifyError::Supersingular(inner) => inner.into(),
            CertifyError::Ring(inner) => inner.into(),
            CertifyError::Measure(inner) => inner.into(),
        }
    }
}

/// Successful output: payload (without the schema stamp) and summary text.
struct Output {
    code: i32,
    payload: Value,
    summary: String,
}

impl Output {
    fn ok(payload: Value, summary: String) -> Self {
        Self {
            code: EXIT_OK,
            payload,
            summary,
        }
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let text = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    exit_code: EXIT_OK,
                    payload: json!({"schema": SCHEMA, "help": text}),
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    payload: json!({
                        "schema": SCHEMA,
                        "error": {"kind": "Usage", "message": text.trim_end()},
                    }),
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };

    let name = command_name(&cli.command);
    let (code, payload, summary) = match dispatch(&cli.command) {
        Ok(out) => (out.code, stamp(out.payload, name), out.summary),
        Err(f) => {
            let payload = stamp(
                json!({"error": {"kind": f.kind, "message": f.message}}),
                name,
            );
            (f.code, payload, format!("error ({}): {}", f.kind, f.message))
        }
    };

    let rendered = serde_json::to_string_pretty(&payload).expect("JSON values serialize") + "\n";
    let mut stderr = String::new();
    let mut exit_code = code;
    if let Some(path) = &cli.json {
        if let Err(e) = fs::write(path, &rendered) {
            stderr = format!("cannot write {}: {e}\n", path.display());
            exit_code = EXIT_USAGE;
        }
    }
    let stdout = match cli.format {
        Format::Json => rendered,
        Format::Text => summary + "\n",
    };
    CommandResult {
        exit_code,
        payload,
        stdout,
        stderr,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ss { .. } => "ss",
        Command::Delta { .. } => "delta",
        Command::Eval { .. } => "eval",
        Command::Measure { .. } => "measure",
        Command::Certify(_) => "certify",
        Command::Verify { .. } => "verify",
        Command::Asanuma { .. } => "asanuma",
    }
}

/// Adds `schema` and `command`, except to certificates, whose schema is fixed
/// so that `verify` can read back exactly what `certify` wrote.
fn stamp(mut payload: Value, name: &str) -> Value {
    let obj = payload.as_object_mut().expect("payloads are objects");
    obj.insert("schema".into(), json!(SCHEMA));
    if !(name == "certify" && !obj.contains_key("error")) {
        obj.insert("command".into(), json!(name));
    }
    payload
}

fn dispatch(c: &Command) -> Result<Output, Failure> {
    match c {
        Command::Ss { p, method } => cmd_ss(*p, *method),
        Command::Delta { p } => cmd_delta(*p),
        Command::Eval {
            p,
            mode,
            expr,
            normalize,
        } => cmd_eval(*p, *mode, expr, *normalize),
        Command::Measure { kind, p, expr, n } => cmd_measure(*kind, *p, expr, *n),
        Command::Certify(a) => cmd_certify(a),
        Command::Verify { cert } => cmd_verify(cert),
        Command::Asanuma {
            p,
            e,
            m,
            s,
            e2,
            m2,
            s2,
        } => {
            let second = match (e2, m2, s2) {
                (Some(e), Some(m), Some(s)) => Some(AsanumaParams { e: *e, m: *m, s: *s }),
                _ => None,
            };
            cmd_asanuma(*p, AsanumaParams { e: *e, m: *m, s: *s }, second)
        }
    }
}

fn cmd_ss(p: u64, method: Option<Method>) -> Result<Output, Failure> {
    let method = method.unwrap_or(Method::default_for(p));
    let data = ss::supersingular_js(p, method)?;
    let formula = ss::delta_formula(p)?;
    let js = data.j_strings();
    let summary = format!(
        "p = {p}: delta = {} ({} method), j = {{{}}}",
        data.delta,
        method,
        js.join(", ")
    );
    let payload = json!({
        "p": p,
        "method": method,
        "delta": data.delta,
        "epsilon": data.epsilon,
        "js": js,
        "formula_delta": formula.delta,
        "formula_agrees": data.formula_agrees(),
    });
    if !data.formula_agrees() {
        return Ok(Output {
            code: EXIT_INCONSISTENT,
            payload,
            summary: summary + " -- disagrees with the closed-form count",
        });
    }
    Ok(Output::ok(payload, summary))
}

fn cmd_delta(p: u64) -> Result<Output, Failure> {
    if !crate::ff::is_prime(p) {
        return Err(SsError::NotPrime(p).into());
    }
    let d = ss::delta_formula(p)?;
    let admissible = p >= 5 && d.delta >= 2;
    Ok(Output::ok(
        json!({"p": p, "delta": d.delta, "epsilon": d.epsilon, "zero_divisor_certificate": admissible}),
        format!("p = {p}: delta = {} (epsilon = {})", d.delta, d.epsilon),
    ))
}

fn cmd_eval(p: u64, mode: Mode, expr: &str, apply: bool) -> Result<Output, Failure> {
    let ctx = Context::standard(p, mode)?;
    let e: gring::RingElement<BigInt> = gring::parse(expr, &ctx)?;
    let mut payload = json!({
        "p": p,
        "mode": mode,
        "input": expr,
        "normalized": apply,
    });
    let shown = if apply {
        let nf = normalize(&e, &ctx)?;
        let test = match is_zero_modulo(&nf, &ctx)? {
            ZeroTest::Zero => json!({"result": "zero"}),
            ZeroTest::NonzeroCertified(Witness::Albanese(image)) => json!({
                "result": "nonzero",
                "witness": {"measure": "albanese", "image": image.to_json()},
            }),
            ZeroTest::NonzeroCertified(Witness::PointCount { n, value }) => json!({
                "result": "nonzero",
                "witness": {"measure": "point-count", "n": n, "value": value.to_string()},
            }),
            ZeroTest::Unknown => json!({"result": "unknown"}),
        };
        payload["zero_test"] = test;
        nf
    } else {
        e
    };
    payload["element"] = json!(shown.to_string());
    payload["terms"] = json!(shown.to_json());
    Ok(Output::ok(payload, shown.to_string()))
}

fn cmd_measure(kind: MeasureKind, p: u64, expr: &str, n: u32) -> Result<Output, Failure> {
    match kind {
        MeasureKind::Alb => {
            let ctx = Context::standard(p, Mode::Complete)?;
            let e: gring::RingElement<BigInt> = gring::parse(expr, &ctx)?;
            let image = measures::albanese_measure(&e, &ctx)?;
            Ok(Output::ok(
                json!({"p": p, "kind": "alb", "input": expr, "value": image.to_string(), "terms": image.to_json()}),
                image.to_string(),
            ))
        }
        MeasureKind::Count => {
            if n == 0 {
                return Err(MeasureError::ZeroDegree.into());
            }
            let ctx = Context::standard_with_models(p, Mode::Complete)?;
            let e: gring::RingElement<BigInt> = gring::parse(expr, &ctx)?;
            let value = measures::point_count_measure(&e, n, &ctx)?;
            let q = ctx.count_base().expect("standard catalog counts over F_{p^2}");
            Ok(Output::ok(
                json!({"p": p, "kind": "count", "input": expr, "q": q, "n": n, "value": value.to_string()}),
                value.to_string(),
            ))
        }
    }
}

fn cmd_certify(a: &CertifyArgs) -> Result<Output, Failure> {
    let cert = match (&a.j1, &a.j2) {
        (Some(j1), Some(j2)) => certify::zero_divisor_certificate_for_pair(a.p, j1, j2)?,
        _ => certify::zero_divisor_certificate(a.p)?,
    };
    let id = |sign: &str| {
        cert.v
            .iter()
            .find(|t| t.coeff.starts_with('-') == (sign == "-"))
            .map(|t| t.monomial.join("*"))
            .unwrap_or_default()
    };
    let summary = format!(
        "p = {}: {a}*({a} - {b}) = 0 with j = {}, {}; verdict {}",
        cert.p,
        cert.j1,
        cert.j2,
        cert.verdict,
        a = id("+"),
        b = id("-"),
    );
    let code = if cert.verdict { EXIT_OK } else { EXIT_INCONSISTENT };
    Ok(Output {
        code,
        payload: serde_json::to_value(&cert).expect("certificates serialize"),
        summary,
    })
}

fn cmd_verify(path: &PathBuf) -> Result<Output, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        kind: "Io",
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    match certify::verify_certificate_json(&text) {
        Ok(cert) => Ok(Output::ok(
            json!({"accepted": true, "p": cert.p, "j1": cert.j1, "j2": cert.j2}),
            format!("accepted: certificate for p = {} ({}, {})", cert.p, cert.j1, cert.j2),
        )),
        Err(CertifyError::Rejected(reason)) => Ok(Output {
            code: EXIT_INCONSISTENT,
            payload: json!({"accepted": false, "reason": reason}),
            summary: format!("rejected: {reason}"),
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_asanuma(
    p: u64,
    params: AsanumaParams,
    second: Option<AsanumaParams>,
) -> Result<Output, Failure> {
    let report = certify::asanuma_relation(p, params, second)?;
    let summary = if report.validity.valid {
        let lines: Vec<String> = report
            .relation_elements
            .iter()
            .map(|r| format!("{} -> {}", r.element, r.normal_form))
            .collect();
        format!("valid parameters (conditional): {}", lines.join("; "))
    } else {
        format!(
            "invalid parameters: {}",
            report.validity.reason.as_deref().unwrap_or("")
        )
    };
    let code = if !report.validity.valid {
        EXIT_HYPOTHESIS
    } else if !report.relations_hold() {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    };
    Ok(Output {
        code,
        payload: serde_json::to_value(&report).expect("reports serialize"),
        summary,
    })
}
