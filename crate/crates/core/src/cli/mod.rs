//! Command dispatch behind the `lorentz-forms` binary. Every command returns
//! an exit code and a JSON certificate; `verify` reruns a certificate and
//! rechecks its witnesses.

pub mod json;

use crate::arith::Embedding;
use crate::arith::{BigInt, BigRational, Place, QuadFieldElem, Scalar};
use crate::constructions::{
    build_theorem_a_witness, condition_star_check, family_form, gps_form, is_nonuniform, pairwise_noncommensurable,
    verify_pair_certificate, CertificateKind, Check, Flavor, PairStatus,
};
use crate::coxeter::{
    gram_from_coxeter, reflection_representation, verify_relations, CoxeterLabel, CoxeterMatrix,
    GeometricRepresentation, DEFAULT_CAP,
};
use crate::error::Error;
use crate::forms::{
    diagonalize, discriminant_class, find_isotropic_vector, hasse_invariant, is_isotropic, is_locally_isotropic,
    relevant_places, represents_form, represents_number_with, AnyForm, IsotropyVerdict, QuadraticForm, RationalForm,
    RepresentMode,
};
use crate::lorentz::LorentzSpace;
use crate::separability::{
    check_family_hypothesis, compute_congruence_level, enumerate_orthogonal_elements, smaller_admissible_prime,
    theorem_a_family, verify_dichotomy, CongruenceLevel, HyperplaneFamily, HypothesisVerdict,
};
use json::{
    array, child, err, form_from_json, form_to_json, int_vector_to_json, matrix_to_json, object, quad_from_json,
    rational_form_from_json, rational_form_to_json, rational_from_json, rational_to_json, rational_vector_from_json,
    scalar_to_json, uint, vector_to_json, PResult, ParseError,
};
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CommandKind {
    FormAnalyze,
    FormIsotropic,
    FormRepresents,
    ConstructTheoremA,
    Family,
    Gps,
    SeparabilityLevel,
    SeparabilityVerify,
    CoxeterVerify,
}

impl CommandKind {
    pub const ALL: [CommandKind; 9] = [
        CommandKind::FormAnalyze,
        CommandKind::FormIsotropic,
        CommandKind::FormRepresents,
        CommandKind::ConstructTheoremA,
        CommandKind::Family,
        CommandKind::Gps,
        CommandKind::SeparabilityLevel,
        CommandKind::SeparabilityVerify,
        CommandKind::CoxeterVerify,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::FormAnalyze => "form-analyze",
            CommandKind::FormIsotropic => "form-isotropic",
            CommandKind::FormRepresents => "form-represents",
            CommandKind::ConstructTheoremA => "construct-theorem-a",
            CommandKind::Family => "family",
            CommandKind::Gps => "gps",
            CommandKind::SeparabilityLevel => "separability-level",
            CommandKind::SeparabilityVerify => "separability-verify",
            CommandKind::CoxeterVerify => "coxeter-verify",
        }
    }

    pub fn parse(s: &str) -> Option<CommandKind> {
        Self::ALL.into_iter().find(|c| c.as_str() == s)
    }

    /// Accepted numbers of input documents.
    pub fn arity(self) -> (usize, usize) {
        match self {
            CommandKind::FormRepresents => (1, 2),
            _ => (1, 1),
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub height: u64,
    pub word_length: usize,
    pub vector_height: u64,
    pub unchecked: bool,
    pub cap: u32,
    pub number: Option<BigRational>,
}

impl Default for Options {
    fn default() -> Self {
        Options { height: 1000, word_length: 2, vector_height: 2, unchecked: false, cap: DEFAULT_CAP, number: None }
    }
}

impl Options {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "cap": self.cap,
            "height": self.height,
            "unchecked": self.unchecked,
            "vector_height": self.vector_height,
            "word_length": self.word_length,
        });
        if let Some(b) = &self.number {
            v["number"] = rational_to_json(b);
        }
        v
    }

    pub fn from_json(v: &Value, pointer: &str) -> PResult<Options> {
        let m = object(v, pointer, &["cap", "height", "unchecked", "vector_height", "word_length"], &["number"])?;
        let unchecked = m["unchecked"]
            .as_bool()
            .ok_or_else(|| ParseError { pointer: child(pointer, "unchecked"), message: "expected a boolean".into() })?;
        Ok(Options {
            height: uint(&m["height"], &child(pointer, "height"))?,
            word_length: uint(&m["word_length"], &child(pointer, "word_length"))? as usize,
            vector_height: uint(&m["vector_height"], &child(pointer, "vector_height"))?,
            unchecked,
            cap: uint(&m["cap"], &child(pointer, "cap"))? as u32,
            number: m.get("number").map(|x| rational_from_json(x, &child(pointer, "number"))).transpose()?,
        })
    }
}

/// Verdict classes; exit codes depend on nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Affirmative,
    Negative,
    NotFound,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Affirmative => 0,
            Status::Negative => 1,
            Status::NotFound => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Affirmative => "affirmative",
            Status::Negative => "negative",
            Status::NotFound => "not-found",
        }
    }

    fn parse(s: &str) -> Option<Status> {
        [Status::Affirmative, Status::Negative, Status::NotFound].into_iter().find(|x| x.as_str() == s)
    }
}

pub const EXIT_INVALID: i32 = 2;

/// Rejected input: exit code 2, no certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidInput {
    /// Which input document, when known.
    pub input: Option<usize>,
    pub message: String,
}

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.input {
            Some(i) => write!(f, "input {}: {}", i + 1, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InvalidInput {}

fn invalid<T>(message: impl Into<String>) -> Result<T, InvalidInput> {
    Err(InvalidInput { input: None, message: message.into() })
}

fn at(input: usize) -> impl Fn(ParseError) -> InvalidInput {
    move |e| InvalidInput { input: Some(input), message: e.to_string() }
}

impl From<Error> for InvalidInput {
    fn from(e: Error) -> Self {
        InvalidInput { input: None, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, InvalidInput>;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub certificate: Value,
}

struct Report {
    status: Status,
    verdict: String,
    result: Value,
    checks: Vec<Check>,
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect())
}

/// Parses and re-serializes each input, so certificates echo canonical documents.
pub fn canonical_inputs(command: CommandKind, inputs: &[Value]) -> CliResult<Vec<Value>> {
    let (lo, hi) = command.arity();
    if inputs.len() < lo || inputs.len() > hi {
        return invalid(format!("{command} takes {lo}..={hi} input files, got {}", inputs.len()));
    }
    inputs.iter().enumerate().map(|(i, v)| canonical_input(command, v).map_err(at(i))).collect()
}

fn canonical_input(command: CommandKind, v: &Value) -> PResult<Value> {
    Ok(match command {
        CommandKind::FormAnalyze
        | CommandKind::FormIsotropic
        | CommandKind::FormRepresents
        | CommandKind::ConstructTheoremA => form_to_json(&form_from_json(v, "")?),
        CommandKind::Family => family_input(v)?.to_json(),
        CommandKind::Gps => gps_input(v)?.to_json(),
        CommandKind::SeparabilityLevel | CommandKind::SeparabilityVerify => separability_input(v)?.to_json(),
        CommandKind::CoxeterVerify => coxeter_input(v)?.to_json(),
    })
}

/// Runs one command on parsed JSON inputs.
pub fn run(command: CommandKind, inputs: &[Value], opts: &Options) -> CliResult<Outcome> {
    let inputs = canonical_inputs(command, inputs)?;
    let report = match command {
        CommandKind::FormAnalyze => form_analyze(&inputs[0])?,
        CommandKind::FormIsotropic => form_isotropic(&inputs[0], opts)?,
        CommandKind::FormRepresents => form_represents(&inputs, opts)?,
        CommandKind::ConstructTheoremA => construct_theorem_a(&inputs[0], opts)?,
        CommandKind::Family => family(&inputs[0])?,
        CommandKind::Gps => gps(&inputs[0])?,
        CommandKind::SeparabilityLevel => separability(&inputs[0], opts, false)?,
        CommandKind::SeparabilityVerify => separability(&inputs[0], opts, true)?,
        CommandKind::CoxeterVerify => coxeter(&inputs[0], opts)?,
    };
    let certificate = json!({
        "checks": checks_json(&report.checks),
        "command": command.as_str(),
        "inputs": inputs,
        "options": opts.to_json(),
        "result": report.result,
        "status": report.status.as_str(),
        "verdict": report.verdict,
        "version": VERSION,
    });
    Ok(Outcome { exit_code: report.status.exit_code(), certificate })
}

fn lib<T>(r: crate::error::Result<T>) -> CliResult<T> {
    r.map_err(InvalidInput::from)
}

fn signature_json(s: crate::forms::Signature) -> Value {
    json!({"neg": s.neg, "pos": s.pos, "zero": s.zero})
}

fn form_analyze(input: &Value) -> CliResult<Report> {
    let f = form_from_json(input, "").map_err(at(0))?;
    let mut checks = Vec::new();
    let mut result = json!({
        "dim": f.dim(),
        "field": json::field_to_json(f.field_tag()),
        "signature": signature_json(f.signature()),
    });
    match &f {
        AnyForm::Rational(q) => {
            let d = diagonalize(q);
            checks.push(Check::new(
                "diagonalization is a congruence",
                d.transform.congruence(q.gram()) == *d.diagonal.gram(),
            ));
            result["determinant"] = rational_to_json(&q.determinant());
            result["diagonal"] = vector_to_json(&d.diagonal.gram().diagonal_entries());
            result["lorentzian"] = json!(q.signature().is_lorentzian());
            result["nonsingular"] = json!(!q.is_singular());
            if !q.is_singular() {
                let places = relevant_places(q);
                let mut hasse = serde_json::Map::new();
                let mut product = 1i8;
                for v in &places {
                    let h = lib(hasse_invariant(q, v))?;
                    product *= h;
                    hasse.insert(v.to_string(), json!(h));
                }
                checks.push(Check::new("hasse product formula", product == 1));
                result["hasse"] = Value::Object(hasse);
                result["determinant_class"] = json!(lib(discriminant_class(q))?.representative().to_string());
                let iso = lib(is_isotropic(q))?.is_isotropic();
                result["isotropic"] = json!(iso);
            }
        }
        AnyForm::Quadratic(q) => {
            let d = diagonalize(q);
            checks.push(Check::new(
                "diagonalization is a congruence",
                d.transform.congruence(q.gram()) == *d.diagonal.gram(),
            ));
            result["determinant"] = scalar_to_json(&q.determinant());
            result["diagonal"] = vector_to_json(&d.diagonal.gram().diagonal_entries());
            result["conjugate_signature"] = signature_json(q.signature_at(Embedding::Conjugate));
            result["lorentzian"] = json!(q.signature().is_lorentzian());
            result["nonsingular"] = json!(!q.is_singular());
            result["condition_star"] = json!(condition_star_check(q));
        }
    }
    Ok(Report { status: Status::Affirmative, verdict: "analyzed".into(), result, checks })
}

fn first_obstruction(f: &RationalForm) -> CliResult<Option<Place>> {
    for v in relevant_places(f) {
        if !lib(is_locally_isotropic(f, &v))? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn form_isotropic(input: &Value, opts: &Options) -> CliResult<Report> {
    let f = rational_form_from_json(input, "").map_err(at(0))?;
    let decision = lib(is_isotropic(&f))?;
    if !decision.is_isotropic() {
        let place = first_obstruction(&f)?;
        let mut checks = vec![Check::new("exact decision anisotropic", true)];
        if let Some(p) = &place {
            checks.push(Check::new(format!("anisotropic at {p}"), !lib(is_locally_isotropic(&f, p))?));
        }
        return Ok(Report {
            status: Status::Negative,
            verdict: "anisotropic".into(),
            result: json!({"obstruction": place.map(|p| p.to_string())}),
            checks,
        });
    }
    let cert = lib(find_isotropic_vector(&f, opts.height))?;
    match (cert.verdict, cert.witness) {
        (IsotropyVerdict::Isotropic, Some(w)) => {
            let q: Vec<BigRational> = w.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            let checks = vec![
                Check::new("exact decision isotropic", true),
                Check::new("f(witness) = 0", f.value(&q).is_zero()),
                Check::new("witness nonzero", w.iter().any(|x| !x.is_zero())),
            ];
            Ok(Report {
                status: Status::Affirmative,
                verdict: "isotropic".into(),
                result: json!({"witness": int_vector_to_json(&w)}),
                checks,
            })
        }
        _ => Ok(Report {
            status: Status::NotFound,
            verdict: "isotropic, no witness within height".into(),
            result: json!({"height": opts.height}),
            checks: vec![Check::new("exact decision isotropic", true)],
        }),
    }
}

fn form_represents(inputs: &[Value], opts: &Options) -> CliResult<Report> {
    let f = rational_form_from_json(&inputs[0], "").map_err(at(0))?;
    match (&opts.number, inputs.get(1)) {
        (Some(b), None) => {
            let r = lib(represents_number_with(&f, b, opts.height))?;
            if !r.represented {
                return Ok(Report {
                    status: Status::Negative,
                    verdict: "not represented".into(),
                    result: json!({"number": rational_to_json(b)}),
                    checks: vec![],
                });
            }
            match r.witness {
                Some(w) => Ok(Report {
                    status: Status::Affirmative,
                    verdict: "represented".into(),
                    result: json!({"number": rational_to_json(b), "witness": vector_to_json(&w)}),
                    checks: vec![Check::new("f(witness) = number", f.value(&w) == *b)],
                }),
                None => Ok(Report {
                    status: Status::NotFound,
                    verdict: "represented, no witness within height".into(),
                    result: json!({"height": opts.height, "number": rational_to_json(b)}),
                    checks: vec![],
                }),
            }
        }
        (None, Some(gv)) => {
            let g = rational_form_from_json(gv, "").map_err(at(1))?;
            f.is_singular().then(|| invalid::<()>("f must be nonsingular")).transpose()?;
            g.is_singular().then(|| invalid::<()>("g must be nonsingular")).transpose()?;
            let (sf, sg) = (f.signature(), g.signature());
            let sig_fail = if sf.pos < sg.pos {
                Some(format!("r >= p failed: r = {}, p = {}", sf.pos, sg.pos))
            } else if sf.neg < sg.neg {
                Some(format!("s >= q failed: s = {}, q = {}", sf.neg, sg.neg))
            } else {
                None
            };
            if let Some(reason) = sig_fail {
                return Ok(Report {
                    status: Status::Negative,
                    verdict: "not represented".into(),
                    result: json!({"reason": reason}),
                    checks: vec![],
                });
            }
            let mode = if opts.unchecked {
                RepresentMode::Unchecked { height: opts.height }
            } else {
                if f.dim() < g.dim() + 3 {
                    return invalid(format!(
                        "rank(f) - rank(g) >= 3 failed: {} - {} = {}; rerun with --unchecked",
                        f.dim(),
                        g.dim(),
                        f.dim() as i64 - g.dim() as i64
                    ));
                }
                RepresentMode::Checked
            };
            match represents_form(&f, &g, mode) {
                Ok(w) => {
                    let sh = w.h_part.signature();
                    let checks = vec![
                        Check::new("block identity T^t F T = G' + H", w.verify(&f)),
                        Check::new("g_basis^t G g_basis = G'", w.g_basis.congruence(g.gram()) == *w.g_part.gram()),
                        Check::new(
                            "residual signature (r - p, s - q)",
                            sh.pos == sf.pos - sg.pos && sh.neg == sf.neg - sg.neg,
                        ),
                    ];
                    Ok(Report {
                        status: Status::Affirmative,
                        verdict: "represented".into(),
                        result: json!({
                            "g_basis": matrix_to_json(&w.g_basis),
                            "g_part": rational_form_to_json(&w.g_part),
                            "h_part": rational_form_to_json(&w.h_part),
                            "transform": matrix_to_json(&w.transform),
                        }),
                        checks,
                    })
                }
                Err(Error::Precondition(m)) if opts.unchecked => Ok(Report {
                    status: Status::NotFound,
                    verdict: "no splitting found within height".into(),
                    result: json!({"height": opts.height, "reason": m}),
                    checks: vec![],
                }),
                Err(e) => Err(e.into()),
            }
        }
        (Some(_), Some(_)) => invalid("give either --number or a second form, not both"),
        (None, None) => invalid("form-represents needs --number or a second form file"),
    }
}

fn construct_theorem_a(input: &Value, opts: &Options) -> CliResult<Report> {
    let f = rational_form_from_json(input, "").map_err(at(0))?;
    if f.is_singular() {
        return invalid("construct-theorem-a requires a nonsingular form");
    }
    let sig = f.signature();
    if !sig.is_lorentzian() {
        return invalid(format!("signature (n, 1) required, got {sig}"));
    }
    if f.dim() < 5 {
        return invalid(format!("n >= 4 required, got n = {}", f.dim() - 1));
    }
    let w = match build_theorem_a_witness(&f, opts.height) {
        Ok(w) => w,
        Err(Error::Precondition(m)) => {
            return Ok(Report {
                status: Status::NotFound,
                verdict: "no q3 splitting within height".into(),
                result: json!({"height": opts.height, "reason": m}),
                checks: vec![],
            })
        }
        Err(e) => return Err(e.into()),
    };
    let family = lib(w.hyperplane_family())?;
    let ambient: Vec<Value> = family
        .iter()
        .map(|h| int_vector_to_json(&crate::arith::rational::primitive_integer_vector(&w.to_ambient(h.normal()))))
        .collect();
    let result = json!({
        "a": rational_to_json(&w.a),
        "basis": Value::Array(w.basis.iter().map(|e| vector_to_json(e)).collect()),
        "family_normals": ambient,
        "h": rational_form_to_json(&w.h),
        "p1": vector_to_json(w.p1.rep()),
        "p2": vector_to_json(w.p2.rep()),
        "tau1": matrix_to_json(w.tau1.matrix()),
        "tau2": matrix_to_json(w.tau2.matrix()),
        "tau3": matrix_to_json(w.tau3.matrix()),
        "u1": vector_to_json(&w.u1),
        "u2": vector_to_json(&w.u2),
    });
    let passed = w.all_passed();
    Ok(Report {
        status: if passed { Status::Affirmative } else { Status::Negative },
        verdict: if passed { "constructed" } else { "checks failed" }.into(),
        result,
        checks: w.report.clone(),
    })
}

struct FamilyInput {
    flavor: Flavor,
    n: usize,
    params: Vec<u64>,
}

impl FamilyInput {
    fn to_json(&self) -> Value {
        json!({"flavor": self.flavor.as_str(), "n": self.n, "params": self.params})
    }
}

fn family_input(v: &Value) -> PResult<FamilyInput> {
    let m = object(v, "", &["flavor", "n", "params"], &[])?;
    let flavor = match m["flavor"].as_str() {
        Some("nonuniform") => Flavor::Nonuniform,
        Some("compact") => Flavor::Compact,
        _ => return err("/flavor", "expected \"nonuniform\" or \"compact\""),
    };
    let n = uint(&m["n"], "/n")? as usize;
    let params = array(&m["params"], "/params")?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &child("/params", i)))
        .collect::<PResult<Vec<u64>>>()?;
    if params.is_empty() {
        return err("/params", "at least one parameter required");
    }
    Ok(FamilyInput { flavor, n, params })
}

fn family(input: &Value) -> CliResult<Report> {
    let fi = family_input(input).map_err(at(0))?;
    let mut checks = Vec::new();
    let mut members = Vec::new();
    for &a in &fi.params {
        let ff = lib(family_form(a, fi.n, fi.flavor))?;
        let star = match &ff.form {
            AnyForm::Rational(q) => condition_star_check(q),
            AnyForm::Quadratic(q) => condition_star_check(q),
        };
        checks.push(Check::new(format!("condition (*) for a = {a}"), star));
        let mut m = json!({"a": a, "condition_star": star, "form": form_to_json(&ff.form)});
        if let AnyForm::Rational(q) = &ff.form {
            m["nonuniform"] = json!(lib(is_nonuniform(q))?);
        }
        members.push(m);
    }
    let mut result = json!({"members": members});
    if fi.flavor == Flavor::Compact {
        let ok = checks.iter().all(|c| c.passed);
        return Ok(Report {
            status: if ok { Status::Affirmative } else { Status::Negative },
            verdict: if ok { "constructed" } else { "condition (*) fails" }.into(),
            result,
            checks,
        });
    }
    let verdicts = lib(pairwise_noncommensurable(&fi.params, fi.n, fi.flavor))?;
    let forms: Vec<RationalForm> = fi
        .params
        .iter()
        .map(|&a| Ok(lib(family_form(a, fi.n, fi.flavor))?.form.as_rational().expect("rational").clone()))
        .collect::<CliResult<_>>()?;
    let index = |a: u64| fi.params.iter().position(|&x| x == a).expect("listed");
    let mut pairs = Vec::new();
    for v in &verdicts {
        let mut p = json!({"a": v.a, "b": v.b});
        match &v.status {
            PairStatus::Certified(c) => {
                let ok = verify_pair_certificate(&forms[index(v.a)], &forms[index(v.b)], c);
                checks.push(Check::new(format!("certificate ({}, {}) recomputes", v.a, v.b), ok));
                p["status"] = json!("certified");
                p["kind"] = json!(match c.kind {
                    CertificateKind::Sweep => "sweep",
                    CertificateKind::Discriminant => "discriminant",
                });
                p["mismatches"] = c
                    .mismatches
                    .iter()
                    .map(|m| json!({"invariant": m.invariant, "lambda": m.lambda.to_string(), "left": m.left, "right": m.right}))
                    .collect();
            }
            PairStatus::Undecided => p["status"] = json!("undecided"),
        }
        pairs.push(p);
    }
    let undecided = verdicts.iter().filter(|v| !v.is_certified()).count();
    result["pairs"] = Value::Array(pairs);
    result["undecided"] = json!(undecided);
    let ok = undecided == 0 && checks.iter().all(|c| c.passed);
    Ok(Report {
        status: if ok { Status::Affirmative } else { Status::Negative },
        verdict: if ok { "pairwise non-commensurable".to_string() } else { format!("{undecided} pairs undecided") },
        result,
        checks,
    })
}

struct GpsInput {
    base: AnyForm,
    a: Value,
}

impl GpsInput {
    fn to_json(&self) -> Value {
        json!({"a": self.a, "base": form_to_json(&self.base)})
    }
}

fn gps_input(v: &Value) -> PResult<GpsInput> {
    let m = object(v, "", &["a", "base"], &[])?;
    let base = form_from_json(&m["base"], "/base")?;
    let a = match &base {
        AnyForm::Rational(_) => rational_to_json(&rational_from_json(&m["a"], "/a")?),
        AnyForm::Quadratic(q) => json::quad_to_json(&quad_from_json(&m["a"], "/a", q.field())?),
    };
    Ok(GpsInput { base, a })
}

fn gps_report<T: Scalar>(f: &QuadraticForm<T>, a: &T) -> CliResult<Report> {
    let h = lib(gps_form(f, a))?;
    let (sb, sh) = (f.signature(), h.form.signature());
    let checks = vec![
        Check::new("condition (*)", condition_star_check(f)),
        Check::new(
            "signature(h_a) = signature(f) + (1, 0)",
            sh.pos == sb.pos + 1 && sh.neg == sb.neg && sh.zero == sb.zero,
        ),
    ];
    let form_json = match (&h.form as &dyn std::any::Any).downcast_ref::<RationalForm>() {
        Some(q) => rational_form_to_json(q),
        None => {
            let q =
                (&h.form as &dyn std::any::Any).downcast_ref::<QuadraticForm<QuadFieldElem>>().expect("Q or Q(sqrt d)");
            form_to_json(&AnyForm::Quadratic(q.clone()))
        }
    };
    Ok(Report {
        status: Status::Affirmative,
        verdict: "constructed".into(),
        result: json!({
            "arithmetic_flag": h.arithmetic_flag.as_str(),
            "base_signature": signature_json(sb),
            "form": form_json,
            "signature": signature_json(sh),
        }),
        checks,
    })
}

fn gps(input: &Value) -> CliResult<Report> {
    let gi = gps_input(input).map_err(at(0))?;
    match &gi.base {
        AnyForm::Rational(f) => gps_report(f, &rational_from_json(&gi.a, "/a").map_err(at(0))?),
        AnyForm::Quadratic(f) => gps_report(f, &quad_from_json(&gi.a, "/a", f.field()).map_err(at(0))?),
    }
}

enum NormalSource {
    Explicit(Vec<Vec<BigInt>>),
    TheoremA,
}

struct SeparabilityInput {
    form: RationalForm,
    normals: NormalSource,
}

impl SeparabilityInput {
    fn to_json(&self) -> Value {
        match &self.normals {
            NormalSource::Explicit(ns) => json!({
                "form": rational_form_to_json(&self.form),
                "normals": ns.iter().map(|n| int_vector_to_json(n)).collect::<Vec<_>>(),
            }),
            NormalSource::TheoremA => json!({"form": rational_form_to_json(&self.form), "normals": "theorem-a"}),
        }
    }
}

fn separability_input(v: &Value) -> PResult<SeparabilityInput> {
    let m = object(v, "", &["form", "normals"], &[])?;
    let form = rational_form_from_json(&m["form"], "/form")?;
    let normals = match &m["normals"] {
        Value::String(s) if s == "theorem-a" => NormalSource::TheoremA,
        nv => {
            let rows = array(nv, "/normals")?;
            if rows.is_empty() {
                return err("/normals", "at least e_0 required");
            }
            let mut out = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                let p = child("/normals", i);
                let cells = array(r, &p)?;
                if cells.len() != form.dim() {
                    return err(&p, format!("expected {} entries, got {}", form.dim(), cells.len()));
                }
                out.push(
                    cells
                        .iter()
                        .enumerate()
                        .map(|(j, x)| json::integer_from_json(x, &child(&p, j)))
                        .collect::<PResult<Vec<_>>>()?,
                );
            }
            NormalSource::Explicit(out)
        }
    };
    Ok(SeparabilityInput { form, normals })
}

fn level_json(l: &CongruenceLevel) -> Value {
    json!({
        "indices": l.indices,
        "max_pairing": l.max_pairing.to_string(),
        "n": l.n,
        "witnesses": l.witnesses.iter().map(|w| json!({"index": w.index, "minus_entry": w.minus_entry, "plus_entry": w.plus_entry})).collect::<Vec<_>>(),
    })
}

fn level_checks(fam: &HyperplaneFamily, l: &CongruenceLevel) -> Vec<Check> {
    let e0 = &fam.normals()[0];
    let n = BigInt::from(l.n);
    let witnesses_ok = l.witnesses.iter().all(|w| {
        let ei = &fam.normals()[w.index];
        let plus = &e0[w.plus_entry] + &ei[w.plus_entry];
        let minus = &e0[w.minus_entry] - &ei[w.minus_entry];
        !plus.is_zero() && !(&plus % &n).is_zero() && !minus.is_zero() && !(&minus % &n).is_zero()
    });
    vec![
        Check::new("N > 2 max |(e_0, e_i)|", BigInt::from(l.n) > BigInt::from(2) * &l.max_pairing),
        Check::new("N prime", crate::arith::factor::is_prime_u64(l.n)),
        Check::new("divisibility witnesses valid", witnesses_ok && l.witnesses.len() == l.indices.len()),
        Check::new("no smaller admissible prime", smaller_admissible_prime(fam, l).is_none()),
    ]
}

fn separability(input: &Value, opts: &Options, verify: bool) -> CliResult<Report> {
    let si = separability_input(input).map_err(at(0))?;
    let space = lib(LorentzSpace::new(si.form.clone()))?;
    let fam = match &si.normals {
        NormalSource::Explicit(ns) => lib(HyperplaneFamily::new(space, ns.clone()))?,
        NormalSource::TheoremA => lib(theorem_a_family(&si.form, opts.height))?,
    };
    let hyp = check_family_hypothesis(&fam);
    let mut result = json!({
        "hypothesis": hyp.iter().map(|e| json!({"index": e.index, "pairing": e.pairing.to_string(), "verdict": e.verdict.as_str()})).collect::<Vec<_>>(),
        "normals": fam.normals().iter().map(|n| int_vector_to_json(n)).collect::<Vec<_>>(),
    });
    if hyp.iter().any(|e| e.verdict == HypothesisVerdict::Intersecting) {
        return Ok(Report { status: Status::Negative, verdict: "hypothesis violated".into(), result, checks: vec![] });
    }
    let level = match compute_congruence_level(&fam) {
        Ok(l) => l,
        Err(Error::Precondition(m)) => {
            result["reason"] = json!(m);
            return Ok(Report {
                status: Status::Negative,
                verdict: "exclusion unachievable".into(),
                result,
                checks: vec![],
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut checks = level_checks(&fam, &level);
    result["level"] = level_json(&level);
    if verify {
        let en = lib(enumerate_orthogonal_elements(fam.space(), opts.vector_height, opts.word_length))?;
        let r = lib(verify_dichotomy(&fam, &level, &en.elements))?;
        checks.push(Check::new("every element integral and form-preserving", true));
        checks.push(Check::new("no dichotomy counterexample", r.passed()));
        result["dichotomy"] = json!({
            "checks": r.checks,
            "congruent": r.congruent,
            "counterexamples": r.counterexamples.iter().map(|c| json!({"index": c.index, "reason": c.reason, "word": c.word})).collect::<Vec<_>>(),
            "examined": r.examined,
            "fixed": r.fixed,
            "moved_off": r.moved_off,
        });
        result["enumeration"] = json!({"elements": en.elements.len(), "generators": en.generators.len()});
    }
    let ok = checks.iter().all(|c| c.passed);
    let verdict = match (verify, ok) {
        (false, true) => "level computed",
        (true, true) => "dichotomy holds",
        (_, false) => "checks failed",
    };
    Ok(Report {
        status: if ok { Status::Affirmative } else { Status::Negative },
        verdict: verdict.into(),
        result,
        checks,
    })
}

struct CoxeterInput {
    matrix: CoxeterMatrix,
    gram: Option<AnyForm>,
}

fn label_json(l: CoxeterLabel) -> Value {
    match l {
        CoxeterLabel::Finite(m) => json!(m),
        CoxeterLabel::Infinity => json!("inf"),
    }
}

impl CoxeterInput {
    fn to_json(&self) -> Value {
        let labels: Vec<Vec<Value>> =
            self.matrix.labels().iter().map(|r| r.iter().map(|&l| label_json(l)).collect()).collect();
        let mut v = json!({"coxeter": labels});
        if let Some(g) = &self.gram {
            v["gram"] = form_to_json(g);
        }
        v
    }
}

fn coxeter_input(v: &Value) -> PResult<CoxeterInput> {
    let m = object(v, "", &["coxeter"], &["gram"])?;
    let rows = array(&m["coxeter"], "/coxeter")?;
    let mut labels = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let p = child("/coxeter", i);
        let row = array(r, &p)?
            .iter()
            .enumerate()
            .map(|(j, x)| match x {
                Value::String(s) if s == "inf" => Ok(CoxeterLabel::Infinity),
                _ => Ok(CoxeterLabel::Finite(uint(x, &child(&p, j))? as u32)),
            })
            .collect::<PResult<Vec<_>>>()?;
        labels.push(row);
    }
    let matrix = CoxeterMatrix::new(labels).or_else(|e| err("/coxeter", e.to_string()))?;
    let gram = m.get("gram").map(|g| form_from_json(g, "/gram")).transpose()?;
    if let Some(g) = &gram {
        if g.dim() != matrix.size() {
            return err("/gram/dim", format!("Gram size {} differs from Coxeter size {}", g.dim(), matrix.size()));
        }
    }
    Ok(CoxeterInput { matrix, gram })
}

fn coxeter_report<T: Scalar>(
    gram: &QuadraticForm<T>,
    m: &CoxeterMatrix,
    cap: u32,
    gram_json: Value,
) -> CliResult<Report> {
    let rep: GeometricRepresentation<T> = lib(reflection_representation(gram))?;
    let r = lib(verify_relations(&rep, m, cap))?;
    let mut checks: Vec<Check> = (0..rep.generators.len())
        .map(|i| Check::new(format!("r_{i} involutive and form-preserving"), r.involutions[i]))
        .collect();
    for c in &r.checks {
        let name = match c.label {
            CoxeterLabel::Finite(k) => format!("(r_{} r_{}) has order {k}", c.i, c.j),
            CoxeterLabel::Infinity => format!("(r_{} r_{}) has no order <= {cap}", c.i, c.j),
        };
        checks.push(Check::new(name, c.passed));
    }
    let ok = r.passed();
    Ok(Report {
        status: if ok { Status::Affirmative } else { Status::Negative },
        verdict: if ok { "relations verified" } else { "relation failures" }.into(),
        result: json!({
            "generators": rep.generators.iter().map(matrix_to_json).collect::<Vec<_>>(),
            "gram": gram_json,
            "relations": r.checks.iter().map(|c| json!({"i": c.i, "j": c.j, "label": label_json(c.label), "order": c.order})).collect::<Vec<_>>(),
            "signature": signature_json(gram.signature()),
        }),
        checks,
    })
}

fn coxeter(input: &Value, opts: &Options) -> CliResult<Report> {
    let ci = coxeter_input(input).map_err(at(0))?;
    let gram = match ci.gram {
        Some(g) => g,
        None => lib(gram_from_coxeter(&ci.matrix))?,
    };
    let gj = form_to_json(&gram);
    match &gram {
        AnyForm::Rational(q) => coxeter_report(q, &ci.matrix, opts.cap, gj),
        AnyForm::Quadratic(q) => coxeter_report(q, &ci.matrix, opts.cap, gj),
    }
}

/// Outcome of `verify` on a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub reproduced: bool,
    pub independent: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.reproduced && self.independent.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": checks_json(&self.independent),
            "command": "verify",
            "reproduced": self.reproduced,
            "status": if self.passed() { "affirmative" } else { "negative" },
            "version": VERSION,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Reruns the recorded command and compares the whole certificate, then
/// rechecks the stored witnesses directly.
pub fn verify_certificate(cert: &Value) -> CliResult<Verification> {
    let m =
        object(cert, "", &["checks", "command", "inputs", "options", "result", "status", "verdict", "version"], &[])
            .map_err(at(0))?;
    let command = m["command"]
        .as_str()
        .and_then(CommandKind::parse)
        .ok_or_else(|| InvalidInput { input: Some(0), message: "at /command: unknown command".into() })?;
    let opts = Options::from_json(&m["options"], "/options").map_err(at(0))?;
    let inputs = array(&m["inputs"], "/inputs").map_err(at(0))?.clone();
    m["status"]
        .as_str()
        .and_then(Status::parse)
        .ok_or_else(|| InvalidInput { input: Some(0), message: "at /status: unknown status".into() })?;
    let rerun = run(command, &inputs, &opts)?;
    let reproduced = rerun.certificate == *cert;
    let independent = independent_checks(command, cert, &inputs, &opts);
    Ok(Verification { reproduced, independent })
}

fn independent_checks(command: CommandKind, cert: &Value, inputs: &[Value], opts: &Options) -> Vec<Check> {
    let res = &cert["result"];
    let form = |i: usize| rational_form_from_json(&inputs[i], "").ok();
    let mut out = Vec::new();
    match command {
        CommandKind::FormIsotropic => {
            if let (Some(f), Ok(w)) = (form(0), rational_vector_from_json(&res["witness"], "")) {
                out.push(Check::new(
                    "stored witness is a nonzero zero of f",
                    f.value(&w).is_zero() && w.iter().any(|x| !x.is_zero()),
                ));
            }
        }
        CommandKind::FormRepresents => {
            if let (Some(f), Ok(w)) = (form(0), rational_vector_from_json(&res["witness"], "")) {
                out.push(Check::new("stored witness represents the number", Some(f.value(&w)) == opts.number));
            }
            if let (Some(f), Ok(t), Ok(gp), Ok(hp)) = (
                form(0),
                json::rational_matrix_from_json(&res["transform"], ""),
                rational_form_from_json(&res["g_part"], ""),
                rational_form_from_json(&res["h_part"], ""),
            ) {
                let block = gp.gram().block_diagonal(hp.gram());
                out.push(Check::new(
                    "stored transform splits f",
                    !t.determinant().is_zero() && t.congruence(f.gram()) == block,
                ));
            }
        }
        CommandKind::ConstructTheoremA => {
            if let Ok(h) = rational_form_from_json(&res["h"], "") {
                for k in ["tau1", "tau2", "tau3"] {
                    if let Ok(t) = json::rational_matrix_from_json(&res[k], "") {
                        let ok = t.congruence(h.gram()) == *h.gram() && t.mul(&t).is_identity();
                        out.push(Check::new(format!("stored {k} involutive and preserves h"), ok));
                    }
                }
            }
        }
        CommandKind::CoxeterVerify => {
            if let Ok(AnyForm::Rational(g)) = form_from_json(&res["gram"], "") {
                if let Some(gens) = res["generators"].as_array() {
                    for (i, gv) in gens.iter().enumerate() {
                        if let Ok(r) = json::rational_matrix_from_json(gv, "") {
                            out.push(Check::new(
                                format!("stored r_{i} involutive and form-preserving"),
                                r.mul(&r).is_identity() && r.congruence(g.gram()) == *g.gram(),
                            ));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    let recorded_exit = cert["status"].as_str().and_then(Status::parse).map(Status::exit_code);
    out.push(Check::new("status consistent with checks", {
        let all = cert["checks"].as_array().is_some_and(|cs| cs.iter().all(|c| c["passed"] == json!(true)));
        recorded_exit != Some(0) || all
    }));
    out
}

/// The text report printed without `--json`.
pub fn human_report(cert: &Value) -> String {
    let mut s = String::new();
    let line = |s: &mut String, k: &str, v: &Value| {
        let text = match v {
            Value::String(x) => x.clone(),
            other => other.to_string(),
        };
        s.push_str(&format!("{k}: {text}\n"));
    };
    for k in ["command", "verdict", "status", "reproduced"] {
        if let Some(v) = cert.get(k) {
            line(&mut s, k, v);
        }
    }
    if let Some(r) = cert.get("result").and_then(Value::as_object) {
        for (k, v) in r {
            line(&mut s, k, v);
        }
    }
    if let Some(cs) = cert.get("checks").and_then(Value::as_array) {
        let passed = cs.iter().filter(|c| c["passed"] == json!(true)).count();
        s.push_str(&format!("checks: {passed}/{} passed\n", cs.len()));
        for c in cs.iter().filter(|c| c["passed"] != json!(true)) {
            s.push_str(&format!("  FAILED {}\n", c["name"].as_str().unwrap_or("?")));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn q(n: usize) -> Value {
        form_to_json(&AnyForm::Rational(RationalForm::q(n)))
    }

    #[test]
    fn q4_isotropic_witness() {
        let o = run(CommandKind::FormIsotropic, &[q(4)], &Options::default()).unwrap();
        assert_eq!(o.exit_code, 0);
        assert_eq!(o.certificate["result"]["witness"], json!(["1", "1", "0", "0", "0"]));
        assert!(verify_certificate(&o.certificate).unwrap().passed());
    }

    #[test]
    fn two_squares_do_not_make_three() {
        let f = form_to_json(&AnyForm::Rational(RationalForm::from_integer_diagonal(&[1, 1])));
        let opts = Options { number: Some(rat(3)), ..Options::default() };
        let o = run(CommandKind::FormRepresents, &[f], &opts).unwrap();
        assert_eq!(o.exit_code, 1);
    }

    #[test]
    fn anisotropic_reports_place() {
        let f = form_to_json(&AnyForm::Rational(RationalForm::from_integer_diagonal(&[1, 1, -3])));
        let o = run(CommandKind::FormIsotropic, &[f], &Options::default()).unwrap();
        assert_eq!(o.exit_code, 1);
        assert_eq!(o.certificate["result"]["obstruction"], json!("2"));
    }

    #[test]
    fn tampering_detected() {
        let o = run(CommandKind::FormIsotropic, &[q(3)], &Options::default()).unwrap();
        let mut c = o.certificate.clone();
        c["result"]["witness"] = json!(["1", "0", "1", "1"]);
        let v = verify_certificate(&c).unwrap();
        assert!(!v.reproduced && !v.passed());
    }

    #[test]
    fn rank_gap_is_invalid_input() {
        let e = run(CommandKind::FormRepresents, &[q(4), q(3)], &Options::default()).unwrap_err();
        assert!(e.message.contains("rank(f) - rank(g) >= 3 failed"));
        let o = run(CommandKind::FormRepresents, &[q(4), q(3)], &Options { unchecked: true, ..Options::default() })
            .unwrap();
        assert_eq!(o.exit_code, 0);
    }

    #[test]
    fn theorem_a_runs() {
        let o = run(CommandKind::ConstructTheoremA, &[q(4)], &Options::default()).unwrap();
        assert_eq!(o.exit_code, 0);
        assert!(verify_certificate(&o.certificate).unwrap().passed());
    }

    #[test]
    fn options_round_trip() {
        let o = Options { number: Some(rat(-5)), unchecked: true, ..Options::default() };
        assert_eq!(Options::from_json(&o.to_json(), "").unwrap(), o);
    }

    #[test]
    fn bad_field_reported_with_input_index() {
        let e = run(CommandKind::FormAnalyze, &[json!({"dim": 1, "field": "R", "gram": [["1"]]})], &Options::default())
            .unwrap_err();
        assert_eq!(e.input, Some(0));
        assert!(e.to_string().contains("/field"));
    }
}
