//! Exact JSON encodings: rationals as `"p/q"` strings, quadratic field
//! elements as `{"a", "b", "d"}`, forms as `{"dim", "field", "gram"}`.

use crate::arith::{BigInt, BigRational, FieldTag, QuadField, QuadFieldElem, Rationals, Scalar};
use crate::forms::{AnyForm, QuadraticForm};
use crate::matrix::Matrix;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::any::Any;
use std::fmt;
use std::str::FromStr;

/// A schema violation at a JSON pointer inside an input document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() { "/" } else { &self.pointer };
        write!(f, "at {at}: {}", self.message)
    }
}

impl std::error::Error for ParseError {}

pub type PResult<T> = std::result::Result<T, ParseError>;

pub fn err<T>(pointer: &str, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { pointer: pointer.to_string(), message: message.into() })
}

pub fn child(pointer: &str, key: impl fmt::Display) -> String {
    format!("{pointer}/{key}")
}

pub fn object<'a>(v: &'a Value, pointer: &str, keys: &[&str], optional: &[&str]) -> PResult<&'a Map<String, Value>> {
    let Some(m) = v.as_object() else {
        return err(pointer, "expected an object");
    };
    for k in m.keys() {
        if !keys.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
            return err(&child(pointer, k), "unknown key");
        }
    }
    for k in keys {
        if !m.contains_key(*k) {
            return err(pointer, format!("missing key \"{k}\""));
        }
    }
    Ok(m)
}

pub fn array<'a>(v: &'a Value, pointer: &str) -> PResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected an array".into() })
}

pub fn uint(v: &Value, pointer: &str) -> PResult<u64> {
    v.as_u64().ok_or_else(|| ParseError { pointer: pointer.into(), message: "expected a nonnegative integer".into() })
}

pub fn rational_to_json(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

fn parse_rational_str(s: &str) -> Option<BigRational> {
    let ok = |t: &str| {
        let t = t.strip_prefix('-').unwrap_or(t);
        !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit())
    };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    if !ok(n) || !d.bytes().all(|c| c.is_ascii_digit()) || d.is_empty() {
        return None;
    }
    let d = BigInt::from_str(d).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(BigInt::from_str(n).ok()?, d))
}

/// `"p/q"`, `"p"` or a JSON integer.
pub fn rational_from_json(v: &Value, pointer: &str) -> PResult<BigRational> {
    match v {
        Value::String(s) => parse_rational_str(s)
            .ok_or_else(|| ParseError { pointer: pointer.into(), message: format!("malformed rational \"{s}\"") }),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().expect("i64").into())),
        _ => err(pointer, "expected a rational string \"p/q\""),
    }
}

pub fn integer_from_json(v: &Value, pointer: &str) -> PResult<BigInt> {
    let q = rational_from_json(v, pointer)?;
    if !q.is_integer() {
        return err(pointer, format!("expected an integer, got {q}"));
    }
    Ok(q.to_integer())
}

pub fn quad_to_json(x: &QuadFieldElem) -> Value {
    json!({"a": rational_to_json(&x.a), "b": rational_to_json(&x.b), "d": x.d()})
}

/// An object `{"a", "b", "d"}` over `k`, or a bare rational embedded in `k`.
pub fn quad_from_json(v: &Value, pointer: &str, k: QuadField) -> PResult<QuadFieldElem> {
    if !v.is_object() {
        return Ok(k.from_rational(rational_from_json(v, pointer)?));
    }
    let m = object(v, pointer, &["a", "b", "d"], &[])?;
    let d = uint(&m["d"], &child(pointer, "d"))?;
    if d != k.d() {
        return err(&child(pointer, "d"), format!("element of Q(sqrt {d}) in a form over Q(sqrt {})", k.d()));
    }
    Ok(QuadFieldElem::new(
        rational_from_json(&m["a"], &child(pointer, "a"))?,
        rational_from_json(&m["b"], &child(pointer, "b"))?,
        k,
    ))
}

pub fn scalar_to_json<T: Scalar>(x: &T) -> Value {
    let any: &dyn Any = x;
    if let Some(q) = any.downcast_ref::<BigRational>() {
        return rational_to_json(q);
    }
    match any.downcast_ref::<QuadFieldElem>() {
        Some(e) => quad_to_json(e),
        None => Value::String(x.to_string()),
    }
}

pub fn vector_to_json<T: Scalar>(v: &[T]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn int_vector_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

pub fn rational_vector_from_json(v: &Value, pointer: &str) -> PResult<Vec<BigRational>> {
    array(v, pointer)?.iter().enumerate().map(|(i, x)| rational_from_json(x, &child(pointer, i))).collect()
}

pub fn rational_matrix_from_json(v: &Value, pointer: &str) -> PResult<Matrix<BigRational>> {
    let rows: Vec<Vec<BigRational>> = array(v, pointer)?
        .iter()
        .enumerate()
        .map(|(i, r)| rational_vector_from_json(r, &child(pointer, i)))
        .collect::<PResult<_>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return err(&child(pointer, i), format!("row has {} entries, expected {cols}", rows[i].len()));
    }
    Matrix::from_rows(rows, Rationals).or_else(|e| err(pointer, e.to_string()))
}

pub fn field_to_json(tag: FieldTag) -> Value {
    match tag {
        FieldTag::Rational => Value::String("Q".into()),
        FieldTag::Quadratic(k) => json!({"sqrt": k.d()}),
    }
}

pub fn field_from_json(v: &Value, pointer: &str) -> PResult<FieldTag> {
    match v {
        Value::String(s) if s == "Q" => Ok(FieldTag::Rational),
        Value::Object(_) => {
            let m = object(v, pointer, &["sqrt"], &[])?;
            let d = uint(&m["sqrt"], &child(pointer, "sqrt"))?;
            QuadField::new(d).map(FieldTag::Quadratic).or_else(|e| err(&child(pointer, "sqrt"), e.to_string()))
        }
        _ => err(pointer, "expected \"Q\" or {\"sqrt\": d}"),
    }
}

pub fn form_to_json(f: &AnyForm) -> Value {
    fn inner<T: Scalar>(f: &QuadraticForm<T>) -> Value {
        json!({"dim": f.dim(), "field": field_to_json(f.field_tag()), "gram": matrix_to_json(f.gram())})
    }
    match f {
        AnyForm::Rational(q) => inner(q),
        AnyForm::Quadratic(q) => inner(q),
    }
}

pub fn rational_form_to_json(f: &QuadraticForm<BigRational>) -> Value {
    form_to_json(&AnyForm::Rational(f.clone()))
}

fn square_rows<T>(
    gram: &Value,
    pointer: &str,
    dim: usize,
    mut entry: impl FnMut(&Value, &str) -> PResult<T>,
) -> PResult<Vec<Vec<T>>> {
    let rows = array(gram, pointer)?;
    if rows.len() != dim {
        return err(pointer, format!("expected {dim} rows, got {}", rows.len()));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let p = child(pointer, i);
            let cells = array(r, &p)?;
            if cells.len() != dim {
                return err(&p, format!("expected {dim} entries, got {}", cells.len()));
            }
            cells.iter().enumerate().map(|(j, x)| entry(x, &child(&p, j))).collect()
        })
        .collect()
}

fn check_symmetric<T: PartialEq>(rows: &[Vec<T>], pointer: &str) -> PResult<()> {
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i][j] != rows[j][i] {
                return err(
                    &format!("{pointer}/gram/{i}/{j}"),
                    format!("not symmetric: differs from entry ({j}, {i})"),
                );
            }
        }
    }
    Ok(())
}

pub fn form_from_json(v: &Value, pointer: &str) -> PResult<AnyForm> {
    let m = object(v, pointer, &["dim", "field", "gram"], &[])?;
    let dim = uint(&m["dim"], &child(pointer, "dim"))? as usize;
    if dim == 0 {
        return err(&child(pointer, "dim"), "dimension must be positive");
    }
    let gp = child(pointer, "gram");
    match field_from_json(&m["field"], &child(pointer, "field"))? {
        FieldTag::Rational => {
            let rows = square_rows(&m["gram"], &gp, dim, rational_from_json)?;
            check_symmetric(&rows, pointer)?;
            let g = Matrix::from_rows(rows, Rationals).or_else(|e| err(&gp, e.to_string()))?;
            Ok(AnyForm::Rational(QuadraticForm::new(g).or_else(|e| err(&gp, e.to_string()))?))
        }
        FieldTag::Quadratic(k) => {
            let rows = square_rows(&m["gram"], &gp, dim, |x, p| quad_from_json(x, p, k))?;
            check_symmetric(&rows, pointer)?;
            let g = Matrix::from_rows(rows, k).or_else(|e| err(&gp, e.to_string()))?;
            Ok(AnyForm::Quadratic(QuadraticForm::new(g).or_else(|e| err(&gp, e.to_string()))?))
        }
    }
}

pub fn rational_form_from_json(v: &Value, pointer: &str) -> PResult<QuadraticForm<BigRational>> {
    match form_from_json(v, pointer)? {
        AnyForm::Rational(f) => Ok(f),
        AnyForm::Quadratic(_) => err(&child(pointer, "field"), "a form over Q is required here"),
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use crate::forms::RationalForm;

    #[test]
    fn rationals() {
        for (s, q) in [("3", rat(3)), ("-1/2", ratio(-1, 2)), ("4/6", ratio(2, 3)), ("0", rat(0))] {
            assert_eq!(rational_from_json(&json!(s), "").unwrap(), q);
        }
        assert_eq!(rational_to_json(&ratio(-3, 4)), json!("-3/4"));
        assert_eq!(rational_from_json(&json!(-7), "").unwrap(), rat(-7));
        for bad in ["", "1/0", "1/-2", "a", "1.5", "--1", "1/"] {
            assert!(rational_from_json(&json!(bad), "/x").is_err(), "{bad}");
        }
    }

    #[test]
    fn form_round_trip() {
        let f = AnyForm::Rational(RationalForm::q(3));
        let v = form_to_json(&f);
        assert_eq!(form_from_json(&v, "").unwrap(), f);
        assert_eq!(form_to_json(&form_from_json(&v, "").unwrap()), v);
        let g = AnyForm::Quadratic(crate::constructions::bowditch_mess_gram());
        let v = form_to_json(&g);
        assert_eq!(form_from_json(&v, "").unwrap(), g);
        assert_eq!(v["gram"][0][1], json!({"a": "-1/4", "b": "-1/4", "d": 5}));
    }

    #[test]
    fn form_errors_carry_pointers() {
        let v = json!({"dim": 2, "field": "Q", "gram": [["1", "2"], ["3", "1"]]});
        assert_eq!(form_from_json(&v, "").unwrap_err().pointer, "/gram/0/1");
        let v = json!({"dim": 2, "field": "Q", "gram": [["1", "x"], ["0", "1"]]});
        assert_eq!(form_from_json(&v, "").unwrap_err().pointer, "/gram/0/1");
        let v = json!({"dim": 2, "field": "Q", "gram": [["1"], ["0", "1"]]});
        assert_eq!(form_from_json(&v, "").unwrap_err().pointer, "/gram/0");
        let v = json!({"dim": 1, "field": {"sqrt": 4}, "gram": [["1"]]});
        assert_eq!(form_from_json(&v, "").unwrap_err().pointer, "/field/sqrt");
        let v = json!({"dim": 1, "field": "Q", "gram": [["1"]], "extra": 1});
        assert_eq!(form_from_json(&v, "").unwrap_err().pointer, "/extra");
    }

    #[test]
    fn keys_sorted() {
        let s = canonical_string(&json!({"z": 1, "a": 2}));
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
    }
}
