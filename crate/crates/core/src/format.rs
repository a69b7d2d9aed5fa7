//! Inequality files and number formatting.
//!
//! An inequality file is a JSON document
//!
//! ```json
//! {"name": "CHSH", "form": "correlation", "mA": 2, "mB": 2, "kA": 2, "kB": 2,
//!  "coefficients": [[1, 1], [1, -1]], "bound": 2}
//! ```
//!
//! Rationals are integers or `"p/q"` strings. Correlation coefficients are
//! nested `[x][y]` (row = Alice input); probability coefficients are nested
//! `[a][b][x][y]`. A bound extrapolated from a closed form carries
//! `"conjectured": true`.

use num_rational::Rational64;
use serde_json::{json, Map, Value};

use crate::error::{BellError, Result};
use crate::inequality::{
    AnyInequality, BoundProvenance, CorrelationInequality, LocalBound, ProbabilityInequality,
};

pub fn rational_to_json(r: Rational64) -> Value {
    if *r.denom() == 1 {
        json!(*r.numer())
    } else {
        json!(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn parse_rational(v: &Value) -> Result<Rational64> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational64::from_integer)
            .ok_or_else(|| BellError::Parse(format!("coefficient {n} is not an integer"))),
        Value::String(s) => parse_rational_str(s),
        other => Err(BellError::Parse(format!(
            "expected a rational, found {other}"
        ))),
    }
}

pub fn parse_rational_str(s: &str) -> Result<Rational64> {
    let bad = || BellError::Parse(format!("`{s}` is not a rational"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => s
            .parse::<i64>()
            .map(Rational64::from_integer)
            .map_err(|_| bad()),
    }
}

fn bound_fields(map: &mut Map<String, Value>, bound: Option<LocalBound>) {
    if let Some(b) = bound {
        map.insert("bound".into(), rational_to_json(b.value));
        if b.provenance == BoundProvenance::Conjectured {
            map.insert("conjectured".into(), Value::Bool(true));
        }
    }
}

pub fn correlation_to_json(ineq: &CorrelationInequality) -> Value {
    let rows: Vec<Value> = ineq
        .rows()
        .into_iter()
        .map(|r| Value::Array(r.into_iter().map(rational_to_json).collect()))
        .collect();
    let mut map = Map::new();
    map.insert("name".into(), json!(ineq.name()));
    map.insert("form".into(), json!("correlation"));
    map.insert("mA".into(), json!(ineq.m_a()));
    map.insert("mB".into(), json!(ineq.m_b()));
    map.insert("kA".into(), json!(2));
    map.insert("kB".into(), json!(2));
    map.insert("coefficients".into(), Value::Array(rows));
    bound_fields(&mut map, ineq.bound());
    Value::Object(map)
}

pub fn probability_to_json(ineq: &ProbabilityInequality) -> Value {
    let tensor: Vec<Value> = (0..ineq.k_a())
        .map(|a| {
            Value::Array(
                (0..ineq.k_b())
                    .map(|b| {
                        Value::Array(
                            (0..ineq.n_a())
                                .map(|x| {
                                    Value::Array(
                                        (0..ineq.n_b())
                                            .map(|y| rational_to_json(ineq.coeff(a, b, x, y)))
                                            .collect(),
                                    )
                                })
                                .collect(),
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    let mut map = Map::new();
    map.insert("name".into(), json!(ineq.name()));
    map.insert("form".into(), json!("probability"));
    map.insert("mA".into(), json!(ineq.n_a()));
    map.insert("mB".into(), json!(ineq.n_b()));
    map.insert("kA".into(), json!(ineq.k_a()));
    map.insert("kB".into(), json!(ineq.k_b()));
    map.insert("coefficients".into(), Value::Array(tensor));
    bound_fields(&mut map, ineq.bound());
    Value::Object(map)
}

pub fn inequality_to_json(ineq: &AnyInequality) -> Value {
    match ineq {
        AnyInequality::Correlation(c) => correlation_to_json(c),
        AnyInequality::Probability(p) => probability_to_json(p),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| BellError::Parse(format!("missing field `{key}`")))
}

fn count(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| BellError::Parse(format!("`{key}` must be a non-negative integer")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| BellError::Parse(format!("{what} must be an array")))
}

fn sized_array<'a>(v: &'a Value, len: usize, what: &str) -> Result<&'a Vec<Value>> {
    let arr = array(v, what)?;
    if arr.len() != len {
        return Err(BellError::Dimension(format!(
            "{what} has {} entries, expected {len}",
            arr.len()
        )));
    }
    Ok(arr)
}

pub fn inequality_from_json(v: &Value) -> Result<AnyInequality> {
    let obj = v
        .as_object()
        .ok_or_else(|| BellError::Parse("inequality must be a JSON object".into()))?;
    let name = field(obj, "name")?
        .as_str()
        .ok_or_else(|| BellError::Parse("`name` must be a string".into()))?
        .to_string();
    let form = field(obj, "form")?.as_str().unwrap_or_default();
    let m_a = count(obj, "mA")?;
    let m_b = count(obj, "mB")?;
    let bound = match obj.get("bound") {
        None | Some(Value::Null) => None,
        Some(b) => {
            let value = parse_rational(b)?;
            let conjectured = obj
                .get("conjectured")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            Some(if conjectured {
                LocalBound::conjectured(value)
            } else {
                LocalBound::exact(value)
            })
        }
    };
    let coeffs = field(obj, "coefficients")?;
    let ineq: AnyInequality = match form {
        "correlation" => {
            for key in ["kA", "kB"] {
                if let Some(k) = obj.get(key) {
                    if k.as_u64() != Some(2) {
                        return Err(BellError::Parse(format!(
                            "correlation inequalities have binary outcomes; `{key}` must be 2"
                        )));
                    }
                }
            }
            let rows = sized_array(coeffs, m_a, "coefficients")?
                .iter()
                .map(|row| {
                    sized_array(row, m_b, "coefficient row")?
                        .iter()
                        .map(parse_rational)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut c = CorrelationInequality::new(name, rows)?;
            if let Some(b) = bound {
                c = c.with_bound(b);
            }
            c.into()
        }
        "probability" => {
            let k_a = count(obj, "kA")?;
            let k_b = count(obj, "kB")?;
            let mut flat = Vec::with_capacity(k_a * k_b * m_a * m_b);
            for av in sized_array(coeffs, k_a, "coefficients")? {
                for bv in sized_array(av, k_b, "coefficients[a]")? {
                    for xv in sized_array(bv, m_a, "coefficients[a][b]")? {
                        for yv in sized_array(xv, m_b, "coefficients[a][b][x]")? {
                            flat.push(parse_rational(yv)?);
                        }
                    }
                }
            }
            let mut p = ProbabilityInequality::new(name, (m_a, m_b), (k_a, k_b), flat)?;
            if let Some(b) = bound {
                p = p.with_bound(b);
            }
            p.into()
        }
        other => {
            return Err(BellError::Parse(format!(
                "unknown form `{other}` (expected correlation|probability)"
            )))
        }
    };
    Ok(ineq)
}

pub fn inequality_from_str(s: &str) -> Result<AnyInequality> {
    inequality_from_json(&serde_json::from_str(s)?)
}

/// Round to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = digits.clamp(1, 17);
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal text of `x` rounded to `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational(&json!(3)).unwrap(), Rational64::from(3));
        assert_eq!(
            parse_rational(&json!("-2/4")).unwrap(),
            Rational64::new(-1, 2)
        );
        assert_eq!(parse_rational(&json!("7")).unwrap(), Rational64::from(7));
        assert!(parse_rational(&json!("1/0")).is_err());
        assert!(parse_rational(&json!(1.5)).is_err());
        assert_eq!(rational_to_json(Rational64::new(3, 6)), json!("1/2"));
    }

    #[test]
    fn correlation_file_round_trip() {
        let text = r#"{"name":"CHSH","form":"correlation","mA":2,"mB":2,"kA":2,"kB":2,
                       "coefficients":[[1,1],[1,"-1"]],"bound":2}"#;
        let ineq = inequality_from_str(text).unwrap();
        let back = inequality_from_json(&inequality_to_json(&ineq)).unwrap();
        assert_eq!(ineq, back);
        assert_eq!(back.bound().unwrap().value, Rational64::from(2));
    }

    #[test]
    fn probability_file_round_trip() {
        let c = CorrelationInequality::from_integers("c", &[vec![1, 2, 3]]).unwrap();
        let p: AnyInequality = c.to_probability().into();
        let back = inequality_from_json(&inequality_to_json(&p)).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn conjectured_flag_round_trips() {
        let c = CorrelationInequality::from_integers("c", &[vec![1]])
            .unwrap()
            .with_bound(LocalBound::conjectured(Rational64::from(1)));
        let v = correlation_to_json(&c);
        assert_eq!(v["conjectured"], json!(true));
        let back = inequality_from_json(&v).unwrap();
        assert!(back.bound().unwrap().is_conjectured());
    }

    #[test]
    fn malformed_files_rejected() {
        assert!(inequality_from_str(
            r#"{"name":"x","form":"correlation","mA":2,"mB":1,"coefficients":[[1]]}"#
        )
        .is_err());
        assert!(inequality_from_str(
            r#"{"name":"x","form":"other","mA":1,"mB":1,"coefficients":[[1]]}"#
        )
        .is_err());
        assert!(inequality_from_str(
            r#"{"form":"correlation","mA":1,"mB":1,"coefficients":[[1]]}"#
        )
        .is_err());
        assert!(inequality_from_str(
            r#"{"name":"x","form":"correlation","mA":1,"mB":1,"kA":3,"coefficients":[[1]]}"#
        )
        .is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.828427124746, 5), "0.82843");
        assert_eq!(format_sig(std::f64::consts::FRAC_1_SQRT_2, 6), "0.707107");
        assert_eq!(format_sig(12.0, 6), "12");
        assert_eq!(format_sig(2.0 * 2f64.sqrt(), 15), "2.82842712474619");
    }
}
