//! Output formats for Laurent polynomials with scalar coefficients, and the JSON reader.

use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::grouplalg::Laurent;
use crate::parse::parse_scalar;
use crate::scalars::{Coeff, Scalar};
use crate::weight::{Weight, MAX_COORDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Latex,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            _ => Err(Error::InvalidConfig(format!("unknown format {s}"))),
        }
    }
}

/// Terms sorted lexicographically by exponent vector.
fn sorted_terms(f: &Laurent<Scalar>) -> Vec<(&Weight, &Scalar)> {
    let mut t: Vec<_> = f.terms().collect();
    t.sort_by(|a, b| a.0.coords().cmp(b.0.coords()));
    t
}

pub fn to_json(f: &Laurent<Scalar>) -> Value {
    Value::Array(
        sorted_terms(f)
            .into_iter()
            .map(|(w, c)| json!({"exp": w.coords(), "coeff": c.to_json()}))
            .collect(),
    )
}

fn scalar_from_json(v: &Value) -> Result<Scalar> {
    let field = |k: &str| {
        v.get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("coefficient lacks string field {k:?}")))
    };
    parse_scalar(field("num")?, None)?.div(&parse_scalar(field("den")?, None)?)
}

/// Reads the array written by [`to_json`]; `rank` is used for the empty polynomial.
pub fn from_json(v: &Value, rank: usize) -> Result<Laurent<Scalar>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected a JSON array of terms".into()))?;
    let mut out = Laurent::zero(rank);
    for t in arr {
        let exp = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("term lacks \"exp\"".into()))?;
        let coords: Vec<i32> = exp
            .iter()
            .map(|e| e.as_i64().and_then(|x| i32::try_from(x).ok()).ok_or_else(|| Error::Parse("bad exponent".into())))
            .collect::<Result<_>>()?;
        if coords.len() != rank || coords.len() > MAX_COORDS {
            return Err(Error::Parse(format!("exponent of length {} for rank {rank}", coords.len())));
        }
        let c = scalar_from_json(t.get("coeff").ok_or_else(|| Error::Parse("term lacks \"coeff\"".into()))?)?;
        out.add_term(Weight::new(&coords), c);
    }
    Ok(out)
}

pub fn to_latex(f: &Laurent<Scalar>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (w, c)) in f.terms().rev().enumerate() {
        if idx > 0 {
            s.push_str(" + ");
        }
        let mono: String = w
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { format!("x_{{{}}}", i + 1) } else { format!("x_{{{}}}^{{{e}}}", i + 1) })
            .collect();
        if mono.is_empty() {
            s.push_str(&c.to_latex());
        } else if c.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("\\left({}\\right){mono}", c.to_latex()));
        }
    }
    s
}

pub fn render(f: &Laurent<Scalar>, format: Format) -> String {
    match format {
        Format::Plain => f.to_string(),
        Format::Json => to_json(f).to_string(),
        Format::Latex => to_latex(f),
    }
}

/// Coefficients reduced to lowest terms.
pub fn reduce(f: &Laurent<Scalar>) -> Laurent<Scalar> {
    f.map_coeffs(|c| Ok(c.reduced())).expect("reduction is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_laurent;

    #[test]
    fn json_round_trip() {
        let f = parse_laurent("(k-1)*(k+1)*g1/(k^4*g1^3*q^3+1)*x1^-1 + 1/3*x2 - k_sh^-2*g2_sh*x1*x3^2", 3, None).unwrap();
        let v = to_json(&f);
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        assert_eq!(arr[0]["exp"], json!([-1, 0, 0]));
        let text = v.to_string();
        let back = from_json(&serde_json::from_str(&text).unwrap(), 3).unwrap();
        assert_eq!(back, f);
        assert_eq!(from_json(&json!([]), 2).unwrap(), Laurent::zero(2));
        assert!(from_json(&json!([{"exp": [1], "coeff": {"num": "1", "den": "1"}}]), 3).is_err());
    }

    #[test]
    fn latex_shape() {
        let f = parse_laurent("(k-1)/(q-1)*x1 + x2^2", 2, None).unwrap();
        let s = to_latex(&f);
        assert!(s.contains("x_{2}^{2}"), "{s}");
        assert!(s.contains("\\frac{"), "{s}");
        assert_eq!("latex".parse::<Format>().unwrap(), Format::Latex);
        assert!("html".parse::<Format>().is_err());
    }
}
