use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value as Json};

use super::eval::Value;
use crate::geometry::{Form, VectorField, VectorValuedForm};
use crate::scalar::{fmt_poly, CoordKind, CoordinateId, Generator, Poly, Rational, ScalarExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}` (expected text, latex or json)"
            )),
        }
    }
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Text => text(value),
        Format::Latex => latex(value),
        Format::Json => serde_json::to_string_pretty(&to_json(value)).expect("serializable"),
    }
}

/// Terms of a value as (coefficient, basis slots, vector slot).
fn terms(value: &Value) -> Vec<(ScalarExpr, Vec<usize>, Option<usize>)> {
    match value {
        Value::Scalar(s) if s.is_zero() => vec![],
        Value::Scalar(s) => vec![(s.clone(), vec![], None)],
        Value::Form(w) => form_terms(w),
        Value::Field(x) => field_terms(x, &[]),
        Value::VectorValued(k) => vector_valued_terms(k),
    }
}

fn form_terms(w: &Form) -> Vec<(ScalarExpr, Vec<usize>, Option<usize>)> {
    w.terms()
        .map(|(i, c)| (c.clone(), i.to_vec(), None))
        .collect()
}

fn field_terms(x: &VectorField, slots: &[usize]) -> Vec<(ScalarExpr, Vec<usize>, Option<usize>)> {
    x.comps()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(s, c)| (c.clone(), slots.to_vec(), Some(s)))
        .collect()
}

fn vector_valued_terms(k: &VectorValuedForm) -> Vec<(ScalarExpr, Vec<usize>, Option<usize>)> {
    k.terms()
        .flat_map(|(i, x)| field_terms(x, &i.to_vec()))
        .collect()
}

fn m_of(value: &Value) -> Option<usize> {
    match value {
        Value::Scalar(_) => None,
        Value::Form(w) => Some(w.m()),
        Value::Field(x) => Some(x.m()),
        Value::VectorValued(k) => Some(k.m()),
    }
}

fn coord(slot: usize, m: usize) -> CoordinateId {
    CoordinateId::from_slot(slot, m)
}

/// Text that parses back to the same value. The zero of any kind renders
/// as `0`.
pub fn text(value: &Value) -> String {
    let m = m_of(value).unwrap_or(1);
    let ts = terms(value);
    if ts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (c, slots, vector)) in ts.iter().enumerate() {
        let mut basis: Vec<String> = Vec::new();
        if !slots.is_empty() {
            basis.push(
                slots
                    .iter()
                    .map(|s| format!("d{}", coord(*s, m)))
                    .collect::<Vec<_>>()
                    .join("^"),
            );
        }
        if let Some(s) = vector {
            basis.push(format!("@{}", coord(*s, m)));
        }
        let basis = basis.join(" & ");
        let term = if basis.is_empty() {
            let s = c.to_string();
            if n > 0 && (s.contains(" + ") || s.contains(" - ")) {
                format!("({s})")
            } else {
                s
            }
        } else if c.is_one() {
            basis
        } else if (-c).is_one() {
            format!("-{basis}")
        } else {
            let s = c.to_string();
            if s.contains(" + ") || s.contains(" - ") {
                format!("({s})*{basis}")
            } else {
                format!("{s}*{basis}")
            }
        };
        if n == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            write!(out, " - {rest}").unwrap();
        } else {
            write!(out, " + {term}").unwrap();
        }
    }
    out
}

fn latex_coord(c: CoordinateId) -> String {
    match c.kind {
        CoordKind::Base => format!("x^{{{}}}", c.index),
        CoordKind::Fiber => format!("v^{{{}}}", c.index),
    }
}

fn latex_generator(g: &Generator) -> String {
    match g {
        Generator::Coord(c) => latex_coord(*c),
        Generator::Partial(p) if p.wrt().is_empty() => p.symbol.name().to_string(),
        Generator::Partial(p) => {
            let order = p.wrt().len();
            let top = if order == 1 {
                "\\partial".to_string()
            } else {
                format!("\\partial^{{{order}}}")
            };
            let bottom: String = p
                .wrt()
                .iter()
                .map(|c| format!("\\partial {}", latex_coord(*c)))
                .collect();
            format!("\\frac{{{top} {}}}{{{bottom}}}", p.symbol.name())
        }
    }
}

fn latex_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (mono, q)) in p.terms().rev().enumerate() {
        let abs = q.abs();
        if q.is_negative() {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let coeff = if abs.is_integer() {
            abs.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
        };
        let factors: Vec<String> = mono
            .factors()
            .iter()
            .map(|(g, e)| {
                let base = latex_generator(g);
                if *e == 1 {
                    base
                } else if matches!(g, Generator::Partial(p) if p.wrt().is_empty()) {
                    format!("{base}^{{{e}}}")
                } else {
                    format!("\\left({base}\\right)^{{{e}}}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&coeff);
        } else {
            if !abs.is_one() {
                out.push_str(&coeff);
                out.push(' ');
            }
            out.push_str(&factors.join(" "));
        }
    }
    out
}

pub fn latex_scalar(s: &ScalarExpr) -> String {
    if s.is_polynomial() {
        latex_poly(s.numer())
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            latex_poly(s.numer()),
            latex_poly(s.denom())
        )
    }
}

fn latex(value: &Value) -> String {
    let m = m_of(value).unwrap_or(1);
    let ts = terms(value);
    if ts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (c, slots, vector)) in ts.iter().enumerate() {
        let mut basis = slots
            .iter()
            .map(|s| format!("\\mathrm{{d}}{}", latex_coord(coord(*s, m))))
            .collect::<Vec<_>>()
            .join("\\wedge ");
        if let Some(s) = vector {
            if !basis.is_empty() {
                basis.push_str("\\otimes ");
            }
            write!(basis, "\\partial_{{{}}}", latex_coord(coord(*s, m))).unwrap();
        }
        let negative = c
            .numer()
            .leading_term()
            .is_some_and(|(_, q)| q.is_negative())
            && c.numer().len() == 1;
        let shown = if negative { -c } else { c.clone() };
        let coeff = if basis.is_empty() {
            latex_scalar(&shown)
        } else if shown.is_one() {
            String::new()
        } else if shown.numer().len() > 1 && shown.is_polynomial() {
            format!("\\left({}\\right)", latex_scalar(&shown))
        } else {
            latex_scalar(&shown)
        };
        if negative {
            out.push('-');
        } else if n > 0 {
            out.push('+');
        }
        out.push_str(&coeff);
        out.push_str(&basis);
    }
    out
}

/// Numerator and denominator with integer coefficients, so every rational
/// in the output reads as `p/q`.
fn json_coefficient(c: &ScalarExpr) -> Json {
    let lcm = c
        .numer()
        .terms()
        .fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let scale = Rational::from_integer(lcm);
    json!({ "num": fmt_poly(&c.numer().scale(&scale)), "den": fmt_poly(&c.denom().scale(&scale)) })
}

pub fn to_json(value: &Value) -> Json {
    let m = m_of(value);
    let (kind, degree) = match value {
        Value::Scalar(_) => ("scalar", 0),
        Value::Form(w) => ("form", w.degree()),
        Value::Field(_) => ("field", 0),
        Value::VectorValued(k) => ("vector-valued", k.degree()),
    };
    let mm = m.unwrap_or(1);
    let terms: Vec<Json> = terms(value)
        .into_iter()
        .map(|(c, slots, vector)| {
            let mut index: Vec<String> = slots
                .iter()
                .map(|s| format!("d{}", coord(*s, mm)))
                .collect();
            if let Some(s) = vector {
                index.push(format!("@{}", coord(s, mm)));
            }
            json!({ "index": index, "coeff": json_coefficient(&c) })
        })
        .collect();
    json!({ "kind": kind, "m": m, "degree": degree, "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::eval_str;
    use crate::lifts::tautological_field;

    fn run(s: &str) -> Value {
        eval_str(s, None).unwrap().unwrap()
    }

    #[test]
    fn text_examples() {
        assert_eq!(text(&run("m=1; dx1^dv1")), "dx1^dv1");
        assert_eq!(
            text(&run("m=2; (x1 + v2)*dx1 - 3/2*x2*dv2")),
            "(x1 + v2)*dx1 - 3/2*x2*dv2"
        );
        assert_eq!(text(&run("m=1; dx1 & @v1")), "dx1 & @v1");
        assert_eq!(text(&run("m=1; 0*dx1")), "0");
    }

    #[test]
    fn latex_examples() {
        let xi = Value::Field(tautological_field(2));
        assert_eq!(latex(&xi), "v^{1}\\partial_{v^{1}}+v^{2}\\partial_{v^{2}}");
        assert_eq!(
            latex(&run("m=1; -x1*dx1^dv1")),
            "-x^{1}\\mathrm{d}x^{1}\\wedge \\mathrm{d}v^{1}"
        );
        assert_eq!(
            latex(&run("m=1; D(f, x1)")),
            "\\frac{\\partial f}{\\partial x^{1}}"
        );
        assert_eq!(
            latex(&run("m=1; 1/(x1^2 + 1)")),
            "\\frac{1}{\\left(x^{1}\\right)^{2}+1}"
        );
    }

    #[test]
    fn json_shape() {
        let j = to_json(&run("m=2; x1/(x2 + 1)*dx1^dv2"));
        assert_eq!(j["kind"], "form");
        assert_eq!(j["degree"], 2);
        assert_eq!(j["m"], 2);
        assert_eq!(j["terms"][0]["index"], json!(["dx1", "dv2"]));
        assert_eq!(
            j["terms"][0]["coeff"],
            json!({"num": "x1", "den": "x2 + 1"})
        );
    }
}
