use std::collections::BTreeMap;

use super::parser::{BinOp, DslDocument, Expr, Func, Pos};
use super::DslError;
use crate::geometry::{BaseForm, BaseVectorField, Form, MultiIndex, VectorField, VectorValuedForm};
use crate::lifts::{
    complete_lift_form, complete_lift_function, complete_lift_vector, mirror_map,
    tautological_field,
};
use crate::operators::{d_b, insertion_derivation, lie_derivation};
use crate::scalar::ScalarExpr;

/// The value of a DSL expression. Degree-0 forms are scalars and degree-0
/// vector-valued forms are vector fields.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(ScalarExpr),
    Form(Form),
    Field(VectorField),
    VectorValued(VectorValuedForm),
}

impl Value {
    pub fn from_form(w: Form) -> Value {
        if w.degree() == 0 {
            Value::Scalar(w.as_scalar())
        } else {
            Value::Form(w)
        }
    }

    pub fn from_vector_valued(k: VectorValuedForm) -> Value {
        if k.degree() == 0 {
            Value::Field(k.get(&MultiIndex::EMPTY))
        } else {
            Value::VectorValued(k)
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Form(_) => "form",
            Value::Field(_) => "field",
            Value::VectorValued(_) => "vector-valued form",
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Scalar(s) => s.is_zero(),
            Value::Form(w) => w.is_zero(),
            Value::Field(x) => x.is_zero(),
            Value::VectorValued(k) => k.is_zero(),
        }
    }

    fn as_form(&self, m: usize) -> Option<Form> {
        match self {
            Value::Scalar(s) => Some(Form::scalar(m, s.clone())),
            Value::Form(w) => Some(w.clone()),
            _ => None,
        }
    }
}

struct Env<'a> {
    m: usize,
    vars: BTreeMap<&'a str, Value>,
}

/// Evaluates the bindings and final expression of a document. A document
/// without a final expression evaluates to `None`.
pub fn evaluate(doc: &DslDocument) -> Result<Option<Value>, DslError> {
    let mut env = Env {
        m: doc.m,
        vars: BTreeMap::new(),
    };
    for (name, e) in &doc.bindings {
        let v = env.eval(e)?;
        env.vars.insert(name.as_str(), v);
    }
    doc.result.as_ref().map(|e| env.eval(e)).transpose()
}

fn type_error(pos: Pos, message: String) -> DslError {
    DslError::Type {
        message,
        line: pos.line,
        column: pos.column,
    }
}

fn lift_error(pos: Pos) -> impl Fn(crate::Error) -> DslError {
    move |source| DslError::Eval {
        source,
        line: pos.line,
        column: pos.column,
    }
}

fn base_field(x: &VectorField) -> crate::Result<BaseVectorField> {
    if let Some(c) = x.fiber_part().iter().find(|c| !c.is_zero()) {
        return Err(crate::Error::NotBaseOnly(c.to_string()));
    }
    BaseVectorField::new(x.m(), x.base_part().to_vec())
}

impl Env<'_> {
    fn eval(&self, e: &Expr) -> Result<Value, DslError> {
        let m = self.m;
        Ok(match e {
            Expr::Num(q) => Value::Scalar(ScalarExpr::rational(q.clone())),
            Expr::Coord(c) => Value::Scalar(ScalarExpr::coord(*c)),
            Expr::Differential(c) => Value::Form(Form::coframe(m, c.slot(m))),
            Expr::Frame(c) => Value::Field(VectorField::coordinate(m, c.slot(m))),
            Expr::Symbol(p) => Value::Scalar(ScalarExpr::symbol_partial(p.clone())),
            Expr::Var(name) => self.vars[name.as_str()].clone(),
            Expr::Tautological => Value::Field(tautological_field(m)),
            Expr::Mirror => Value::VectorValued(mirror_map(m)),
            Expr::Identity => Value::VectorValued(VectorValuedForm::identity(m)),
            Expr::Neg(a) => self.negate(self.eval(a)?),
            Expr::Bin(op, a, b, pos) => {
                let literal = match (op, &**b) {
                    (BinOp::Caret, Expr::Num(q)) if q.is_integer() => {
                        i32::try_from(q.to_integer()).ok()
                    }
                    _ => None,
                };
                self.binary(*op, self.eval(a)?, self.eval(b)?, literal, *pos)?
            }
            Expr::Call(f, args, pos) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(a))
                    .collect::<Result<Vec<_>, _>>()?;
                self.call(*f, vals, *pos)?
            }
        })
    }

    fn binary(
        &self,
        op: BinOp,
        a: Value,
        b: Value,
        literal: Option<i32>,
        pos: Pos,
    ) -> Result<Value, DslError> {
        use Value::*;
        let m = self.m;
        let mismatch = |a: &Value, b: &Value| {
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Caret => "^",
                BinOp::Tensor => "&",
            };
            type_error(
                pos,
                format!("cannot apply `{sym}` to {} and {}", a.kind(), b.kind()),
            )
        };
        Ok(match op {
            BinOp::Add | BinOp::Sub => {
                let b = if op == BinOp::Sub { self.negate(b) } else { b };
                match (a, b) {
                    (Scalar(x), Scalar(y)) => Scalar(x + y),
                    (Form(x), Form(y)) if x.degree() == y.degree() => Value::from_form(x.add(&y)),
                    (Field(x), Field(y)) => Field(x.add(&y)),
                    (VectorValued(x), VectorValued(y)) if x.degree() == y.degree() => {
                        Value::from_vector_valued(x.add(&y))
                    }
                    (a, b) => return Err(mismatch(&a, &b)),
                }
            }
            BinOp::Mul => match (a, b) {
                (Scalar(x), Scalar(y)) => Scalar(x * y),
                (Scalar(s), Form(w)) | (Form(w), Scalar(s)) => Value::from_form(w.mul_scalar(&s)),
                (Scalar(s), Field(x)) | (Field(x), Scalar(s)) => Field(x.mul_scalar(&s)),
                (Scalar(s), VectorValued(k)) | (VectorValued(k), Scalar(s)) => {
                    Value::from_vector_valued(k.mul_scalar(&s))
                }
                (a, b) => return Err(mismatch(&a, &b)),
            },
            BinOp::Div => {
                let Scalar(s) = b else {
                    return Err(mismatch(&a, &b));
                };
                let r = ScalarExpr::one().div(&s).map_err(lift_error(pos))?;
                self.binary(BinOp::Mul, a, Scalar(r), None, pos)?
            }
            BinOp::Caret => match (a, b, literal) {
                (Scalar(s), _, Some(n)) => Scalar(s.pow(n).map_err(lift_error(pos))?),
                (a, b, _) => match (a.as_form(m), b.as_form(m)) {
                    (Some(x), Some(y)) => Value::from_form(x.wedge(&y)),
                    _ => return Err(mismatch(&a, &b)),
                },
            },
            BinOp::Tensor => match (a.as_form(m), b) {
                (Some(w), Field(x)) => {
                    let terms = w
                        .terms()
                        .map(|(i, c)| (*i, x.mul_scalar(c)))
                        .collect::<Vec<_>>();
                    Value::from_vector_valued(VectorValuedForm::from_terms(m, w.degree(), terms))
                }
                (_, b) => return Err(mismatch(&a, &b)),
            },
        })
    }

    fn negate(&self, v: Value) -> Value {
        match v {
            Value::Scalar(s) => Value::Scalar(-s),
            Value::Form(w) => Value::Form(w.neg()),
            Value::Field(x) => Value::Field(x.neg()),
            Value::VectorValued(k) => Value::VectorValued(k.neg()),
        }
    }

    fn call(&self, f: Func, args: Vec<Value>, pos: Pos) -> Result<Value, DslError> {
        use Value::*;
        let m = self.m;
        let bad = |args: &[Value]| {
            let kinds: Vec<&str> = args.iter().map(Value::kind).collect();
            type_error(
                pos,
                format!("`{}` does not apply to {}", f.name(), kinds.join(", ")),
            )
        };
        let err = lift_error(pos);
        let mut it = args.clone().into_iter();
        let first = it.next().expect("arity checked by the parser");
        let second = it.next();
        Ok(match (f, first, second) {
            (Func::D, a, None) => match a.as_form(m) {
                Some(w) => Value::from_form(w.d()),
                None => return Err(bad(&args)),
            },
            (Func::Db, a, None) => match a.as_form(m) {
                Some(w) => Value::from_form(d_b(&w)),
                None => return Err(bad(&args)),
            },
            (Func::Pull, a, None) => match a.as_form(m) {
                Some(w) => {
                    BaseForm::new(w).map_err(&err)?;
                    a
                }
                None => return Err(bad(&args)),
            },
            (Func::Clift, Scalar(s), None) => Scalar(complete_lift_function(m, &s).map_err(&err)?),
            (Func::Clift, Form(w), None) => {
                Form(complete_lift_form(&BaseForm::new(w).map_err(&err)?))
            }
            (Func::Clift, Field(x), None) => {
                Field(complete_lift_vector(&base_field(&x).map_err(&err)?))
            }
            (Func::Vlift, Field(x), None) => Field(crate::lifts::vertical_lift_vector(
                &base_field(&x).map_err(&err)?,
            )),
            (Func::Ins, Field(x), Some(b)) => match b.as_form(m) {
                Some(w) if w.degree() > 0 => Value::from_form(w.interior(&x)),
                Some(_) => Scalar(ScalarExpr::zero()),
                None => return Err(bad(&args)),
            },
            (Func::Ins, VectorValued(k), Some(b)) => match b.as_form(m) {
                Some(w) => Value::from_form(insertion_derivation(&k, &w).map_err(&err)?),
                None => return Err(bad(&args)),
            },
            (Func::Lie, Field(x), Some(Field(y))) => Field(x.bracket(&y)),
            (Func::Lie, Field(x), Some(VectorValued(k))) => {
                Value::from_vector_valued(k.lie(&x).map_err(&err)?)
            }
            (Func::Lie, Field(x), Some(b)) => match b.as_form(m) {
                Some(w) => Value::from_form(w.lie(&x)),
                None => return Err(bad(&args)),
            },
            (Func::Lie, VectorValued(k), Some(b)) => match b.as_form(m) {
                Some(w) => Value::from_form(lie_derivation(&k, &w).map_err(&err)?),
                None => return Err(bad(&args)),
            },
            _ => return Err(bad(&args)),
        })
    }
}

/// Parses and evaluates `text`.
pub fn eval_str(text: &str, default_m: Option<usize>) -> Result<Option<Value>, DslError> {
    evaluate(&super::parse_with_dimension(text, default_m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaseForm;

    fn rational(n: i64) -> crate::scalar::Rational {
        crate::scalar::Rational::from_integer(n.into())
    }

    fn run(s: &str) -> Value {
        eval_str(s, None).unwrap().unwrap()
    }

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    #[test]
    fn angular_form_lift() {
        let got = run("m=2; clift((-x2*dx1 + x1*dx2)/(x1^2+x2^2))");
        let r2 = &x(1) * &x(1) + &x(2) * &x(2);
        let omega =
            BaseForm::one_form(2, &[(-x(2)).div(&r2).unwrap(), x(1).div(&r2).unwrap()]).unwrap();
        assert_eq!(got, Value::Form(complete_lift_form(&omega)));
        let potential = (&x(1) * &v(2) - &x(2) * &v(1)).div(&r2).unwrap();
        assert_eq!(got, Value::Form(Form::scalar(2, potential).d()));
    }

    #[test]
    fn small_examples() {
        assert_eq!(run("m=1; db(v1)"), Value::Form(Form::dx(1, 1)));
        assert_eq!(run("m=1; d(d(f))"), Value::Form(Form::zero(1, 2)));
        assert_eq!(
            run("m=1; x1^3 - x1*x1^2"),
            Value::Scalar(ScalarExpr::zero())
        );
        assert_eq!(
            run("m=1; dx1^2"),
            Value::Form(Form::dx(1, 1).scale(&rational(2)))
        );
        assert_eq!(run("m=2; ins(xi, dv1^dv2)"), run("m=2; v1*dv2 - v2*dv1"));
        assert_eq!(run("m=1; lie(xi, clift(x1^2))"), run("m=1; clift(x1^2)"));
        assert_eq!(
            run("m=2; dx1 & @v1 + dx2 & @v2"),
            Value::VectorValued(mirror_map(2))
        );
        assert_eq!(run("m=2; lie(B, v1*v2)"), run("m=2; db(v1*v2)"));
        assert_eq!(run("m=1; let w = f*dv1\nins(id, w)"), run("m=1; f*dv1"));
        assert_eq!(
            run("m=1; lie(@x1, @v1)"),
            Value::Field(VectorField::zero(1))
        );
    }

    #[test]
    fn type_and_domain_errors() {
        assert!(matches!(
            eval_str("m=1; dx1 + 1", None),
            Err(DslError::Type { .. })
        ));
        assert!(matches!(
            eval_str("m=1; clift(v1)", None),
            Err(DslError::Eval { .. })
        ));
        assert!(matches!(
            eval_str("m=1; 1/(x1 - x1)", None),
            Err(DslError::Eval { .. })
        ));
        assert!(matches!(
            eval_str("m=1; @x1 & dx1", None),
            Err(DslError::Type { .. })
        ));
        assert_eq!(eval_str("m=1", None), Ok(None));
    }
}
