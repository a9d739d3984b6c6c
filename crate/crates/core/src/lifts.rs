//! Natural lifts from the base chart to the tangent manifold, and the two
//! canonical objects `ξ = Σ v^i ∂v^i` and `B = Σ dx^j ⊗ ∂v^j`.

use crate::error::{Error, Result};
use crate::geometry::{
    BaseForm, BaseVectorField, Form, MultiIndex, Tensor, VectorField, VectorValuedForm,
};
use crate::scalar::{Coefficient, CoordinateId, ScalarExpr};

/// `π*α`: the same coefficients and `dx` indices, read on the tangent manifold.
pub fn pullback<C: Coefficient>(a: &BaseForm<C>) -> Form<C> {
    a.form().clone()
}

/// `π⋆X = X^i ∂v^i`.
pub fn vertical_lift_vector<C: Coefficient>(x: &BaseVectorField<C>) -> VectorField<C> {
    VectorField::vertical(x.m(), x.comps())
}

/// `f̃ = v^j ∂f/∂x^j`.
pub fn complete_lift_function<C: Coefficient>(m: usize, f: &C) -> Result<C> {
    if !f.is_base_only() {
        return Err(Error::NotBaseOnly(format!("{f:?}")));
    }
    Ok(fiber_derivative(m, f))
}

/// `v^j ∂f/∂x^j` without the base-only check.
fn fiber_derivative<C: Coefficient>(m: usize, f: &C) -> C {
    let mut acc = C::zero();
    for j in 1..=m {
        let df = f.partial(CoordinateId::base(j as u8));
        if !df.is_zero() {
            acc = acc.add(&C::coordinate(CoordinateId::fiber(j as u8)).mul(&df));
        }
    }
    acc
}

/// `X̃ = X^i ∂x^i + v^j (∂X^i/∂x^j) ∂v^i`.
pub fn complete_lift_vector<C: Coefficient>(x: &BaseVectorField<C>) -> VectorField<C> {
    let m = x.m();
    let mut comps = x.comps().to_vec();
    comps.extend(x.comps().iter().map(|c| fiber_derivative(m, c)));
    VectorField::new(m, comps).expect("2m components")
}

/// Complete lift of a base form: for `ω = o_I dx^I`,
/// `ω̃ = (v^j ∂_j o_I) dx^I + o_I Σ_k dx^{i1} ∧ … ∧ dv^{ik} ∧ … ∧ dx^{ip}`.
pub fn complete_lift_form<C: Coefficient>(a: &BaseForm<C>) -> Form<C> {
    let form = a.form();
    let m = form.m();
    if form.degree() == 0 {
        return Form::scalar(m, fiber_derivative(m, &form.as_scalar()));
    }
    let mut terms = Vec::new();
    for (idx, o) in form.terms() {
        terms.push((*idx, fiber_derivative(m, o)));
        for slot in idx.slots() {
            let (rest, sign_out) = idx.remove(slot).expect("slot in index");
            let (k, sign_in) = MultiIndex::single(m + slot)
                .wedge(&rest)
                .expect("dv slot is free");
            terms.push((
                k,
                if sign_out * sign_in < 0 {
                    o.neg()
                } else {
                    o.clone()
                },
            ));
        }
    }
    Form::from_terms(m, form.degree(), terms)
}

/// The tautological field `ξ = Σ v^i ∂v^i`.
pub fn tautological_field<C: Coefficient>(m: usize) -> VectorField<C> {
    let v: Vec<C> = (1..=m)
        .map(|i| C::coordinate(CoordinateId::fiber(i as u8)))
        .collect();
    VectorField::vertical(m, &v)
}

/// The mirror map `B = Σ dx^j ⊗ ∂v^j`.
pub fn mirror_map<C: Coefficient>(m: usize) -> VectorValuedForm<C> {
    let values = (0..2 * m)
        .map(|s| {
            if s < m {
                VectorField::coordinate(m, m + s)
            } else {
                VectorField::zero(m)
            }
        })
        .collect();
    VectorValuedForm::endomorphism(m, values).expect("2m values")
}

/// One factor of a tensor monomial on the base.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseFactor<C = ScalarExpr> {
    Vector(BaseVectorField<C>),
    Covector(BaseForm<C>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMode {
    Vertical,
    Complete,
}

fn factor_tensor<C: Coefficient>(f: &BaseFactor<C>, complete: bool) -> Result<Tensor<C>> {
    Ok(match f {
        BaseFactor::Vector(x) => Tensor::from_vector(&if complete {
            complete_lift_vector(x)
        } else {
            vertical_lift_vector(x)
        }),
        BaseFactor::Covector(a) => {
            if a.degree() != 1 {
                return Err(Error::UnsupportedDegree(a.degree()));
            }
            Tensor::from_covector(&if complete {
                complete_lift_form(a)
            } else {
                pullback(a)
            })
        }
    })
}

fn product<C: Coefficient>(
    factors: &[BaseFactor<C>],
    complete_at: Option<usize>,
) -> Result<Tensor<C>> {
    let mut acc: Option<Tensor<C>> = None;
    for (k, f) in factors.iter().enumerate() {
        let t = factor_tensor(f, complete_at == Some(k))?;
        acc = Some(match acc {
            Some(a) => a.tensor(&t),
            None => t,
        });
    }
    acc.ok_or(Error::ArityMismatch {
        expected: 1,
        found: 0,
    })
}

/// Lift of a sum of tensor monomials. Vertical mode lifts every vector factor
/// vertically and pulls back every covector; complete mode sums, over the
/// factor positions, the products with that one factor completely lifted.
pub fn lift_tensor<C: Coefficient>(
    monomials: &[Vec<BaseFactor<C>>],
    mode: LiftMode,
) -> Result<Tensor<C>> {
    let mut acc: Option<Tensor<C>> = None;
    for mono in monomials {
        let t = match mode {
            LiftMode::Vertical => product(mono, None)?,
            LiftMode::Complete => {
                let mut sum: Option<Tensor<C>> = None;
                for k in 0..mono.len() {
                    let p = product(mono, Some(k))?;
                    sum = Some(match sum {
                        Some(s) => s.add(&p),
                        None => p,
                    });
                }
                sum.ok_or(Error::ArityMismatch {
                    expected: 1,
                    found: 0,
                })?
            }
        };
        acc = Some(match acc {
            Some(a) => a.add(&t),
            None => t,
        });
    }
    acc.ok_or(Error::ArityMismatch {
        expected: 1,
        found: 0,
    })
}

/// The identity endomorphism of the base as a tensor sum `Σ dx^i ⊗ ∂x^i`.
pub fn base_identity<C: Coefficient>(m: usize) -> Vec<Vec<BaseFactor<C>>> {
    (1..=m)
        .map(|i| {
            vec![
                BaseFactor::Covector(BaseForm::dx(m, i)),
                BaseFactor::Vector(BaseVectorField::coordinate(m, i)),
            ]
        })
        .collect()
}

/// `B S = ξ`.
pub fn is_spray(s: &VectorField<ScalarExpr>) -> bool {
    let m = s.m();
    mirror_map::<ScalarExpr>(m).apply(s) == tautological_field(m)
}

/// The function `λ` with `L_W B = λ B`, when one exists.
pub fn is_lambda_mirror(w: &VectorField<ScalarExpr>) -> Option<ScalarExpr> {
    let m = w.m();
    let b = mirror_map::<ScalarExpr>(m);
    let lwb = b.lie(w).expect("degree one");
    if lwb.is_zero() {
        return Some(ScalarExpr::zero());
    }
    // B(∂x^1) = ∂v^1, so the candidate is the matching entry of L_W B.
    let lambda = lwb.column(0).component(m).clone();
    lwb.sub(&b.mul_scalar(&lambda)).is_zero().then_some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FunctionSymbol;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn n(k: i64) -> ScalarExpr {
        ScalarExpr::integer(k)
    }

    type V = VectorField<ScalarExpr>;
    type F = Form<ScalarExpr>;

    #[test]
    fn vertical_lift_of_coordinate_field() {
        assert_eq!(
            vertical_lift_vector(&BaseVectorField::<ScalarExpr>::coordinate(2, 1)),
            V::d_v(2, 1)
        );
        let x = BaseVectorField::new(2, vec![n(0), x(1)]).unwrap();
        assert_eq!(
            vertical_lift_vector(&x),
            V::d_v(2, 2).mul_scalar(&ScalarExpr::x(1))
        );
    }

    #[test]
    fn complete_lift_of_functions() {
        assert_eq!(complete_lift_function(2, &x(2)).unwrap(), v(2));
        assert!(complete_lift_function(2, &n(7)).unwrap().is_zero());
        assert_eq!(
            complete_lift_function(2, &(&x(1) * &x(2))).unwrap(),
            &v(1) * &x(2) + &x(1) * &v(2)
        );
        assert!(matches!(
            complete_lift_function(1, &v(1)),
            Err(Error::NotBaseOnly(_))
        ));
    }

    #[test]
    fn complete_lift_of_vector_fields() {
        assert_eq!(
            complete_lift_vector(&BaseVectorField::<ScalarExpr>::coordinate(1, 1)),
            V::d_x(1, 1)
        );
        let xf = BaseVectorField::new(1, vec![x(1)]).unwrap();
        assert_eq!(
            complete_lift_vector(&xf),
            V::new(1, vec![x(1), v(1)]).unwrap()
        );
    }

    #[test]
    fn complete_lift_of_one_form() {
        let f = ScalarExpr::symbol(&FunctionSymbol::base("a"));
        let a = BaseForm::one_form(1, std::slice::from_ref(&f)).unwrap();
        let expected = F::dx(1, 1)
            .mul_scalar(&(&v(1) * &f.partial(CoordinateId::base(1))))
            .add(&F::dv(1, 1).mul_scalar(&f));
        assert_eq!(complete_lift_form(&a), expected);
    }

    #[test]
    fn complete_lift_of_area_form() {
        let w = BaseForm::<ScalarExpr>::dx(2, 1).wedge(&BaseForm::dx(2, 2));
        let expected = F::dv(2, 1)
            .wedge(&F::dx(2, 2))
            .add(&F::dx(2, 1).wedge(&F::dv(2, 2)));
        assert_eq!(complete_lift_form(&w), expected);
    }

    #[test]
    fn angular_form_lifts_to_exact_form() {
        let r2 = &x(1) * &x(1) + &x(2) * &x(2);
        let w =
            BaseForm::one_form(2, &[x(2).neg().div(&r2).unwrap(), x(1).div(&r2).unwrap()]).unwrap();
        let potential = (&x(1) * &v(2) - &x(2) * &v(1)).div(&r2).unwrap();
        assert_eq!(complete_lift_form(&w), F::scalar(2, potential).d());
    }

    #[test]
    fn lift_of_identity_is_identity() {
        for m in 1..=3 {
            let t = lift_tensor(&base_identity::<ScalarExpr>(m), LiftMode::Complete).unwrap();
            assert_eq!(t.to_endomorphism().unwrap(), VectorValuedForm::identity(m));
        }
    }

    #[test]
    fn vertical_lift_of_one_identity_summand() {
        let mono = vec![vec![
            BaseFactor::Covector(BaseForm::dx(2, 1)),
            BaseFactor::Vector(BaseVectorField::coordinate(2, 1)),
        ]];
        let t = lift_tensor::<ScalarExpr>(&mono, LiftMode::Vertical)
            .unwrap()
            .to_endomorphism()
            .unwrap();
        assert_eq!(t, VectorValuedForm::simple(2, 0, V::d_v(2, 1)));
    }

    #[test]
    fn mirror_map_basics() {
        let m = 2;
        let b = mirror_map::<ScalarExpr>(m);
        assert!(b.apply(&tautological_field(m)).is_zero());
        assert!(b.compose(&b).is_zero());
    }

    #[test]
    fn sprays() {
        let flat = V::new(2, vec![v(1), v(2), n(0), n(0)]).unwrap();
        assert!(is_spray(&flat));
        assert!(!is_spray(&tautological_field(2)));
        let bent = V::new(2, vec![v(1), v(2), &x(1) * &v(2), n(3)]).unwrap();
        assert!(is_spray(&bent));
    }

    #[test]
    fn lambda_mirror_fields() {
        assert_eq!(is_lambda_mirror(&tautological_field(2)), Some(n(-1)));
        let xf = BaseVectorField::new(2, vec![&x(1) * &x(2), x(1)]).unwrap();
        assert_eq!(is_lambda_mirror(&complete_lift_vector(&xf)), Some(n(0)));
        assert_eq!(is_lambda_mirror(&V::d_x(2, 1).mul_scalar(&x(1))), None);
    }
}
