use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{Form, MultiIndex};
use crate::scalar::{Coefficient, CoordinateId, Poly, Rational, ScalarExpr};

use super::derivations::d_b;

/// The first multi-index carrying more than `k` fibre slots with a nonzero
/// coefficient; `None` when the form is `k`-semi-basic.
pub fn semi_basic_defect<C: Coefficient>(w: &Form<C>, k: usize) -> Option<MultiIndex> {
    let m = w.m();
    w.terms()
        .find(|(i, c)| i.fiber_count(m) > k && !c.is_zero())
        .map(|(i, _)| *i)
}

/// Solves `d_B α = w` for a semi-basic, `d_B`-closed `w` whose coefficients
/// are polynomial along the fibre.
///
/// Along each fibre the form `Σ o_I(x, v) dv^I` is closed, and the radial
/// homotopy from `v = 0`, `h(ω) = ∫_0^1 t^{p-1} ι_v ω(x, tv) dt`, gives a
/// fibre potential; a fibre monomial of degree `d` integrates to `1/(d+p)`.
/// Renaming `dv` back to `dx` yields the semi-basic `α`.
pub fn db_poincare(w: &Form<ScalarExpr>) -> Result<Form<ScalarExpr>> {
    let m = w.m();
    let p = w.degree();
    if p == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    if let Some(bad) = semi_basic_defect(w, 0) {
        return Err(Error::NotSemiBasic(format!("{:?}", bad)));
    }
    if !d_b(w).is_zero() {
        return Err(Error::NotClosed);
    }
    let mut terms: BTreeMap<MultiIndex, ScalarExpr> = BTreeMap::new();
    for (idx, o) in w.terms() {
        for (mono, coeff) in o.fiber_expansion()? {
            let weight =
                Rational::new(1.into(), ((mono.total_degree() as usize + p) as i64).into());
            let base = coeff.mul(&ScalarExpr::from_poly(Poly::term(
                mono,
                num_traits::One::one(),
            )));
            let scaled = base.scale(&weight);
            for slot in idx.slots() {
                let (rest, sign) = idx.remove(slot).expect("slot in index");
                let vi = ScalarExpr::coord(CoordinateId::fiber(slot as u8 + 1));
                let term = scaled.mul(&vi);
                let term = if sign < 0 { term.neg() } else { term };
                crate::geometry::accumulate(&mut terms, rest, term);
            }
        }
    }
    Ok(Form::from_terms(m, p - 1, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BaseForm;
    use crate::lifts::{complete_lift_form, pullback, tautological_field};

    type F = Form<ScalarExpr>;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    #[test]
    fn defect_detection() {
        let g = BaseForm::<ScalarExpr>::dx(2, 1).mul_scalar(&x(2)).unwrap();
        assert_eq!(semi_basic_defect(&pullback(&g), 0), None);
        assert_eq!(
            semi_basic_defect(&F::dv(1, 1), 0),
            Some(MultiIndex::single(1))
        );
        let w = BaseForm::<ScalarExpr>::dx(2, 1).wedge(&BaseForm::dx(2, 2));
        let wt = complete_lift_form(&w);
        assert_eq!(semi_basic_defect(&wt, 1), None);
        assert!(semi_basic_defect(&wt, 0).is_some());
    }

    #[test]
    fn potential_of_dx() {
        assert_eq!(db_poincare(&F::dx(1, 1)).unwrap(), F::scalar(1, v(1)));
    }

    #[test]
    fn potential_of_pullback_is_a_multiple_of_contracted_lift() {
        let m = 3;
        let w = BaseForm::<ScalarExpr>::dx(m, 1)
            .wedge(&BaseForm::dx(m, 3))
            .mul_scalar(&(&x(2) + &x(1) * &x(3)))
            .unwrap();
        let alpha = db_poincare(&pullback(&w)).unwrap();
        assert_eq!(d_b(&alpha), pullback(&w));
        let contracted = complete_lift_form(&w).interior(&tautological_field(m));
        assert_eq!(alpha, contracted.scale(&Rational::new(1.into(), 2.into())));
    }

    #[test]
    fn round_trip_on_generated_exact_form() {
        let m = 2;
        let tau = F::dx(m, 1)
            .mul_scalar(&(&v(1) * &v(2) * &x(2) + &v(2) * &v(2)))
            .add(&F::dx(m, 2).mul_scalar(&(&x(1) * &v(1))));
        let w = d_b(&tau);
        let alpha = db_poincare(&w).unwrap();
        assert_eq!(d_b(&alpha), w);
    }

    #[test]
    fn rational_base_dependence_is_allowed() {
        let r = ScalarExpr::one()
            .div(&(&x(1) * &x(1) + ScalarExpr::one()))
            .unwrap();
        let tau = F::dx(2, 2).mul_scalar(&(&r * &v(1) * &v(1)));
        let w = d_b(&tau);
        assert_eq!(d_b(&db_poincare(&w).unwrap()), w);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            db_poincare(&F::dv(1, 1)),
            Err(Error::NotSemiBasic(_))
        ));
        assert!(matches!(
            db_poincare(&F::dx(2, 1).mul_scalar(&v(2))),
            Err(Error::NotClosed)
        ));
        let bad =
            F::dx(1, 1).mul_scalar(&ScalarExpr::one().div(&(ScalarExpr::one() + v(1))).unwrap());
        assert!(matches!(
            db_poincare(&bad),
            Err(Error::NonPolynomialFiberDependence)
        ));
        assert!(matches!(
            db_poincare(&F::scalar(1, x(1))),
            Err(Error::UnsupportedDegree(0))
        ));
    }
}
