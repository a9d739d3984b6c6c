use num_traits::One;

use crate::error::{Error, Result};
use crate::geometry::{BaseForm, Form, MultiIndex, VectorValuedForm};
use crate::lifts::{complete_lift_form, mirror_map, tautological_field};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};

use super::derivations::circ_wedge;

fn factorial(p: usize) -> Rational {
    Rational::from_integer((1..=p as i64).product::<i64>().into())
}

/// `f_μ = a_i v^i + c` for `μ = a_i dx^i`.
pub fn make_f_mu<C: Coefficient>(mu: &BaseForm<C>, c: &C) -> Result<C> {
    if mu.degree() != 1 {
        return Err(Error::UnsupportedDegree(mu.degree()));
    }
    if !c.is_base_only() {
        return Err(Error::NotBaseOnly(format!("{c:?}")));
    }
    let linear = (0..mu.m()).fold(C::zero(), |acc, i| {
        let ai = mu.form().coefficient(&MultiIndex::single(i));
        acc.add(&ai.mul(&C::coordinate(CoordinateId::fiber(i as u8 + 1))))
    });
    Ok(linear.add(c))
}

/// Splits `f = a_i(x) v^i + c(x)` when every second fibre partial vanishes.
pub fn is_fiber_affine(m: usize, f: &ScalarExpr) -> Option<(BaseForm, ScalarExpr)> {
    let fiber = |i: usize| CoordinateId::fiber(i as u8 + 1);
    let a: Vec<ScalarExpr> = (0..m).map(|i| f.partial(fiber(i))).collect();
    for ai in &a {
        for j in 0..m {
            if !ai.partial(fiber(j)).is_zero() {
                return None;
            }
        }
    }
    let linear = a
        .iter()
        .enumerate()
        .fold(ScalarExpr::zero(), |acc, (i, ai)| {
            acc + ai * &ScalarExpr::coord(fiber(i))
        });
    let c = f - &linear;
    if !c.is_base_only() {
        return None;
    }
    let mu = BaseForm::one_form(m, &a).ok()?;
    Some((mu, c))
}

/// `w ∘ B^{∧p} / p!`, the base form `w` lies above, if that is a pullback.
pub fn extract_mu<C: Coefficient>(w: &Form<C>) -> Option<BaseForm<C>> {
    let p = w.degree();
    let b = mirror_map::<C>(w.m());
    let endos: Vec<VectorValuedForm<C>> = vec![b; p];
    let contracted = circ_wedge(w, &endos).ok()?.scale(&factorial(p).recip());
    BaseForm::new(contracted).ok()
}

/// A `p`-form on the tangent manifold lying above the base form `mu`:
/// `omega ∘ B^{∧p} / p! = π*mu`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaMuForm {
    omega: Form,
    mu: BaseForm,
}

impl AlphaMuForm {
    pub fn new(omega: Form, mu: BaseForm) -> Result<Self> {
        if omega.degree() != mu.degree() {
            return Err(Error::NotAboveMu);
        }
        match extract_mu(&omega) {
            Some(found) if found == mu => Ok(AlphaMuForm { omega, mu }),
            _ => Err(Error::NotAboveMu),
        }
    }

    /// `μ̃`, which lies above `μ` for 1-forms.
    pub fn complete_lift(mu: &BaseForm) -> Result<Self> {
        Self::new(complete_lift_form(mu), mu.clone())
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn mu(&self) -> &BaseForm {
        &self.mu
    }
}

/// `Θ(h_i dx^i + a_i dv^i) = g_i dx^i` with `g_i = h_i − (∂a_k/∂x^i) v^k`,
/// for a closed 1-form above `μ = a_i dx^i`.
pub fn theta(a: &AlphaMuForm) -> Result<BaseForm> {
    let w = a.omega();
    let m = w.m();
    if w.degree() != 1 {
        return Err(Error::UnsupportedDegree(w.degree()));
    }
    if !w.d().is_zero() {
        return Err(Error::NotClosed);
    }
    match extract_mu(w) {
        Some(mu) if &mu == a.mu() => {}
        _ => return Err(Error::NotAboveMu),
    }
    let mu = a.mu().form();
    let mut g = Vec::with_capacity(m);
    for i in 0..m {
        let h = w.coefficient(&MultiIndex::single(i));
        let correction = (0..m).fold(ScalarExpr::zero(), |acc, k| {
            let ak = mu.coefficient(&MultiIndex::single(k));
            acc + ak.partial(CoordinateId::base(i as u8 + 1)) * ScalarExpr::v(k as u8 + 1)
        });
        g.push(h - correction);
    }
    BaseForm::one_form(m, &g)
}

/// `ξ ⌟ w̃` for a closed base form `w`; its exterior derivative is `w̃`.
pub fn lifted_cohomology_witness(w: &BaseForm) -> Result<Form> {
    if !w.d().is_zero() {
        return Err(Error::NotClosed);
    }
    Ok(complete_lift_form(w).interior(&tautological_field(w.m())))
}

/// `1/p!` as used by the normalizations above.
pub fn inverse_factorial(p: usize) -> Rational {
    Rational::one() / factorial(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifts::pullback;

    type F = Form<ScalarExpr>;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn angular() -> BaseForm {
        let r2 = &x(1) * &x(1) + &x(2) * &x(2);
        BaseForm::one_form(2, &[x(2).neg().div(&r2).unwrap(), x(1).div(&r2).unwrap()]).unwrap()
    }

    #[test]
    fn f_mu_examples() {
        assert_eq!(
            make_f_mu(&BaseForm::dx(1, 1), &ScalarExpr::zero()).unwrap(),
            v(1)
        );
        let mu = BaseForm::one_form(2, &[x(2), ScalarExpr::zero()]).unwrap();
        assert_eq!(make_f_mu(&mu, &x(1)).unwrap(), &x(2) * &v(1) + x(1));
        let f = make_f_mu(&mu, &x(1)).unwrap();
        let contracted = circ_wedge(&F::scalar(2, f).d(), &[mirror_map(2)]).unwrap();
        assert_eq!(contracted, pullback(&mu));
    }

    #[test]
    fn fiber_affine_detection() {
        let f = &x(2) * &v(1) + &x(1) * &v(2) + &x(1) * &x(1);
        let (mu, c) = is_fiber_affine(2, &f).unwrap();
        assert_eq!(mu, BaseForm::one_form(2, &[x(2), x(1)]).unwrap());
        assert_eq!(c, &x(1) * &x(1));
        assert!(is_fiber_affine(1, &(&v(1) * &v(1))).is_none());
        let r2 = &x(1) * &x(1) + &x(2) * &x(2);
        let potential = (&x(1) * &v(2) - &x(2) * &v(1)).div(&r2).unwrap();
        let (mu, c) = is_fiber_affine(2, &potential).unwrap();
        assert_eq!(mu, angular());
        assert!(c.is_zero());
    }

    #[test]
    fn extract_mu_examples() {
        let mu = angular();
        assert_eq!(extract_mu(&complete_lift_form(&mu)), Some(mu));
        let w = F::dv(2, 1).wedge(&F::dv(2, 2)).mul_scalar(&v(1));
        assert_eq!(extract_mu(&w), None);
        let g = BaseForm::dx(2, 1)
            .wedge(&BaseForm::dx(2, 2))
            .mul_scalar(&x(1))
            .unwrap();
        assert_eq!(extract_mu(&pullback(&g)), Some(BaseForm::zero(2, 2)));
    }

    #[test]
    fn theta_examples() {
        let m = 2;
        let gamma = BaseForm::one_form(m, &[x(2), x(1)]).unwrap();
        let a = AlphaMuForm::new(pullback(&gamma), BaseForm::zero(m, 1)).unwrap();
        assert_eq!(theta(&a).unwrap(), gamma);

        let mu = BaseForm::one_form(m, &[&x(1) * &x(2), x(2)]).unwrap();
        let c = &x(1) * &x(1) * &x(2);
        let df = F::scalar(m, make_f_mu(&mu, &c).unwrap()).d();
        let a = AlphaMuForm::new(df, mu).unwrap();
        assert_eq!(theta(&a).unwrap(), BaseForm::function(m, c).unwrap().d());

        let closed = angular();
        let a = AlphaMuForm::complete_lift(&closed).unwrap();
        assert!(theta(&a).unwrap().is_zero());
    }

    #[test]
    fn theta_rejects_open_forms() {
        let mu = BaseForm::one_form(2, &[x(2), ScalarExpr::zero()]).unwrap();
        let a = AlphaMuForm::complete_lift(&mu).unwrap();
        assert_eq!(theta(&a), Err(Error::NotClosed));
        assert_eq!(
            AlphaMuForm::new(F::dv(2, 1), BaseForm::dx(2, 2)),
            Err(Error::NotAboveMu)
        );
    }

    #[test]
    fn witness_examples() {
        let r2 = &x(1) * &x(1) + &x(2) * &x(2);
        let potential = (&x(1) * &v(2) - &x(2) * &v(1)).div(&r2).unwrap();
        assert_eq!(
            lifted_cohomology_witness(&angular()).unwrap(),
            F::scalar(2, potential)
        );
        assert_eq!(
            lifted_cohomology_witness(&BaseForm::dx(1, 1)).unwrap(),
            F::scalar(1, v(1))
        );
        let area = BaseForm::dx(2, 1).wedge(&BaseForm::dx(2, 2));
        let expected = F::dx(2, 2)
            .mul_scalar(&v(1))
            .sub(&F::dx(2, 1).mul_scalar(&v(2)));
        assert_eq!(lifted_cohomology_witness(&area).unwrap(), expected);
        let open = BaseForm::one_form(2, &[x(2), ScalarExpr::zero()]).unwrap();
        assert_eq!(lifted_cohomology_witness(&open), Err(Error::NotClosed));
    }
}
