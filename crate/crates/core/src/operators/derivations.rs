use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{Form, MultiIndex, VectorValuedForm};
use crate::scalar::{Coefficient, CoordinateId, Rational};

/// `dz^i ∘ K`, the 1-form `Y ↦ dz^i(K Y)` of a degree-1 `K`.
fn coframe_after<C: Coefficient>(slot: usize, k: &VectorValuedForm<C>) -> Form<C> {
    let m = k.m();
    Form::from_terms(
        m,
        1,
        (0..2 * m).map(|s| (MultiIndex::single(s), k.column(s).component(slot).clone())),
    )
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `η ∘ (K_1 ∧ … ∧ K_p) = Σ_σ η_1∘K_σ1 ∧ … ∧ η_p∘K_σp`, extended linearly
/// from the coframe monomials of `η`. No `1/p!` is included.
pub fn circ_wedge<C: Coefficient>(eta: &Form<C>, endos: &[VectorValuedForm<C>]) -> Result<Form<C>> {
    let p = eta.degree();
    if endos.len() != p {
        return Err(Error::ArityMismatch {
            expected: p,
            found: endos.len(),
        });
    }
    if let Some(k) = endos.iter().find(|k| k.degree() != 1) {
        return Err(Error::UnsupportedDegree(k.degree()));
    }
    let m = eta.m();
    if p == 0 {
        return Ok(eta.clone());
    }
    let perms = permutations(p);
    let mut acc = Form::zero(m, p);
    for (idx, o) in eta.terms() {
        let slots = idx.to_vec();
        for sigma in &perms {
            let mut prod = Form::scalar(m, o.clone());
            for (a, s) in slots.iter().enumerate() {
                prod = prod.wedge(&coframe_after(*s, &endos[sigma[a]]));
                if prod.is_empty() {
                    break;
                }
            }
            if prod.degree() == p {
                acc = acc.add(&prod);
            }
        }
    }
    Ok(acc)
}

/// The algebraic derivation `i_K` of a vector-valued form of degree 0, 1
/// or 2. For `K = Σ_J dz^J ⊗ K_J`, `i_K ω = Σ_J dz^J ∧ (K_J ⌟ ω)`.
pub fn insertion_derivation<C: Coefficient>(
    k: &VectorValuedForm<C>,
    w: &Form<C>,
) -> Result<Form<C>> {
    if k.degree() > 2 {
        return Err(Error::UnsupportedDegree(k.degree()));
    }
    let m = w.m();
    let out_degree = (w.degree() + k.degree()).saturating_sub(1);
    if w.degree() == 0 {
        return Ok(Form::zero(m, out_degree));
    }
    let mut acc = Form::zero(m, out_degree);
    for (j, x) in k.terms() {
        let basis = Form::from_terms(m, j.len(), [(*j, C::one())]);
        acc = acc.add(&basis.wedge(&w.interior(x)));
    }
    Ok(acc)
}

/// `d_B(o dz^I) = Σ_i (∂o/∂v^i) dx^i ∧ dz^I`.
pub fn d_b<C: Coefficient>(w: &Form<C>) -> Form<C> {
    let m = w.m();
    let mut terms = Vec::new();
    for (idx, o) in w.terms() {
        for i in 0..m {
            if idx.contains(i) {
                continue;
            }
            let dv = o.partial(CoordinateId::fiber(i as u8 + 1));
            if dv.is_zero() {
                continue;
            }
            let (k, sign) = MultiIndex::single(i).wedge(idx).expect("free slot");
            terms.push((k, if sign < 0 { dv.neg() } else { dv }));
        }
    }
    Form::from_terms(m, w.degree() + 1, terms)
}

/// `L_K = [i_K, d] = i_K d − (−1)^{k−1} d i_K` for `K` of degree `k ≤ 1`.
pub fn lie_derivation<C: Coefficient>(k: &VectorValuedForm<C>, w: &Form<C>) -> Result<Form<C>> {
    match k.degree() {
        0 => Ok(w.lie(&k.get(&MultiIndex::EMPTY))),
        1 => Ok(insertion_derivation(k, &w.d())?.sub(&insertion_derivation(k, w)?.d())),
        deg => Err(Error::UnsupportedDegree(deg)),
    }
}

/// `L_K = i_K d + d i_K` for a vector-valued 2-form.
pub(crate) fn lie_derivation_degree_two<C: Coefficient>(
    k: &VectorValuedForm<C>,
    w: &Form<C>,
) -> Result<Form<C>> {
    debug_assert_eq!(k.degree(), 2);
    Ok(insertion_derivation(k, &w.d())?.add(&insertion_derivation(k, w)?.d()))
}

/// `[K, K]` for a vector-valued 1-form, from
/// `½[K,K](X,Y) = [KX,KY] − K[KX,Y] − K[X,KY] + K²[X,Y]` on coordinate fields:
/// `½[K,K](∂s,∂t) = [K_s,K_t] + K(∂_t K_s) − K(∂_s K_t)`.
pub fn fn_self_bracket<C: Coefficient>(k: &VectorValuedForm<C>) -> Result<VectorValuedForm<C>> {
    if k.degree() != 1 {
        return Err(Error::UnsupportedDegree(k.degree()));
    }
    let m = k.m();
    let two = Rational::from_integer(2.into());
    let mut terms = Vec::new();
    for s in 0..2 * m {
        for t in s + 1..2 * m {
            let ks = k.column(s);
            let kt = k.column(t);
            let dt_ks = ks.map(|c| c.partial(CoordinateId::from_slot(t, m)));
            let ds_kt = kt.map(|c| c.partial(CoordinateId::from_slot(s, m)));
            let half = ks.bracket(&kt).add(&k.apply(&dt_ks)).sub(&k.apply(&ds_kt));
            terms.push((
                MultiIndex::from_slots([s, t]).expect("distinct"),
                half.scale(&two),
            ));
        }
    }
    Ok(VectorValuedForm::from_terms(m, 2, terms))
}

/// `D = c1 d + c2 d_B` with constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DOperator {
    pub c1: Rational,
    pub c2: Rational,
}

impl DOperator {
    pub fn new(c1: Rational, c2: Rational) -> Self {
        DOperator { c1, c2 }
    }

    pub fn apply<C: Coefficient>(&self, w: &Form<C>) -> Form<C> {
        let mut out = Form::zero(w.m(), w.degree() + 1);
        if !self.c1.is_zero() {
            out = out.add(&w.d().scale(&self.c1));
        }
        if !self.c2.is_zero() {
            out = out.add(&d_b(w).scale(&self.c2));
        }
        out
    }
}

/// `ε1 d + ε2 d_B` with function coefficients; squares to zero only for
/// constants.
pub fn apply_variable_d<C: Coefficient>(eps1: &C, eps2: &C, w: &Form<C>) -> Form<C> {
    w.d().mul_scalar(eps1).add(&d_b(w).mul_scalar(eps2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BaseForm, VectorField};
    use crate::lifts::{complete_lift_form, mirror_map, pullback, tautological_field};
    use crate::scalar::{FunctionSymbol, ScalarExpr};

    type F = Form<ScalarExpr>;
    type V = VectorField<ScalarExpr>;
    type K = VectorValuedForm<ScalarExpr>;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn factorial(n: usize) -> i64 {
        (1..=n as i64).product()
    }

    fn sign(p: &[usize]) -> i64 {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The permutation-sum definition of `i_K ω` evaluated on `X_1..X_{k+p}`.
    fn brute_insertion(k: &K, w: &F, xs: &[V]) -> ScalarExpr {
        let kk = k.degree();
        let p = w.degree();
        let n = kk + p - 1;
        assert_eq!(xs.len(), n);
        let mut acc = ScalarExpr::zero();
        for sigma in permutations(n) {
            let args: Vec<V> = sigma.iter().map(|i| xs[*i].clone()).collect();
            let kx = k.evaluate(&args[..kk]).unwrap();
            let mut slots = vec![kx];
            slots.extend_from_slice(&args[kk..]);
            acc = acc + w.evaluate(&slots).unwrap().scale(&q(sign(&sigma)));
        }
        acc.scale(&Rational::new(
            1.into(),
            (factorial(kk) * factorial(p - 1)).into(),
        ))
    }

    fn sample_fields(m: usize) -> Vec<V> {
        vec![
            V::new(m, vec![x(1), v(1), ScalarExpr::one(), &x(2) * &v(2)]).unwrap(),
            V::new(m, vec![v(2), ScalarExpr::integer(2), x(2), v(1)]).unwrap(),
            V::new(
                m,
                vec![
                    ScalarExpr::zero(),
                    &x(1) * &x(2),
                    v(2),
                    ScalarExpr::integer(-1),
                ],
            )
            .unwrap(),
        ]
    }

    fn sample_two_form(m: usize) -> F {
        F::dx(m, 1)
            .wedge(&F::dv(m, 2))
            .mul_scalar(&v(1))
            .add(&F::dx(m, 2).wedge(&F::dv(m, 1)).mul_scalar(&x(1)))
    }

    #[test]
    fn insertion_matches_permutation_sum() {
        let m = 2;
        let k1 = K::simple(m, 0, V::d_v(m, 1).mul_scalar(&x(2))).add(&K::simple(
            m,
            3,
            V::d_x(m, 1).mul_scalar(&v(1)),
        ));
        let k2 = K::from_terms(
            m,
            2,
            [(
                MultiIndex::from_slots([0, 3]).unwrap(),
                V::d_v(m, 2).mul_scalar(&x(1)),
            )],
        );
        let w = sample_two_form(m);
        let xs = sample_fields(m);
        let fast = insertion_derivation(&k1, &w).unwrap();
        assert_eq!(
            fast.evaluate(&xs[..2]).unwrap(),
            brute_insertion(&k1, &w, &xs[..2])
        );
        let fast = insertion_derivation(&k2, &w).unwrap();
        assert_eq!(fast.evaluate(&xs).unwrap(), brute_insertion(&k2, &w, &xs));
    }

    #[test]
    fn insertion_of_mirror_map_on_dv() {
        let b = mirror_map::<ScalarExpr>(1);
        assert_eq!(insertion_derivation(&b, &F::dv(1, 1)).unwrap(), F::dx(1, 1));
    }

    #[test]
    fn insertion_of_identity_multiplies_by_degree() {
        let w = sample_two_form(2);
        assert_eq!(
            insertion_derivation(&K::identity(2), &w).unwrap(),
            w.scale(&q(2))
        );
    }

    #[test]
    fn circ_wedge_with_identities() {
        let w = sample_two_form(2);
        let ids = vec![K::identity(2), K::identity(2)];
        assert_eq!(circ_wedge(&w, &ids).unwrap(), w.scale(&q(2)));
        assert!(matches!(
            circ_wedge(&w, &ids[..1]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn d_b_on_coordinates() {
        assert_eq!(d_b(&F::scalar(1, v(1))), F::dx(1, 1));
        assert!(d_b(&F::dx(2, 1)).is_empty());
        assert!(d_b(&F::dv(2, 1)).is_empty());
        let f = ScalarExpr::symbol(&FunctionSymbol::full("g"));
        let w = F::scalar(2, f.clone())
            .wedge(&F::dv(2, 1))
            .add(&F::dx(2, 2).mul_scalar(&(&f * &v(2))));
        assert_eq!(d_b(&w), lie_derivation(&mirror_map(2), &w).unwrap());
    }

    #[test]
    fn lie_derivation_of_identity_is_d() {
        let w = sample_two_form(2);
        assert_eq!(lie_derivation(&K::identity(2), &w).unwrap(), w.d());
    }

    #[test]
    fn d_operator_examples() {
        let c = q(3);
        let d = DOperator::new(c.clone(), q(1));
        let expected = F::dv(1, 1).scale(&c).add(&F::dx(1, 1));
        assert_eq!(d.apply(&F::scalar(1, v(1))), expected);
        assert_eq!(
            DOperator::new(q(1), q(0)).apply(&sample_two_form(2)),
            sample_two_form(2).d()
        );
    }

    #[test]
    fn variable_coefficient_square_on_fiber_coordinates() {
        // (d + x1 d_B)^2 v^j = dx1 ∧ dx^j, which vanishes for j = 1.
        for m in 1..=3 {
            let one = ScalarExpr::one();
            let e2 = x(1);
            let sq = |w: &F| apply_variable_d(&one, &e2, &apply_variable_d(&one, &e2, w));
            assert!(sq(&F::scalar(m, v(1))).is_zero());
            if m >= 2 {
                assert_eq!(sq(&F::scalar(m, v(2))), F::dx(m, 1).wedge(&F::dx(m, 2)));
            }
        }
    }

    #[test]
    fn self_bracket_of_mirror_map_and_identity_vanish() {
        for m in 1..=3 {
            assert!(fn_self_bracket(&mirror_map::<ScalarExpr>(m))
                .unwrap()
                .is_zero());
            assert!(fn_self_bracket(&K::identity(m)).unwrap().is_zero());
        }
    }

    #[test]
    fn self_bracket_of_rank_one_example() {
        // K = dx1 ⊗ x2 ∂v1 on m = 2: every term of the formula cancels.
        let k = K::simple(2, 0, V::d_v(2, 1).mul_scalar(&x(2)));
        assert!(fn_self_bracket(&k).unwrap().is_zero());
    }

    #[test]
    fn self_bracket_controls_square_of_lie_derivation() {
        let m = 2;
        let k = K::simple(m, 0, V::d_x(m, 2).mul_scalar(&v(1)))
            .add(&K::simple(m, 1, V::d_v(m, 1).mul_scalar(&x(1))))
            .add(&K::simple(m, 2, V::d_x(m, 1).mul_scalar(&x(2))));
        let kk = fn_self_bracket(&k).unwrap();
        assert!(!kk.is_zero());
        let f = ScalarExpr::symbol(&FunctionSymbol::full("g"));
        for w in [
            F::scalar(m, f.clone()),
            F::dv(m, 2).mul_scalar(&f),
            sample_two_form(m),
        ] {
            let lhs = lie_derivation(&k, &lie_derivation(&k, &w).unwrap()).unwrap();
            let rhs = lie_derivation_degree_two(&kk, &w)
                .unwrap()
                .scale(&Rational::new(1.into(), 2.into()));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn collapse_of_lifted_form_under_mirror_map() {
        let m = 2;
        let g = BaseForm::<ScalarExpr>::dx(m, 1)
            .wedge(&BaseForm::dx(m, 2))
            .mul_scalar(&(&x(1) * &x(2)))
            .unwrap();
        let gt = complete_lift_form(&g);
        let b = mirror_map::<ScalarExpr>(m);
        let one = K::identity(m);
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            circ_wedge(&gt, &[b.clone(), one.clone()])
                .unwrap()
                .scale(&half),
            pullback(&g)
        );
        assert!(circ_wedge(&gt, &[b.clone(), b]).unwrap().is_zero());
        assert_eq!(
            circ_wedge(&gt, &[one.clone(), one]).unwrap().scale(&half),
            gt
        );
    }

    #[test]
    fn contraction_with_euler_field_kills_pullbacks() {
        let g = BaseForm::<ScalarExpr>::dx(2, 1).mul_scalar(&x(2)).unwrap();
        assert!(pullback(&g).interior(&tautological_field(2)).is_zero());
    }
}
