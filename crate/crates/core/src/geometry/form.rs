use std::collections::BTreeMap;

use num_traits::One;

use super::field::{BaseVectorField, VectorField};
use super::index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};

/// A differential form of fixed degree on the tangent manifold of an
/// `m`-dimensional chart, stored sparsely over sorted coframe multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C = ScalarExpr> {
    m: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, C>,
}

pub(crate) fn accumulate<C: Coefficient>(
    terms: &mut BTreeMap<MultiIndex, C>,
    idx: MultiIndex,
    c: C,
) {
    if c.is_zero() {
        return;
    }
    match terms.entry(idx) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get().add(&c);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

fn signed<C: Coefficient>(c: &C, sign: i32) -> C {
    if sign < 0 {
        c.neg()
    } else {
        c.clone()
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero(m: usize, degree: usize) -> Self {
        Form {
            m,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(m: usize, c: C) -> Self {
        Self::from_terms(m, 0, [(MultiIndex::EMPTY, c)])
    }

    /// The coframe element `dz` of a slot.
    pub fn coframe(m: usize, slot: usize) -> Self {
        Self::from_terms(m, 1, [(MultiIndex::single(slot), C::one())])
    }

    /// `dx^i`, 1-based.
    pub fn dx(m: usize, i: usize) -> Self {
        Self::coframe(m, i - 1)
    }

    /// `dv^i`, 1-based.
    pub fn dv(m: usize, i: usize) -> Self {
        Self::coframe(m, m + i - 1)
    }

    /// Sums the given terms; every index must have length `degree`.
    pub fn from_terms(
        m: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, C)>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (idx, c) in terms {
            debug_assert_eq!(idx.len(), degree);
            accumulate(&mut map, idx, c);
        }
        Form {
            m,
            degree,
            terms: map,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, idx: &MultiIndex) -> Option<&C> {
        self.terms.get(idx)
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> C {
        self.terms.get(idx).cloned().unwrap_or_else(C::zero)
    }

    /// The function of a degree-0 form.
    pub fn as_scalar(&self) -> C {
        self.coefficient(&MultiIndex::EMPTY)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(C::is_zero)
    }

    /// No `dv` index occurs.
    pub fn is_dx_only(&self) -> bool {
        self.terms.keys().all(|i| i.fiber_count(self.m) == 0)
    }

    pub fn add(&self, other: &Form<C>) -> Form<C> {
        debug_assert_eq!((self.m, self.degree), (other.m, other.degree));
        let mut terms = self.terms.clone();
        for (i, c) in &other.terms {
            accumulate(&mut terms, *i, c.clone());
        }
        Form {
            m: self.m,
            degree: self.degree,
            terms,
        }
    }

    pub fn sub(&self, other: &Form<C>) -> Form<C> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form<C> {
        self.map(C::neg)
    }

    pub fn mul_scalar(&self, f: &C) -> Form<C> {
        self.map(|c| c.mul(f))
    }

    pub fn scale(&self, q: &Rational) -> Form<C> {
        if q.is_one() {
            return self.clone();
        }
        self.map(|c| c.scale(q))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Form<C> {
        Self::from_terms(
            self.m,
            self.degree,
            self.terms.iter().map(|(i, c)| (*i, f(c))),
        )
    }

    pub fn try_map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Form<D>> {
        let terms = self
            .terms
            .iter()
            .map(|(i, c)| Ok((*i, f(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Form::from_terms(self.m, self.degree, terms))
    }

    /// Exterior product. Degrees beyond `2m` give the zero form.
    pub fn wedge(&self, other: &Form<C>) -> Form<C> {
        debug_assert_eq!(self.m, other.m);
        let mut terms = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((k, sign)) = i.wedge(j) {
                    accumulate(&mut terms, k, signed(&a.mul(b), sign));
                }
            }
        }
        Form {
            m: self.m,
            degree: self.degree + other.degree,
            terms,
        }
    }

    /// Exterior derivative `d(ω_I dz^I) = ∂_s ω_I dz^s ∧ dz^I`.
    pub fn d(&self) -> Form<C> {
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            for s in 0..2 * self.m {
                if i.contains(s) {
                    continue;
                }
                let dc = c.partial(CoordinateId::from_slot(s, self.m));
                if dc.is_zero() {
                    continue;
                }
                let (k, sign) = MultiIndex::single(s).wedge(i).expect("slot not in index");
                accumulate(&mut terms, k, signed(&dc, sign));
            }
        }
        Form {
            m: self.m,
            degree: self.degree + 1,
            terms,
        }
    }

    /// Interior product `X ⌟ ω`; zero on functions.
    pub fn interior(&self, x: &VectorField<C>) -> Form<C> {
        if self.degree == 0 {
            return Form::zero(self.m, 0);
        }
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            for s in i.slots() {
                let xs = x.component(s);
                if xs.is_zero() {
                    continue;
                }
                let (rest, sign) = i.remove(s).expect("slot in index");
                accumulate(&mut terms, rest, signed(&c.mul(xs), sign));
            }
        }
        Form {
            m: self.m,
            degree: self.degree - 1,
            terms,
        }
    }

    /// Lie derivative, computed directly:
    /// `L_X(ω_I dz^I) = X(ω_I) dz^I + ω_I Σ_k dz^{i1} ∧ … ∧ d(X^{ik}) ∧ … ∧ dz^{ip}`.
    pub fn lie(&self, x: &VectorField<C>) -> Form<C> {
        let m = self.m;
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            accumulate(&mut terms, *i, x.apply(c));
            for slot in i.slots() {
                let (rest, sign_out) = i.remove(slot).expect("slot in index");
                for s in 0..2 * m {
                    let ds = x.component(slot).partial(CoordinateId::from_slot(s, m));
                    if ds.is_zero() {
                        continue;
                    }
                    // dz^slot at its position is replaced by dz^s.
                    if let Some((k, sign_in)) = MultiIndex::single(s).wedge(&rest) {
                        accumulate(&mut terms, k, signed(&c.mul(&ds), sign_out * sign_in));
                    }
                }
            }
        }
        Form {
            m,
            degree: self.degree,
            terms,
        }
    }

    /// `ω(X_1, …, X_p)`.
    pub fn evaluate(&self, vectors: &[VectorField<C>]) -> Result<C> {
        if vectors.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut acc = C::zero();
        for (i, c) in &self.terms {
            let slots = i.to_vec();
            let det = determinant(&slots, vectors);
            if !det.is_zero() {
                acc = acc.add(&c.mul(&det));
            }
        }
        Ok(acc)
    }
}

/// `det[ V_b^{slots[a]} ]` by Laplace expansion along the first row.
fn determinant<C: Coefficient>(slots: &[usize], vectors: &[VectorField<C>]) -> C {
    match slots.len() {
        0 => C::one(),
        1 => vectors[0].component(slots[0]).clone(),
        _ => {
            let first = vectors[0].comps();
            let mut acc = C::zero();
            for (k, s) in slots.iter().enumerate() {
                let entry = &first[*s];
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<usize> = slots
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != k)
                    .map(|(_, t)| *t)
                    .collect();
                let sub = determinant(&minor, &vectors[1..]);
                let term = entry.mul(&sub);
                acc = if k % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}

/// A form on the base chart: only `dx` indices and base-only coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseForm<C = ScalarExpr>(Form<C>);

impl<C: Coefficient> BaseForm<C> {
    pub fn new(form: Form<C>) -> Result<Self> {
        if !form.is_dx_only() {
            let bad = form
                .terms
                .keys()
                .find(|i| i.fiber_count(form.m) > 0)
                .expect("has dv index");
            return Err(Error::NotBaseOnly(format!("index {bad:?}")));
        }
        if let Some(c) = form.terms.values().find(|c| !c.is_base_only()) {
            return Err(Error::NotBaseOnly(format!("{c:?}")));
        }
        Ok(BaseForm(form))
    }

    pub fn zero(m: usize, degree: usize) -> Self {
        BaseForm(Form::zero(m, degree))
    }

    pub fn function(m: usize, f: C) -> Result<Self> {
        Self::new(Form::scalar(m, f))
    }

    pub fn dx(m: usize, i: usize) -> Self {
        BaseForm(Form::dx(m, i))
    }

    /// `Σ a_i dx^i`.
    pub fn one_form(m: usize, coeffs: &[C]) -> Result<Self> {
        Self::new(Form::from_terms(
            m,
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| (MultiIndex::single(i), a.clone())),
        ))
    }

    pub fn form(&self) -> &Form<C> {
        &self.0
    }

    pub fn into_form(self) -> Form<C> {
        self.0
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn d(&self) -> BaseForm<C> {
        BaseForm(self.0.d())
    }

    pub fn wedge(&self, other: &BaseForm<C>) -> BaseForm<C> {
        BaseForm(self.0.wedge(&other.0))
    }

    pub fn add(&self, other: &BaseForm<C>) -> BaseForm<C> {
        BaseForm(self.0.add(&other.0))
    }

    pub fn scale(&self, q: &Rational) -> BaseForm<C> {
        BaseForm(self.0.scale(q))
    }

    pub fn mul_scalar(&self, f: &C) -> Result<BaseForm<C>> {
        if !f.is_base_only() {
            return Err(Error::NotBaseOnly(format!("{f:?}")));
        }
        Ok(BaseForm(self.0.mul_scalar(f)))
    }

    /// `α(X_1, …, X_p)` on base vector fields.
    pub fn evaluate(&self, vectors: &[BaseVectorField<C>]) -> Result<C> {
        let tm: Vec<VectorField<C>> = vectors.iter().map(BaseVectorField::horizontal).collect();
        self.0.evaluate(&tm)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn try_map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<BaseForm<D>> {
        Ok(BaseForm(self.0.try_map(f)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Form<ScalarExpr>;
    type V = VectorField<ScalarExpr>;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn two(a: usize, b: usize) -> MultiIndex {
        MultiIndex::from_slots([a, b]).unwrap()
    }

    #[test]
    fn wedge_of_coframe_elements() {
        let w = F::dx(1, 1).wedge(&F::dv(1, 1));
        assert_eq!(
            w.terms().collect::<Vec<_>>(),
            vec![(&two(0, 1), &ScalarExpr::one())]
        );
        assert!(F::dx(1, 1).wedge(&F::dx(1, 1)).is_empty());
    }

    #[test]
    fn wedge_of_weighted_coframe_elements() {
        let a = F::dx(2, 1).mul_scalar(&v(1));
        let b = F::dv(2, 2).mul_scalar(&x(1));
        let expected = F::dx(2, 1).wedge(&F::dv(2, 2)).mul_scalar(&(&x(1) * &v(1)));
        assert_eq!(a.wedge(&b), expected);
    }

    #[test]
    fn exterior_derivative_examples() {
        assert_eq!(F::scalar(1, v(1)).d(), F::dv(1, 1));
        let lam = F::dx(1, 1).mul_scalar(&v(1));
        assert_eq!(lam.d(), F::dv(1, 1).wedge(&F::dx(1, 1)));
    }

    #[test]
    fn interior_product_examples() {
        let w = F::dx(2, 1).wedge(&F::dx(2, 2));
        assert_eq!(w.interior(&V::d_x(2, 1)), F::dx(2, 2));
        let w = F::dx(1, 1).wedge(&F::dv(1, 1)).mul_scalar(&v(1));
        assert_eq!(
            w.interior(&V::d_v(1, 1)),
            F::dx(1, 1).mul_scalar(&v(1)).neg()
        );
    }

    #[test]
    fn lie_derivative_along_coordinate_field() {
        let w = F::dx(2, 2).mul_scalar(&x(1));
        assert_eq!(w.lie(&V::d_x(2, 1)), F::dx(2, 2));
    }

    #[test]
    fn evaluation_is_alternating() {
        let w = F::dx(1, 1).wedge(&F::dv(1, 1));
        assert_eq!(
            w.evaluate(&[V::d_x(1, 1), V::d_v(1, 1)]).unwrap(),
            ScalarExpr::one()
        );
        assert_eq!(
            w.evaluate(&[V::d_v(1, 1), V::d_x(1, 1)]).unwrap(),
            ScalarExpr::integer(-1)
        );
        assert!(matches!(
            w.evaluate(&[V::d_v(1, 1)]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn base_form_rejects_fiber_data() {
        assert!(BaseForm::new(F::dv(1, 1)).is_err());
        assert!(BaseForm::new(F::dx(1, 1).mul_scalar(&v(1))).is_err());
    }
}
