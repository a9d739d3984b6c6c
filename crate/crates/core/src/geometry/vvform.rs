use std::collections::BTreeMap;

use super::field::VectorField;
use super::index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};

/// A form of degree `k` with values in vector fields on the tangent manifold,
/// `K = Σ_I dz^I ⊗ K_I` over sorted multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedForm<C = ScalarExpr> {
    m: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, VectorField<C>>,
}

impl<C: Coefficient> VectorValuedForm<C> {
    pub fn zero(m: usize, degree: usize) -> Self {
        VectorValuedForm {
            m,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        m: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, VectorField<C>)>,
    ) -> Self {
        let mut out = Self::zero(m, degree);
        for (i, x) in terms {
            debug_assert_eq!(i.len(), degree);
            out.accumulate(i, x);
        }
        out
    }

    /// A vector field as a vector-valued form of degree 0.
    pub fn vector_field(x: VectorField<C>) -> Self {
        let m = x.m();
        Self::from_terms(m, 0, [(MultiIndex::EMPTY, x)])
    }

    /// The degree-1 form with `K(∂_s) = values[s]`.
    pub fn endomorphism(m: usize, values: Vec<VectorField<C>>) -> Result<Self> {
        if values.len() != 2 * m {
            return Err(Error::ArityMismatch {
                expected: 2 * m,
                found: values.len(),
            });
        }
        Ok(Self::from_terms(
            m,
            1,
            values
                .into_iter()
                .enumerate()
                .map(|(s, x)| (MultiIndex::single(s), x)),
        ))
    }

    /// The identity endomorphism `Σ dz^s ⊗ ∂_s`.
    pub fn identity(m: usize) -> Self {
        Self::endomorphism(
            m,
            (0..2 * m).map(|s| VectorField::coordinate(m, s)).collect(),
        )
        .expect("2m values")
    }

    /// `dz^slot ⊗ X`.
    pub fn simple(m: usize, slot: usize, x: VectorField<C>) -> Self {
        Self::from_terms(m, 1, [(MultiIndex::single(slot), x)])
    }

    fn accumulate(&mut self, i: MultiIndex, x: VectorField<C>) {
        if x.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&i) {
            Some(y) => y.add(&x),
            None => x,
        };
        if !sum.is_zero() {
            self.terms.insert(i, sum);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &VectorField<C>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(VectorField::is_zero)
    }

    pub fn get(&self, i: &MultiIndex) -> VectorField<C> {
        self.terms
            .get(i)
            .cloned()
            .unwrap_or_else(|| VectorField::zero(self.m))
    }

    /// For degree 1, the value `K(∂_s)`.
    pub fn column(&self, slot: usize) -> VectorField<C> {
        self.get(&MultiIndex::single(slot))
    }

    /// `K(X_1, …, X_k) = Σ_I det[X_b^{I_a}] K_I`.
    pub fn evaluate(&self, vectors: &[VectorField<C>]) -> Result<VectorField<C>> {
        if vectors.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                found: vectors.len(),
            });
        }
        let mut acc = VectorField::zero(self.m);
        for (i, x) in &self.terms {
            let scalar = super::form::Form::from_terms(self.m, self.degree, [(*i, C::one())])
                .evaluate(vectors)?;
            if !scalar.is_zero() {
                acc = acc.add(&x.mul_scalar(&scalar));
            }
        }
        Ok(acc)
    }

    /// Degree-1 action on a vector field, `K(Y) = Y^s K_s`.
    pub fn apply(&self, y: &VectorField<C>) -> VectorField<C> {
        debug_assert_eq!(self.degree, 1);
        let mut acc = VectorField::zero(self.m);
        for (i, x) in &self.terms {
            let s = i.slots().next().expect("degree one");
            let ys = y.component(s);
            if !ys.is_zero() {
                acc = acc.add(&x.mul_scalar(ys));
            }
        }
        acc
    }

    /// Composition of endomorphisms `(K ∘ L)(Y) = K(L(Y))`.
    pub fn compose(&self, other: &VectorValuedForm<C>) -> VectorValuedForm<C> {
        debug_assert_eq!((self.degree, other.degree), (1, 1));
        let values = (0..2 * self.m)
            .map(|s| self.apply(&other.column(s)))
            .collect();
        Self::endomorphism(self.m, values).expect("2m values")
    }

    /// Lie derivative along `W`. Degree 0 is the bracket; for degree 1,
    /// `(L_W K)_s = [W, K_s] + Σ_t (∂_s W^t) K_t`.
    pub fn lie(&self, w: &VectorField<C>) -> Result<VectorValuedForm<C>> {
        match self.degree {
            0 => Ok(Self::vector_field(w.bracket(&self.get(&MultiIndex::EMPTY)))),
            1 => {
                let m = self.m;
                let values = (0..2 * m)
                    .map(|s| {
                        let mut acc = w.bracket(&self.column(s));
                        for t in 0..2 * m {
                            let dw = w.component(t).partial(CoordinateId::from_slot(s, m));
                            if !dw.is_zero() {
                                acc = acc.add(&self.column(t).mul_scalar(&dw));
                            }
                        }
                        acc
                    })
                    .collect();
                Self::endomorphism(m, values)
            }
            k => Err(Error::UnsupportedDegree(k)),
        }
    }

    pub fn add(&self, other: &VectorValuedForm<C>) -> VectorValuedForm<C> {
        debug_assert_eq!((self.m, self.degree), (other.m, other.degree));
        let mut out = self.clone();
        for (i, x) in &other.terms {
            out.accumulate(*i, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &VectorValuedForm<C>) -> VectorValuedForm<C> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorValuedForm<C> {
        self.map(VectorField::neg)
    }

    pub fn scale(&self, q: &Rational) -> VectorValuedForm<C> {
        self.map(|x| x.scale(q))
    }

    pub fn mul_scalar(&self, f: &C) -> VectorValuedForm<C> {
        self.map(|x| x.mul_scalar(f))
    }

    pub fn map(&self, f: impl Fn(&VectorField<C>) -> VectorField<C>) -> VectorValuedForm<C> {
        Self::from_terms(
            self.m,
            self.degree,
            self.terms.iter().map(|(i, x)| (*i, f(x))),
        )
    }

    pub fn try_map<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<VectorValuedForm<D>> {
        let terms = self
            .terms
            .iter()
            .map(|(i, x)| Ok((*i, x.try_map(&f)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorValuedForm::from_terms(self.m, self.degree, terms))
    }
}
