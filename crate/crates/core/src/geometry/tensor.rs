use std::collections::BTreeMap;

use smallvec::SmallVec;

use super::field::VectorField;
use super::form::Form;
use super::vvform::VectorValuedForm;
use crate::scalar::{Coefficient, ScalarExpr};

/// Variance of one tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Vector,
    Covector,
}

type Key = SmallVec<[u8; 4]>;

/// A mixed tensor on the tangent manifold with an ordered factor signature,
/// stored as sparse components over one coframe slot per factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<C = ScalarExpr> {
    m: usize,
    kinds: Vec<FactorKind>,
    comps: BTreeMap<Key, C>,
}

impl<C: Coefficient> Tensor<C> {
    pub fn zero(m: usize, kinds: Vec<FactorKind>) -> Self {
        Tensor {
            m,
            kinds,
            comps: BTreeMap::new(),
        }
    }

    pub fn from_vector(x: &VectorField<C>) -> Self {
        let mut t = Self::zero(x.m(), vec![FactorKind::Vector]);
        for (s, c) in x.comps().iter().enumerate() {
            t.accumulate(SmallVec::from_slice(&[s as u8]), c.clone());
        }
        t
    }

    /// A 1-form as a covariant tensor.
    pub fn from_covector(a: &Form<C>) -> Self {
        debug_assert_eq!(a.degree(), 1);
        let mut t = Self::zero(a.m(), vec![FactorKind::Covector]);
        for (i, c) in a.terms() {
            let s = i.slots().next().expect("degree one");
            t.accumulate(SmallVec::from_slice(&[s as u8]), c.clone());
        }
        t
    }

    /// A degree-1 vector-valued form as a `covector ⊗ vector` tensor.
    pub fn from_endomorphism(k: &VectorValuedForm<C>) -> Self {
        debug_assert_eq!(k.degree(), 1);
        let m = k.m();
        let mut t = Self::zero(m, vec![FactorKind::Covector, FactorKind::Vector]);
        for s in 0..2 * m {
            for (u, c) in k.column(s).comps().iter().enumerate() {
                t.accumulate(SmallVec::from_slice(&[s as u8, u as u8]), c.clone());
            }
        }
        t
    }

    /// The endomorphism of a `covector ⊗ vector` tensor.
    pub fn to_endomorphism(&self) -> Option<VectorValuedForm<C>> {
        if self.kinds != [FactorKind::Covector, FactorKind::Vector] {
            return None;
        }
        let mut cols = vec![vec![C::zero(); 2 * self.m]; 2 * self.m];
        for (key, c) in &self.comps {
            cols[key[0] as usize][key[1] as usize] = c.clone();
        }
        let values = cols
            .into_iter()
            .map(|comps| VectorField::new(self.m, comps).expect("2m comps"))
            .collect();
        VectorValuedForm::endomorphism(self.m, values).ok()
    }

    fn accumulate(&mut self, key: Key, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.comps.remove(&key) {
            Some(d) => d.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.comps.insert(key, sum);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kinds(&self) -> &[FactorKind] {
        &self.kinds
    }

    pub fn components(&self) -> impl Iterator<Item = (&[u8], &C)> {
        self.comps.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(C::is_zero)
    }

    pub fn tensor(&self, other: &Tensor<C>) -> Tensor<C> {
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        let mut out = Self::zero(self.m, kinds);
        for (a, x) in &self.comps {
            for (b, y) in &other.comps {
                let mut key = a.clone();
                key.extend_from_slice(b);
                out.accumulate(key, x.mul(y));
            }
        }
        out
    }

    pub fn add(&self, other: &Tensor<C>) -> Tensor<C> {
        debug_assert_eq!(self.kinds, other.kinds);
        let mut out = self.clone();
        for (k, c) in &other.comps {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Tensor<C> {
        let mut out = Self::zero(self.m, self.kinds.clone());
        for (k, c) in &self.comps {
            out.accumulate(k.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Tensor<C>) -> Tensor<C> {
        self.add(&other.neg())
    }

    pub fn try_map<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> crate::Result<D>,
    ) -> crate::Result<Tensor<D>> {
        let mut out = Tensor::zero(self.m, self.kinds.clone());
        for (k, c) in &self.comps {
            out.accumulate(k.clone(), f(c)?);
        }
        Ok(out)
    }
}
