use num_traits::One;

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};

/// A vector field on the tangent manifold: `2m` components over
/// `(∂x1..∂xm, ∂v1..∂vm)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField<C = ScalarExpr> {
    m: usize,
    comps: Vec<C>,
}

impl<C: Coefficient> VectorField<C> {
    pub fn zero(m: usize) -> Self {
        VectorField {
            m,
            comps: vec![C::zero(); 2 * m],
        }
    }

    pub fn new(m: usize, comps: Vec<C>) -> Result<Self> {
        if comps.len() != 2 * m {
            return Err(Error::ArityMismatch {
                expected: 2 * m,
                found: comps.len(),
            });
        }
        Ok(VectorField { m, comps })
    }

    /// The coordinate field `∂z` of a coframe slot.
    pub fn coordinate(m: usize, slot: usize) -> Self {
        let mut f = Self::zero(m);
        f.comps[slot] = C::one();
        f
    }

    /// `∂/∂x^i`, 1-based.
    pub fn d_x(m: usize, i: usize) -> Self {
        Self::coordinate(m, i - 1)
    }

    /// `∂/∂v^i`, 1-based.
    pub fn d_v(m: usize, i: usize) -> Self {
        Self::coordinate(m, m + i - 1)
    }

    /// `Σ c^i ∂/∂v^i`.
    pub fn vertical(m: usize, comps: &[C]) -> Self {
        let mut f = Self::zero(m);
        f.comps[m..].clone_from_slice(comps);
        f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn comps(&self) -> &[C] {
        &self.comps
    }

    pub fn component(&self, slot: usize) -> &C {
        &self.comps[slot]
    }

    pub fn base_part(&self) -> &[C] {
        &self.comps[..self.m]
    }

    pub fn fiber_part(&self) -> &[C] {
        &self.comps[self.m..]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(C::is_zero)
    }

    pub fn is_vertical(&self) -> bool {
        self.base_part().iter().all(C::is_zero)
    }

    /// Directional derivative `X·f = X^s ∂_s f`.
    pub fn apply(&self, f: &C) -> C {
        let mut acc = C::zero();
        for (s, x) in self.comps.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let df = f.partial(CoordinateId::from_slot(s, self.m));
            if !df.is_zero() {
                acc = acc.add(&x.mul(&df));
            }
        }
        acc
    }

    /// `[X, Y]^s = X(Y^s) − Y(X^s)`.
    pub fn bracket(&self, other: &VectorField<C>) -> VectorField<C> {
        let comps = (0..2 * self.m)
            .map(|s| {
                self.apply(&other.comps[s])
                    .sub(&other.apply(&self.comps[s]))
            })
            .collect();
        VectorField { m: self.m, comps }
    }

    pub fn add(&self, other: &VectorField<C>) -> VectorField<C> {
        self.zip(other, C::add)
    }

    pub fn sub(&self, other: &VectorField<C>) -> VectorField<C> {
        self.zip(other, C::sub)
    }

    pub fn neg(&self) -> VectorField<C> {
        self.map(C::neg)
    }

    pub fn mul_scalar(&self, c: &C) -> VectorField<C> {
        self.map(|x| x.mul(c))
    }

    pub fn scale(&self, q: &Rational) -> VectorField<C> {
        if q.is_one() {
            return self.clone();
        }
        self.map(|x| x.scale(q))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> VectorField<C> {
        VectorField {
            m: self.m,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<VectorField<D>> {
        Ok(VectorField {
            m: self.m,
            comps: self.comps.iter().map(f).collect::<Result<_>>()?,
        })
    }

    fn zip(&self, other: &VectorField<C>, f: impl Fn(&C, &C) -> C) -> VectorField<C> {
        debug_assert_eq!(self.m, other.m);
        VectorField {
            m: self.m,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// A vector field on the base chart with base-only coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseVectorField<C = ScalarExpr> {
    m: usize,
    comps: Vec<C>,
}

impl<C: Coefficient> BaseVectorField<C> {
    pub fn new(m: usize, comps: Vec<C>) -> Result<Self> {
        if comps.len() != m {
            return Err(Error::ArityMismatch {
                expected: m,
                found: comps.len(),
            });
        }
        if let Some(bad) = comps.iter().find(|c| !c.is_base_only()) {
            return Err(Error::NotBaseOnly(format!("{bad:?}")));
        }
        Ok(BaseVectorField { m, comps })
    }

    pub fn zero(m: usize) -> Self {
        BaseVectorField {
            m,
            comps: vec![C::zero(); m],
        }
    }

    /// `∂/∂x^i`, 1-based.
    pub fn coordinate(m: usize, i: usize) -> Self {
        let mut f = Self::zero(m);
        f.comps[i - 1] = C::one();
        f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn comps(&self) -> &[C] {
        &self.comps
    }

    /// `X·f = X^i ∂f/∂x^i`.
    pub fn apply(&self, f: &C) -> C {
        let mut acc = C::zero();
        for (i, x) in self.comps.iter().enumerate() {
            if !x.is_zero() {
                acc = acc.add(&x.mul(&f.partial(CoordinateId::base(i as u8 + 1))));
            }
        }
        acc
    }

    pub fn bracket(&self, other: &BaseVectorField<C>) -> BaseVectorField<C> {
        let comps = (0..self.m)
            .map(|i| {
                self.apply(&other.comps[i])
                    .sub(&other.apply(&self.comps[i]))
            })
            .collect();
        BaseVectorField { m: self.m, comps }
    }

    pub fn add(&self, other: &BaseVectorField<C>) -> BaseVectorField<C> {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        BaseVectorField { m: self.m, comps }
    }

    pub fn neg(&self) -> BaseVectorField<C> {
        BaseVectorField {
            m: self.m,
            comps: self.comps.iter().map(C::neg).collect(),
        }
    }

    /// `f X` for a base-only function `f`.
    pub fn mul_scalar(&self, f: &C) -> Result<BaseVectorField<C>> {
        if !f.is_base_only() {
            return Err(Error::NotBaseOnly(format!("{f:?}")));
        }
        Ok(BaseVectorField {
            m: self.m,
            comps: self.comps.iter().map(|x| x.mul(f)).collect(),
        })
    }

    /// The same components viewed along `∂x` on the tangent manifold.
    pub fn horizontal(&self) -> VectorField<C> {
        let mut comps = self.comps.clone();
        comps.extend(std::iter::repeat_n(C::zero(), self.m));
        VectorField { m: self.m, comps }
    }

    pub fn try_map<D: Coefficient>(
        &self,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<BaseVectorField<D>> {
        Ok(BaseVectorField {
            m: self.m,
            comps: self.comps.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = VectorField<ScalarExpr>;

    #[test]
    fn coordinate_fields_commute() {
        assert!(F::d_x(1, 1).bracket(&F::d_v(1, 1)).is_zero());
    }

    #[test]
    fn euler_field_bracket_with_fiber_coordinate_field() {
        let m = 2;
        let xi = F::vertical(m, &[ScalarExpr::v(1), ScalarExpr::v(2)]);
        assert_eq!(xi.bracket(&F::d_v(m, 1)), F::d_v(m, 1).neg());
    }

    #[test]
    fn base_field_rejects_fiber_coefficients() {
        assert!(BaseVectorField::new(1, vec![ScalarExpr::v(1)]).is_err());
        assert!(BaseVectorField::new(2, vec![ScalarExpr::x(1)]).is_err());
    }
}
