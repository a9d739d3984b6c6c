use std::fmt::Debug;

use num_traits::One;

use super::{Bindings, CoordinateId, Generator, Rational, ScalarExpr};
use crate::error::{Error, Result};

/// The ring operations that forms, fields and the operators on them need
/// from their coefficients.
///
/// Implemented exactly by [`ScalarExpr`] and approximately by
/// [`crate::numeric::NumField`], so every identity can be checked along an
/// exact and an independent numerical route.
pub trait Coefficient: Clone + Debug + Send + Sync + 'static {
    fn zero() -> Self;

    fn from_rational(q: &Rational) -> Self;

    fn coordinate(c: CoordinateId) -> Self;

    fn add(&self, other: &Self) -> Self;

    fn mul(&self, other: &Self) -> Self;

    fn neg(&self) -> Self;

    fn scale(&self, q: &Rational) -> Self;

    fn partial(&self, c: CoordinateId) -> Self;

    /// True only when the value is known to vanish identically.
    fn is_zero(&self) -> bool;

    /// True when the value is known to depend on base coordinates only.
    fn is_base_only(&self) -> bool;

    /// Composition with a change of coordinates on a chart of dimension `m`:
    /// every coordinate `c` is replaced by `image(c)`.
    fn compose(&self, m: usize, image: &dyn Fn(CoordinateId) -> Self) -> Result<Self>;

    fn one() -> Self {
        Self::from_rational(&Rational::one())
    }

    fn from_integer(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coefficient for ScalarExpr {
    fn zero() -> Self {
        ScalarExpr::zero()
    }

    fn from_rational(q: &Rational) -> Self {
        ScalarExpr::rational(q.clone())
    }

    fn coordinate(c: CoordinateId) -> Self {
        ScalarExpr::coord(c)
    }

    fn add(&self, other: &Self) -> Self {
        ScalarExpr::add(self, other)
    }

    fn mul(&self, other: &Self) -> Self {
        ScalarExpr::mul(self, other)
    }

    fn neg(&self) -> Self {
        ScalarExpr::neg(self)
    }

    fn scale(&self, q: &Rational) -> Self {
        ScalarExpr::scale(self, q)
    }

    fn partial(&self, c: CoordinateId) -> Self {
        ScalarExpr::partial(self, c)
    }

    fn is_zero(&self) -> bool {
        ScalarExpr::is_zero(self)
    }

    fn is_base_only(&self) -> bool {
        ScalarExpr::is_base_only(self)
    }

    fn compose(&self, m: usize, image: &dyn Fn(CoordinateId) -> Self) -> Result<Self> {
        if self.is_constant() {
            return Ok(self.clone());
        }
        let mut bindings = Bindings::new();
        for g in self.generators() {
            match g {
                Generator::Coord(c) => {
                    if c.index as usize > m {
                        return Err(Error::IndexOutOfRange {
                            index: c.index as usize,
                            m,
                        });
                    }
                    bindings = bindings.coord(c, image(c));
                }
                Generator::Partial(_) => return Err(Error::AbstractSymbol(g.to_string())),
            }
        }
        self.substitute(&bindings)
    }

    fn one() -> Self {
        ScalarExpr::one()
    }

    fn sub(&self, other: &Self) -> Self {
        ScalarExpr::sub(self, other)
    }
}
