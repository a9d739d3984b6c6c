use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Poly};
use super::{CoordinateId, FunctionSymbol, Generator, Rational, SymbolPartial};
use crate::error::{Error, Result};

/// A reduced fraction `num / den` of polynomials in canonical form.
///
/// Invariants: `den` is nonzero with coprime integer coefficients and a
/// positive leading coefficient, `gcd(num, den) = 1`, and `0` is stored as
/// `0 / 1`. Two expressions are equal iff their canonical parts coincide.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr(Arc<Fraction>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Fraction {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    fn from_parts_unchecked(num: Poly, den: Poly) -> Self {
        ScalarExpr(Arc::new(Fraction { num, den }))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(n.into()))
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_poly(Poly::constant(q))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::from_parts_unchecked(p, Poly::one())
    }

    pub fn coord(c: CoordinateId) -> Self {
        Self::from_poly(Poly::generator(c.into()))
    }

    /// Base coordinate `x^i`.
    pub fn x(i: u8) -> Self {
        Self::coord(CoordinateId::base(i))
    }

    /// Fibre coordinate `v^i`.
    pub fn v(i: u8) -> Self {
        Self::coord(CoordinateId::fiber(i))
    }

    pub fn symbol(f: &FunctionSymbol) -> Self {
        Self::from_poly(Poly::generator(Generator::symbol(f.clone())))
    }

    pub fn symbol_partial(p: SymbolPartial) -> Self {
        Self::from_poly(Poly::generator(p.into()))
    }

    pub fn generator(g: Generator) -> Self {
        Self::from_poly(Poly::generator(g))
    }

    /// Canonical representative of `num / den`.
    pub fn normalize_fraction(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(d) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&d.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if let Some(d) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&d.recip())));
        }
        let s = den.primitive_scale();
        Ok(Self::from_parts_unchecked(num.scale(&s), den.scale(&s)))
    }

    /// Re-canonicalizes the stored fraction; a fixed point on every value
    /// this type hands out.
    pub fn normalize(&self) -> Result<Self> {
        Self::normalize_fraction(self.numer().clone(), self.denom().clone())
    }

    pub fn numer(&self) -> &Poly {
        &self.0.num
    }

    pub fn denom(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.0.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// No fibre coordinate and no fully dependent symbol occurs.
    pub fn is_base_only(&self) -> bool {
        self.0.num.is_base_only() && self.0.den.is_base_only()
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        let mut g = self.0.num.generators();
        g.extend(self.0.den.generators());
        g
    }

    /// Decides equality through the cross difference `n1*d2 - n2*d1`.
    pub fn equals(&self, other: &ScalarExpr) -> bool {
        self.0
            .num
            .mul(&other.0.den)
            .sub(&other.0.num.mul(&self.0.den))
            .is_zero()
    }

    pub fn add(&self, other: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.0.num.add(&other.0.num));
        }
        if self.0.den == other.0.den {
            return Self::normalize_fraction(self.0.num.add(&other.0.num), self.0.den.clone())
                .expect("denominator is nonzero");
        }
        let num = self
            .0
            .num
            .mul(&other.0.den)
            .add(&other.0.num.mul(&self.0.den));
        Self::normalize_fraction(num, self.0.den.mul(&other.0.den)).expect("denominator is nonzero")
    }

    pub fn neg(&self) -> ScalarExpr {
        Self::from_parts_unchecked(self.0.num.neg(), self.0.den.clone())
    }

    pub fn sub(&self, other: &ScalarExpr) -> ScalarExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.0.num.mul(&other.0.num));
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        Self::normalize_fraction(self.0.num.mul(&other.0.num), self.0.den.mul(&other.0.den))
            .expect("denominator is nonzero")
    }

    pub fn scale(&self, q: &Rational) -> ScalarExpr {
        if q.is_zero() {
            return Self::zero();
        }
        Self::from_parts_unchecked(self.0.num.scale(q), self.0.den.clone())
    }

    pub fn recip(&self) -> Result<ScalarExpr> {
        Self::normalize_fraction(self.0.den.clone(), self.0.num.clone())
    }

    pub fn div(&self, other: &ScalarExpr) -> Result<ScalarExpr> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        Self::normalize_fraction(self.0.num.mul(&other.0.den), self.0.den.mul(&other.0.num))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Result<ScalarExpr> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self::from_parts_unchecked(
            base.0.num.pow(k),
            base.0.den.pow(k),
        ))
    }

    /// Exact partial derivative (quotient rule on the canonical fraction).
    pub fn partial(&self, c: CoordinateId) -> ScalarExpr {
        let dn = self.0.num.partial(c);
        if self.is_polynomial() {
            return Self::from_poly(dn);
        }
        let dd = self.0.den.partial(c);
        if dd.is_zero() {
            return Self::normalize_fraction(dn, self.0.den.clone())
                .expect("denominator is nonzero");
        }
        let num = dn.mul(&self.0.den).sub(&self.0.num.mul(&dd));
        Self::normalize_fraction(num, self.0.den.pow(2)).expect("denominator is nonzero")
    }

    /// Simultaneous substitution. Symbol bindings are applied first, with
    /// every formal partial rewritten by the chain rule, and coordinate
    /// bindings afterwards.
    pub fn substitute(&self, bindings: &Bindings) -> Result<ScalarExpr> {
        bindings.validate()?;
        let after_symbols = if bindings.has_symbols() {
            let num = substitute_poly(&self.0.num, &|g| bindings.symbol_image(g))?;
            let den = substitute_poly(&self.0.den, &|g| bindings.symbol_image(g))?;
            num.div(&den)?
        } else {
            self.clone()
        };
        if !bindings.has_coords() {
            return Ok(after_symbols);
        }
        let image = |g: &Generator| -> Result<Option<ScalarExpr>> {
            Ok(match g {
                Generator::Coord(c) => bindings.coords.get(c).cloned(),
                _ => None,
            })
        };
        let num = substitute_poly(after_symbols.numer(), &image)?;
        let den = substitute_poly(after_symbols.denom(), &image)?;
        num.div(&den)
    }

    /// Exact value at a point binding every generator that occurs.
    pub fn eval(&self, point: &BTreeMap<Generator, Rational>) -> Result<Rational> {
        let den = eval_poly(&self.0.den, point)?;
        if den.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(eval_poly(&self.0.num, point)? / den)
    }

    /// Largest coordinate index referenced anywhere in the expression.
    pub fn max_index(&self) -> u8 {
        self.generators()
            .iter()
            .map(Generator::max_index)
            .max()
            .unwrap_or(0)
    }

    /// Expands the numerator in powers of the fibre coordinates. Fails when
    /// the expression is not polynomial along the fibre.
    pub fn fiber_expansion(&self) -> Result<Vec<(Monomial, ScalarExpr)>> {
        let fiber_free =
            |g: &Generator| !matches!(g, Generator::Coord(c) if c.is_fiber()) && g.is_base_only();
        if !self.0.den.generators().iter().all(fiber_free) {
            return Err(Error::NonPolynomialFiberDependence);
        }
        let mut groups: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, q) in self.0.num.terms() {
            let mut fib = Monomial::one();
            let mut rest = Monomial::one();
            for (g, e) in m.factors() {
                match g {
                    Generator::Coord(c) if c.is_fiber() => {
                        fib = fib.mul(&Monomial::generator(g.clone(), *e))
                    }
                    _ if !g.is_base_only() => return Err(Error::NonPolynomialFiberDependence),
                    _ => rest = rest.mul(&Monomial::generator(g.clone(), *e)),
                }
            }
            let entry = groups.entry(fib).or_default();
            *entry = entry.add(&Poly::term(rest, q.clone()));
        }
        groups
            .into_iter()
            .map(|(m, p)| Ok((m, ScalarExpr::normalize_fraction(p, self.0.den.clone())?)))
            .collect()
    }
}

fn substitute_poly(
    p: &Poly,
    image: &dyn Fn(&Generator) -> Result<Option<ScalarExpr>>,
) -> Result<ScalarExpr> {
    let mut cache: BTreeMap<Generator, ScalarExpr> = BTreeMap::new();
    for g in p.generators() {
        let img = image(&g)?.unwrap_or_else(|| ScalarExpr::generator(g.clone()));
        cache.insert(g, img);
    }
    let all_poly = cache.values().all(ScalarExpr::is_polynomial);
    if all_poly {
        let mut powers: BTreeMap<(&Generator, u32), Poly> = BTreeMap::new();
        let mut acc = Poly::zero();
        for (m, q) in p.terms() {
            let mut t = Poly::constant(q.clone());
            for (g, e) in m.factors() {
                let power = powers
                    .entry((g, *e))
                    .or_insert_with(|| cache[g].numer().pow(*e));
                t = t.mul(power);
            }
            acc.accumulate(&t);
        }
        return Ok(ScalarExpr::from_poly(acc));
    }
    let mut acc = ScalarExpr::zero();
    for (m, q) in p.terms() {
        let mut t = ScalarExpr::rational(q.clone());
        for (g, e) in m.factors() {
            t = t.mul(&cache[g].pow(*e as i32)?);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn eval_poly(p: &Poly, point: &BTreeMap<Generator, Rational>) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (m, q) in p.terms() {
        let mut t = q.clone();
        for (g, e) in m.factors() {
            let val = point.get(g).ok_or_else(|| Error::Unbound(g.to_string()))?;
            t *= num_traits::pow(val.clone(), *e as usize);
        }
        acc += t;
    }
    Ok(acc)
}

/// Substitution map from coordinates and symbol partials to expressions.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    coords: BTreeMap<CoordinateId, ScalarExpr>,
    symbols: BTreeMap<SymbolPartial, ScalarExpr>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn coord(mut self, c: CoordinateId, e: ScalarExpr) -> Self {
        self.coords.insert(c, e);
        self
    }

    /// Binds the symbol itself; all of its partials follow by the chain rule.
    pub fn symbol(self, f: &FunctionSymbol, e: ScalarExpr) -> Self {
        self.partial(SymbolPartial::new(f.clone(), []), e)
    }

    pub fn partial(mut self, p: SymbolPartial, e: ScalarExpr) -> Self {
        self.symbols.insert(p, e);
        self
    }

    fn has_symbols(&self) -> bool {
        !self.symbols.is_empty()
    }

    fn has_coords(&self) -> bool {
        !self.coords.is_empty()
    }

    fn validate(&self) -> Result<()> {
        for (p, e) in &self.symbols {
            if p.symbol.is_base_only() && !e.is_base_only() {
                return Err(Error::DependenceViolation(p.symbol.name().to_string()));
            }
        }
        for (p, e) in &self.symbols {
            for (q, f) in &self.symbols {
                if p == q {
                    continue;
                }
                if let Some(rest) = p.remaining_after(q) {
                    let derived = rest.iter().fold(f.clone(), |acc, c| acc.partial(*c));
                    if !derived.equals(e) {
                        return Err(Error::InconsistentBinding(
                            Generator::Partial(p.clone()).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn symbol_image(&self, g: &Generator) -> Result<Option<ScalarExpr>> {
        let Generator::Partial(p) = g else {
            return Ok(None);
        };
        if let Some(e) = self.symbols.get(p) {
            return Ok(Some(e.clone()));
        }
        // Closest bound ancestor, differentiated the rest of the way.
        let best = self
            .symbols
            .iter()
            .filter_map(|(q, e)| p.remaining_after(q).map(|rest| (rest, e)))
            .min_by_key(|(rest, _)| rest.len());
        Ok(best.map(|(rest, e)| rest.iter().fold(e.clone(), |acc, c| acc.partial(*c))))
    }
}

impl Default for ScalarExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::integer(n)
    }
}

impl From<Rational> for ScalarExpr {
    fn from(q: Rational) -> Self {
        ScalarExpr::rational(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(self, rhs)
            }
        }
        impl $trait<ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(&self, &rhs)
            }
        }
        impl $trait<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: &ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(&self, rhs)
            }
        }
        impl $trait<ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $method(self, rhs: ScalarExpr) -> ScalarExpr {
                ScalarExpr::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::neg(&self)
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr::neg(self)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text form of a polynomial, leading term first: `3/2*x1^2*v1 - f + 1`.
pub(crate) fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, q)) in p.terms().rev().enumerate() {
        let neg = q.is_negative();
        let abs = q.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let factors: Vec<String> = m
            .factors()
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&fmt_rational(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_poly(self.numer());
        if self.is_polynomial() {
            return write!(f, "{num}");
        }
        let den = self.denom();
        let num = if self.numer().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let single_factor = den.len() == 1
            && den
                .leading_term()
                .is_some_and(|(m, q)| q.is_one() && m.factors().len() == 1);
        if single_factor {
            write!(f, "{num}/{}", fmt_poly(den))
        } else {
            write!(f, "{num}/({})", fmt_poly(den))
        }
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarExpr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn n(k: i64) -> ScalarExpr {
        ScalarExpr::integer(k)
    }

    /// The potential `(x w - y v)/(x^2 + y^2)` with `(x, y, v, w) = (x1, x2, v1, v2)`.
    fn potential() -> ScalarExpr {
        let num = &x(1) * &v(2) - &x(2) * &v(1);
        let den = &x(1) * &x(1) + &x(2) * &x(2);
        num.div(&den).unwrap()
    }

    #[test]
    fn partial_of_symbol_product() {
        let f = FunctionSymbol::base("f");
        let f1 = ScalarExpr::symbol(&f).partial(CoordinateId::base(1));
        let e = &v(1) * &f1;
        let f11 = f1.partial(CoordinateId::base(1));
        assert_eq!(e.partial(CoordinateId::base(1)), &v(1) * &f11);
    }

    #[test]
    fn partial_of_polynomial() {
        let e = &x(1) * &x(2) + &v(2) * &v(2);
        assert_eq!(e.partial(CoordinateId::fiber(2)), &n(2) * &v(2));
    }

    #[test]
    fn partial_of_potential_by_quotient_rule() {
        // d/dv [(x w - y v)/(x^2 + y^2)] = -y/(x^2 + y^2), by hand.
        let den = &x(1) * &x(1) + &x(2) * &x(2);
        let expected = x(2).neg().div(&den).unwrap();
        assert_eq!(potential().partial(CoordinateId::fiber(1)), expected);
    }

    #[test]
    fn base_only_symbols_have_no_fiber_partials() {
        let f = ScalarExpr::symbol(&FunctionSymbol::base("f"));
        assert!(f.partial(CoordinateId::fiber(1)).is_zero());
        let g = ScalarExpr::symbol(&FunctionSymbol::full("g"));
        assert!(!g.partial(CoordinateId::fiber(1)).is_zero());
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let num = (&x(1) * &x(1) - n(1)).numer().clone();
        let den = (x(1) - n(1)).numer().clone();
        assert_eq!(
            ScalarExpr::normalize_fraction(num, den).unwrap(),
            x(1) + n(1)
        );
    }

    #[test]
    fn self_difference_is_zero() {
        let e = potential();
        assert!((&e - &e).is_zero());
    }

    #[test]
    fn potential_is_a_fixed_point_of_normalize() {
        let e = potential();
        assert_eq!(e.normalize().unwrap(), e);
        assert_eq!(e.to_string(), "(x1*v2 - x2*v1)/(x1^2 + x2^2)");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(
            ScalarExpr::normalize_fraction(Poly::one(), Poly::zero()),
            Err(Error::ZeroDenominator)
        );
        assert_eq!(x(1).div(&ScalarExpr::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn denominator_sign_and_content_are_normalized() {
        let e = n(1).div(&(n(-2) * x(1) - n(4))).unwrap();
        assert_eq!(e.to_string(), "-1/2/(x1 + 2)");
        assert!(e.denom().leading_term().unwrap().1.is_positive());
    }

    #[test]
    fn linear_coordinate_substitution() {
        let b = Bindings::new()
            .coord(CoordinateId::base(1), x(1) + x(2))
            .coord(CoordinateId::fiber(1), v(1) + v(2));
        assert_eq!(v(1).substitute(&b).unwrap(), v(1) + v(2));
    }

    #[test]
    fn symbol_binding_rewrites_partials() {
        let f = FunctionSymbol::base("f");
        let f1 = ScalarExpr::symbol(&f).partial(CoordinateId::base(1));
        let b = Bindings::new().symbol(&f, &x(1) * &x(2));
        assert_eq!(f1.substitute(&b).unwrap(), x(2));
    }

    #[test]
    fn conflicting_partial_binding_is_rejected() {
        let f = FunctionSymbol::base("f");
        let b = Bindings::new()
            .symbol(&f, &x(1) * &x(2))
            .partial(SymbolPartial::new(f.clone(), [CoordinateId::base(1)]), x(1));
        let err = ScalarExpr::symbol(&f).substitute(&b).unwrap_err();
        assert!(matches!(err, Error::InconsistentBinding(_)));
    }

    #[test]
    fn base_symbol_cannot_take_fiber_binding() {
        let f = FunctionSymbol::base("f");
        let b = Bindings::new().symbol(&f, v(1));
        assert!(matches!(
            ScalarExpr::symbol(&f).substitute(&b),
            Err(Error::DependenceViolation(_))
        ));
    }

    fn point(pairs: &[(CoordinateId, i64)]) -> BTreeMap<Generator, Rational> {
        pairs
            .iter()
            .map(|(c, k)| (Generator::Coord(*c), Rational::from_integer((*k).into())))
            .collect()
    }

    #[test]
    fn evaluation() {
        let p = point(&[(CoordinateId::base(1), 1), (CoordinateId::fiber(1), 2)]);
        assert_eq!(
            (x(1) + v(1)).eval(&p).unwrap(),
            Rational::from_integer(3.into())
        );
        let p = point(&[
            (CoordinateId::base(1), 1),
            (CoordinateId::base(2), 0),
            (CoordinateId::fiber(1), 0),
            (CoordinateId::fiber(2), 5),
        ]);
        assert_eq!(
            potential().eval(&p).unwrap(),
            Rational::from_integer(5.into())
        );
        let p = point(&[(CoordinateId::base(1), 0)]);
        assert_eq!(n(1).div(&x(1)).unwrap().eval(&p), Err(Error::PoleAtPoint));
    }

    #[test]
    fn fiber_expansion_groups_by_fiber_monomial() {
        let e = (&x(1) * &v(1) * &v(2) + &x(2) * &v(1) * &v(2) + x(1))
            .div(&(x(1) + n(1)))
            .unwrap();
        let parts = e.fiber_expansion().unwrap();
        assert_eq!(parts.len(), 2);
        assert!(potential().fiber_expansion().is_ok());
        assert!(n(1).div(&v(1)).unwrap().fiber_expansion().is_err());
    }
}
