use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{CoordinateId, Generator, Rational};

/// A power product of generators, kept sorted by generator with positive
/// exponents.
///
/// Monomials are ordered lexicographically with the *smallest* generator most
/// significant (`x1 > x2 > ... > v1 > ...`), which is a monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(Generator, u32); 3]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn generator(g: Generator, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut v = SmallVec::new();
        v.push((g, exp));
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, g: &Generator) -> u32 {
        self.0
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        for (g, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *g {
                let f = other.0[j].1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((g.clone(), e - f)),
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *g {
                return None;
            } else {
                out.push((g.clone(), *e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Removes `g` entirely, returning its exponent.
    pub fn split_off(&self, g: &Generator) -> (u32, Monomial) {
        let mut out = self.0.clone();
        match out.binary_search_by(|(h, _)| h.cmp(g)) {
            Ok(i) => {
                let (_, e) = out.remove(i);
                (e, Monomial(out))
            }
            Err(_) => (0, Monomial(out)),
        }
    }

    fn without_one(&self, idx: usize) -> Monomial {
        let mut out = self.0.clone();
        if out[idx].1 == 1 {
            out.remove(idx);
        } else {
            out[idx].1 -= 1;
        }
        Monomial(out)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0) {
                // `self` carries the more significant generator.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are stored in ascending monomial order; zero coefficients are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        let mut p = Poly::zero();
        if !q.is_zero() {
            p.terms.insert(Monomial::one(), q);
        }
        p
    }

    pub fn generator(g: Generator) -> Self {
        Self::term(Monomial::generator(g, 1), Rational::one())
    }

    pub fn term(m: Monomial, q: Rational) -> Self {
        let mut p = Poly::zero();
        if !q.is_zero() {
            p.terms.insert(m, q);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, q) in terms {
            p.add_term(m, q);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|q| q.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// In-place `self += other`.
    pub fn accumulate(&mut self, other: &Poly) {
        for (m, q) in &other.terms {
            self.add_term(m.clone(), q.clone());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, q) in &small.terms {
            out.add_term(m.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_term(m.clone(), -q.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), -q.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        if s.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, q1) in &self.terms {
            for (m2, q2) in &other.terms {
                out.add_term(m1.mul(m2), q1 * q2);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, q: &Rational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative; symbol partials pick up the coordinate.
    pub fn partial(&self, c: CoordinateId) -> Poly {
        let mut out = Poly::zero();
        for (m, q) in &self.terms {
            for (idx, (g, e)) in m.factors().iter().enumerate() {
                let rest = m.without_one(idx);
                let factor = Rational::from_integer(BigInt::from(*e)) * q;
                match g {
                    Generator::Coord(d) if *d == c => out.add_term(rest, factor),
                    Generator::Coord(_) => {}
                    Generator::Partial(p) => {
                        if let Some(dp) = p.differentiate(c) {
                            out.add_term(rest.mul(&Monomial::generator(dp.into(), 1)), factor);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(g, _)| g.clone()))
            .collect()
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.terms.keys().any(|m| m.exponent(g) > 0)
    }

    /// The most significant generator present.
    pub fn first_generator(&self) -> Option<Generator> {
        self.terms
            .keys()
            .filter_map(|m| m.factors().first().map(|(g, _)| g))
            .min()
            .cloned()
    }

    pub fn degree_in(&self, g: &Generator) -> u32 {
        self.terms.keys().map(|m| m.exponent(g)).max().unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `g`.
    pub fn coefficients_in(&self, g: &Generator) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, q) in &self.terms {
            let (e, rest) = m.split_off(g);
            out.entry(e).or_default().add_term(rest, q.clone());
        }
        out
    }

    /// Leading coefficient in `g` (a polynomial free of `g`).
    pub fn leading_coefficient_in(&self, g: &Generator) -> Poly {
        let d = self.degree_in(g);
        let mut out = Poly::zero();
        for (m, q) in &self.terms {
            let (e, rest) = m.split_off(g);
            if e == d {
                out.add_term(rest, q.clone());
            }
        }
        out
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if let Some(c) = other.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = other.leading_term().map(|(m, q)| (m.clone(), q.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, q)) = rem.leading_term().map(|(m, q)| (m.clone(), q.clone())) {
            let t = m.div(&lm)?;
            let c = q / &lc;
            rem = rem.sub(&other.mul_monomial(&t, &c));
            quot.add_term(t, c);
        }
        Some(quot)
    }

    /// The positive rational `s` (up to sign) such that `self * s` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_scale(&self) -> Rational {
        let Some((_, lead)) = self.leading_term() else {
            return Rational::one();
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for q in self.terms.values() {
            num_gcd = num_gcd.gcd(q.numer());
            den_lcm = den_lcm.lcm(q.denom());
        }
        let s = Rational::new(den_lcm, num_gcd);
        if lead.is_negative() {
            -s
        } else {
            s
        }
    }

    pub fn primitive(&self) -> Poly {
        self.scale(&self.primitive_scale())
    }

    pub fn is_base_only(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().all(|(g, _)| g.is_base_only()))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, q)| (m.clone(), f(q))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CoordinateId;

    fn x(i: u8) -> Poly {
        Poly::generator(CoordinateId::base(i).into())
    }

    fn v(i: u8) -> Poly {
        Poly::generator(CoordinateId::fiber(i).into())
    }

    #[test]
    fn monomial_order_is_lex_with_x1_first() {
        let x1 = x(1);
        let x2sq = x(2).pow(2);
        let lt = x1.add(&x2sq);
        assert_eq!(lt.leading_term().unwrap().0, x1.leading_term().unwrap().0);
        let v1 = v(1);
        let p = v1.add(&x(2));
        assert_eq!(p.leading_term().unwrap().0, x(2).leading_term().unwrap().0);
    }

    #[test]
    fn exact_division() {
        let a = x(1).pow(2).sub(&Poly::one());
        let b = x(1).sub(&Poly::one());
        assert_eq!(a.div_exact(&b), Some(x(1).add(&Poly::one())));
        assert_eq!(x(1).div_exact(&x(2)), None);
        assert_eq!(x(1).add(&Poly::one()).div_exact(&x(1)), None);
    }

    #[test]
    fn partial_of_power() {
        let p = x(1).mul(&x(2)).add(&v(2).pow(2));
        assert_eq!(
            p.partial(CoordinateId::fiber(2)),
            v(2).scale(&Rational::from_integer(2.into()))
        );
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let p = x(1)
            .scale(&Rational::new((-4).into(), 3.into()))
            .add(&Poly::constant(Rational::new(2.into(), 1.into())));
        assert_eq!(
            p.primitive(),
            x(1).scale(&Rational::from_integer(2.into()))
                .sub(&Poly::constant(Rational::from_integer(3.into())))
        );
    }
}
