//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive primitive polynomial remainder sequences: a polynomial is viewed
//! as univariate in its most significant generator with coefficients in the
//! ring of the remaining generators, whose gcds are computed recursively.
//! Every gcd returned here is normalized to coprime integer coefficients and
//! a positive leading coefficient.

use std::collections::{BTreeMap, BTreeSet};

use super::poly::{Monomial, Poly};
use super::{Generator, Rational};

pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.primitive();
    }
    let (ga, gb) = (a.generators(), b.generators());
    let shared: BTreeSet<Generator> = ga.intersection(&gb).cloned().collect();
    if shared.is_empty() {
        return Poly::one();
    }
    if shared.len() < ga.len() || shared.len() < gb.len() {
        // A common factor only involves shared generators, so it divides
        // every coefficient taken with respect to the others.
        let mut parts = coefficients_outside(a, &shared);
        parts.extend(coefficients_outside(b, &shared));
        parts.sort_by_key(|p| (p.total_degree(), p.len()));
        let mut acc = Poly::zero();
        for part in &parts {
            acc = gcd(&acc, part);
            if acc.is_one() {
                break;
            }
        }
        return acc;
    }
    let var = match (a.first_generator(), b.first_generator()) {
        (Some(g), Some(h)) => g.min(h),
        _ => unreachable!("non-constant polynomials have generators"),
    };
    if !a.contains(&var) {
        return gcd(a, &content_in(b, &var));
    }
    if !b.contains(&var) {
        return gcd(&content_in(a, &var), b);
    }
    let ca = content_in(a, &var);
    let cb = content_in(b, &var);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, &var);
    c.mul(&g).primitive()
}

/// Coefficients of `p` viewed as a polynomial in the generators outside
/// `keep`, each a polynomial in `keep` alone.
fn coefficients_outside(p: &Poly, keep: &BTreeSet<Generator>) -> Vec<Poly> {
    let mut groups: BTreeMap<Monomial, Vec<(Monomial, Rational)>> = BTreeMap::new();
    for (mono, q) in p.terms() {
        let (mut inside, mut outside) = (Monomial::one(), Monomial::one());
        for (g, e) in mono.factors() {
            let factor = Monomial::generator(g.clone(), *e);
            if keep.contains(g) {
                inside = inside.mul(&factor);
            } else {
                outside = outside.mul(&factor);
            }
        }
        groups.entry(outside).or_default().push((inside, q.clone()));
    }
    groups.into_values().map(Poly::from_terms).collect()
}

/// Gcd of the coefficients of `p` viewed as univariate in `var`.
fn content_in(p: &Poly, var: &Generator) -> Poly {
    let mut acc = Poly::zero();
    for coeff in p.coefficients_in(var).into_values() {
        acc = gcd(&acc, &coeff);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part_in(p: &Poly, var: &Generator) -> Poly {
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").primitive()
}

fn primitive_prs(a: Poly, b: Poly, var: &Generator) -> Poly {
    let (mut r0, mut r1) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&r0, &r1, var);
        if r.is_zero() {
            return r1.primitive();
        }
        if r.degree_in(var) == 0 {
            return Poly::one();
        }
        r0 = r1;
        r1 = primitive_part_in(&r, var);
    }
}

/// A nonzero multiple of the pseudo-remainder of `a` by `b` in `var`.
fn pseudo_remainder(a: &Poly, b: &Poly, var: &Generator) -> Poly {
    let db = b.degree_in(var);
    let lb = b.leading_coefficient_in(var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.leading_coefficient_in(var);
        let shift = Poly::term(
            Monomial::generator(var.clone(), dr - db),
            num_traits::One::one(),
        );
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CoordinateId, FunctionSymbol, Rational};

    fn x(i: u8) -> Poly {
        Poly::generator(CoordinateId::base(i).into())
    }

    fn c(n: i64) -> Poly {
        Poly::constant(Rational::from_integer(n.into()))
    }

    #[test]
    fn univariate_common_factor() {
        let a = x(1).pow(2).sub(&c(1));
        let b = x(1).sub(&c(1)).mul(&x(1).add(&c(2)));
        assert_eq!(gcd(&a, &b), x(1).sub(&c(1)));
    }

    #[test]
    fn multivariate_common_factor() {
        let r2 = x(1).pow(2).add(&x(2).pow(2));
        let f = x(1).mul(&x(2)).add(&c(3));
        let g1 = x(2).sub(&x(1).pow(3));
        let a = r2.mul(&f);
        let b = r2.mul(&g1).mul(&x(1));
        assert_eq!(gcd(&a, &b), r2);
    }

    #[test]
    fn coprime_gives_one() {
        assert!(gcd(&x(1).add(&x(2)), &x(1).sub(&x(2))).is_one());
    }

    #[test]
    fn gcd_with_symbol_generators() {
        let f = Poly::generator(Generator::symbol(FunctionSymbol::base("f")));
        let a = f.mul(&x(1)).add(&f.mul(&c(2)));
        let b = f.pow(2);
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn content_is_extracted() {
        let a = x(1).mul(&x(2)).add(&x(2));
        let b = x(2).pow(2).mul(&x(1).sub(&c(1)));
        assert_eq!(gcd(&a, &b), x(2));
    }
}
