//! Seeded generators of random geometric objects: polynomials with small
//! integer coefficients and total degree at most 3, optionally mixed with
//! formal partials of the abstract symbols `f`, `g` (base) and `F` (full).

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{BaseForm, BaseVectorField, Form, MultiIndex, VectorField, VectorValuedForm};
use crate::scalar::{
    CoordinateId, FunctionSymbol, Generator, Monomial, Poly, Rational, ScalarExpr, SymbolPartial,
};

/// Knobs for the generators.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_degree: u32,
    pub max_terms: usize,
    /// Probability of adding a term built from an abstract symbol.
    pub symbol_rate: f64,
    /// Probability of dividing by a denominator without real zeros.
    pub fraction_rate: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_degree: 3,
            max_terms: 3,
            symbol_rate: 0.3,
            fraction_rate: 0.0,
        }
    }
}

impl Shape {
    pub fn polynomial() -> Self {
        Shape {
            symbol_rate: 0.0,
            ..Shape::default()
        }
    }
}

pub const BASE_SYMBOLS: [&str; 2] = ["f", "g"];
pub const FULL_SYMBOLS: [&str; 1] = ["F"];

fn small_nonzero(rng: &mut impl Rng) -> i64 {
    let k = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

fn monomial(rng: &mut impl Rng, coords: &[CoordinateId], max_degree: u32) -> Monomial {
    let deg = rng.gen_range(0..=max_degree);
    let mut mono = Monomial::one();
    for _ in 0..deg {
        let c = *coords.choose(rng).expect("coordinates");
        mono = mono.mul(&Monomial::generator(Generator::Coord(c), 1));
    }
    mono
}

/// A random polynomial in `coords`.
pub fn polynomial(rng: &mut impl Rng, coords: &[CoordinateId], shape: &Shape) -> ScalarExpr {
    let n = rng.gen_range(1..=shape.max_terms);
    let terms = (0..n).map(|_| {
        let mono = monomial(rng, coords, shape.max_degree);
        (mono, Rational::from_integer(small_nonzero(rng).into()))
    });
    ScalarExpr::from_poly(Poly::from_terms(terms.collect::<Vec<_>>()))
}

fn base_coords(m: usize) -> Vec<CoordinateId> {
    (1..=m as u8).map(CoordinateId::base).collect()
}

fn all_coords(m: usize) -> Vec<CoordinateId> {
    CoordinateId::all(m).collect()
}

fn symbol_term(rng: &mut impl Rng, m: usize, full: bool) -> ScalarExpr {
    let (symbol, coords) = if full && rng.gen_bool(0.5) {
        (
            FunctionSymbol::full(FULL_SYMBOLS.choose(rng).unwrap()),
            all_coords(m),
        )
    } else {
        (
            FunctionSymbol::base(BASE_SYMBOLS.choose(rng).unwrap()),
            base_coords(m),
        )
    };
    let order = rng.gen_range(0..=1);
    let wrt: Vec<CoordinateId> = (0..order).map(|_| *coords.choose(rng).unwrap()).collect();
    let g = ScalarExpr::symbol_partial(SymbolPartial::new(symbol, wrt));
    let cofactor = polynomial(
        rng,
        &coords,
        &Shape {
            max_degree: 1,
            max_terms: 1,
            ..Shape::default()
        },
    );
    g * cofactor
}

fn with_extras(
    rng: &mut impl Rng,
    m: usize,
    e: ScalarExpr,
    shape: &Shape,
    full: bool,
) -> ScalarExpr {
    let mut e = e;
    if shape.symbol_rate > 0.0 && rng.gen_bool(shape.symbol_rate) {
        e = e + symbol_term(rng, m, full);
    }
    if shape.fraction_rate > 0.0 && rng.gen_bool(shape.fraction_rate) {
        let c = CoordinateId::base(rng.gen_range(1..=m as u8));
        let x = ScalarExpr::coord(c);
        let den = &x * &x + ScalarExpr::integer(rng.gen_range(1..=3));
        e = e.div(&den).expect("positive denominator");
    }
    e
}

/// A function on the base.
pub fn base_scalar(rng: &mut impl Rng, m: usize, shape: &Shape) -> ScalarExpr {
    let p = polynomial(rng, &base_coords(m), shape);
    with_extras(rng, m, p, shape, false)
}

/// A function on the tangent chart.
pub fn scalar(rng: &mut impl Rng, m: usize, shape: &Shape) -> ScalarExpr {
    let p = polynomial(rng, &all_coords(m), shape);
    with_extras(rng, m, p, shape, true)
}

/// A function whose fibre dependence is polynomial: base coefficients times
/// fibre monomials.
pub fn fiber_polynomial(rng: &mut impl Rng, m: usize, shape: &Shape) -> ScalarExpr {
    let fibers: Vec<CoordinateId> = (1..=m as u8).map(CoordinateId::fiber).collect();
    let n = rng.gen_range(1..=shape.max_terms);
    let mut acc = ScalarExpr::zero();
    for _ in 0..n {
        let mono = monomial(rng, &fibers, shape.max_degree);
        let coeff = base_scalar(
            rng,
            m,
            &Shape {
                max_degree: 2,
                max_terms: 2,
                ..*shape
            },
        );
        acc =
            acc + coeff * ScalarExpr::from_poly(Poly::term(mono, Rational::from_integer(1.into())));
    }
    acc
}

/// A random subset of `indices`, each kept with probability `keep`, never
/// empty unless `indices` is.
fn subset(rng: &mut impl Rng, indices: Vec<MultiIndex>, keep: f64) -> Vec<MultiIndex> {
    let mut out: Vec<MultiIndex> = indices
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(keep))
        .collect();
    if out.is_empty() {
        if let Some(i) = indices.choose(rng) {
            out.push(*i);
        }
    }
    out
}

pub fn base_field(rng: &mut impl Rng, m: usize, shape: &Shape) -> BaseVectorField {
    let comps: Vec<ScalarExpr> = (0..m)
        .map(|_| {
            if rng.gen_bool(0.75) {
                base_scalar(rng, m, shape)
            } else {
                ScalarExpr::zero()
            }
        })
        .collect();
    BaseVectorField::new(m, comps).expect("base-only components")
}

pub fn field(rng: &mut impl Rng, m: usize, shape: &Shape) -> VectorField {
    let comps: Vec<ScalarExpr> = (0..2 * m)
        .map(|_| {
            if rng.gen_bool(0.6) {
                scalar(rng, m, shape)
            } else {
                ScalarExpr::zero()
            }
        })
        .collect();
    VectorField::new(m, comps).expect("2m components")
}

/// A base `p`-form with a few random terms.
pub fn base_form(rng: &mut impl Rng, m: usize, p: usize, shape: &Shape) -> BaseForm {
    let indices = subset(rng, MultiIndex::all_of_len(m, p), 0.7);
    let terms: Vec<(MultiIndex, ScalarExpr)> = indices
        .into_iter()
        .map(|i| (i, base_scalar(rng, m, shape)))
        .collect();
    BaseForm::new(Form::from_terms(m, p, terms)).expect("dx-only, base-only")
}

/// A `p`-form on the tangent chart with a few random terms.
pub fn form(rng: &mut impl Rng, m: usize, p: usize, shape: &Shape) -> Form {
    let indices = MultiIndex::all_of_len(2 * m, p);
    let keep = (3.0 / indices.len().max(1) as f64).min(1.0);
    let terms: Vec<(MultiIndex, ScalarExpr)> = subset(rng, indices, keep)
        .into_iter()
        .map(|i| (i, scalar(rng, m, shape)))
        .collect();
    Form::from_terms(m, p, terms)
}

/// A semi-basic `p`-form whose coefficients are polynomial along the fibre.
pub fn semi_basic_form(rng: &mut impl Rng, m: usize, p: usize, shape: &Shape) -> Form {
    let indices = MultiIndex::all_of_len(m, p);
    let keep = (2.0 / indices.len().max(1) as f64).min(1.0);
    let terms: Vec<(MultiIndex, ScalarExpr)> = subset(rng, indices, keep)
        .into_iter()
        .map(|i| (i, fiber_polynomial(rng, m, shape)))
        .collect();
    Form::from_terms(m, p, terms)
}

/// A vector-valued `k`-form with a few random terms.
pub fn vector_valued_form(
    rng: &mut impl Rng,
    m: usize,
    k: usize,
    shape: &Shape,
) -> VectorValuedForm {
    let indices = MultiIndex::all_of_len(2 * m, k);
    let keep = (2.0 / indices.len().max(1) as f64).min(1.0);
    let terms: Vec<(MultiIndex, VectorField)> = subset(rng, indices, keep)
        .into_iter()
        .map(|i| {
            let sparse_shape = Shape {
                max_terms: 2,
                ..*shape
            };
            let comps = (0..2 * m)
                .map(|_| {
                    if rng.gen_bool(0.4) {
                        scalar(rng, m, &sparse_shape)
                    } else {
                        ScalarExpr::zero()
                    }
                })
                .collect();
            (i, VectorField::new(m, comps).expect("2m components"))
        })
        .collect();
    VectorValuedForm::from_terms(m, k, terms)
}

/// A random integer from `lo..=hi`, exposed for callers drawing dimensions
/// and degrees from the same stream.
pub fn pick(rng: &mut impl Rng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=3 {
            for _ in 0..20 {
                let f = base_scalar(&mut rng, m, &Shape::default());
                assert!(f.is_base_only());
                assert!(f.max_index() as usize <= m);
                let w = semi_basic_form(&mut rng, m, 1.min(m), &Shape::polynomial());
                assert!(w.is_dx_only());
                assert!(w.terms().all(|(_, c)| c.fiber_expansion().is_ok()));
            }
        }
    }

    #[test]
    fn same_seed_same_objects() {
        let a = form(&mut ChaCha8Rng::seed_from_u64(9), 2, 2, &Shape::default());
        let b = form(&mut ChaCha8Rng::seed_from_u64(9), 2, 2, &Shape::default());
        assert_eq!(a, b);
    }
}
