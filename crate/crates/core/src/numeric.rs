//! Double-double evaluation of coefficients, the independent cross-check
//! route for identities.
//!
//! A [`NumField`] is an expression tree over chart coordinates. Derivatives
//! of trees built from ring operations are taken structurally; only opaque
//! leaves (the concrete stand-ins for abstract function symbols) are
//! differentiated by central finite differences.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;

use crate::error::Result;
use crate::scalar::{
    Coefficient, CoordKind, CoordinateId, FunctionSymbol, Generator, Poly, Rational, ScalarExpr,
};

/// Finite-difference step applied on each coordinate.
pub const STEP: f64 = 1e-4;
/// Relative agreement demanded between two evaluations.
pub const TOLERANCE: f64 = 1e-6;
/// Sample points closer than this to a zero of a denominator are rejected.
pub const POLE_MARGIN: f64 = 1e-2;

/// A point of the tangent chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    base: Vec<TwoFloat>,
    fiber: Vec<TwoFloat>,
}

impl Point {
    pub fn new(base: Vec<TwoFloat>, fiber: Vec<TwoFloat>) -> Self {
        assert_eq!(base.len(), fiber.len());
        Point { base, fiber }
    }

    /// Values in coframe order `(x1..xm, v1..vm)`.
    pub fn from_rationals(values: &[Rational]) -> Self {
        let m = values.len() / 2;
        let conv: Vec<TwoFloat> = values.iter().map(to_twofloat).collect();
        Point {
            base: conv[..m].to_vec(),
            fiber: conv[m..].to_vec(),
        }
    }

    pub fn m(&self) -> usize {
        self.base.len()
    }

    pub fn get(&self, c: CoordinateId) -> TwoFloat {
        let i = c.index as usize - 1;
        match c.kind {
            CoordKind::Base => self.base[i],
            CoordKind::Fiber => self.fiber[i],
        }
    }

    pub fn with(&self, c: CoordinateId, value: TwoFloat) -> Point {
        let mut p = self.clone();
        let i = c.index as usize - 1;
        match c.kind {
            CoordKind::Base => p.base[i] = value,
            CoordKind::Fiber => p.fiber[i] = value,
        }
        p
    }
}

/// Quotient to full double-double precision. The division operator of
/// `TwoFloat` drops the low word of its reciprocal residual, so one Newton
/// correction is applied on top of it.
pub fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    let r = a - q * b;
    q + r.hi() / b.hi()
}

pub fn to_twofloat(q: &Rational) -> TwoFloat {
    let part = |n: &num_bigint::BigInt| match n.to_i64() {
        Some(i) => TwoFloat::from(i),
        None => TwoFloat::from(n.to_f64().unwrap_or(f64::NAN)),
    };
    div(part(q.numer()), part(q.denom()))
}

/// A concrete smooth function standing in for an abstract symbol.
pub type LeafFn = Arc<dyn Fn(&Point) -> TwoFloat + Send + Sync>;

#[derive(Clone)]
enum Node {
    Const(TwoFloat),
    Coord(CoordinateId),
    Leaf {
        f: LeafFn,
        wrt: Vec<CoordinateId>,
        base_only: bool,
    },
    Add(NumField, NumField),
    Mul(NumField, NumField),
    Neg(NumField),
    Recip(NumField),
    Compose {
        inner: NumField,
        m: usize,
        images: Vec<NumField>,
    },
}

/// A real-valued function on the tangent chart.
#[derive(Clone)]
pub struct NumField(Arc<Node>);

impl NumField {
    pub fn constant(value: TwoFloat) -> Self {
        NumField(Arc::new(Node::Const(value)))
    }

    pub fn coord(c: CoordinateId) -> Self {
        NumField(Arc::new(Node::Coord(c)))
    }

    pub fn leaf(f: LeafFn, base_only: bool) -> Self {
        NumField(Arc::new(Node::Leaf {
            f,
            wrt: Vec::new(),
            base_only,
        }))
    }

    fn as_const(&self) -> Option<TwoFloat> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn recip(&self) -> Self {
        match self.as_const() {
            Some(c) => NumField::constant(div(TwoFloat::from(1.0), c)),
            None => NumField(Arc::new(Node::Recip(self.clone()))),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        Coefficient::mul(self, &other.recip())
    }

    /// Value at `p`.
    pub fn eval(&self, p: &Point) -> TwoFloat {
        let mut memo = HashMap::new();
        self.eval_memo(p, &mut memo)
    }

    pub fn eval_f64(&self, p: &Point) -> f64 {
        self.eval(p).hi()
    }

    fn eval_memo(&self, p: &Point, memo: &mut HashMap<usize, TwoFloat>) -> TwoFloat {
        let key = Arc::as_ptr(&self.0) as usize;
        if let Some(v) = memo.get(&key) {
            return *v;
        }
        let value = match &*self.0 {
            Node::Const(c) => *c,
            Node::Coord(c) => p.get(*c),
            Node::Leaf { f, wrt, .. } => eval_leaf(f, wrt, p),
            Node::Add(a, b) => a.eval_memo(p, memo) + b.eval_memo(p, memo),
            Node::Mul(a, b) => a.eval_memo(p, memo) * b.eval_memo(p, memo),
            Node::Neg(a) => -a.eval_memo(p, memo),
            Node::Recip(a) => div(TwoFloat::from(1.0), a.eval_memo(p, memo)),
            Node::Compose { inner, m, images } => {
                let values: Vec<TwoFloat> = images.iter().map(|g| g.eval_memo(p, memo)).collect();
                let q = Point::new(values[..*m].to_vec(), values[*m..].to_vec());
                inner.eval(&q)
            }
        };
        memo.insert(key, value);
        value
    }

    /// Converts an exact expression, replacing each symbol by its stand-in.
    pub fn from_expr(e: &ScalarExpr, env: &StandIns) -> Self {
        let num = from_poly(e.numer(), env);
        let den = e.denom();
        if den.is_one() {
            num
        } else {
            num.div(&from_poly(den, env))
        }
    }
}

fn from_poly(p: &Poly, env: &StandIns) -> NumField {
    let mut acc = NumField::zero();
    for (mono, q) in p.terms() {
        let mut term = NumField::from_rational(q);
        for (g, e) in mono.factors() {
            let factor = match g {
                Generator::Coord(c) => NumField::coord(*c),
                Generator::Partial(sp) => {
                    let mut leaf = env.field(&sp.symbol);
                    for c in sp.wrt() {
                        leaf = leaf.partial(*c);
                    }
                    leaf
                }
            };
            for _ in 0..*e {
                term = Coefficient::mul(&term, &factor);
            }
        }
        acc = Coefficient::add(&acc, &term);
    }
    acc
}

/// Nested five-point central differences, innermost derivative first.
fn eval_leaf(f: &LeafFn, wrt: &[CoordinateId], p: &Point) -> TwoFloat {
    let Some((c, rest)) = wrt.split_last() else {
        return f(p);
    };
    let h = TwoFloat::from(STEP);
    let x = p.get(*c);
    let at = |k: i64| eval_leaf(f, rest, &p.with(*c, x + h * TwoFloat::from(k)));
    div(at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2), h * 12.0)
}

impl fmt::Debug for NumField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{}", c.hi()),
            Node::Coord(c) => write!(f, "{c}"),
            Node::Leaf { wrt, .. } => write!(f, "leaf{wrt:?}"),
            Node::Add(a, b) => write!(f, "({a:?} + {b:?})"),
            Node::Mul(a, b) => write!(f, "{a:?}*{b:?}"),
            Node::Neg(a) => write!(f, "-{a:?}"),
            Node::Recip(a) => write!(f, "1/{a:?}"),
            Node::Compose { inner, .. } => write!(f, "{inner:?}∘φ"),
        }
    }
}

impl Coefficient for NumField {
    fn zero() -> Self {
        NumField::constant(TwoFloat::from(0.0))
    }

    fn from_rational(q: &Rational) -> Self {
        NumField::constant(to_twofloat(q))
    }

    fn coordinate(c: CoordinateId) -> Self {
        NumField::coord(c)
    }

    fn add(&self, other: &Self) -> Self {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => NumField::constant(a + b),
            (Some(a), _) if a == 0.0 => other.clone(),
            (_, Some(b)) if b == 0.0 => self.clone(),
            _ => NumField(Arc::new(Node::Add(self.clone(), other.clone()))),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => NumField::constant(a * b),
            (Some(a), _) | (_, Some(a)) if a == 0.0 => NumField::zero(),
            (Some(a), _) if a == 1.0 => other.clone(),
            (_, Some(b)) if b == 1.0 => self.clone(),
            _ => NumField(Arc::new(Node::Mul(self.clone(), other.clone()))),
        }
    }

    fn neg(&self) -> Self {
        match &*self.0 {
            Node::Const(c) => NumField::constant(-*c),
            Node::Neg(a) => a.clone(),
            _ => NumField(Arc::new(Node::Neg(self.clone()))),
        }
    }

    fn scale(&self, q: &Rational) -> Self {
        Coefficient::mul(self, &NumField::from_rational(q))
    }

    fn partial(&self, c: CoordinateId) -> Self {
        match &*self.0 {
            Node::Const(_) => NumField::zero(),
            Node::Coord(d) => NumField::from_integer((*d == c) as i64),
            Node::Leaf { f, wrt, base_only } => {
                if *base_only && c.is_fiber() {
                    return NumField::zero();
                }
                let mut wrt = wrt.clone();
                wrt.push(c);
                NumField(Arc::new(Node::Leaf {
                    f: f.clone(),
                    wrt,
                    base_only: *base_only,
                }))
            }
            Node::Add(a, b) => a.partial(c).add(&b.partial(c)),
            Node::Mul(a, b) => Coefficient::add(
                &Coefficient::mul(&a.partial(c), b),
                &Coefficient::mul(a, &b.partial(c)),
            ),
            Node::Neg(a) => Coefficient::neg(&a.partial(c)),
            Node::Recip(a) => {
                let r = self.clone();
                Coefficient::neg(&Coefficient::mul(&Coefficient::mul(&r, &r), &a.partial(c)))
            }
            Node::Compose { inner, m, images } => {
                let mut acc = NumField::zero();
                for (s, image) in images.iter().enumerate() {
                    let di = image.partial(c);
                    if di.is_zero() {
                        continue;
                    }
                    let outer = inner.partial(CoordinateId::from_slot(s, *m));
                    if outer.is_zero() {
                        continue;
                    }
                    let outer = NumField(Arc::new(Node::Compose {
                        inner: outer,
                        m: *m,
                        images: images.clone(),
                    }));
                    acc = Coefficient::add(&acc, &Coefficient::mul(&outer, &di));
                }
                acc
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const() == Some(TwoFloat::from(0.0))
    }

    fn is_base_only(&self) -> bool {
        match &*self.0 {
            Node::Const(_) => true,
            Node::Coord(c) => !c.is_fiber(),
            Node::Leaf { base_only, .. } => *base_only,
            Node::Add(a, b) | Node::Mul(a, b) => a.is_base_only() && b.is_base_only(),
            Node::Neg(a) | Node::Recip(a) => a.is_base_only(),
            Node::Compose { inner, m, images } => {
                let read = if inner.is_base_only() {
                    &images[..*m]
                } else {
                    &images[..]
                };
                read.iter().all(NumField::is_base_only)
            }
        }
    }

    fn compose(&self, m: usize, image: &dyn Fn(CoordinateId) -> Self) -> Result<Self> {
        let images = CoordinateId::all(m).map(image).collect();
        Ok(NumField(Arc::new(Node::Compose {
            inner: self.clone(),
            m,
            images,
        })))
    }
}

/// Deterministic concrete functions for abstract symbols.
///
/// Each symbol name gets `c + Σ a_s z_s + Σ b_s z_s² + k / (1 + Σ w_s z_s²)`
/// with `w_s ≥ 1` and small random rational coefficients, over the base coordinates for
/// base-only symbols and over all coordinates otherwise.
#[derive(Clone, Debug)]
pub struct StandIns {
    seed: u64,
    m: usize,
}

impl StandIns {
    pub fn new(seed: u64, m: usize) -> Self {
        StandIns { seed, m }
    }

    pub fn field(&self, symbol: &FunctionSymbol) -> NumField {
        let base_only = symbol.is_base_only();
        let coords: Vec<CoordinateId> = CoordinateId::all(self.m)
            .filter(|c| !base_only || !c.is_fiber())
            .collect();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ self.seed;
        for b in symbol.name().bytes() {
            h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(h);
        let mut small = || TwoFloat::from(rng.gen_range(-6i64..=6) as f64 / 4.0);
        let c0 = small();
        let lin: Vec<TwoFloat> = coords.iter().map(|_| small()).collect();
        let quad: Vec<TwoFloat> = coords.iter().map(|_| small()).collect();
        let k = small();
        let w: Vec<TwoFloat> = coords
            .iter()
            .map(|_| {
                let s = small();
                TwoFloat::from(1.0) + s * s
            })
            .collect();
        let f: LeafFn = Arc::new(move |p: &Point| {
            let mut acc = c0;
            let mut den = TwoFloat::from(1.0);
            for (s, c) in coords.iter().enumerate() {
                let z = p.get(*c);
                acc += lin[s] * z + quad[s] * z * z;
                den += w[s] * z * z;
            }
            acc + div(k, den)
        });
        NumField::leaf(f, base_only)
    }
}

/// `|l − r| ≤ tol · max(1, |l|, |r|)`.
pub fn agree(l: TwoFloat, r: TwoFloat, tol: f64) -> bool {
    let (l, r) = (l.hi(), r.hi());
    if !l.is_finite() || !r.is_finite() {
        return false;
    }
    (l - r).abs() <= tol * 1f64.max(l.abs()).max(r.abs())
}

/// A random rational point with coordinates in `[-2, 2]` and small
/// denominators, in coframe order.
pub fn random_rational_point(rng: &mut impl Rng, m: usize) -> Vec<Rational> {
    (0..2 * m)
        .map(|_| {
            let den = rng.gen_range(1i64..=7);
            let num = rng.gen_range(-2 * den..=2 * den);
            Rational::new(num.into(), den.into())
        })
        .collect()
}

/// Draws up to `tries` points and keeps the first `count` at which every
/// denominator stays at least [`POLE_MARGIN`] away from zero.
pub fn admissible_points(
    rng: &mut impl Rng,
    m: usize,
    denominators: &[ScalarExpr],
    count: usize,
    tries: usize,
) -> Vec<Vec<Rational>> {
    let margin = Rational::new(1.into(), 100.into());
    let mut out = Vec::new();
    for _ in 0..tries {
        if out.len() == count {
            break;
        }
        let q = random_rational_point(rng, m);
        let point: std::collections::BTreeMap<Generator, Rational> = CoordinateId::all(m)
            .zip(q.iter().cloned())
            .map(|(c, v)| (Generator::Coord(c), v))
            .collect();
        let ok = denominators.iter().all(|d| match d.eval(&point) {
            Ok(v) => v.abs() >= margin,
            Err(_) => true,
        });
        if ok {
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(values: &[i64]) -> Point {
        let q: Vec<Rational> = values
            .iter()
            .map(|v| Rational::from_integer((*v).into()))
            .collect();
        Point::from_rationals(&q)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 * 1f64.max(a.abs())
    }

    #[test]
    fn structural_derivatives() {
        let x1 = NumField::coord(CoordinateId::base(1));
        let v1 = NumField::coord(CoordinateId::fiber(1));
        let e = Coefficient::mul(&Coefficient::mul(&x1, &x1), &v1)
            .div(&Coefficient::add(&x1, &NumField::one()));
        let d = e.partial(CoordinateId::base(1));
        // d/dx (x²v/(x+1)) = v(x² + 2x)/(x+1)²
        assert!(close(d.eval_f64(&pt(&[2, 3])), 3.0 * 8.0 / 9.0));
        assert!(e.partial(CoordinateId::fiber(2)).is_zero());
    }

    #[test]
    fn leaf_derivatives_match_exact_values() {
        let f: LeafFn = Arc::new(|p: &Point| {
            let x = p.get(CoordinateId::base(1));
            x * x * x
        });
        let leaf = NumField::leaf(f, true);
        let p = pt(&[2, 0]);
        assert!(close(
            leaf.partial(CoordinateId::base(1)).eval_f64(&p),
            12.0
        ));
        let second = leaf
            .partial(CoordinateId::base(1))
            .partial(CoordinateId::base(1));
        assert!((second.eval_f64(&p) - 12.0).abs() < 1e-9);
        assert!(leaf.partial(CoordinateId::fiber(1)).is_zero());
    }

    #[test]
    fn conversion_agrees_with_exact_evaluation() {
        let x = ScalarExpr::x;
        let v = ScalarExpr::v;
        let e = (&x(1) * &v(2) - &x(2) * &v(1))
            .div(&(&x(1) * &x(1) + &x(2) * &x(2)))
            .unwrap();
        let n = NumField::from_expr(&e, &StandIns::new(0, 2));
        let q: Vec<Rational> = [1, 0, 0, 5]
            .iter()
            .map(|v| Rational::from_integer((*v).into()))
            .collect();
        assert!(close(n.eval_f64(&Point::from_rationals(&q)), 5.0));
    }

    #[test]
    fn composition_obeys_chain_rule() {
        let x1 = NumField::coord(CoordinateId::base(1));
        let sq = Coefficient::mul(&x1, &x1);
        let image = |c: CoordinateId| match c {
            c if c == CoordinateId::base(1) => Coefficient::add(&x1, &NumField::from_integer(1)),
            c => NumField::coord(c),
        };
        let composed = sq.compose(1, &image).unwrap();
        let p = pt(&[2, 0]);
        assert!(close(composed.eval_f64(&p), 9.0));
        assert!(close(
            composed.partial(CoordinateId::base(1)).eval_f64(&p),
            6.0
        ));
    }

    #[test]
    fn tolerance_has_a_unit_floor() {
        assert!(agree(TwoFloat::from(1e-9), TwoFloat::from(0.0), TOLERANCE));
        assert!(!agree(TwoFloat::from(1.0), TwoFloat::from(1.1), TOLERANCE));
        assert!(agree(
            TwoFloat::from(1e9),
            TwoFloat::from(1e9 + 1.0),
            TOLERANCE
        ));
    }

    #[test]
    fn stand_ins_are_deterministic_and_respect_dependence() {
        let s = StandIns::new(7, 2);
        let f = FunctionSymbol::base("f");
        let p = pt(&[1, 2, 3, 4]);
        let q = pt(&[1, 2, -3, 9]);
        assert_eq!(s.field(&f).eval(&p), s.field(&f).eval(&q));
        let g = FunctionSymbol::full("g");
        assert_ne!(s.field(&g).eval(&p), s.field(&g).eval(&q));
    }
}
