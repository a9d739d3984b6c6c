use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tmcalc::dsl::{eval_str, text, Value};
use tmcalc::geometry::Form;
use tmcalc::random::{self, Shape};
use tmcalc::scalar::{Bindings, CoordinateId, FunctionSymbol, ScalarExpr};

const FRACTIONS: Shape = Shape {
    max_degree: 3,
    max_terms: 3,
    symbol_rate: 0.3,
    fraction_rate: 0.3,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalars(seed: u64, m: usize, n: usize) -> Vec<ScalarExpr> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| random::scalar(&mut r, m, &FRACTIONS))
        .collect()
}

fn coordinate(m: usize, slot: usize) -> CoordinateId {
    CoordinateId::from_slot(slot % (2 * m), m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), m in 1usize..=3) {
        let s = scalars(seed, m, 3);
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        prop_assert_eq!(a * &ScalarExpr::one(), a.clone());
        if !a.is_zero() {
            prop_assert!((a * &a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn normalize_is_a_fixed_point(seed in any::<u64>(), m in 1usize..=3) {
        for e in scalars(seed, m, 3) {
            prop_assert_eq!(e.normalize().unwrap(), e);
        }
    }

    #[test]
    fn partials_commute(seed in any::<u64>(), m in 1usize..=3, i in 0usize..6, j in 0usize..6) {
        let e = &scalars(seed, m, 1)[0];
        let (ci, cj) = (coordinate(m, i), coordinate(m, j));
        prop_assert_eq!(e.partial(ci).partial(cj), e.partial(cj).partial(ci));
    }

    #[test]
    fn partial_is_a_derivation(seed in any::<u64>(), m in 1usize..=3, i in 0usize..6) {
        let s = scalars(seed, m, 2);
        let c = coordinate(m, i);
        let lhs = (&s[0] * &s[1]).partial(c);
        let rhs = &(&s[0].partial(c) * &s[1]) + &(&s[0] * &s[1].partial(c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_ring_map(seed in any::<u64>(), m in 1usize..=3) {
        let mut r = rng(seed ^ 0x5eed);
        let s = scalars(seed, m, 2);
        let mut bindings = Bindings::new();
        for c in CoordinateId::all(m) {
            bindings = bindings.coord(c, random::polynomial(&mut r, &[CoordinateId::base(1), c], &Shape::polynomial()));
        }
        let sub = |e: &ScalarExpr| e.substitute(&bindings);
        if let (Ok(a), Ok(b), Ok(ab), Ok(sum)) = (sub(&s[0]), sub(&s[1]), sub(&(&s[0] * &s[1])), sub(&(&s[0] + &s[1]))) {
            prop_assert_eq!(ab, &a * &b);
            prop_assert_eq!(sum, &a + &b);
        }
    }

    #[test]
    fn symbol_substitution_commutes_with_partials(seed in any::<u64>(), m in 1usize..=3, i in 0usize..6) {
        let mut r = rng(seed);
        let e = random::scalar(&mut r, m, &Shape { symbol_rate: 0.9, ..Shape::default() });
        let image = random::base_scalar(&mut r, m, &Shape::polynomial());
        let bindings = Bindings::new().symbol(&FunctionSymbol::base("f"), image);
        let c = coordinate(m, i);
        prop_assert_eq!(
            e.substitute(&bindings).unwrap().partial(c),
            e.partial(c).substitute(&bindings).unwrap()
        );
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), m in 1usize..=3, p in 0usize..6) {
        let p = p % (2 * m);
        let w = random::form(&mut rng(seed), m, p, &FRACTIONS);
        prop_assert_eq!(w.d().d(), Form::zero(m, p + 2));
    }

    #[test]
    fn text_round_trips(seed in any::<u64>(), m in 1usize..=3, p in 0usize..4, field in any::<bool>()) {
        let mut r = rng(seed);
        let value = if field {
            Value::Field(random::field(&mut r, m, &FRACTIONS))
        } else {
            Value::from_form(random::form(&mut r, m, p.min(2 * m), &FRACTIONS))
        };
        let rendered = text(&value);
        let back = eval_str(&format!("fn F: full\n{rendered}"), Some(m)).unwrap().unwrap();
        if value.is_zero() {
            prop_assert!(back.is_zero());
        } else {
            prop_assert_eq!(back, value, "{}", rendered);
        }
    }
}
