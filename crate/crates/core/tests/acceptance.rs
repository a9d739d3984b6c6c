//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tmcalc::dsl::{eval_str, text, Value};
use tmcalc::geometry::{BaseForm, Form};
use tmcalc::lifts::complete_lift_form;
use tmcalc::numeric::TOLERANCE;
use tmcalc::operators::{apply_variable_d, d_b, db_poincare};
use tmcalc::random::{self, Shape};
use tmcalc::scalar::ScalarExpr;
use tmcalc::suite::{run_suite, SuiteConfig};
use tmcalc::transitions::{
    check_naturality, random_affine, random_quadratic, BaseObject, ChartTransition,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn x(i: u8) -> ScalarExpr {
    ScalarExpr::x(i)
}

fn v(i: u8) -> ScalarExpr {
    ScalarExpr::v(i)
}

fn angular_form() -> Outcome {
    let start = Instant::now();
    let r2 = &(&x(1) * &x(1)) + &(&x(2) * &x(2));
    let omega = Form::dx(2, 1)
        .mul_scalar(&(-&x(2)))
        .add(&Form::dx(2, 2).mul_scalar(&x(1)))
        .mul_scalar(&r2.recip().unwrap());
    let lifted = complete_lift_form(&BaseForm::new(omega).unwrap());
    let potential = (&(&x(1) * &v(2)) - &(&x(2) * &v(1))).div(&r2).unwrap();
    let expected = Form::scalar(2, potential).d();
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        lifted == expected && elapsed < 1.0,
        format!(
            "lift equals d((x1 v2 - x2 v1)/(x1^2 + x2^2)): {}, {elapsed:.3} s",
            lifted == expected
        ),
    )
}

fn identity_suite() -> Outcome {
    let report = run_suite(&SuiteConfig::default());
    let seconds = report.wall_time_ms / 1e3;
    let failed: Vec<&str> = report
        .suite
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.as_str())
        .collect();
    outcome(
        failed.is_empty() && seconds < 120.0,
        format!(
            "{} identities x 25 cases over m = 1..3, {} failed {:?}, {seconds:.1} s",
            report.summary.total,
            failed.len(),
            failed
        ),
    )
}

fn db_poincare_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let shape = Shape::polynomial();
    let (mut done, mut ok) = (0, 0);
    while done < 50 {
        let m = 1 + done % 3;
        let degree = 1 + rng.gen_range(0..m.min(3));
        let tau = random::semi_basic_form(&mut rng, m, degree - 1, &shape);
        let w = d_b(&tau);
        if w.is_zero() {
            continue;
        }
        done += 1;
        if db_poincare(&w).is_ok_and(|a| d_b(&a) == w) {
            ok += 1;
        }
    }
    outcome(
        ok == done,
        format!("{ok}/{done} primitives recover the input exactly"),
    )
}

/// `(d + x1 d_B)^2` on a fibre coordinate. It equals `dx1 ^ dx^j`.
fn nonconstant_square(m: usize, j: u8) -> Form {
    let (one, x1) = (ScalarExpr::one(), x(1));
    let w = Form::scalar(m, v(j));
    apply_variable_d(&one, &x1, &apply_variable_d(&one, &x1, &w))
}

fn counterexample() -> Outcome {
    let literal: Vec<bool> = (1..=3)
        .map(|m| !nonconstant_square(m, 1).is_zero())
        .collect();
    let report = run_suite(&SuiteConfig {
        filter: Some("D-squared-nonconstant".into()),
        ..SuiteConfig::default()
    });
    let suite_ok = report.suite.len() == 1 && report.suite[0].passed;
    outcome(
        literal.iter().all(|b| *b) && suite_ok,
        format!(
            "(d + x1 d_B)^2 v1 nonzero for m = 1, 2, 3: {literal:?}; suite negative test passes: {suite_ok}"
        ),
    )
}

/// Not a criterion: the same operator on `v2`, where `dx1 ^ dx2` survives.
fn counterexample_on_v2() -> Outcome {
    let sq = nonconstant_square(2, 2);
    let expected = Form::dx(2, 1).wedge(&Form::dx(2, 2));
    outcome(
        !sq.is_zero() && sq == expected,
        format!(
            "(d + x1 d_B)^2 v2 = {} on m = 2",
            text(&Value::from_form(sq.clone()))
        ),
    )
}

fn natural(t: &ChartTransition, rng: &mut ChaCha8Rng) -> Result<bool, tmcalc::Error> {
    let m = t.m();
    let shape = Shape::polynomial();
    let p = rng.gen_range(0..=m);
    let objects = [
        (
            "pullback",
            BaseObject::Form(random::base_form(rng, m, p, &shape)),
        ),
        (
            "vertical",
            BaseObject::Field(random::base_field(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Function(random::base_scalar(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Field(random::base_field(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Form(random::base_form(rng, m, p, &shape)),
        ),
        ("xi", BaseObject::None),
        ("B", BaseObject::None),
    ];
    for (lift, object) in &objects {
        if !check_naturality(lift, object, t)? {
            return Ok(false);
        }
    }
    let det = t.jacobian_determinant();
    Ok(t.tangent().volume_factor() == &det * &det)
}

fn naturality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut transitions = Vec::new();
    for k in 0..20 {
        transitions.push(random_affine(&mut rng, 1 + k % 3));
    }
    for k in 0..10 {
        transitions.push(random_quadratic(&mut rng, 2 + k % 2));
    }
    let results: Vec<bool> = transitions
        .iter()
        .map(|t| natural(t, &mut rng).unwrap_or(false))
        .collect();
    let (affine, quadratic) = results.split_at(20);
    let count = |r: &[bool]| r.iter().filter(|b| **b).count();
    outcome(
        results.iter().all(|b| *b),
        format!(
            "affine {}/20, quadratic {}/10 natural for all five lifts with volume factor det^2",
            count(affine),
            count(quadratic)
        ),
    )
}

fn numeric_agreement() -> Outcome {
    let report = run_suite(&SuiteConfig {
        numeric: true,
        ..SuiteConfig::default()
    });
    let disagreeing: Vec<&str> = report
        .suite
        .iter()
        .filter(|r| !r.numeric.as_ref().is_some_and(|n| n.agrees))
        .map(|r| r.id.as_str())
        .collect();
    outcome(
        disagreeing.is_empty(),
        format!(
            "{} identities, numeric verdict differs on {:?} (relative tolerance {TOLERANCE:e})",
            report.summary.total, disagreeing
        ),
    )
}

fn dsl_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let shape = Shape {
        fraction_rate: 0.3,
        ..Shape::default()
    };
    let mut ok = 0;
    for k in 0..200 {
        let m = 1 + k % 3;
        let value = if k % 2 == 0 {
            Value::Field(random::field(&mut rng, m, &shape))
        } else {
            let p = rng.gen_range(0..=2 * m);
            Value::from_form(random::form(&mut rng, m, p, &shape))
        };
        let back = eval_str(&format!("fn F: full\n{}", text(&value)), Some(m));
        let same = match back {
            Ok(Some(b)) => b == value || (value.is_zero() && b.is_zero()),
            _ => false,
        };
        ok += same as usize;
    }
    outcome(
        ok == 200,
        format!("{ok}/200 forms and fields survive parse(render(.))"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 angular form lift", angular_form),
        ("2 identity suite", identity_suite),
        ("3 d_B Poincare round trip", db_poincare_round_trips),
        ("4 non-constant D squared", counterexample),
        ("5 naturality", naturality),
        ("6 numeric agreement", numeric_agreement),
        ("7 DSL round trip", dsl_round_trip),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let o = run();
        all &= o.passed;
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let extra = counterexample_on_v2();
    println!(
        "{} supplementary non-constant D squared on v2: {}",
        if extra.passed { "PASS" } else { "FAIL" },
        extra.detail
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
