//! The identity suite: a registry of the identities the engine is expected to
//! satisfy, each checked on seeded random inputs.
//!
//! Every identity body draws its inputs from a [`Draw`]. Generic bodies are
//! instantiated twice, once over exact [`ScalarExpr`] coefficients and once
//! over [`NumField`] coefficients, so the numerical route recomputes every
//! intermediate object independently. Bodies that only exist exactly have
//! their final objects evaluated numerically instead. Symbolic equality is
//! the verdict; the numerical route is a redundancy layer.

mod identities;

use std::marker::PhantomData;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsl::{text, Value};
use crate::error::Result;
use crate::geometry::{BaseForm, BaseVectorField, Form, Tensor, VectorField, VectorValuedForm};
use crate::numeric::{admissible_points, agree, NumField, Point, StandIns, TOLERANCE};
use crate::random::{self, Shape};
use crate::scalar::{Coefficient, Rational, ScalarExpr};

pub use identities::registry;

/// Number of sample points per case in numeric mode.
pub const NUMERIC_POINTS: usize = 5;

/// Coefficients an identity body can be instantiated over.
pub trait Instantiate: Coefficient {
    fn instantiate(e: &ScalarExpr, env: &StandIns) -> Self;
}

impl Instantiate for ScalarExpr {
    fn instantiate(e: &ScalarExpr, _: &StandIns) -> Self {
        e.clone()
    }
}

impl Instantiate for NumField {
    fn instantiate(e: &ScalarExpr, env: &StandIns) -> Self {
        NumField::from_expr(e, env)
    }
}

/// Seeded source of random inputs for one case. Every object is drawn
/// exactly and then instantiated, so both routes see the same inputs.
pub struct Draw<C> {
    rng: ChaCha8Rng,
    m: usize,
    env: StandIns,
    shape: Shape,
    denominators: Vec<ScalarExpr>,
    inputs: Vec<String>,
    _coefficients: PhantomData<C>,
}

impl<C: Instantiate> Draw<C> {
    pub fn new(seed: u64, m: usize) -> Self {
        Draw {
            rng: ChaCha8Rng::seed_from_u64(seed),
            m,
            env: StandIns::new(seed, m),
            shape: Shape::default(),
            denominators: Vec::new(),
            inputs: Vec::new(),
            _coefficients: PhantomData,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Restricts later draws to plain polynomials without abstract symbols.
    pub fn polynomial_only(&mut self) {
        self.shape = Shape::polynomial();
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// The rendered inputs drawn so far.
    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    fn conv(&self, e: &ScalarExpr) -> C {
        C::instantiate(e, &self.env)
    }

    fn note<'a>(
        &mut self,
        rendered: String,
        coefficients: impl IntoIterator<Item = &'a ScalarExpr>,
    ) {
        for c in coefficients {
            if !c.is_polynomial() {
                self.denominators
                    .push(ScalarExpr::from_poly(c.denom().clone()));
            }
        }
        self.inputs.push(rendered);
    }

    /// A degree in `lo..=hi`, with `hi` clamped to `lo` from below.
    pub fn degree(&mut self, lo: usize, hi: usize) -> usize {
        random::pick(&mut self.rng, lo, hi.max(lo))
    }

    /// An index in `lo..=hi`.
    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        random::pick(&mut self.rng, lo, hi)
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn rational(&mut self) -> Rational {
        let den = self.rng.gen_range(1i64..=4);
        let num = loop {
            let n = self.rng.gen_range(-5i64..=5);
            if n != 0 {
                break n;
            }
        };
        let q = Rational::new(num.into(), den.into());
        self.inputs.push(format!("c = {q}"));
        q
    }

    /// The exact counterpart of a value, for bodies that build their own.
    pub fn exact(&self, e: &ScalarExpr) -> C {
        self.conv(e)
    }

    pub fn base_scalar(&mut self) -> C {
        let e = random::base_scalar(&mut self.rng, self.m, &self.shape);
        self.note(format!("base function {e}"), [&e]);
        self.conv(&e)
    }

    pub fn scalar(&mut self) -> C {
        let e = random::scalar(&mut self.rng, self.m, &self.shape);
        self.note(format!("function {e}"), [&e]);
        self.conv(&e)
    }

    pub fn base_field(&mut self) -> BaseVectorField<C> {
        let x = random::base_field(&mut self.rng, self.m, &self.shape);
        let rendered = x
            .comps()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        self.note(format!("base field ({rendered})"), x.comps());
        x.try_map(|e| Ok(self.conv(e))).expect("base-only")
    }

    pub fn field(&mut self) -> VectorField<C> {
        let x = random::field(&mut self.rng, self.m, &self.shape);
        self.note(
            format!("field {}", text(&Value::Field(x.clone()))),
            x.comps(),
        );
        x.try_map(|e| Ok(self.conv(e))).expect("infallible")
    }

    pub fn base_form(&mut self, p: usize) -> BaseForm<C> {
        let a = random::base_form(&mut self.rng, self.m, p, &self.shape);
        let coefficients: Vec<ScalarExpr> = a.form().terms().map(|(_, c)| c.clone()).collect();
        self.note(
            format!("base form {}", text(&Value::Form(a.form().clone()))),
            &coefficients,
        );
        a.try_map(|e| Ok(self.conv(e))).expect("base-only")
    }

    pub fn form(&mut self, p: usize) -> Form<C> {
        let w = random::form(&mut self.rng, self.m, p, &self.shape);
        self.note_form(&w);
        w.try_map(|e| Ok(self.conv(e))).expect("infallible")
    }

    pub fn semi_basic_form(&mut self, p: usize) -> Form<C> {
        let w = random::semi_basic_form(&mut self.rng, self.m, p, &self.shape);
        self.note_form(&w);
        w.try_map(|e| Ok(self.conv(e))).expect("infallible")
    }

    fn note_form(&mut self, w: &Form) {
        let coefficients: Vec<ScalarExpr> = w.terms().map(|(_, c)| c.clone()).collect();
        self.note(
            format!("form {}", text(&Value::Form(w.clone()))),
            &coefficients,
        );
    }

    pub fn endo(&mut self, k: usize) -> VectorValuedForm<C> {
        let w = random::vector_valued_form(&mut self.rng, self.m, k, &self.shape);
        let coefficients: Vec<ScalarExpr> =
            w.terms().flat_map(|(_, x)| x.comps().to_vec()).collect();
        self.note(
            format!(
                "vector-valued form {}",
                text(&Value::VectorValued(w.clone()))
            ),
            &coefficients,
        );
        w.try_map(|e| Ok(self.conv(e))).expect("infallible")
    }

    /// Records an exactly built input, such as a chart transition.
    pub fn record(&mut self, rendered: String) {
        self.inputs.push(rendered);
    }
}

/// A value compared by an identity.
#[derive(Clone, Debug)]
pub enum Obj<C = ScalarExpr> {
    Scalar(C),
    Form(Form<C>),
    Field(VectorField<C>),
    VectorValued(VectorValuedForm<C>),
    Tensor(Tensor<C>),
}

impl<C: Coefficient> From<Form<C>> for Obj<C> {
    fn from(w: Form<C>) -> Self {
        Obj::Form(w)
    }
}

impl<C: Coefficient> From<BaseForm<C>> for Obj<C> {
    fn from(w: BaseForm<C>) -> Self {
        Obj::Form(w.into_form())
    }
}

impl<C: Coefficient> From<VectorField<C>> for Obj<C> {
    fn from(x: VectorField<C>) -> Self {
        Obj::Field(x)
    }
}

impl<C: Coefficient> From<BaseVectorField<C>> for Obj<C> {
    fn from(x: BaseVectorField<C>) -> Self {
        Obj::Field(x.horizontal())
    }
}

impl<C: Coefficient> From<VectorValuedForm<C>> for Obj<C> {
    fn from(k: VectorValuedForm<C>) -> Self {
        Obj::VectorValued(k)
    }
}

impl<C: Coefficient> From<Tensor<C>> for Obj<C> {
    fn from(t: Tensor<C>) -> Self {
        Obj::Tensor(t)
    }
}

impl<C: Coefficient> Obj<C> {
    pub fn scalar(c: C) -> Self {
        Obj::Scalar(c)
    }

    /// Kind and degree, which both sides of a comparison must share.
    fn signature(&self) -> String {
        match self {
            Obj::Scalar(_) => "scalar".into(),
            Obj::Form(w) => format!("{}-form", w.degree()),
            Obj::Field(_) => "field".into(),
            Obj::VectorValued(k) => format!("vector-valued {}-form", k.degree()),
            Obj::Tensor(t) => format!("tensor {:?}", t.kinds()),
        }
    }

    /// Components keyed by position.
    fn entries(&self) -> Vec<(Vec<u32>, C)> {
        match self {
            Obj::Scalar(c) => vec![(vec![], c.clone())],
            Obj::Form(w) => w
                .terms()
                .map(|(i, c)| (vec![i.bits()], c.clone()))
                .collect(),
            Obj::Field(x) => x
                .comps()
                .iter()
                .enumerate()
                .map(|(s, c)| (vec![s as u32], c.clone()))
                .collect(),
            Obj::VectorValued(k) => k
                .terms()
                .flat_map(|(i, x)| {
                    x.comps()
                        .iter()
                        .enumerate()
                        .map(move |(s, c)| (vec![i.bits(), s as u32], c.clone()))
                        .collect::<Vec<_>>()
                })
                .collect(),
            Obj::Tensor(t) => t
                .components()
                .map(|(k, c)| (k.iter().map(|s| *s as u32).collect(), c.clone()))
                .collect(),
        }
    }

    fn map<D: Coefficient>(&self, f: &impl Fn(&C) -> D) -> Obj<D> {
        match self {
            Obj::Scalar(c) => Obj::Scalar(f(c)),
            Obj::Form(w) => Obj::Form(w.try_map(|c| Ok(f(c))).expect("infallible")),
            Obj::Field(x) => Obj::Field(x.try_map(|c| Ok(f(c))).expect("infallible")),
            Obj::VectorValued(k) => Obj::VectorValued(k.try_map(|c| Ok(f(c))).expect("infallible")),
            Obj::Tensor(t) => Obj::Tensor(t.try_map(|c| Ok(f(c))).expect("infallible")),
        }
    }
}

impl Obj<ScalarExpr> {
    fn render(&self) -> String {
        match self {
            Obj::Scalar(c) => c.to_string(),
            Obj::Form(w) => text(&Value::Form(w.clone())),
            Obj::Field(x) => text(&Value::Field(x.clone())),
            Obj::VectorValued(k) => text(&Value::VectorValued(k.clone())),
            Obj::Tensor(t) => {
                let parts: Vec<String> =
                    t.components().map(|(k, c)| format!("{k:?}: {c}")).collect();
                if parts.is_empty() {
                    "0".into()
                } else {
                    format!("tensor {:?} {{{}}}", t.kinds(), parts.join(", "))
                }
            }
        }
    }

    fn equals(&self, other: &Obj<ScalarExpr>) -> bool {
        if self.signature() != other.signature() {
            return false;
        }
        let mut l = self.entries();
        let mut r = other.entries();
        l.retain(|(_, c)| !c.is_zero());
        r.retain(|(_, c)| !c.is_zero());
        l.len() == r.len()
            && l.iter()
                .zip(&r)
                .all(|((a, x), (b, y))| a == b && x.equals(y))
    }

    fn coefficients(&self) -> Vec<ScalarExpr> {
        self.entries().into_iter().map(|(_, c)| c).collect()
    }
}

impl Obj<NumField> {
    /// True when every component agrees with `other` at `point`.
    fn agrees_at(&self, other: &Obj<NumField>, point: &Point) -> bool {
        if self.signature() != other.signature() {
            return false;
        }
        let mut l = self.entries();
        let mut r = other.entries();
        l.sort_by(|a, b| a.0.cmp(&b.0));
        r.sort_by(|a, b| a.0.cmp(&b.0));
        let zero = NumField::zero();
        let (mut i, mut j) = (0, 0);
        while i < l.len() || j < r.len() {
            let (a, b) = match (l.get(i), r.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    i += 1;
                    j += 1;
                    (&x.1, &y.1)
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    i += 1;
                    (&x.1, &zero)
                }
                (Some(x), None) => {
                    i += 1;
                    (&x.1, &zero)
                }
                (_, Some(y)) => {
                    j += 1;
                    (&zero, &y.1)
                }
                (None, None) => unreachable!(),
            };
            if !agree(a.eval(point), b.eval(point), TOLERANCE) {
                return false;
            }
        }
        true
    }
}

/// One assertion made by an identity body.
#[derive(Clone, Debug)]
pub enum Check<C = ScalarExpr> {
    /// The two sides must be equal.
    Equal {
        label: String,
        lhs: Obj<C>,
        rhs: Obj<C>,
    },
    /// The two sides must differ; used for counterexample obligations.
    Differ {
        label: String,
        lhs: Obj<C>,
        rhs: Obj<C>,
    },
    /// A decided property.
    Holds { label: String, ok: bool },
}

pub fn equal<C: Coefficient>(
    label: &str,
    lhs: impl Into<Obj<C>>,
    rhs: impl Into<Obj<C>>,
) -> Check<C> {
    Check::Equal {
        label: label.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
    }
}

pub fn differ<C: Coefficient>(
    label: &str,
    lhs: impl Into<Obj<C>>,
    rhs: impl Into<Obj<C>>,
) -> Check<C> {
    Check::Differ {
        label: label.into(),
        lhs: lhs.into(),
        rhs: rhs.into(),
    }
}

pub fn holds<C>(label: &str, ok: bool) -> Check<C> {
    Check::Holds {
        label: label.into(),
        ok,
    }
}

impl<C: Coefficient> Check<C> {
    fn map<D: Coefficient>(&self, f: &impl Fn(&C) -> D) -> Check<D> {
        match self {
            Check::Equal { label, lhs, rhs } => Check::Equal {
                label: label.clone(),
                lhs: lhs.map(f),
                rhs: rhs.map(f),
            },
            Check::Differ { label, lhs, rhs } => Check::Differ {
                label: label.clone(),
                lhs: lhs.map(f),
                rhs: rhs.map(f),
            },
            Check::Holds { label, ok } => Check::Holds {
                label: label.clone(),
                ok: *ok,
            },
        }
    }
}

pub type Body<C> = fn(&mut Draw<C>) -> Result<Vec<Check<C>>>;

/// How an identity is evaluated.
#[derive(Clone, Copy)]
pub enum Route {
    /// Instantiated over both coefficient kinds.
    Generic {
        exact: Body<ScalarExpr>,
        numeric: Body<NumField>,
    },
    /// Exact only; the numerical layer evaluates its final objects.
    Exact(Body<ScalarExpr>),
}

/// A registered identity.
#[derive(Clone, Copy)]
pub struct Identity {
    pub id: &'static str,
    /// Where the statement comes from, in words.
    pub anchor: &'static str,
    /// Smallest chart dimension the identity is meaningful for.
    pub min_m: usize,
    pub route: Route,
}

impl std::fmt::Debug for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Identity")
            .field("id", &self.id)
            .field("anchor", &self.anchor)
            .field("min_m", &self.min_m)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub dimensions: Vec<usize>,
    pub cases: usize,
    pub seed: u64,
    /// Keeps identities whose id contains this text.
    pub filter: Option<String>,
    pub numeric: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            dimensions: vec![1, 2, 3],
            cases: 25,
            seed: 0,
            filter: None,
            numeric: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub m: usize,
    /// Seed reproducing this case alone.
    pub seed: u64,
    pub check: String,
    pub lhs: String,
    pub rhs: String,
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericRecord {
    /// Cases whose numerical verdict matched the exact one.
    pub agreeing: usize,
    pub points: usize,
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub id: String,
    pub anchor: String,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericRecord>,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
    pub cases: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Vec<IdentityRecord>,
    pub summary: Summary,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> SuiteReport {
        let mut r = self.clone();
        r.wall_time_ms = 0.0;
        for rec in &mut r.suite {
            rec.wall_time_ms = 0.0;
        }
        r
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// The seed of one case, mixed from the run seed, the identity and the case
/// index.
pub fn case_seed(seed: u64, id: &str, case: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.rotate_left(17);
    for b in id.bytes().chain((case as u64).to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    h ^ (h >> 29)
}

struct Failure {
    check: String,
    lhs: String,
    rhs: String,
}

impl Failure {
    fn message(check: &str, message: String) -> Self {
        Failure {
            check: check.into(),
            lhs: message,
            rhs: String::new(),
        }
    }
}

struct CaseOutcome {
    m: usize,
    seed: u64,
    inputs: Vec<String>,
    failure: Option<Failure>,
    numeric: Option<NumericOutcome>,
    elapsed_ms: f64,
}

struct NumericOutcome {
    passed: bool,
    points: usize,
    failure: Option<Failure>,
}

fn guarded<T>(f: impl FnOnce() -> Result<T>) -> std::result::Result<T, String> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(e)) => Err(format!("error: {e}")),
        Err(p) => Err(format!(
            "panic: {}",
            p.downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_default()
        )),
    }
}

fn exact_verdict(checks: &[Check]) -> Option<Failure> {
    for c in checks {
        match c {
            Check::Equal { label, lhs, rhs } if !lhs.equals(rhs) => {
                return Some(Failure {
                    check: label.clone(),
                    lhs: lhs.render(),
                    rhs: rhs.render(),
                })
            }
            Check::Differ { label, lhs, rhs } if lhs.equals(rhs) => {
                return Some(Failure {
                    check: label.clone(),
                    lhs: lhs.render(),
                    rhs: rhs.render(),
                })
            }
            Check::Holds { label, ok: false } => {
                return Some(Failure {
                    check: label.clone(),
                    lhs: "false".into(),
                    rhs: "true".into(),
                })
            }
            _ => {}
        }
    }
    None
}

fn numeric_verdict(checks: &[Check<NumField>], points: &[Point]) -> Option<Failure> {
    for c in checks {
        match c {
            Check::Equal { label, lhs, rhs } => {
                if let Some(p) = points.iter().find(|p| !lhs.agrees_at(rhs, p)) {
                    return Some(Failure::message(label, format!("sides disagree at {p:?}")));
                }
            }
            Check::Differ { label, lhs, rhs } => {
                if points.iter().all(|p| lhs.agrees_at(rhs, p)) {
                    return Some(Failure::message(
                        label,
                        "sides agree at every sample point".into(),
                    ));
                }
            }
            Check::Holds { label, ok: false } => {
                return Some(Failure::message(label, "false".into()))
            }
            Check::Holds { .. } => {}
        }
    }
    None
}

fn sample_points(seed: u64, m: usize, denominators: &[ScalarExpr]) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    admissible_points(&mut rng, m, denominators, NUMERIC_POINTS, 400)
        .iter()
        .map(|q| Point::from_rationals(q))
        .collect()
}

fn numeric_case(
    identity: &Identity,
    seed: u64,
    m: usize,
    exact: Option<(&[Check], &[ScalarExpr])>,
) -> NumericOutcome {
    let run = guarded(|| {
        Ok(match identity.route {
            Route::Generic { numeric, .. } => {
                let mut draw = Draw::<NumField>::new(seed, m);
                let checks = numeric(&mut draw)?;
                (checks, draw.denominators)
            }
            Route::Exact(_) => {
                let (checks, denominators) = exact.expect("exact checks available");
                let env = StandIns::new(seed, m);
                let mut denominators = denominators.to_vec();
                for c in checks {
                    if let Check::Equal { lhs, rhs, .. } | Check::Differ { lhs, rhs, .. } = c {
                        for e in lhs.coefficients().iter().chain(&rhs.coefficients()) {
                            if !e.is_polynomial() {
                                denominators.push(ScalarExpr::from_poly(e.denom().clone()));
                            }
                        }
                    }
                }
                let converted = checks
                    .iter()
                    .map(|c| c.map(&|e: &ScalarExpr| NumField::from_expr(e, &env)))
                    .collect();
                (converted, denominators)
            }
        })
    });
    match run {
        Ok((checks, denominators)) => {
            let points = sample_points(seed, m, &denominators);
            if points.len() < NUMERIC_POINTS {
                return NumericOutcome {
                    passed: false,
                    points: points.len(),
                    failure: Some(Failure::message(
                        "sampling",
                        "too few admissible points".into(),
                    )),
                };
            }
            let failure = numeric_verdict(&checks, &points);
            NumericOutcome {
                passed: failure.is_none(),
                points: points.len(),
                failure,
            }
        }
        Err(message) => NumericOutcome {
            passed: false,
            points: 0,
            failure: Some(Failure::message("evaluation", message)),
        },
    }
}

fn run_case(identity: &Identity, seed: u64, m: usize, numeric: bool) -> CaseOutcome {
    let start = Instant::now();
    let mut inputs = Vec::new();
    let mut denominators = Vec::new();
    let exact = guarded(|| {
        let body = match identity.route {
            Route::Generic { exact, .. } | Route::Exact(exact) => exact,
        };
        let mut draw = Draw::<ScalarExpr>::new(seed, m);
        let checks = body(&mut draw);
        inputs = draw.inputs.clone();
        denominators = draw.denominators.clone();
        checks
    });
    let (failure, numeric) = match exact {
        Ok(checks) => {
            let failure = exact_verdict(&checks);
            let num =
                numeric.then(|| numeric_case(identity, seed, m, Some((&checks, &denominators))));
            (failure, num)
        }
        Err(message) => {
            let num = numeric.then(|| numeric_case(identity, seed, m, None));
            (Some(Failure::message("evaluation", message)), num)
        }
    };
    CaseOutcome {
        m,
        seed,
        inputs,
        failure,
        numeric,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn counterexample(case: usize, o: &CaseOutcome, f: &Failure) -> Counterexample {
    Counterexample {
        case,
        m: o.m,
        seed: o.seed,
        check: f.check.clone(),
        lhs: f.lhs.clone(),
        rhs: f.rhs.clone(),
        inputs: o.inputs.clone(),
    }
}

/// Runs the selected identities. Cases of one identity cycle through the
/// configured dimensions that are at least the identity's minimum.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    run_identities(&registry(), config)
}

pub fn run_identities(identities: &[Identity], config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut selected: Vec<&Identity> = identities
        .iter()
        .filter(|i| config.filter.as_deref().is_none_or(|f| i.id.contains(f)))
        .collect();
    selected.sort_by_key(|i| i.id);
    let jobs: Vec<(usize, usize, usize)> = selected
        .iter()
        .enumerate()
        .flat_map(|(k, ident)| {
            let dims: Vec<usize> = config
                .dimensions
                .iter()
                .copied()
                .filter(|m| *m >= ident.min_m)
                .collect();
            (0..if dims.is_empty() { 0 } else { config.cases })
                .map(move |c| (k, c, dims[c % dims.len()]))
        })
        .collect();
    let outcomes: Vec<(usize, usize, CaseOutcome)> = jobs
        .par_iter()
        .map(|&(k, c, m)| {
            let ident = selected[k];
            (
                k,
                c,
                run_case(
                    ident,
                    case_seed(config.seed, ident.id, c),
                    m,
                    config.numeric,
                ),
            )
        })
        .collect();
    let mut suite = Vec::with_capacity(selected.len());
    for (k, ident) in selected.iter().enumerate() {
        let mine: Vec<&(usize, usize, CaseOutcome)> =
            outcomes.iter().filter(|o| o.0 == k).collect();
        let first_failure = mine
            .iter()
            .find_map(|(_, c, o)| o.failure.as_ref().map(|f| counterexample(*c, o, f)));
        let numeric = config.numeric.then(|| {
            let agreeing = mine
                .iter()
                .filter(|(_, _, o)| {
                    o.numeric
                        .as_ref()
                        .is_some_and(|n| n.passed == o.failure.is_none())
                })
                .count();
            let disagreement = mine.iter().find_map(|(_, c, o)| {
                let n = o.numeric.as_ref()?;
                (n.passed != o.failure.is_none()).then(|| {
                    let f = n.failure.as_ref().map_or_else(
                        || {
                            Failure::message(
                                "numeric",
                                "numerical route passed where the exact one failed".into(),
                            )
                        },
                        |f| Failure {
                            check: f.check.clone(),
                            lhs: f.lhs.clone(),
                            rhs: f.rhs.clone(),
                        },
                    );
                    counterexample(*c, o, &f)
                })
            });
            let points = mine
                .iter()
                .filter_map(|(_, _, o)| o.numeric.as_ref().map(|n| n.points))
                .sum();
            NumericRecord {
                agreeing,
                points,
                agrees: agreeing == mine.len(),
                disagreement,
            }
        });
        let passed = first_failure.is_none() && numeric.as_ref().is_none_or(|n| n.agrees);
        suite.push(IdentityRecord {
            id: ident.id.to_string(),
            anchor: ident.anchor.to_string(),
            cases: mine.len(),
            passed,
            counterexample: first_failure,
            seed: config.seed,
            numeric,
            wall_time_ms: mine.iter().map(|(_, _, o)| o.elapsed_ms).sum(),
        });
    }
    let summary = Summary {
        total: suite.len(),
        failed: suite.iter().filter(|r| !r.passed).count(),
        cases: suite.iter().map(|r| r.cases).sum(),
    };
    SuiteReport {
        suite,
        summary,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
