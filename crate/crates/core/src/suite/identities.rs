use num_traits::One;
use rand::Rng;

use super::{differ, equal, holds, Check, Draw, Identity, Instantiate, Obj, Route};
use crate::error::Result;
use crate::geometry::{
    BaseForm, BaseVectorField, Form, MultiIndex, Tensor, VectorField, VectorValuedForm,
};
use crate::lifts::{
    base_identity, complete_lift_form, complete_lift_function, complete_lift_vector,
    is_lambda_mirror, is_spray, lift_tensor, mirror_map, pullback, tautological_field,
    vertical_lift_vector, BaseFactor, LiftMode,
};
use crate::numeric::NumField;
use crate::operators::{
    apply_variable_d, circ_wedge, d_b, db_poincare, extract_mu, fn_self_bracket,
    insertion_derivation, is_fiber_affine, lie_derivation, lie_derivation_degree_two, make_f_mu,
    semi_basic_defect, theta, AlphaMuForm, DOperator,
};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};
use crate::transitions::{
    check_consistency_identity, check_naturality, random_affine, random_quadratic, BaseObject,
    ChartTransition,
};

type Checks<C> = Result<Vec<Check<C>>>;

macro_rules! generic {
    ($body:ident) => {
        Route::Generic {
            exact: $body::<ScalarExpr>,
            numeric: $body::<NumField>,
        }
    };
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `(−1)^p`.
fn parity(p: usize) -> Rational {
    if p.is_multiple_of(2) {
        q(1)
    } else {
        q(-1)
    }
}

fn factorial(p: usize) -> Rational {
    (1..=p as i64).map(q).product()
}

fn fiber<C: Coefficient>(i: usize) -> C {
    C::coordinate(CoordinateId::fiber(i as u8))
}

// Exterior calculus on the tangent chart.

fn d_squared<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    Ok(vec![equal("d(dw) = 0", w.d().d(), Form::zero(m, p + 2))])
}

fn d_leibniz<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let r = d.degree(0, 2 * m - 1 - p);
    let (a, b) = (d.form(p), d.form(r));
    let rhs = a.d().wedge(&b).add(&a.wedge(&b.d()).scale(&parity(p)));
    Ok(vec![equal(
        "d(a^b) = da^b + (-1)^p a^db",
        a.wedge(&b).d(),
        rhs,
    )])
}

fn wedge_graded_commutative<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m);
    let r = d.degree(0, 2 * m - p);
    let (a, b) = (d.form(p), d.form(r));
    Ok(vec![equal(
        "a^b = (-1)^(pq) b^a",
        a.wedge(&b),
        b.wedge(&a).scale(&parity(p * r)),
    )])
}

fn interior_antiderivation<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m);
    let r = d.degree(0, 2 * m - p);
    let (a, b, x) = (d.form(p), d.form(r), d.field());
    let lhs = a.wedge(&b).interior(&x);
    // Interior products of functions vanish, so those terms are left out.
    let mut rhs = Form::zero(m, (p + r).saturating_sub(1));
    if p > 0 {
        rhs = rhs.add(&a.interior(&x).wedge(&b));
    }
    if r > 0 {
        rhs = rhs.add(&a.wedge(&b.interior(&x)).scale(&parity(p)));
    }
    let twice = a.interior(&x).interior(&x);
    let zero = Form::zero(m, twice.degree());
    Ok(vec![
        equal("X _| (a^b) = (X _| a)^b + (-1)^p a^(X _| b)", lhs, rhs),
        equal("X _| X _| a = 0", twice, zero),
    ])
}

/// Also checks `L_X` against `(L_X a)(Y..) = X(a(Y..)) − Σ a(.., [X,Y_i], ..)`.
fn cartan_formula<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 3.min(2 * m));
    let (a, x) = (d.form(p), d.field());
    let ys: Vec<VectorField<C>> = (0..p).map(|_| d.field()).collect();
    let lie = a.lie(&x);
    let mut cartan = a.d().interior(&x);
    if p > 0 {
        cartan = cartan.add(&a.interior(&x).d());
    }
    let mut defining = x.apply(&a.evaluate(&ys)?);
    for i in 0..p {
        let mut args = ys.clone();
        args[i] = x.bracket(&ys[i]);
        defining = defining.sub(&a.evaluate(&args)?);
    }
    Ok(vec![
        equal("L_X a = X _| da + d(X _| a)", lie.clone(), cartan),
        equal(
            "(L_X a)(Y..) by the bracket formula",
            Obj::Scalar(lie.evaluate(&ys)?),
            Obj::Scalar(defining),
        ),
    ])
}

fn lie_commutes_with_d<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let (a, x) = (d.form(p), d.field());
    Ok(vec![equal(
        "L_X da = d L_X a",
        a.d().lie(&x),
        a.lie(&x).d(),
    )])
}

fn bracket_antisymmetric<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let (x, y) = (d.field(), d.field());
    Ok(vec![equal(
        "[X,Y] = -[Y,X]",
        x.bracket(&y),
        y.bracket(&x).neg(),
    )])
}

fn bracket_jacobi<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let (x, y, z) = (d.field(), d.field(), d.field());
    let sum = x
        .bracket(&y.bracket(&z))
        .add(&y.bracket(&z.bracket(&x)))
        .add(&z.bracket(&x.bracket(&y)));
    Ok(vec![equal(
        "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0",
        sum,
        VectorField::zero(d.m()),
    )])
}

/// Subsets of `0..n` of size `k`, in lexicographic order.
fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    MultiIndex::all_of_len(n, k)
        .into_iter()
        .map(|i| i.to_vec())
        .collect()
}

fn wedge_evaluation<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let n = 3.min(2 * m);
    let p = d.degree(1, n - 1).min(n);
    let r = d.degree(0, n - p);
    let (a, b) = (d.form(p), d.form(r));
    let ys: Vec<VectorField<C>> = (0..p + r).map(|_| d.field()).collect();
    // Shuffle sum: the first `p` arguments go to `a`, in every order-preserving way.
    let mut shuffle = C::zero();
    for first in choose(p + r, p) {
        let rest: Vec<usize> = (0..p + r).filter(|i| !first.contains(i)).collect();
        let order: Vec<usize> = first.iter().chain(&rest).copied().collect();
        let (_, sign) = MultiIndex::sorted_with_sign(&order).expect("distinct");
        let ya: Vec<VectorField<C>> = first.iter().map(|i| ys[*i].clone()).collect();
        let yb: Vec<VectorField<C>> = rest.iter().map(|i| ys[*i].clone()).collect();
        let term = a.evaluate(&ya)?.mul(&b.evaluate(&yb)?);
        shuffle = if sign < 0 {
            shuffle.sub(&term)
        } else {
            shuffle.add(&term)
        };
    }
    let w = a.wedge(&b);
    let mut checks = vec![equal(
        "(a^b)(Y..) = shuffle sum",
        Obj::Scalar(w.evaluate(&ys)?),
        Obj::Scalar(shuffle),
    )];
    if p + r >= 2 {
        let mut swapped = ys.clone();
        swapped.swap(0, 1);
        checks.push(equal(
            "evaluation is alternating",
            Obj::Scalar(w.evaluate(&swapped)?),
            Obj::Scalar(w.evaluate(&ys)?.neg()),
        ));
    }
    Ok(checks)
}

fn lie_vector_valued<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (k, w) = (d.endo(1), d.field());
    let lk = k.lie(&w)?;
    let mut checks = Vec::new();
    for s in 0..2 * m {
        let e = VectorField::coordinate(m, s);
        let rhs = w.bracket(&k.apply(&e)).sub(&k.apply(&w.bracket(&e)));
        checks.push(equal("(L_W K)(Y) = [W, KY] - K[W, Y]", lk.apply(&e), rhs));
    }
    Ok(checks)
}

// Lifts.

fn lift_brackets<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let (x, y) = (d.base_field(), d.base_field());
    let (xt, yt) = (complete_lift_vector(&x), complete_lift_vector(&y));
    let (xv, yv) = (vertical_lift_vector(&x), vertical_lift_vector(&y));
    let xy = x.bracket(&y);
    Ok(vec![
        equal(
            "[X~, Y~] = [X,Y]~",
            xt.bracket(&yt),
            complete_lift_vector(&xy),
        ),
        equal(
            "[X~, vY] = v[X,Y]",
            xt.bracket(&yv),
            vertical_lift_vector(&xy),
        ),
        equal("[vX, vY] = 0", xv.bracket(&yv), VectorField::zero(d.m())),
    ])
}

fn complete_lift_commutes_with_d<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, m - 1);
    let a = d.base_form(p);
    Ok(vec![equal(
        "d(a~) = (da)~",
        complete_lift_form(&a).d(),
        complete_lift_form(&a.d()),
    )])
}

fn pairing_table<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (a, x) = (d.base_form(1), d.base_field());
    let ax = a.evaluate(std::slice::from_ref(&x))?;
    let (at, pa) = (complete_lift_form(&a), pullback(&a));
    let (xt, xv) = (complete_lift_vector(&x), vertical_lift_vector(&x));
    Ok(vec![
        equal(
            "a~(vX) = a(X)",
            Obj::Scalar(at.evaluate(std::slice::from_ref(&xv))?),
            Obj::Scalar(ax.clone()),
        ),
        equal(
            "(pullback a)(X~) = a(X)",
            Obj::Scalar(pa.evaluate(std::slice::from_ref(&xt))?),
            Obj::Scalar(ax.clone()),
        ),
        equal(
            "a~(X~) = (a(X))~",
            Obj::Scalar(at.evaluate(&[xt])?),
            Obj::Scalar(complete_lift_function(m, &ax)?),
        ),
        equal(
            "(pullback a)(vX) = 0",
            Obj::Scalar(pa.evaluate(&[xv])?),
            Obj::Scalar(C::zero()),
        ),
    ])
}

/// Rebuilds `a` from the `dv` part of its lift: the coefficient of `dx^I` in
/// `a` is the coefficient of `dv^{i1} ∧ dx^{i2} ∧ …` in `a~`.
fn complete_lift_injective<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, m);
    let a = d.base_form(p);
    let at = complete_lift_form(&a);
    let terms = MultiIndex::all_of_len(m, p).into_iter().map(|i| {
        let mut slots = i.to_vec();
        slots[0] += m;
        let (j, sign) = MultiIndex::sorted_with_sign(&slots).expect("distinct slots");
        let c = at.coefficient(&j);
        (i, if sign < 0 { c.neg() } else { c })
    });
    let rebuilt = Form::from_terms(m, p, terms);
    Ok(vec![equal(
        "a is recovered from the dv part of a~",
        rebuilt,
        a,
    )])
}

fn complete_lift_wedge_rule<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, m);
    let r = d.degree(0, m - p);
    let (a, b) = (d.base_form(p), d.base_form(r));
    let rhs = complete_lift_form(&a)
        .wedge(&pullback(&b))
        .add(&pullback(&a).wedge(&complete_lift_form(&b)));
    Ok(vec![equal(
        "(a^b)~ = a~^(pullback b) + (pullback a)^b~",
        complete_lift_form(&a.wedge(&b)),
        rhs,
    )])
}

fn mirror_nilpotent<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let b = mirror_map::<C>(m);
    let x = d.field();
    let bx = b.apply(&x);
    let base_part: Vec<C> = bx
        .base_part()
        .iter()
        .cloned()
        .chain((0..m).map(|_| C::zero()))
        .collect();
    let mut checks = vec![
        equal("B o B = 0", b.compose(&b), VectorValuedForm::zero(m, 1)),
        equal(
            "B X is vertical",
            VectorField::new(m, base_part)?,
            VectorField::zero(m),
        ),
        equal("B B X = 0", b.apply(&bx), VectorField::zero(m)),
    ];
    for i in 1..=m {
        checks.push(equal(
            "B(d/dx^i) = d/dv^i",
            b.apply(&VectorField::d_x(m, i)),
            VectorField::d_v(m, i),
        ));
        checks.push(equal(
            "B(d/dv^i) = 0",
            b.apply(&VectorField::d_v(m, i)),
            VectorField::zero(m),
        ));
    }
    Ok(checks)
}

fn mirror_of_complete_lift<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let b = mirror_map::<C>(m);
    let x = d.base_field();
    Ok(vec![
        equal(
            "B(X~) = vX",
            b.apply(&complete_lift_vector(&x)),
            vertical_lift_vector(&x),
        ),
        equal(
            "B(xi) = 0",
            b.apply(&tautological_field(m)),
            VectorField::zero(m),
        ),
    ])
}

fn lie_xi_complete_lift<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, m);
    let at = complete_lift_form(&d.base_form(p));
    Ok(vec![equal(
        "L_xi a~ = a~",
        at.lie(&tautological_field(m)),
        at,
    )])
}

fn closed_lift_exact<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, m);
    let w = d.base_form(p - 1).d();
    let wt = complete_lift_form(&w);
    Ok(vec![equal(
        "d(xi _| w~) = w~ for closed w",
        wt.interior(&tautological_field(m)).d(),
        wt,
    )])
}

fn mirror_lie_xi<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let b = mirror_map::<C>(m);
    Ok(vec![equal(
        "L_xi B = -B",
        b.lie(&tautological_field(m))?,
        b.neg(),
    )])
}

fn mirror_lie_complete<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let x = d.base_field();
    Ok(vec![equal(
        "L_(X~) B = 0",
        mirror_map::<C>(m).lie(&complete_lift_vector(&x))?,
        VectorValuedForm::zero(m, 1),
    )])
}

fn mirror_lie_vertical<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let x = d.base_field();
    Ok(vec![equal(
        "L_(vX) B = 0",
        mirror_map::<C>(m).lie(&vertical_lift_vector(&x))?,
        VectorValuedForm::zero(m, 1),
    )])
}

fn complete_lift_function_rules<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (f, g) = (d.base_scalar(), d.base_scalar());
    let c = d.rational();
    let k = d.index(1, m);
    let lift = |h: &C| complete_lift_function(m, h);
    let (ft, gt) = (lift(&f)?, lift(&g)?);
    Ok(vec![
        equal(
            "(fg)~ = f~ g + f g~",
            Obj::Scalar(lift(&f.mul(&g))?),
            Obj::Scalar(ft.mul(&g).add(&f.mul(&gt))),
        ),
        equal(
            "(f + c g)~ = f~ + c g~",
            Obj::Scalar(lift(&f.add(&g.scale(&c)))?),
            Obj::Scalar(ft.add(&gt.scale(&c))),
        ),
        equal(
            "(x^k)~ = v^k",
            Obj::Scalar(lift(&C::coordinate(CoordinateId::base(k as u8)))?),
            Obj::Scalar(fiber(k)),
        ),
        equal(
            "(const)~ = 0",
            Obj::Scalar(lift(&C::from_rational(&c))?),
            Obj::Scalar(C::zero()),
        ),
    ])
}

fn complete_lift_field_rules<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (x, f) = (d.base_field(), d.base_scalar());
    let xt = complete_lift_vector(&x);
    let xf = x.apply(&f);
    let ft = complete_lift_function(m, &f)?;
    let fx_lift = complete_lift_vector(&x.mul_scalar(&f)?);
    let rule = xt
        .mul_scalar(&f)
        .add(&vertical_lift_vector(&x).mul_scalar(&ft));
    Ok(vec![
        equal(
            "X~(f) = X(f)",
            Obj::Scalar(xt.apply(&f)),
            Obj::Scalar(xf.clone()),
        ),
        equal(
            "X~(f~) = (X(f))~",
            Obj::Scalar(xt.apply(&ft)),
            Obj::Scalar(complete_lift_function(m, &xf)?),
        ),
        equal("(fX)~ = f X~ + f~ vX", fx_lift, rule),
    ])
}

fn vertical_lift_rules<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (x, f) = (d.base_field(), d.base_scalar());
    let i = d.index(1, m);
    Ok(vec![
        equal(
            "vX(f) = 0 for base f",
            Obj::Scalar(vertical_lift_vector(&x).apply(&f)),
            Obj::Scalar(C::zero()),
        ),
        equal(
            "v(d/dx^i) = d/dv^i",
            vertical_lift_vector(&BaseVectorField::<C>::coordinate(m, i)),
            VectorField::d_v(m, i),
        ),
    ])
}

fn pullback_rules<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, m);
    let r = d.degree(0, m - p);
    let (a, b, y) = (d.base_form(p), d.base_form(r), d.base_field());
    let pa = pullback(&a);
    let xi = tautological_field::<C>(m);
    let zero_below = Form::zero(m, p.saturating_sub(1));
    Ok(vec![
        equal("pullback commutes with d", pullback(&a.d()), pa.d()),
        equal(
            "pullback commutes with ^",
            pullback(&a.wedge(&b)),
            pa.wedge(&pullback(&b)),
        ),
        equal(
            "vY _| pullback a = 0",
            pa.interior(&vertical_lift_vector(&y)),
            zero_below.clone(),
        ),
        equal("xi _| pullback a = 0", pa.interior(&xi), zero_below),
        equal("L_xi pullback a = 0", pa.lie(&xi), Form::zero(m, p)),
        equal("d_B pullback a = 0", d_b(&pa), Form::zero(m, p + 1)),
    ])
}

fn tensor_lifts<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (x, y, a) = (d.base_field(), d.base_field(), d.base_form(1));
    let v = |x: &BaseVectorField<C>| Tensor::from_vector(&vertical_lift_vector(x));
    let t = |x: &BaseVectorField<C>| Tensor::from_vector(&complete_lift_vector(x));
    let xy = lift_tensor(
        &[vec![
            BaseFactor::Vector(x.clone()),
            BaseFactor::Vector(y.clone()),
        ]],
        LiftMode::Complete,
    )?;
    let ay = lift_tensor(
        &[vec![
            BaseFactor::Covector(a.clone()),
            BaseFactor::Vector(y.clone()),
        ]],
        LiftMode::Vertical,
    )?;
    Ok(vec![
        equal(
            "(1_M)~ = 1_TM",
            lift_tensor(&base_identity::<C>(m), LiftMode::Complete)?,
            Tensor::from_endomorphism(&VectorValuedForm::<C>::identity(m)),
        ),
        equal(
            "(X (x) Y)~ = X~ (x) vY + vX (x) Y~",
            xy,
            t(&x).tensor(&v(&y)).add(&v(&x).tensor(&t(&y))),
        ),
        equal(
            "vertical lift of a (x) Y",
            ay,
            Tensor::from_covector(&pullback(&a)).tensor(&v(&y)),
        ),
    ])
}

fn spray_criterion(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let extra = d.field();
    let comps: Vec<ScalarExpr> = (1..=m)
        .map(|i| ScalarExpr::v(i as u8))
        .chain(extra.fiber_part().iter().cloned())
        .collect();
    let s = VectorField::new(m, comps)?;
    let b = mirror_map::<ScalarExpr>(m);
    Ok(vec![
        holds("v^i d/dx^i plus a vertical part is a spray", is_spray(&s)),
        holds("xi is not a spray", !is_spray(&tautological_field(m))),
        holds(
            "is_spray(X) iff B X = xi",
            is_spray(&extra) == (b.apply(&extra) == tautological_field(m)),
        ),
    ])
}

fn lambda_mirror(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let x = d.base_field();
    let lambda = |w: &VectorField| is_lambda_mirror(w).map(Obj::Scalar);
    let none = || Obj::Scalar(ScalarExpr::integer(99));
    let mut checks = vec![
        equal(
            "xi is a (-1)-mirror field",
            lambda(&tautological_field(m)).unwrap_or_else(none),
            Obj::Scalar(ScalarExpr::integer(-1)),
        ),
        equal(
            "X~ is a 0-mirror field",
            lambda(&complete_lift_vector(&x)).unwrap_or_else(none),
            Obj::Scalar(ScalarExpr::zero()),
        ),
        equal(
            "vX is a 0-mirror field",
            lambda(&vertical_lift_vector(&x)).unwrap_or_else(none),
            Obj::Scalar(ScalarExpr::zero()),
        ),
    ];
    if m >= 2 {
        let mut comps = vec![ScalarExpr::zero(); 2 * m];
        comps[0] = ScalarExpr::x(1);
        checks.push(holds(
            "x1 d/dx^1 is no mirror field for m >= 2",
            is_lambda_mirror(&VectorField::new(m, comps)?).is_none(),
        ));
    }
    Ok(checks)
}

// Derivations built from vector-valued forms.

fn db_squared<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    Ok(vec![equal(
        "d_B d_B w = 0",
        d_b(&d_b(&w)),
        Form::zero(m, p + 2),
    )])
}

fn d_db_anticommute<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    Ok(vec![equal(
        "d d_B w = -d_B d w",
        d_b(&w).d(),
        d_b(&w.d()).neg(),
    )])
}

fn db_leibniz<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let r = d.degree(0, 2 * m - 1 - p);
    let (a, b, f) = (d.form(p), d.form(r), d.scalar());
    let i = d.index(1, m);
    let rhs = d_b(&a).wedge(&b).add(&a.wedge(&d_b(&b)).scale(&parity(p)));
    let dbf = (1..=m).fold(Form::zero(m, 1), |acc, j| {
        acc.add(&Form::dx(m, j).mul_scalar(&f.partial(CoordinateId::fiber(j as u8))))
    });
    Ok(vec![
        equal(
            "d_B(a^b) = d_B a^b + (-1)^p a^d_B b",
            d_b(&a.wedge(&b)),
            rhs,
        ),
        equal(
            "d_B v^i = dx^i",
            d_b(&Form::scalar(m, fiber(i))),
            Form::dx(m, i),
        ),
        equal("d_B dx^i = 0", d_b(&Form::<C>::dx(m, i)), Form::zero(m, 2)),
        equal("d_B dv^i = 0", d_b(&Form::<C>::dv(m, i)), Form::zero(m, 2)),
        equal("d_B f = (df/dv^i) dx^i", d_b(&Form::scalar(m, f)), dbf),
    ])
}

fn insertion_is_derivation<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let k = d.degree(1, 2);
    let p = d.degree(0, 2 * m);
    let r = d.degree(0, 2 * m - p);
    let (kk, a, b) = (d.endo(k), d.form(p), d.form(r));
    let lhs = insertion_derivation(&kk, &a.wedge(&b))?;
    let rhs = insertion_derivation(&kk, &a)?.wedge(&b).add(
        &a.wedge(&insertion_derivation(&kk, &b)?)
            .scale(&parity((k - 1) * p)),
    );
    if p + r == 0 {
        return Ok(vec![equal("i_K f = 0", lhs, Form::zero(m, k - 1))]);
    }
    Ok(vec![equal(
        "i_K(a^b) = i_K a^b + (-1)^(kp) a^i_K b",
        lhs,
        rhs,
    )])
}

fn insertion_matches_circ_wedge<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, 3.min(2 * m));
    let (k, w) = (d.endo(1), d.form(p));
    let mut endos = vec![k.clone()];
    endos.extend(std::iter::repeat_n(VectorValuedForm::identity(m), p - 1));
    let rhs = circ_wedge(&w, &endos)?.scale(&factorial(p - 1).recip());
    Ok(vec![equal(
        "i_K w = w o (K ^ 1 ^ .. ^ 1) / (p-1)!",
        insertion_derivation(&k, &w)?,
        rhs,
    )])
}

fn insertion_identity<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m);
    let w = d.form(p);
    let id = VectorValuedForm::identity(m);
    Ok(vec![equal(
        "i_1 w = p w",
        insertion_derivation(&id, &w)?,
        w.scale(&q(p as i64)),
    )])
}

fn lie_identity_is_d<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    Ok(vec![equal(
        "L_1 w = dw",
        lie_derivation(&VectorValuedForm::identity(m), &w)?,
        w.d(),
    )])
}

fn lie_mirror_is_db<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    Ok(vec![equal(
        "L_B w = d_B w",
        lie_derivation(&mirror_map(m), &w)?,
        d_b(&w),
    )])
}

fn lie_derivation_commutes_with_d<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 2);
    let (k1, k2, w) = (d.endo(1), d.endo(2), d.form(p));
    let odd = lie_derivation(&k1, &w.d())?.add(&lie_derivation(&k1, &w)?.d());
    let even =
        lie_derivation_degree_two(&k2, &w.d())?.sub(&lie_derivation_degree_two(&k2, &w)?.d());
    Ok(vec![
        equal(
            "L_K d + d L_K = 0 for K of degree 1",
            odd,
            Form::zero(m, p + 2),
        ),
        equal(
            "L_K d - d L_K = 0 for K of degree 2",
            even,
            Form::zero(m, p + 3),
        ),
    ])
}

fn fn_bracket_mirror<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    Ok(vec![equal(
        "[B,B] = 0",
        fn_self_bracket(&mirror_map::<C>(m))?,
        VectorValuedForm::zero(m, 2),
    )])
}

/// `[1, K]` by polarization of the self bracket.
fn fn_bracket_identity<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let k = d.endo(1);
    let id = VectorValuedForm::identity(m);
    let mixed = fn_self_bracket(&k.add(&id))?
        .sub(&fn_self_bracket(&k)?)
        .sub(&fn_self_bracket(&id)?)
        .scale(&Rational::new(1.into(), 2.into()));
    Ok(vec![
        equal(
            "[1,1] = 0",
            fn_self_bracket(&id)?,
            VectorValuedForm::zero(m, 2),
        ),
        equal("[1,K] = 0", mixed, VectorValuedForm::zero(m, 2)),
    ])
}

fn circ_wedge_collapse<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, 3.min(m));
    let g = d.base_form(p);
    let gt = complete_lift_form(&g);
    let (b, id) = (mirror_map::<C>(m), VectorValuedForm::identity(m));
    let mut checks = Vec::new();
    for i in 0..=p {
        let mut endos = vec![b.clone(); i];
        endos.extend(std::iter::repeat_n(id.clone(), p - i));
        let lhs = circ_wedge(&gt, &endos)?.scale(&factorial(p).recip());
        let (label, rhs) = match i {
            0 => ("g~ o 1^p / p! = g~", gt.clone()),
            1 => ("g~ o (B ^ 1^(p-1)) / p! = pullback g", pullback(&g)),
            _ => ("g~ o (B^i ^ 1^(p-i)) = 0 for i >= 2", Form::zero(m, p)),
        };
        checks.push(equal(label, lhs, rhs));
    }
    Ok(checks)
}

fn circ_wedge_multilinear<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, 3.min(2 * m));
    let (w, w2) = (d.form(p), d.form(p));
    let c = d.rational();
    let endos: Vec<VectorValuedForm<C>> = (0..p).map(|_| d.endo(1)).collect();
    let reversed: Vec<VectorValuedForm<C>> = endos.iter().rev().cloned().collect();
    let ones = vec![VectorValuedForm::identity(m); p];
    Ok(vec![
        equal(
            "symmetric in the endomorphisms",
            circ_wedge(&w, &endos)?,
            circ_wedge(&w, &reversed)?,
        ),
        equal(
            "linear in the form",
            circ_wedge(&w.add(&w2.scale(&c)), &endos)?,
            circ_wedge(&w, &endos)?.add(&circ_wedge(&w2, &endos)?.scale(&c)),
        ),
        equal(
            "w o 1^p = p! w",
            circ_wedge(&w, &ones)?,
            w.scale(&factorial(p)),
        ),
    ])
}

fn d_operator_squared<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, 2 * m - 1);
    let w = d.form(p);
    let op = DOperator::new(d.rational(), d.rational());
    Ok(vec![equal(
        "D D w = 0 for constant coefficients",
        op.apply(&op.apply(&w)),
        Form::zero(m, p + 2),
    )])
}

/// With `ε2 = x^1`, `D² = dx^1 ∧ d_B`, so `D² v^j = dx^1 ∧ dx^j ≠ 0` for `j ≠ 1`.
fn d_squared_nonconstant<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let j = d.index(2, m);
    let (one, x1) = (C::one(), C::coordinate(CoordinateId::base(1)));
    let w = Form::scalar(m, fiber(j));
    let twice = apply_variable_d(&one, &x1, &apply_variable_d(&one, &x1, &w));
    Ok(vec![
        differ("(d + x1 d_B)^2 v^j != 0", twice.clone(), Form::zero(m, 2)),
        equal(
            "(d + x1 d_B)^2 v^j = dx^1 ^ dx^j",
            twice,
            Form::dx(m, 1).wedge(&Form::dx(m, j)),
        ),
    ])
}

fn db_of_contracted_lift<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, m);
    let w = d.base_form(p);
    let contracted = complete_lift_form(&w).interior(&tautological_field(m));
    Ok(vec![equal(
        "d_B(xi _| w~) = p pullback w",
        d_b(&contracted),
        pullback(&w).scale(&q(p as i64)),
    )])
}

fn db_of_complete_lift<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(0, m);
    let w = d.base_form(p);
    Ok(vec![equal(
        "d_B w~ = d pullback w",
        d_b(&complete_lift_form(&w)),
        pullback(&w).d(),
    )])
}

fn d_map_primitive<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let p = d.degree(1, m);
    let a = d.base_form(p - 1);
    let c = d.rational();
    let op = DOperator::new(c.clone(), Rational::one());
    let primitive = complete_lift_form(&a)
        .scale(&c.recip())
        .sub(&pullback(&a).scale(&(&c * &c).recip()));
    Ok(vec![equal(
        "D(a~/c - pullback a/c^2) = (da)~",
        op.apply(&primitive),
        complete_lift_form(&a.d()),
    )])
}

fn bott_chern_pullback<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let r = d.degree(1, m);
    let b = d.base_form(r);
    let contracted = complete_lift_form(&b).interior(&tautological_field(m));
    Ok(vec![equal(
        "d d_B(xi _| b~) = deg(b) pullback db",
        d_b(&contracted).d(),
        pullback(&b.d()).scale(&q(r as i64)),
    )])
}

fn f_mu_mirror<C: Instantiate>(d: &mut Draw<C>) -> Checks<C> {
    let m = d.m();
    let (mu, c) = (d.base_form(1), d.base_scalar());
    let f = make_f_mu(&mu, &c)?;
    Ok(vec![equal(
        "d f_mu o B = pullback mu",
        circ_wedge(&Form::scalar(m, f).d(), &[mirror_map(m)])?,
        pullback(&mu),
    )])
}

fn semi_basic_witnesses(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let p = d.degree(1, m);
    let w = d.base_form(p);
    let wt = complete_lift_form(&w);
    Ok(vec![
        holds(
            "pullbacks are semi-basic",
            semi_basic_defect(&pullback(&w), 0).is_none(),
        ),
        holds("w~ is 1-semi-basic", semi_basic_defect(&wt, 1).is_none()),
        holds(
            "w~ is semi-basic only when w = 0",
            semi_basic_defect(&wt, 0).is_some() != w.is_zero(),
        ),
        holds(
            "dv^1 is not semi-basic",
            semi_basic_defect(&Form::<ScalarExpr>::dv(m, 1), 0).is_some(),
        ),
    ])
}

fn db_poincare_round_trip(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let p = d.degree(1, 3.min(m));
    let tau = d.semi_basic_form(p - 1);
    let w = d_b(&tau);
    let a = db_poincare(&w)?;
    Ok(vec![
        equal("d_B(db_poincare(w)) = w", d_b(&a), w),
        holds(
            "the primitive is semi-basic",
            semi_basic_defect(&a, 0).is_none(),
        ),
    ])
}

fn db_poincare_of_pullback(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let p = d.degree(1, m);
    let w = d.base_form(p);
    let a = db_poincare(&pullback(&w))?;
    let contracted = complete_lift_form(&w).interior(&tautological_field(m));
    Ok(vec![
        equal(
            "d_B(db_poincare(pullback w)) = pullback w",
            d_b(&a),
            pullback(&w),
        ),
        equal(
            "db_poincare(pullback w) = (xi _| w~)/p",
            a,
            contracted.scale(&q(p as i64).recip()),
        ),
    ])
}

fn fiber_affine_functions(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let (mu, c) = (d.base_form(1), d.base_scalar());
    let f = make_f_mu(&mu, &c)?;
    let mut checks = match is_fiber_affine(m, &f) {
        Some((found_mu, found_c)) => vec![
            equal("recovered mu", found_mu, mu),
            equal("recovered c", Obj::Scalar(found_c), Obj::Scalar(c)),
        ],
        None => vec![holds("f_mu is fiber-affine", false)],
    };
    let bent = &f + &ScalarExpr::v(1) * &ScalarExpr::v(1);
    checks.push(holds(
        "adding (v^1)^2 breaks fiber-affinity",
        is_fiber_affine(m, &bent).is_none(),
    ));
    Ok(checks)
}

fn extract_mu_identities(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let (mu, c) = (d.base_form(1), d.base_scalar());
    let p = d.degree(1, m);
    let g = d.base_form(p);
    let missing = || Obj::Scalar(ScalarExpr::integer(99));
    let as_obj = |b: Option<BaseForm>| b.map(Obj::from).unwrap_or_else(missing);
    let df = Form::scalar(m, make_f_mu(&mu, &c)?).d();
    Ok(vec![
        equal(
            "extract_mu(mu~) = mu",
            as_obj(extract_mu(&complete_lift_form(&mu))),
            mu.clone(),
        ),
        equal("extract_mu(d f_mu) = mu", as_obj(extract_mu(&df)), mu),
        equal(
            "extract_mu(pullback g) = 0",
            as_obj(extract_mu(&pullback(&g))),
            BaseForm::zero(m, p),
        ),
    ])
}

fn theta_of_pullback(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let g = d.base_form(0).d();
    let a = AlphaMuForm::new(pullback(&g), BaseForm::zero(m, 1))?;
    Ok(vec![equal("theta(pullback g) = g", theta(&a)?, g)])
}

fn theta_of_exact(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let (mu, c) = (d.base_form(1), d.base_scalar());
    let df = Form::scalar(m, make_f_mu(&mu, &c)?).d();
    let a = AlphaMuForm::new(df, mu)?;
    Ok(vec![equal(
        "theta(d f_mu) = dc",
        theta(&a)?,
        BaseForm::function(m, c)?.d(),
    )])
}

fn theta_of_closed_lift(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let mu = d.base_form(0).d();
    let a = AlphaMuForm::complete_lift(&mu)?;
    Ok(vec![equal(
        "theta(mu~) = 0 for closed mu",
        theta(&a)?,
        BaseForm::zero(m, 1),
    )])
}

// Chart changes.

fn transition(d: &mut Draw<ScalarExpr>) -> ChartTransition {
    let m = d.m();
    let quadratic = m >= 2 && d.rng().gen_bool(0.4);
    let t = if quadratic {
        random_quadratic(d.rng(), m)
    } else {
        random_affine(d.rng(), m)
    };
    let shown: Vec<String> = t.forward().iter().map(|e| e.to_string()).collect();
    d.record(format!("transition x' = ({})", shown.join(", ")));
    t
}

fn theta_is_global(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    d.polynomial_only();
    let m = d.m();
    let (mu, c) = (d.base_form(1), d.base_scalar());
    let g = d.base_form(0).d();
    let omega = Form::scalar(m, make_f_mu(&mu, &c)?).d().add(&pullback(&g));
    let gamma = theta(&AlphaMuForm::new(omega.clone(), mu.clone())?)?;
    let t = transition(d);
    let moved = AlphaMuForm::new(
        t.tangent().transform_form(&omega)?,
        t.transform_base_form(&mu)?,
    )?;
    Ok(vec![equal(
        "theta commutes with chart changes",
        theta(&moved)?,
        t.transform_base_form(&gamma)?,
    )])
}

fn consistency_identity(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let t = transition(d);
    Ok(vec![holds(
        "second-derivative consistency identity",
        check_consistency_identity(&t)?,
    )])
}

fn naturality(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    d.polynomial_only();
    let m = d.m();
    let p = d.degree(0, m);
    let (f, x, a) = (d.base_scalar(), d.base_field(), d.base_form(p));
    let t = transition(d);
    let cases = [
        ("pullback", BaseObject::Form(a.clone())),
        ("pullback", BaseObject::Function(f.clone())),
        ("vertical", BaseObject::Field(x.clone())),
        ("complete", BaseObject::Function(f)),
        ("complete", BaseObject::Field(x)),
        ("complete", BaseObject::Form(a)),
        ("xi", BaseObject::None),
        ("B", BaseObject::None),
    ];
    let mut checks = Vec::new();
    for (lift, object) in &cases {
        let label = format!("{lift} lift is natural");
        checks.push(holds(&label, check_naturality(lift, object, &t)?));
    }
    Ok(checks)
}

fn volume_factor(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let t = transition(d);
    let det = t.jacobian_determinant();
    Ok(vec![equal(
        "volume factor = det^2",
        Obj::Scalar(t.tangent().volume_factor()),
        Obj::Scalar(&det * &det),
    )])
}

fn transform_functorial(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    d.polynomial_only();
    let m = d.m();
    let p = d.degree(0, 2.min(2 * m));
    let (w, x, k) = (d.form(p), d.field(), d.endo(1));
    // The second map stays affine so the composite keeps a manageable degree.
    let t = transition(d);
    let s = random_affine(d.rng(), m);
    let (tt, st) = (t.tangent(), s.tangent());
    let back = tt.inverted();
    let composite = t.then(&s)?.tangent();
    let chained = tt.then(&st)?;
    let mut checks = vec![
        equal(
            "forms return",
            back.transform_form(&tt.transform_form(&w)?)?,
            w.clone(),
        ),
        equal(
            "fields return",
            back.transform_field(&tt.transform_field(&x)?)?,
            x.clone(),
        ),
        equal(
            "vector-valued forms return",
            st.inverted()
                .transform_vector_valued(&st.transform_vector_valued(&k)?)?,
            k,
        ),
        equal(
            "composition of forms",
            composite.transform_form(&w)?,
            st.transform_form(&tt.transform_form(&w)?)?,
        ),
        equal(
            "composition of fields",
            composite.transform_field(&x)?,
            st.transform_field(&tt.transform_field(&x)?)?,
        ),
    ];
    for (a, (l, r)) in composite
        .forward()
        .iter()
        .zip(chained.forward())
        .enumerate()
    {
        checks.push(equal(
            &format!("tangent of the composite, coordinate {a}"),
            Obj::Scalar(l.clone()),
            Obj::Scalar(r.clone()),
        ));
    }
    for v in &tt.forward()[m..] {
        let linear = (1..=m as u8).all(|i| {
            (1..=m as u8).all(|j| {
                v.partial(CoordinateId::fiber(i))
                    .partial(CoordinateId::fiber(j))
                    .is_zero()
            })
        });
        checks.push(holds(
            "v' is linear in v",
            linear && (1..=m as u8).any(|i| !v.partial(CoordinateId::fiber(i)).is_zero()),
        ));
    }
    Ok(checks)
}

/// Under affine changes `dv'` has no `dx` part; a genuinely quadratic
/// change brings one in.
fn affine_shortcut(d: &mut Draw<ScalarExpr>) -> Checks<ScalarExpr> {
    let m = d.m();
    let t = transition(d);
    let images = t.tangent().coframe_images();
    let has_dx = images[m..]
        .iter()
        .any(|w| w.terms().any(|(i, _)| i.fiber_count(m) == 0));
    Ok(vec![holds(
        "dv' has a dx part exactly when the change is not affine",
        has_dx != t.is_affine(),
    )])
}

/// Every registered identity.
pub fn registry() -> Vec<Identity> {
    use Route::Exact;
    let id = |id, anchor, min_m, route| Identity {
        id,
        anchor,
        min_m,
        route,
    };
    vec![
        id(
            "d-squared",
            "exterior derivative squares to zero",
            1,
            generic!(d_squared),
        ),
        id(
            "d-leibniz",
            "graded Leibniz rule for d",
            1,
            generic!(d_leibniz),
        ),
        id(
            "wedge-graded-commutative",
            "graded commutativity of the exterior product",
            1,
            generic!(wedge_graded_commutative),
        ),
        id(
            "interior-antiderivation",
            "interior product is an antiderivation with i_X i_X = 0",
            1,
            generic!(interior_antiderivation),
        ),
        id(
            "cartan-formula",
            "Cartan formula L_X = i_X d + d i_X",
            1,
            generic!(cartan_formula),
        ),
        id(
            "lie-commutes-d",
            "Lie derivative commutes with d",
            1,
            generic!(lie_commutes_with_d),
        ),
        id(
            "bracket-antisymmetric",
            "antisymmetry of the Lie bracket",
            1,
            generic!(bracket_antisymmetric),
        ),
        id(
            "bracket-jacobi",
            "Jacobi identity for the Lie bracket",
            1,
            generic!(bracket_jacobi),
        ),
        id(
            "wedge-evaluation",
            "evaluation of a wedge product as a shuffle sum",
            1,
            generic!(wedge_evaluation),
        ),
        id(
            "lie-vector-valued",
            "Lie derivative of a vector-valued 1-form, (L_W K)Y = [W,KY] - K[W,Y]",
            1,
            generic!(lie_vector_valued),
        ),
        id(
            "lift-brackets",
            "brackets of complete and vertical lifts",
            1,
            generic!(lift_brackets),
        ),
        id(
            "complete-lift-d",
            "complete lift of forms commutes with d",
            1,
            generic!(complete_lift_commutes_with_d),
        ),
        id(
            "pairing-table",
            "pairings of pullback and complete lift of 1-forms with lifted fields",
            1,
            generic!(pairing_table),
        ),
        id(
            "complete-lift-injective",
            "the complete lift of forms is injective",
            1,
            generic!(complete_lift_injective),
        ),
        id(
            "complete-lift-wedge",
            "complete lift of a wedge product",
            1,
            generic!(complete_lift_wedge_rule),
        ),
        id(
            "mirror-nilpotent",
            "B o B = 0, image = kernel = vertical",
            1,
            generic!(mirror_nilpotent),
        ),
        id(
            "mirror-complete-lift",
            "B sends complete lifts to vertical lifts",
            1,
            generic!(mirror_of_complete_lift),
        ),
        id(
            "lie-xi-complete-lift",
            "Liouville field acts as the identity on complete lifts",
            1,
            generic!(lie_xi_complete_lift),
        ),
        id(
            "closed-lift-exact",
            "complete lifts of closed forms are exact, d(xi _| w~) = w~",
            1,
            generic!(closed_lift_exact),
        ),
        id("mirror-lie-xi", "L_xi B = -B", 1, generic!(mirror_lie_xi)),
        id(
            "mirror-lie-complete",
            "L_(X~) B = 0",
            1,
            generic!(mirror_lie_complete),
        ),
        id(
            "mirror-lie-vertical",
            "L_(vX) B = 0",
            1,
            generic!(mirror_lie_vertical),
        ),
        id(
            "complete-lift-function",
            "complete lift of functions: linearity, Leibniz, coordinates",
            1,
            generic!(complete_lift_function_rules),
        ),
        id(
            "complete-lift-field",
            "complete lift of fields acting on lifted functions; (fX)~",
            1,
            generic!(complete_lift_field_rules),
        ),
        id(
            "vertical-lift",
            "vertical lifts annihilate base functions",
            1,
            generic!(vertical_lift_rules),
        ),
        id(
            "pullback-rules",
            "pullback commutes with d and wedge and vanishes on vertical fields",
            1,
            generic!(pullback_rules),
        ),
        id(
            "tensor-lifts",
            "complete and vertical lifts of tensor products; lift of the identity",
            1,
            generic!(tensor_lifts),
        ),
        id(
            "spray",
            "sprays are the fields with B S = xi",
            1,
            Exact(spray_criterion),
        ),
        id(
            "lambda-mirror",
            "lambda-mirror fields: xi, complete and vertical lifts",
            1,
            Exact(lambda_mirror),
        ),
        id("db-squared", "d_B squares to zero", 1, generic!(db_squared)),
        id(
            "d-db-anticommute",
            "d d_B = -d_B d",
            1,
            generic!(d_db_anticommute),
        ),
        id(
            "db-leibniz",
            "d_B on generators and its graded Leibniz rule",
            1,
            generic!(db_leibniz),
        ),
        id(
            "insertion-derivation",
            "i_K is a graded derivation",
            1,
            generic!(insertion_is_derivation),
        ),
        id(
            "insertion-circ-wedge",
            "i_K agrees with the circ-wedge contraction over (p-1)!",
            1,
            generic!(insertion_matches_circ_wedge),
        ),
        id(
            "insertion-identity",
            "i_1 = p on p-forms",
            1,
            generic!(insertion_identity),
        ),
        id("lie-identity", "L_1 = d", 1, generic!(lie_identity_is_d)),
        id("lie-mirror", "L_B = d_B", 1, generic!(lie_mirror_is_db)),
        id(
            "lie-derivation-commutes-d",
            "[L_K, d] = 0",
            1,
            generic!(lie_derivation_commutes_with_d),
        ),
        id(
            "fn-mirror",
            "[B,B] = 0 for the Froelicher-Nijenhuis bracket",
            1,
            generic!(fn_bracket_mirror),
        ),
        id(
            "fn-identity",
            "[1,K] = 0 for the Froelicher-Nijenhuis bracket",
            1,
            generic!(fn_bracket_identity),
        ),
        id(
            "circ-wedge-collapse",
            "collapse of complete lifts under B^i ^ 1^(p-i)",
            1,
            generic!(circ_wedge_collapse),
        ),
        id(
            "circ-wedge-multilinear",
            "circ-wedge is multilinear and symmetric",
            1,
            generic!(circ_wedge_multilinear),
        ),
        id(
            "D-squared",
            "D = c1 d + c2 d_B squares to zero for constants",
            1,
            generic!(d_operator_squared),
        ),
        id(
            "D-squared-nonconstant",
            "D squares to zero only for constant coefficients",
            2,
            generic!(d_squared_nonconstant),
        ),
        id(
            "db-contracted-lift",
            "pullbacks vanish in d_B-cohomology, d_B(xi _| w~) = p pullback w",
            1,
            generic!(db_of_contracted_lift),
        ),
        id(
            "db-complete-lift",
            "d_B w~ = d pullback w",
            1,
            generic!(db_of_complete_lift),
        ),
        id(
            "D-map",
            "explicit D-primitive of the complete lift of an exact form",
            1,
            generic!(d_map_primitive),
        ),
        id(
            "bott-chern",
            "d d_B(xi _| b~) = deg(b) pullback db",
            1,
            generic!(bott_chern_pullback),
        ),
        id("f-mu", "d f_mu o B = pullback mu", 1, generic!(f_mu_mirror)),
        id(
            "semi-basic",
            "semi-basic defect of pullbacks and complete lifts",
            1,
            Exact(semi_basic_witnesses),
        ),
        id(
            "db-poincare",
            "constructive d_B-Poincare lemma on semi-basic forms",
            1,
            Exact(db_poincare_round_trip),
        ),
        id(
            "db-poincare-pullback",
            "d_B-primitive of a pullback",
            1,
            Exact(db_poincare_of_pullback),
        ),
        id(
            "fiber-affine",
            "fiber-affine functions are exactly the f_mu",
            1,
            Exact(fiber_affine_functions),
        ),
        id(
            "extract-mu",
            "the base form below mu~, d f_mu and pullbacks",
            1,
            Exact(extract_mu_identities),
        ),
        id(
            "theta-pullback",
            "Theta(pullback g) = g",
            1,
            Exact(theta_of_pullback),
        ),
        id(
            "theta-exact",
            "Theta(d f_mu) = dc",
            1,
            Exact(theta_of_exact),
        ),
        id(
            "theta-complete-lift",
            "Theta(mu~) = 0 for closed mu",
            1,
            Exact(theta_of_closed_lift),
        ),
        id(
            "theta-global",
            "Theta transforms as a base 1-form",
            1,
            Exact(theta_is_global),
        ),
        id(
            "consistency-identity",
            "second-derivative identity of chart changes",
            1,
            Exact(consistency_identity),
        ),
        id(
            "naturality",
            "every lift commutes with chart changes",
            1,
            Exact(naturality),
        ),
        id(
            "volume-factor",
            "volume forms of TM scale by the squared Jacobian determinant",
            1,
            Exact(volume_factor),
        ),
        id(
            "transform-functorial",
            "tangent transitions invert and compose",
            1,
            Exact(transform_functorial),
        ),
        id(
            "affine-shortcut",
            "affine changes drop the second-derivative term of dv'",
            1,
            Exact(affine_shortcut),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::{run_identities, SuiteConfig};

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = registry().iter().map(|i| i.id).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn every_identity_passes_a_few_cases() {
        let config = SuiteConfig {
            cases: 3,
            ..SuiteConfig::default()
        };
        let report = run_identities(&registry(), &config);
        for r in &report.suite {
            assert!(r.passed, "{} failed: {:?}", r.id, r.counterexample);
        }
    }
}
