//! Changes of chart on the base, the transitions they induce on the tangent
//! chart, and the checks that lifted objects are chart independent.
//!
//! An object transformed by a transition is expressed in the new chart,
//! whose coordinates reuse the names `x`, `v`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{BaseForm, BaseVectorField, Form, MultiIndex, VectorField, VectorValuedForm};
use crate::lifts::{
    complete_lift_form, complete_lift_function, complete_lift_vector, mirror_map, pullback,
    tautological_field, vertical_lift_vector,
};
use crate::scalar::{Coefficient, CoordinateId, Rational, ScalarExpr};

fn substitute_all(e: &ScalarExpr, m: usize, images: &[ScalarExpr]) -> Result<ScalarExpr> {
    Coefficient::compose(e, m, &|c: CoordinateId| images[c.slot(m)].clone())
}

/// Images of all `2m` coordinates for a map acting on the base only.
fn base_images(m: usize, base: &[ScalarExpr]) -> Vec<ScalarExpr> {
    let mut out = base.to_vec();
    out.extend((1..=m as u8).map(ScalarExpr::v));
    out
}

/// An invertible change of coordinates `x' = φ(x)` on the base, stored with
/// its inverse `x = ψ(x')`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartTransition {
    m: usize,
    forward: Vec<ScalarExpr>,
    inverse: Vec<ScalarExpr>,
}

impl ChartTransition {
    pub fn new(forward: Vec<ScalarExpr>, inverse: Vec<ScalarExpr>) -> Result<Self> {
        if forward.len() != inverse.len() {
            return Err(Error::DimensionMismatch(forward.len(), inverse.len()));
        }
        let m = forward.len();
        for e in forward.iter().chain(&inverse) {
            if !e.is_base_only() {
                return Err(Error::NotBaseOnly(e.to_string()));
            }
            if e.max_index() as usize > m {
                return Err(Error::IndexOutOfRange {
                    index: e.max_index() as usize,
                    m,
                });
            }
            if e.generators()
                .iter()
                .any(|g| matches!(g, crate::scalar::Generator::Partial(_)))
            {
                return Err(Error::AbstractSymbol(e.to_string()));
            }
        }
        let t = ChartTransition {
            m,
            forward,
            inverse,
        };
        let round_trip = |outer: &[ScalarExpr], inner: &[ScalarExpr]| -> Result<bool> {
            let images = base_images(m, inner);
            for (i, e) in outer.iter().enumerate() {
                if substitute_all(e, m, &images)? != ScalarExpr::x(i as u8 + 1) {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        if !round_trip(&t.forward, &t.inverse)? || !round_trip(&t.inverse, &t.forward)? {
            return Err(Error::NotInverse);
        }
        Ok(t)
    }

    pub fn identity(m: usize) -> Self {
        let id: Vec<ScalarExpr> = (1..=m as u8).map(ScalarExpr::x).collect();
        ChartTransition {
            m,
            forward: id.clone(),
            inverse: id,
        }
    }

    /// `x' = A x + b`, with `A` invertible.
    pub fn affine(a: &[Vec<Rational>], b: &[Rational]) -> Result<Self> {
        let m = b.len();
        let inv = invert(a).ok_or(Error::NotInverse)?;
        let apply = |mat: &[Vec<Rational>], shift: &[Rational]| -> Vec<ScalarExpr> {
            (0..m)
                .map(|r| {
                    (0..m).fold(ScalarExpr::rational(shift[r].clone()), |acc, c| {
                        acc + ScalarExpr::x(c as u8 + 1).scale(&mat[r][c])
                    })
                })
                .collect()
        };
        let back_shift: Vec<Rational> = (0..m)
            .map(|r| -(0..m).fold(Rational::zero(), |acc, c| acc + &inv[r][c] * &b[c]))
            .collect();
        Self::new(apply(a, b), apply(&inv, &back_shift))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn forward(&self) -> &[ScalarExpr] {
        &self.forward
    }

    pub fn inverse(&self) -> &[ScalarExpr] {
        &self.inverse
    }

    pub fn inverted(&self) -> Self {
        ChartTransition {
            m: self.m,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ChartTransition) -> Result<Self> {
        let m = self.m;
        let fwd = next
            .forward
            .iter()
            .map(|e| substitute_all(e, m, &base_images(m, &self.forward)))
            .collect::<Result<_>>()?;
        let inv = self
            .inverse
            .iter()
            .map(|e| substitute_all(e, m, &base_images(m, &next.inverse)))
            .collect::<Result<_>>()?;
        Ok(ChartTransition {
            m,
            forward: fwd,
            inverse: inv,
        })
    }

    /// `J[a][j] = ∂x'^a/∂x^j` as functions of `x`.
    pub fn jacobian(&self) -> Vec<Vec<ScalarExpr>> {
        jacobian(&self.forward, self.m)
    }

    pub fn jacobian_determinant(&self) -> ScalarExpr {
        determinant(&self.jacobian())
    }

    /// Every `∂x'^a/∂x^j` is constant.
    pub fn is_affine(&self) -> bool {
        self.jacobian()
            .iter()
            .flatten()
            .all(ScalarExpr::is_constant)
    }

    pub fn tangent(&self) -> TangentTransition {
        TangentTransition::new(self)
    }

    /// A base function in the new chart, `f ∘ ψ`.
    pub fn transform_function(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        substitute_all(f, self.m, &base_images(self.m, &self.inverse))
    }

    /// `X'^a = (∂x'^a/∂x^j X^j) ∘ ψ`.
    pub fn transform_base_field(&self, x: &BaseVectorField) -> Result<BaseVectorField> {
        let jac = self.jacobian();
        let comps = (0..self.m)
            .map(|a| {
                let pushed = (0..self.m).fold(ScalarExpr::zero(), |acc, j| {
                    acc + &jac[a][j] * &x.comps()[j]
                });
                self.transform_function(&pushed)
            })
            .collect::<Result<_>>()?;
        BaseVectorField::new(self.m, comps)
    }

    pub fn transform_base_form(&self, a: &BaseForm) -> Result<BaseForm> {
        BaseForm::new(self.tangent().transform_form(a.form())?)
    }
}

fn jacobian(maps: &[ScalarExpr], m: usize) -> Vec<Vec<ScalarExpr>> {
    maps.iter()
        .map(|e| {
            (1..=m as u8)
                .map(|j| e.partial(CoordinateId::base(j)))
                .collect()
        })
        .collect()
}

/// Cofactor expansion; the matrices here have size at most `2m ≤ 6`.
fn determinant(a: &[Vec<ScalarExpr>]) -> ScalarExpr {
    let n = a.len();
    match n {
        0 => ScalarExpr::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut acc = ScalarExpr::zero();
            for (k, entry) in a[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<ScalarExpr>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != k)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * &determinant(&minor);
                acc = if k % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Gauss-Jordan inverse of a square rational matrix.
fn invert(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for x in aug[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &factor * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The induced change of tangent chart, `x' = φ(x)`, `v'^a = v^j ∂x'^a/∂x^j`,
/// together with its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentTransition {
    m: usize,
    forward: Vec<ScalarExpr>,
    inverse: Vec<ScalarExpr>,
}

fn tangent_images(maps: &[ScalarExpr], m: usize) -> Vec<ScalarExpr> {
    let jac = jacobian(maps, m);
    let mut out = maps.to_vec();
    for row in &jac {
        out.push(
            row.iter()
                .enumerate()
                .fold(ScalarExpr::zero(), |acc, (j, d)| {
                    acc + d * &ScalarExpr::v(j as u8 + 1)
                }),
        );
    }
    out
}

/// Which way an object crosses a transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl TangentTransition {
    pub fn new(t: &ChartTransition) -> Self {
        TangentTransition {
            m: t.m,
            forward: tangent_images(&t.forward, t.m),
            inverse: tangent_images(&t.inverse, t.m),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `(x'^a, v'^a)` as functions of `(x, v)`.
    pub fn forward(&self) -> &[ScalarExpr] {
        &self.forward
    }

    pub fn inverse(&self) -> &[ScalarExpr] {
        &self.inverse
    }

    pub fn inverted(&self) -> Self {
        TangentTransition {
            m: self.m,
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TangentTransition) -> Result<Self> {
        let m = self.m;
        let forward = next
            .forward
            .iter()
            .map(|e| substitute_all(e, m, &self.forward))
            .collect::<Result<_>>()?;
        let inverse = self
            .inverse
            .iter()
            .map(|e| substitute_all(e, m, &next.inverse))
            .collect::<Result<_>>()?;
        Ok(TangentTransition {
            m,
            forward,
            inverse,
        })
    }

    /// The new coframe `dz'^a = d(z'^a)` expressed in the old chart.
    pub fn coframe_images(&self) -> Vec<Form> {
        self.forward
            .iter()
            .map(|e| Form::scalar(self.m, e.clone()).d())
            .collect()
    }

    /// The new frame `∂/∂z'^a` expressed in the old chart,
    /// `(∂z^i/∂z'^a) ∘ Φ ∂/∂z^i`.
    pub fn frame_images(&self) -> Result<Vec<VectorField>> {
        let m = self.m;
        (0..2 * m)
            .map(|a| {
                let ca = CoordinateId::from_slot(a, m);
                let comps = self
                    .inverse
                    .iter()
                    .map(|psi| substitute_all(&psi.partial(ca), m, &self.forward))
                    .collect::<Result<_>>()?;
                VectorField::new(m, comps)
            })
            .collect()
    }

    pub fn transform_scalar(&self, f: &ScalarExpr) -> Result<ScalarExpr> {
        substitute_all(f, self.m, &self.inverse)
    }

    /// Pullback along the inverse map.
    pub fn transform_form(&self, w: &Form) -> Result<Form> {
        let m = self.m;
        let differentials: Vec<Form> = self
            .inverse
            .iter()
            .map(|e| Form::scalar(m, e.clone()).d())
            .collect();
        let mut acc = Form::zero(m, w.degree());
        for (idx, c) in w.terms() {
            let mut term = Form::scalar(m, self.transform_scalar(c)?);
            for s in idx.slots() {
                term = term.wedge(&differentials[s]);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Pushforward along the forward map.
    pub fn transform_field(&self, x: &VectorField) -> Result<VectorField> {
        let m = self.m;
        let comps = self
            .forward
            .iter()
            .map(|phi| self.transform_scalar(&x.apply(phi)))
            .collect::<Result<_>>()?;
        VectorField::new(m, comps)
    }

    pub fn transform_vector_valued(&self, k: &VectorValuedForm) -> Result<VectorValuedForm> {
        let m = self.m;
        let mut terms: BTreeMap<MultiIndex, VectorField> = BTreeMap::new();
        for (idx, x) in k.terms() {
            let basis =
                self.transform_form(&Form::from_terms(m, idx.len(), [(*idx, ScalarExpr::one())]))?;
            let pushed = self.transform_field(x)?;
            for (j, c) in basis.terms() {
                let add = pushed.mul_scalar(c);
                let sum = match terms.remove(j) {
                    Some(prev) => prev.add(&add),
                    None => add,
                };
                terms.insert(*j, sum);
            }
        }
        Ok(VectorValuedForm::from_terms(m, k.degree(), terms))
    }

    /// The factor relating the new and old volume forms
    /// `dx'^1∧…∧dv'^m = factor · dx^1∧…∧dv^m`.
    pub fn volume_factor(&self) -> ScalarExpr {
        let m = self.m;
        let top = self
            .coframe_images()
            .iter()
            .fold(Form::scalar(m, ScalarExpr::one()), |acc, w| acc.wedge(w));
        top.coefficient(&MultiIndex::all_of_len(2 * m, 2 * m)[0])
    }
}

/// Objects that can be carried across a chart change.
pub trait Transform: Sized {
    fn transform_by(&self, t: &TangentTransition) -> Result<Self>;
}

impl Transform for ScalarExpr {
    fn transform_by(&self, t: &TangentTransition) -> Result<Self> {
        t.transform_scalar(self)
    }
}

impl Transform for Form {
    fn transform_by(&self, t: &TangentTransition) -> Result<Self> {
        t.transform_form(self)
    }
}

impl Transform for VectorField {
    fn transform_by(&self, t: &TangentTransition) -> Result<Self> {
        t.transform_field(self)
    }
}

impl Transform for VectorValuedForm {
    fn transform_by(&self, t: &TangentTransition) -> Result<Self> {
        t.transform_vector_valued(self)
    }
}

pub fn transform<O: Transform>(
    object: &O,
    t: &TangentTransition,
    direction: Direction,
) -> Result<O> {
    match direction {
        Direction::Forward => object.transform_by(t),
        Direction::Backward => object.transform_by(&t.inverted()),
    }
}

/// For every `j, k`, evaluates in the old chart
/// `v'^b ∂x'^a/∂x^k ∂²x^j/∂x'^a∂x'^b + v^l ∂x^j/∂x'^a ∂²x'^a/∂x^k∂x^l`
/// and reports whether all of them vanish.
pub fn check_consistency_identity(t: &ChartTransition) -> Result<bool> {
    let m = t.m;
    let x_new = base_images(m, &t.forward);
    let tangent = t.tangent();
    let v_new: Vec<ScalarExpr> = tangent.forward[m..].to_vec();
    let jac = t.jacobian();
    let inv_jac = jacobian(&t.inverse, m);
    let b = |i: usize| CoordinateId::base(i as u8 + 1);
    for j in 0..m {
        for k in 0..m {
            let mut acc = ScalarExpr::zero();
            for a in 0..m {
                for bb in 0..m {
                    let second = substitute_all(&inv_jac[j][a].partial(b(bb)), m, &x_new)?;
                    acc = acc + &v_new[bb] * &jac[a][k] * second;
                }
                let dxj = substitute_all(&inv_jac[j][a], m, &x_new)?;
                for l in 0..m {
                    let second = jac[a][k].partial(b(l));
                    acc = acc + ScalarExpr::v(l as u8 + 1) * &dxj * second;
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The natural lifts whose chart independence is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Pullback,
    Vertical,
    Complete,
    Tautological,
    Mirror,
}

impl LiftKind {
    pub const ALL: [LiftKind; 5] = [
        LiftKind::Pullback,
        LiftKind::Vertical,
        LiftKind::Complete,
        LiftKind::Tautological,
        LiftKind::Mirror,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LiftKind::Pullback => "pullback",
            LiftKind::Vertical => "vertical",
            LiftKind::Complete => "complete",
            LiftKind::Tautological => "xi",
            LiftKind::Mirror => "B",
        }
    }
}

impl FromStr for LiftKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LiftKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownLift(s.to_string()))
    }
}

/// What a lift is applied to.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseObject {
    None,
    Function(ScalarExpr),
    Field(BaseVectorField),
    Form(BaseForm),
}

/// True when lifting then changing chart agrees with changing chart then
/// lifting.
pub fn check_naturality(lift: &str, object: &BaseObject, t: &ChartTransition) -> Result<bool> {
    let kind: LiftKind = lift.parse()?;
    let m = t.m;
    let tt = t.tangent();
    let mismatch = || Error::UnknownLift(format!("{} of {:?}", kind.name(), object));
    Ok(match (kind, object) {
        (LiftKind::Pullback, BaseObject::Form(a)) => {
            tt.transform_form(&pullback(a))? == pullback(&t.transform_base_form(a)?)
        }
        (LiftKind::Pullback, BaseObject::Function(f)) => {
            tt.transform_scalar(f)? == t.transform_function(f)?
        }
        (LiftKind::Vertical, BaseObject::Field(x)) => {
            tt.transform_field(&vertical_lift_vector(x))?
                == vertical_lift_vector(&t.transform_base_field(x)?)
        }
        (LiftKind::Complete, BaseObject::Function(f)) => {
            tt.transform_scalar(&complete_lift_function(m, f)?)?
                == complete_lift_function(m, &t.transform_function(f)?)?
        }
        (LiftKind::Complete, BaseObject::Field(x)) => {
            tt.transform_field(&complete_lift_vector(x))?
                == complete_lift_vector(&t.transform_base_field(x)?)
        }
        (LiftKind::Complete, BaseObject::Form(a)) => {
            tt.transform_form(&complete_lift_form(a))?
                == complete_lift_form(&t.transform_base_form(a)?)
        }
        (LiftKind::Tautological, BaseObject::None) => {
            let xi = tautological_field::<ScalarExpr>(m);
            tt.transform_field(&xi)? == xi
        }
        (LiftKind::Mirror, BaseObject::None) => {
            let b = mirror_map::<ScalarExpr>(m);
            tt.transform_vector_valued(&b)? == b
        }
        _ => return Err(mismatch()),
    })
}

/// A random affine transition with small integer entries and a
/// unimodular-times-diagonal matrix.
pub fn random_affine(rng: &mut impl Rng, m: usize) -> ChartTransition {
    let q = |n: i64| Rational::from_integer(n.into());
    let mut lower = vec![vec![q(0); m]; m];
    let mut upper = vec![vec![q(0); m]; m];
    for i in 0..m {
        lower[i][i] = q(1);
        upper[i][i] = q(*[1, -1, 2, -2].get(rng.gen_range(0..4)).unwrap());
        for j in 0..i {
            lower[i][j] = q(rng.gen_range(-2..=2));
        }
        for j in i + 1..m {
            upper[i][j] = q(rng.gen_range(-2..=2));
        }
    }
    let a: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).fold(q(0), |acc, k| acc + &lower[i][k] * &upper[k][j]))
                .collect()
        })
        .collect();
    let b: Vec<Rational> = (0..m).map(|_| q(rng.gen_range(-3..=3))).collect();
    ChartTransition::affine(&a, &b).expect("invertible by construction")
}

/// A quadratic transition `A ∘ S` where `S` is the shear
/// `x'^1 = x^1 + c (x^2)² + e x^2 x^m`, other coordinates fixed, with inverse
/// `x^1 = x'^1 − c (x'^2)² − e x'^2 x'^m`. Needs `m ≥ 2`.
pub fn random_quadratic(rng: &mut impl Rng, m: usize) -> ChartTransition {
    assert!(
        m >= 2,
        "a quadratic transition with polynomial inverse needs m >= 2"
    );
    let x = |i: usize| ScalarExpr::x(i as u8 + 1);
    let c = loop {
        let c = rng.gen_range(-2i64..=2);
        if c != 0 {
            break c;
        }
    };
    let mut p = ScalarExpr::integer(c) * &x(1) * &x(1);
    if m > 2 {
        p = p + ScalarExpr::integer(rng.gen_range(-1..=1)) * &x(1) * &x(m - 1);
    }
    let mut shear: Vec<ScalarExpr> = (0..m).map(x).collect();
    let mut inv = shear.clone();
    shear[0] = &x(0) + &p;
    inv[0] = &x(0) - &p;
    let s = ChartTransition::new(shear, inv).expect("shear is invertible");
    s.then(&random_affine(rng, m)).expect("composition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(i: u8) -> ScalarExpr {
        ScalarExpr::x(i)
    }

    fn v(i: u8) -> ScalarExpr {
        ScalarExpr::v(i)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn sample_affine() -> ChartTransition {
        ChartTransition::affine(&[vec![q(2), q(1)], vec![q(0), q(1)]], &[q(0), q(0)]).unwrap()
    }

    fn sample_quadratic() -> ChartTransition {
        ChartTransition::new(
            vec![&x(1) + &x(2) * &x(2), x(2)],
            vec![&x(1) - &x(2) * &x(2), x(2)],
        )
        .unwrap()
    }

    #[test]
    fn construction() {
        let t = sample_affine();
        assert_eq!(t.forward(), &[&x(1).scale(&q(2)) + &x(2), x(2)]);
        assert_eq!(
            &t.tangent().forward()[2..],
            &[&v(1).scale(&q(2)) + &v(2), v(2)]
        );
        let bad = ChartTransition::new(vec![&x(1) + &x(1) * &x(1)], vec![&x(1) - &x(1) * &x(1)]);
        assert_eq!(bad, Err(Error::NotInverse));
        let id = ChartTransition::identity(3);
        assert_eq!(
            id.tangent().forward(),
            CoordinateId::all(3)
                .map(ScalarExpr::coord)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn frame_and_coframe_rules() {
        let t = sample_quadratic();
        let tt = t.tangent();
        let frame = tt.frame_images().unwrap();
        // ∂/∂v'^a = (∂x^i/∂x'^a) ∂/∂v^i in the old chart
        let jinv = jacobian(t.inverse(), 2);
        for a in 0..2 {
            let expected: Vec<ScalarExpr> = (0..2)
                .map(|i| substitute_all(&jinv[i][a], 2, &base_images(2, t.forward())).unwrap())
                .collect();
            assert_eq!(
                &frame[2 + a].comps()[..2],
                &[ScalarExpr::zero(), ScalarExpr::zero()]
            );
            assert_eq!(&frame[2 + a].comps()[2..], &expected[..]);
        }
        // the coframe pairs dually with the frame
        let coframe = tt.coframe_images();
        for (a, w) in coframe.iter().enumerate() {
            for (b, e) in frame.iter().enumerate() {
                let pairing = w.interior(e).as_scalar();
                assert_eq!(pairing, ScalarExpr::integer((a == b) as i64));
            }
        }
        // dx1 under the affine change, (∂x1/∂x'^a) dx'^a
        let affine = sample_affine().tangent();
        let dx1 = affine.transform_form(&Form::dx(2, 1)).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(
            dx1,
            Form::dx(2, 1)
                .scale(&half)
                .sub(&Form::dx(2, 2).scale(&half))
        );
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_quadratic(&mut rng, 2).tangent();
        let w = Form::dx(2, 1)
            .wedge(&Form::dv(2, 2))
            .mul_scalar(&(&x(1) * &v(1)));
        let there = transform(&w, &t, Direction::Forward).unwrap();
        assert_eq!(transform(&there, &t, Direction::Backward).unwrap(), w);
        let field = VectorField::d_x(2, 1).mul_scalar(&v(2));
        let there = transform(&field, &t, Direction::Forward).unwrap();
        assert_eq!(transform(&there, &t, Direction::Backward).unwrap(), field);
    }

    #[test]
    fn tangent_transitions_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_quadratic(&mut rng, 2);
        let b = random_affine(&mut rng, 2);
        let composed = a.then(&b).unwrap().tangent();
        assert_eq!(a.tangent().then(&b.tangent()).unwrap(), composed);
    }

    #[test]
    fn tangent_transition_is_linear_in_v() {
        let t = sample_quadratic().tangent();
        for e in &t.forward()[2..] {
            for i in 1..=2 {
                for j in 1..=2 {
                    assert!(e
                        .partial(CoordinateId::fiber(i))
                        .partial(CoordinateId::fiber(j))
                        .is_zero());
                }
            }
        }
    }

    #[test]
    fn consistency_identity() {
        assert!(check_consistency_identity(&sample_affine()).unwrap());
        assert!(check_consistency_identity(&sample_quadratic()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 2..=3 {
            assert!(check_consistency_identity(&random_quadratic(&mut rng, m)).unwrap());
        }
    }

    #[test]
    fn flat_structures_drop_the_second_derivative_term() {
        let dv = sample_affine().tangent().coframe_images()[2].clone();
        assert!(dv.terms().all(|(i, _)| i.fiber_count(2) == 1));
        let dv = sample_quadratic().tangent().coframe_images()[2].clone();
        assert!(dv.terms().any(|(i, _)| i.fiber_count(2) == 0));
    }

    #[test]
    fn naturality_of_every_lift() {
        let t = sample_quadratic();
        let f = &x(1) * &x(2) + x(2);
        let xf = BaseVectorField::new(2, vec![x(2), &x(1) * &x(1)]).unwrap();
        let a = BaseForm::one_form(2, &[x(2), x(1)]).unwrap();
        for (kind, obj) in [
            ("pullback", BaseObject::Form(a.clone())),
            ("vertical", BaseObject::Field(xf.clone())),
            ("complete", BaseObject::Function(f)),
            ("complete", BaseObject::Field(xf)),
            ("complete", BaseObject::Form(a)),
            ("xi", BaseObject::None),
            ("B", BaseObject::None),
        ] {
            assert!(check_naturality(kind, &obj, &t).unwrap(), "{kind}");
        }
        assert_eq!(
            check_naturality("spin", &BaseObject::None, &t),
            Err(Error::UnknownLift("spin".into()))
        );
    }

    #[test]
    fn volume_factor_is_det_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in [
            sample_affine(),
            sample_quadratic(),
            random_quadratic(&mut rng, 3),
        ] {
            let det = t.jacobian_determinant();
            assert_eq!(t.tangent().volume_factor(), &det * &det);
        }
    }
}
