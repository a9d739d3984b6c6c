//! Exact differential ring of coefficient expressions.
//!
//! Every coefficient of a form, field or tensor on the tangent manifold is a
//! [`ScalarExpr`]: a reduced fraction of multivariate polynomials with exact
//! rational coefficients. The polynomial generators are the chart coordinates
//! `x1..xm`, `v1..vm` and formal partial derivatives of abstract function
//! symbols.

mod coefficient;
mod expr;
mod gcd;
mod poly;

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

pub use coefficient::Coefficient;
pub(crate) use expr::fmt_poly;
pub use expr::{Bindings, ScalarExpr};
pub use poly::{Monomial, Poly};

/// Exact rational numbers used throughout the kernel.
pub type Rational = num_rational::BigRational;

/// Whether a coordinate lives on the base or along the fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoordKind {
    Base,
    Fiber,
}

/// A chart coordinate `x^i` (base) or `v^i` (fibre), with a 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoordinateId {
    pub kind: CoordKind,
    pub index: u8,
}

impl CoordinateId {
    pub const fn base(index: u8) -> Self {
        CoordinateId {
            kind: CoordKind::Base,
            index,
        }
    }

    pub const fn fiber(index: u8) -> Self {
        CoordinateId {
            kind: CoordKind::Fiber,
            index,
        }
    }

    pub fn is_fiber(&self) -> bool {
        self.kind == CoordKind::Fiber
    }

    /// Position in the ordered coframe `(dx1..dxm, dv1..dvm)`.
    pub fn slot(&self, m: usize) -> usize {
        match self.kind {
            CoordKind::Base => self.index as usize - 1,
            CoordKind::Fiber => m + self.index as usize - 1,
        }
    }

    /// Inverse of [`CoordinateId::slot`].
    pub fn from_slot(slot: usize, m: usize) -> Self {
        if slot < m {
            CoordinateId::base(slot as u8 + 1)
        } else {
            CoordinateId::fiber((slot - m) as u8 + 1)
        }
    }

    /// All `2m` coordinates in coframe order.
    pub fn all(m: usize) -> impl Iterator<Item = CoordinateId> {
        (0..2 * m).map(move |s| CoordinateId::from_slot(s, m))
    }
}

impl fmt::Display for CoordinateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CoordKind::Base => write!(f, "x{}", self.index),
            CoordKind::Fiber => write!(f, "v{}", self.index),
        }
    }
}

/// Which coordinates an abstract function symbol may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dependence {
    /// A function on the base, `f(x)`. Its fibre partials vanish.
    BaseOnly,
    /// A function on the tangent manifold, `f(x, v)`.
    Full,
}

/// An abstract smooth function, carried through every computation with
/// formal, unexpanded partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionSymbol {
    name: Arc<str>,
    dependence: Dependence,
}

impl FunctionSymbol {
    pub fn new(name: &str, dependence: Dependence) -> Self {
        FunctionSymbol {
            name: Arc::from(name),
            dependence,
        }
    }

    pub fn base(name: &str) -> Self {
        Self::new(name, Dependence::BaseOnly)
    }

    pub fn full(name: &str) -> Self {
        Self::new(name, Dependence::Full)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dependence(&self) -> Dependence {
        self.dependence
    }

    pub fn is_base_only(&self) -> bool {
        self.dependence == Dependence::BaseOnly
    }
}

/// `f_{,I}`: the formal partial of `symbol` along the sorted multiset `wrt`.
/// An empty `wrt` is the symbol itself.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolPartial {
    pub symbol: FunctionSymbol,
    wrt: SmallVec<[CoordinateId; 4]>,
}

impl SymbolPartial {
    pub fn new(symbol: FunctionSymbol, wrt: impl IntoIterator<Item = CoordinateId>) -> Self {
        let mut wrt: SmallVec<[CoordinateId; 4]> = wrt.into_iter().collect();
        wrt.sort();
        SymbolPartial { symbol, wrt }
    }

    pub fn wrt(&self) -> &[CoordinateId] {
        &self.wrt
    }

    /// Differentiate once more; `None` when the result vanishes identically
    /// (a fibre partial of a base-only symbol).
    pub fn differentiate(&self, c: CoordinateId) -> Option<SymbolPartial> {
        if c.is_fiber() && self.symbol.is_base_only() {
            return None;
        }
        let mut wrt = self.wrt.clone();
        let pos = wrt.partition_point(|w| *w <= c);
        wrt.insert(pos, c);
        Some(SymbolPartial {
            symbol: self.symbol.clone(),
            wrt,
        })
    }

    /// If `other` is `self` differentiated further, the extra coordinates.
    pub fn remaining_after(&self, other: &SymbolPartial) -> Option<Vec<CoordinateId>> {
        if self.symbol != other.symbol || other.wrt.len() > self.wrt.len() {
            return None;
        }
        let mut rest = Vec::new();
        let mut j = 0;
        for c in &self.wrt {
            if j < other.wrt.len() && other.wrt[j] == *c {
                j += 1;
            } else {
                rest.push(*c);
            }
        }
        (j == other.wrt.len()).then_some(rest)
    }
}

/// A polynomial generator. The derived order is the fixed generator order of
/// the canonical form: coordinates first, then symbol partials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Coord(CoordinateId),
    Partial(SymbolPartial),
}

impl Generator {
    pub fn symbol(symbol: FunctionSymbol) -> Self {
        Generator::Partial(SymbolPartial::new(symbol, []))
    }

    /// True when the generator depends only on base coordinates.
    pub fn is_base_only(&self) -> bool {
        match self {
            Generator::Coord(c) => !c.is_fiber(),
            Generator::Partial(p) => p.symbol.is_base_only(),
        }
    }

    /// Highest coordinate index referenced, used for dimension checks.
    pub fn max_index(&self) -> u8 {
        match self {
            Generator::Coord(c) => c.index,
            Generator::Partial(p) => p.wrt.iter().map(|c| c.index).max().unwrap_or(0),
        }
    }
}

impl From<CoordinateId> for Generator {
    fn from(c: CoordinateId) -> Self {
        Generator::Coord(c)
    }
}

impl From<SymbolPartial> for Generator {
    fn from(p: SymbolPartial) -> Self {
        Generator::Partial(p)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Coord(c) => write!(f, "{c}"),
            Generator::Partial(p) if p.wrt.is_empty() => write!(f, "{}", p.symbol.name()),
            Generator::Partial(p) => {
                write!(f, "D({}", p.symbol.name())?;
                for c in &p.wrt {
                    write!(f, ", {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}
