use thiserror::Error;

/// Errors raised by the symbolic kernel and the operators built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator normalizes to zero")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("generator `{0}` has no value at the evaluation point")]
    Unbound(String),
    #[error("binding for `{0}` is inconsistent with the binding of the underlying symbol")]
    InconsistentBinding(String),
    #[error("base-only symbol `{0}` bound to an expression that depends on fibre coordinates")]
    DependenceViolation(String),
    #[error("expected a base object, found fibre dependence in `{0}`")]
    NotBaseOnly(String),
    #[error("expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("chart dimensions differ: {0} and {1}")]
    DimensionMismatch(usize, usize),
    #[error("vector-valued forms of degree {0} are not supported by this operation")]
    UnsupportedDegree(usize),
    #[error("form is not semi-basic: component {0} carries a fibre index")]
    NotSemiBasic(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("coefficients are not polynomial along the fibre")]
    NonPolynomialFiberDependence,
    #[error("form does not lie above the given base form")]
    NotAboveMu,
    #[error("forward and inverse maps are not mutually inverse")]
    NotInverse,
    #[error("unknown lift `{0}`")]
    UnknownLift(String),
    #[error("abstract function symbol `{0}` cannot be carried through a change of chart")]
    AbstractSymbol(String),
    #[error("coordinate index {index} out of range for dimension {m}")]
    IndexOutOfRange { index: usize, m: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
