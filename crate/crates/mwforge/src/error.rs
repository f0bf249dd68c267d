use std::fmt;

/// Errors produced by the exact-arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands belong to different field contexts.
    CtxMismatch,
    /// Division (or inversion) by zero.
    DivisionByZero,
    /// A value that must be prime is not.
    NotPrime(u64),
    /// A finite field does not contain the requested roots of unity.
    FieldTooSmall { order: u64, d: u64 },
    /// Multiplicative order of zero requested.
    ZeroHasNoOrder,
    /// Rational-function evaluation at a pole of the function.
    EvalAtPole,
    /// `u -> c*u` substitution with `c = 0`.
    ZeroScale,
    /// Construction of a rational function with zero denominator.
    ZeroDenominator,
    /// Exact division left a remainder.
    InexactDivision,
    /// A Weierstrass model has vanishing discriminant.
    SingularCurve,
    /// The j-invariant of a singular model was requested.
    SingularJInvariant,
    /// A group-law operand does not satisfy the curve equation.
    PointNotOnCurve,
    /// Operation not available in this characteristic.
    BadCharacteristic(u64),
    /// Input data violates a stated hypothesis; the message names the clause.
    DataInvariant(String),
    /// Riemann-Hurwitz bookkeeping produced an odd value of `2g - 2`.
    GenusParity,
    /// A cyclic cover with these branch multiplicities is reducible.
    ReducibleCover,
    /// Parameters are outside the supported desk scale.
    OutOfRange(String),
    /// Operation does not apply to this input (e.g. `p = 2` identity check).
    Inapplicable(&'static str),
    /// Matrix dimensions do not match.
    DimensionMismatch,
    /// A symmetric matrix was required.
    NonSymmetricMatrix,
    /// `d` is not of the form `p^n + 1`.
    NotSpecialDegree { p: u64, d: u64 },
    /// A doubling chain ran into the point at infinity.
    TorsionEncountered { iter: u32 },
    /// Parse error in a polynomial or fraction literal.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CtxMismatch => write!(f, "field context mismatch"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::FieldTooSmall { order, d } => {
                write!(f, "field of order {order} has no primitive {d}-th root of unity")
            }
            Error::ZeroHasNoOrder => write!(f, "zero has no multiplicative order"),
            Error::EvalAtPole => write!(f, "evaluation at a pole"),
            Error::ZeroScale => write!(f, "substitution scale must be nonzero"),
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::InexactDivision => write!(f, "inexact polynomial division"),
            Error::SingularCurve => write!(f, "singular Weierstrass model (discriminant = 0)"),
            Error::SingularJInvariant => write!(f, "j-invariant undefined: discriminant = 0"),
            Error::PointNotOnCurve => write!(f, "point does not satisfy the curve equation"),
            Error::BadCharacteristic(p) => write!(f, "operation unavailable in characteristic {p}"),
            Error::DataInvariant(clause) => write!(f, "data invariant violated: {clause}"),
            Error::GenusParity => write!(f, "branch data gives odd 2g-2"),
            Error::ReducibleCover => write!(f, "cover is reducible for these multiplicities"),
            Error::OutOfRange(msg) => write!(f, "out of supported range: {msg}"),
            Error::Inapplicable(msg) => write!(f, "inapplicable: {msg}"),
            Error::DimensionMismatch => write!(f, "dimension mismatch"),
            Error::NonSymmetricMatrix => write!(f, "matrix is not symmetric"),
            Error::NotSpecialDegree { p, d } => {
                write!(f, "{d} is not of the form {p}^n + 1")
            }
            Error::TorsionEncountered { iter } => {
                write!(f, "doubling reached the point at infinity at iteration {iter}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
