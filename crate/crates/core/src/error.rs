use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A point or map was used with the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Germ definition document failed to parse as JSON.
    #[error("malformed germ document: {0}")]
    MalformedDocument(String),

    /// A term's exponent vector has the wrong length.
    #[error("component {component}, term {term}: exponent vector has length {got}, expected {expected}")]
    BadExponentLength {
        component: usize,
        term: usize,
        got: usize,
        expected: usize,
    },

    /// A term exceeds the declared degree bound.
    #[error("component {component}, term {term}: total degree {degree} exceeds bound {bound}")]
    DegreeOverBound {
        component: usize,
        term: usize,
        degree: u32,
        bound: u32,
    },

    /// A germ has a nonzero constant term, violating f(0) = 0.
    #[error("component {component}: nonzero constant term {coef} violates the germ condition f(0) = 0")]
    NonzeroConstantTerm { component: usize, coef: f64 },

    /// Invalid structural parameter (dimension, degree bound, scheme field).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The contact oracle only accepts scalar germs (p = 1).
    #[error("contact oracle is scalar: germ has p = {p}, handle vector germs componentwise")]
    NonScalarGerm { p: usize },

    /// Homeomorphism synthesis requires a passing contact verdict.
    #[error("synthesis refused: contact verdict is {kind}, construction hypotheses unmet")]
    VerdictNotEquivalent { kind: String },

    /// Multi assembly requires all parts to share the same common factor.
    #[error("contact-family condition violated: parts {first} and {other} carry different common factors")]
    MismatchedCommonFactor { first: String, other: String },

    /// Probe grid exceeds the configured cap.
    #[error("coefficient grid would enumerate {count} germs, exceeding cap {cap}")]
    GridTooLarge { count: u64, cap: u64 },

    /// A coordinate-change catalog entry referenced by name does not exist.
    #[error("unknown coordinate change {0:?}")]
    UnknownCoordChange(String),
}
