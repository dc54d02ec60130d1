use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The condition of the deformation map's domain that a point violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainCondition {
    /// `P0 + C <= 0`, the logarithm in the time component is undefined.
    ShiftedEnergy,
    /// `C^2 - g00 M^2 < 0`, the constraint on `A` has no real root.
    Discriminant,
    /// `C - g00 A <= 0`.
    Denominator,
}

impl fmt::Display for DomainCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainCondition::ShiftedEnergy => "P0 + C must be positive",
            DomainCondition::Discriminant => "C^2 - g00*M^2 must be non-negative",
            DomainCondition::Denominator => "C - g00*A must be positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("metric dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("metric entries must form a {n}x{n} matrix")]
    NotSquare { n: usize },
    #[error("metric is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),
    #[error("metric is not invertible (|det| = {0:e})")]
    NonInvertible(f64),
    #[error("unknown metric preset `{0}`")]
    UnknownPreset(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{op} is undefined at {arg}")]
    Domain { op: &'static str, arg: f64 },
    #[error("generator index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dilatation requires g00 = 0, got g00 = {0}")]
    WeylRequiresNullTime(f64),
    #[error("kappa must be positive and finite, got {0}")]
    InvalidKappa(f64),
    #[error("map domain violated: {0}")]
    MapDomain(DomainCondition),
    #[error("A(M^2) has no real root: C^2 - g00*M^2 = {0:e}")]
    NoRealRoot(f64),
    #[error("exp(p0/kappa) overflows for p0/kappa = {0}")]
    Range(f64),
    #[error("could not bracket M^2 for deformed mass squared {0}")]
    NoSolution(f64),
    #[error("sampling accepted {accepted} of {attempted} candidates")]
    DomainTooTight { accepted: usize, attempted: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}
