use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants map one-to-one onto the stable error codes returned by
/// [`Error::code`], which the command-line front end uses for its JSON
/// error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("lattice is odd; the discriminant quadratic form needs an even lattice")]
    OddLattice,
    #[error("group of order {order} exceeds the brute-force cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("lattice is not definite")]
    NotDefinite,
    #[error("no primitive vector of norm {0}")]
    NotRepresented(String),
    #[error("odd norm {0} requested in an even lattice")]
    ParityViolation(String),
    #[error("isometry has determinant -1")]
    NotSpecialOrthogonal,
    #[error("isometry does not act trivially on the discriminant group")]
    NotInTildeO,
    #[error("matrix is not an isometry of the lattice")]
    NotAnIsometry,
    #[error("glue is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("period pairing is not positive: {0}")]
    NotPositive(String),
    #[error("period domain needs two positive directions, lattice has signature {0}")]
    WrongSignature(String),
    #[error("restriction of the form to the sublattice is degenerate")]
    DegenerateRestriction,
    #[error("sublattice is not saturated (index {0})")]
    NotSaturated(String),
    #[error("matrix is not invertible modulo {0}")]
    NotInvertible(u64),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::SingularMatrix => "SingularMatrix",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSymmetric => "NotSymmetric",
            Error::Degenerate => "Degenerate",
            Error::BadParameter(_) => "BadParameter",
            Error::OddLattice => "OddLattice",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotDefinite => "NotDefinite",
            Error::NotRepresented(_) => "NotRepresented",
            Error::ParityViolation(_) => "ParityViolation",
            Error::NotSpecialOrthogonal => "NotSpecialOrthogonal",
            Error::NotInTildeO => "NotInTildeO",
            Error::NotAnIsometry => "NotAnIsometry",
            Error::NotIsotropic(_) => "NotIsotropic",
            Error::NotPositive(_) => "NotPositive",
            Error::WrongSignature(_) => "WrongSignature",
            Error::DegenerateRestriction => "DegenerateRestriction",
            Error::NotSaturated(_) => "NotSaturated",
            Error::NotInvertible(_) => "NotInvertible",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
