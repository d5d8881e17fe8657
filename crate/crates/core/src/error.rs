use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("attempt to invert zero")]
    ZeroInverse,
    #[error("scalar depends on parameters: {0}")]
    NonConstant(String),
    #[error("parameter `{0}` has no value in the assignment")]
    UnboundParameter(String),
    #[error("operands live on different frames")]
    FrameMismatch,
    #[error("forms of degree {0} and {1} cannot be combined")]
    DegreeMismatch(usize, usize),
    #[error("operation requires a complex frame")]
    RealFrame,
    #[error("operation requires a real frame")]
    ComplexFrame,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("structure constants contain symbolic parameters; specialize first")]
    SymbolicParameters,
    #[error("almost complex structure is not integrable")]
    NotIntegrable,
    #[error("J does not square to -Id")]
    NotAlmostComplex,
    #[error("realization matrix is singular")]
    SingularRealization,
    #[error("transported structure equations are not real")]
    NotReal,
    #[error("structure equations fail the Jacobi identity on {0}")]
    Jacobi(String),
    #[error("unsupported dimension {0}; only 6 and 8 are tabulated")]
    UnsupportedDimension(usize),
    #[error("form is not closed")]
    NotClosed,
    #[error("metric is degenerate (F^n = 0)")]
    DegenerateMetric,
    #[error("k = {k} outside 1..={max}")]
    BadK { k: usize, max: usize },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("form is not of type (1,1)")]
    NotOneOne,
    #[error("invalid family point: {0}")]
    BadPoint(String),
    #[error("matrix is not an isomorphism of the given presentations")]
    NotIsomorphism,
    #[error("matrix is singular")]
    Singular,
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
