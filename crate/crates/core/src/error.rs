use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no points")]
    NoPoints,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(
        "polytope is not full-dimensional (affine dimension {affine_dim} in ambient {ambient_dim})"
    )]
    NotFullDimensional {
        affine_dim: usize,
        ambient_dim: usize,
    },
    #[error("origin is not in the interior")]
    OriginNotInterior,
    #[error("not reflexive")]
    NotReflexive,
    #[error("degenerate pyramid: origin lies in the affine span of the base")]
    DegeneratePyramid,
    #[error("not a lattice isomorphism (|det| = {0})")]
    NotUnimodular(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polytope has a non-integral vertex")]
    NonLatticeVertex,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid nef-partition: {0}")]
    InvalidPartition(String),
    #[error("multiparameter moduli unsupported (kernel rank {0})")]
    MultiparameterUnsupported(usize),
    #[error("unsupported kernel vector shape: {0}")]
    UnsupportedShape(String),
    #[error("scale not integral")]
    ScaleNotIntegral,
    #[error("series division by a non-unit")]
    NonUnitDivision,
    #[error("series precondition violated: {0}")]
    SeriesDomain(&'static str),
    #[error("Yukawa ODE defined for threefold operators (got degree {0})")]
    YukawaDegree(usize),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("missing strata: {0:?}")]
    MissingStrata(Vec<Vec<String>>),
    #[error("middle Hodge numbers not determined for n = {0}")]
    HodgeUndetermined(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("malformed JSON: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// True for failures that signal a violated mathematical hypothesis rather than bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::Assertion(_))
    }
}
