use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("determinant requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix rows have different lengths")]
    Ragged,
    #[error("column {col} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("replacement column has {got} entries, expected {expected}")]
    ColumnLength { got: usize, expected: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctionalError {
    #[error("moment budget exceeded: degree {needed} requested, functional known up to degree {available}")]
    DegreeBudget { needed: usize, available: usize },
    #[error("a functional needs at least one moment")]
    Empty,
    #[error("dilation factor must be nonzero")]
    ZeroDilation,
    #[error("cannot normalize a functional with vanishing moment 0")]
    ZeroMass,
    #[error("invalid functional parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpsError {
    #[error("regularity breakdown: <u, P_{index}^2> vanishes")]
    Regularity { index: usize },
    #[error("gamma_{index} is zero; the recurrence does not define an orthogonal sequence")]
    ZeroGamma { index: usize },
    #[error("P_{index} requested but the sequence is cached up to degree {available}")]
    OutOfRange { index: usize, available: usize },
    #[error("basis element {index} is not monic of degree {index}")]
    NotGradedMonic { index: usize },
    #[error("recurrence input needs as many gammas as betas (got {betas} betas, {gammas} gammas)")]
    RecurrenceShape { betas: usize, gammas: usize },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoherenceError {
    #[error("pi must be a nonzero monic polynomial")]
    PiNotMonic,
    #[error("band row {row} requested but only rows 0..={available} were computed")]
    MissingRow { row: usize, available: usize },
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiclassicalError {
    #[error("phi(.;n,j) requires j <= N = {n_deg}, got j = {j}")]
    PhiIndex { j: usize, n_deg: usize },
    #[error("theorem precondition not met: {0}")]
    Precondition(String),
    #[error("class bound needs nonzero polynomials")]
    ZeroPolynomial,
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GriffinError {
    #[error("structure input violates {0}")]
    InvalidInput(String),
    #[error("no positive-definite sequence: {name} = {value} is not positive")]
    NotPositiveDefinite { name: &'static str, value: String },
    #[error("integrability gate failed: {0}")]
    ParameterGate(String),
    #[error("compatibility constraint beta_0 (s_2 - gamma_2) = (beta_0 beta_1 - gamma_1)(r_2 - beta_2) fails by {residual}")]
    Compatibility { residual: String },
    #[error("weight ratio M = {0} is negative; no weight of the assumed form exists")]
    NegativeWeightRatio(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("exact backend cannot run quadrature; use the float backend")]
    ExactBackend,
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
}
