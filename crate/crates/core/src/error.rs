use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero series")]
    ZeroSeries,
    #[error("p must be prime or zero (got {0})")]
    NotPrimeOrZero(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("constant equation")]
    ConstantEquation,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix must be square (got {rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("insufficient precision: requested {requested}, known below {available}")]
    InsufficientPrecision { requested: String, available: String },
    #[error("cutoff unreachable: precision deficit of {deficit}")]
    CutoffUnreachable { deficit: String },
    #[error("Hensel condition fails: v(P(b)) = {residual}, v(P'(b)) = {derivative}")]
    HenselFails { residual: String, derivative: String },
    #[error("derivative valuation drifted from {before} to {after}")]
    DerivativeDrift { before: String, after: String },
    #[error("residual valuation did not increase ({before} -> {after})")]
    NoProgress { before: String, after: String },
    #[error("characteristic 0 is not supported here")]
    CharacteristicZero,
    #[error("image of exponent {0} leaves the exponent group")]
    LeavesGroup(String),
    #[error("exponent comparison exceeded {bits} bits of refinement (are the weights Q-linearly independent?)")]
    RefinementExhausted { bits: u32 },
    #[error("{0} is not a unit modulo {1}")]
    NotUnit(i64, i64),
    #[error("element is not in the kernel")]
    NotInKernel,
    #[error("empty ramification datum")]
    EmptyDatum,
    #[error("datum not reduced: run artin_schreier_reduce first")]
    DatumNotReduced,
    #[error("invalid ramification datum: {0}")]
    InvalidDatum(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("wild quadratic: unsupported in characteristic 2")]
    WildQuadratic,
    #[error("mismatched coefficient fields or exponent groups")]
    Mismatch,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
