use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // numerics
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric/Hermitian: relative residual {residual:e}")]
    NotSymmetric { residual: f64 },
    #[error("matrix has negative eigenvalue {value:e} (largest {max:e})")]
    NegativeEigenvalue { value: f64, max: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("data length {len} does not match shape {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    // frames
    #[error("frame does not span its ambient space (lower bound {lower:e})")]
    NotSpanning { lower: f64 },
    #[error("need at least {dim} vectors for dimension {dim}, got {count}")]
    CountTooSmall { dim: usize, count: usize },
    #[error("iteration did not converge after {iterations} steps (norm residual {norm_residual:e}, tightness residual {tight_residual:e})")]
    DidNotConverge {
        iterations: usize,
        norm_residual: f64,
        tight_residual: f64,
    },
    #[error("frame is empty")]
    EmptyFrame,

    // subsets and partitions
    #[error("index {index} out of range for {count} vectors")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("index {index} appears more than once")]
    DuplicateIndex { index: usize },
    #[error("invalid subset size {size} for {count} vectors")]
    InvalidSize { size: usize, count: usize },
    #[error("C({count}, {size}) = {subsets} subsets exceeds the enumeration budget {budget}; use randomized search")]
    BudgetExceeded {
        count: usize,
        size: usize,
        subsets: u128,
        budget: u64,
    },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("measured epsilon {measured} exceeds the supplied epsilon {supplied}")]
    NotRieszBasis { measured: f64, supplied: f64 },
    #[error("RIP report witness does not reproduce epsilon_hat ({reported} vs {recomputed})")]
    RipReportMismatch { reported: f64, recomputed: f64 },

    // fusion
    #[error("frame is not tight: bound ratio {ratio}")]
    NotTight { ratio: f64 },
    #[error("frame vector {index} has norm {norm}, expected 1")]
    NotUnitNorm { index: usize, norm: f64 },
    #[error("block of size {size} exceeds the cap {cap}")]
    BlockTooLarge { size: usize, cap: usize },
    #[error("weights must be positive and finite, one per subspace")]
    InvalidWeights,
    #[error("subspaces do not span the ambient space (lower fusion bound {lower:e})")]
    NotAFusionFrame { lower: f64 },
    #[error("measurement {index} lies outside its subspace (residual {residual:e})")]
    MeasurementOutsideSubspace { index: usize, residual: f64 },
    #[error("local frame {index} does not span its subspace")]
    LocalNotSpanning { index: usize },
    #[error("subspace basis is not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("subspace spanned by the given vectors is trivial")]
    TrivialSubspace,

    // geometry
    #[error("subspaces live in different ambient dimensions ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("need at least 2 subspaces, got {0}")]
    TooFewSubspaces(usize),

    // replacement
    #[error("block {block} is linearly dependent (lambda_min {lambda_min:e})")]
    DependentBlock { block: usize, lambda_min: f64 },
    #[error("unknown block id {0}")]
    UnknownBlock(usize),
    #[error("epsilon {0} must be below 1")]
    EpsilonTooLarge(f64),
    #[error("epsilon {0} outside (0, 1)")]
    EpsilonOutOfRange(f64),
    #[error("1 - 4e/(1-e)^2 is not positive at epsilon {0}")]
    FormulaNegative(f64),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    // io
    #[error("field mismatch: file holds {found} data, expected {expected}")]
    FieldMismatch { expected: String, found: String },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
