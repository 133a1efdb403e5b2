use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exponent matrix needs at least one row")]
    NoRows,
    #[error("exponent matrix needs at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("lifting degree must be at least 2, got {0}")]
    LiftingDegreeTooSmall(u64),
    #[error("entry {value} at ({row}, {col}) is outside [0, {p})")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: u64,
        p: u64,
    },
    #[error("exponent matrix is not normalized (first row and column must be zero)")]
    NotNormalized,
    #[error("expected 3 rows, got {0}")]
    WrongRowCount(usize),
    #[error("header sequences must have equal length >= 2 and start with 0")]
    InvalidHeaders,
    #[error("header value {value} is outside [0, {p})")]
    HeaderOutOfRange { value: u64, p: u64 },
    #[error("lifting degree {p} must exceed the largest matrix entry {max}")]
    ModulusTooSmall { p: u64, max: u64 },
    #[error("lifting degree {p} does not match the matrix modulus {modulus}")]
    ModulusMismatch { p: u64, modulus: u64 },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("row index {0} out of range")]
    RowOutOfRange(usize),

    #[error("cycle half-length k = {0} is not searched (supported range is 2..=6)")]
    KTooLarge(usize),
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,

    #[error("arithmetic length m = {m} must lie in 2..={l}")]
    MOutOfRange { m: u64, l: u64 },
    #[error("arithmetic subsequence lengths must be non-increasing")]
    UnsortedLengths,
    #[error("arithmetic subsequence lengths must all be at least 2")]
    LengthTooSmall,
    #[error("arithmetic subsequence lengths sum to {sum}, more than L = {l}")]
    LengthsExceedL { sum: u64, l: u64 },
    #[error("J and L must both be at least 2")]
    DimensionTooSmall,
    #[error("row headers must be strictly increasing")]
    UnsortedHeaders,
    #[error("exhaustive search over L = {l}, p = {p} is not tractable (needs L <= 5 and p <= 16)")]
    SearchSpaceTooLarge { l: usize, p: u64 },

    #[error("L = {l} is too small for common difference d = {d}")]
    LTooSmall { l: usize, d: u64 },
    #[error("common difference d = {0} is not handled by this construction")]
    InfeasibleConstraint(u64),
    #[error("lifting degree {p} is below the construction minimum {p_min}")]
    PTooSmall { p: u64, p_min: u64 },
    #[error("construction produced an invalid girth-8 matrix: {0}")]
    ConstructionInvalid(String),

    #[error("malformed alist header: {0}")]
    MalformedHeader(String),
    #[error("alist weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("alist index {index} out of range 1..={max}")]
    IndexOutOfRange { index: u64, max: usize },
    #[error("malformed exponent matrix text: {0}")]
    MalformedText(String),

    #[error("parity-check matrix has full column rank, code rate is zero")]
    InvalidRate,
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("no codes given")]
    NoCodes,
    #[error("csv output: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;
