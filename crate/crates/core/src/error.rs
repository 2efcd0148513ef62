use thiserror::Error;

/// Errors raised by array operations, ball enumeration and verification runs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u64),
    #[error("alphabet size {base}^{exponent} overflows")]
    AlphabetOverflow { base: u64, exponent: usize },
    #[error("alphabet size {alphabet} is not {base}^{extent}")]
    AlphabetNotPower {
        alphabet: u64,
        base: u64,
        extent: usize,
    },
    #[error("alphabets differ: {0} vs {1}")]
    AlphabetMismatch(u64, u64),
    #[error("axis {axis} out of range for a {dim}-dimensional array")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("position {pos} out of range 1..={max} on axis {axis}")]
    PositionOutOfRange { axis: usize, pos: usize, max: usize },
    #[error("axis {0} has extent 0")]
    EmptyAxis(usize),
    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: u64, alphabet: u64 },
    #[error("entry count {got} does not match shape volume {want}")]
    WrongVolume { got: usize, want: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("edit vector has {got} entries, array has {want} axes")]
    EditVectorDim { got: usize, want: usize },
    #[error("cannot delete {t} hyperplanes on axis {axis} of extent {extent}")]
    InfeasibleDeletion { axis: usize, t: usize, extent: usize },
    #[error("cannot project a {0}-dimensional array down to 0 dimensions")]
    ProjectToScalar(usize),
    #[error("cannot project along every axis at once")]
    ProjectAllAxes,
    #[error("shape volume overflows")]
    VolumeOverflow,
    #[error("universe of {count} arrays exceeds budget {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("{count} pair checks exceed budget {budget}; pass a seed to sample instead")]
    SeedRequired { count: u128, budget: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failure: {0}")]
    VerificationFailure(String),
    #[error("empty code")]
    EmptyCode,
    #[error("cache i/o: {0}")]
    CacheIo(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
