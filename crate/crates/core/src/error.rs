use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the transforms, generators and experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image has zero total mass")]
    AllZeroImage,

    #[error("negative or non-finite pixel value {value} at ({row}, {col})")]
    NegativePixel { row: usize, col: usize, value: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("argument {0} outside the open interval (0, 1)")]
    ArgOutOfRange(f64),

    #[error("direction ({0}, {1}) is not a unit vector")]
    NonUnitDirection(f64, f64),

    #[error("projection {0} lies outside the radial grid")]
    SupportOutsideDisc(f64),

    #[error("query projection {0} lies outside the radial grid")]
    QueryOutsideGrid(f64),

    #[error("matrix is singular (det = {0})")]
    SingularMatrix(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("degenerate direction at angle index {0}: projected quantile function has vanishing std")]
    DegenerateDirection(usize),

    #[error("perturbation budget exceeded: 2 * {eps} >= {c0}")]
    BudgetExceeded { eps: f64, c0: f64 },

    #[error("assignment oracle supports at most 8 atoms, got {0}")]
    TooManyAtoms(usize),

    #[error("assignment oracle requires uniform equal-count atoms")]
    NonUniform,

    #[error("template id {0} outside 1..=12")]
    BadTemplateId(usize),

    #[error("bad magic number {0:#010x}")]
    BadMagic(u32),

    #[error("truncated file: expected {expected} bytes, found {found}")]
    TruncatedFile { expected: usize, found: usize },

    #[error("empty template set")]
    EmptyTemplateSet,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("k = {k} exceeds the {available} available references")]
    KTooLarge { k: usize, available: usize },

    #[error("value {0} outside [0, 1]")]
    ValueOutOfRange(f64),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bad file format in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
