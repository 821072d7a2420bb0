use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {rows}x{cols} = {} entries, got {actual}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        actual: usize,
    },
    #[error("row {row} has {actual} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not Hermitian: max |H - H*| = {defect:e} exceeds 1e-10 * {scale:e}")]
    NotHermitian { defect: f64, scale: f64 },
    #[error("block ({row}, {col}) has shape {actual:?}, expected {expected:?}")]
    BlockShape {
        row: usize,
        col: usize,
        expected: (usize, usize),
        actual: (usize, usize),
    },
    #[error("block grid must contain at least one block")]
    EmptyBlockGrid,
    #[error("block list must be non-empty")]
    NoBlocks,
    #[error("vector is not a unit vector: norm {norm}")]
    NotUnit { norm: f64 },
    #[error("w(B) = {w} exceeds 1/2; the equality model requires w(B) <= 1/2")]
    EqualityModelPrecondition { w: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
