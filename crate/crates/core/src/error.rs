use thiserror::Error;

use crate::tiling::CellRef;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell {0:?} is a leaf and has no children")]
    LeafCell(CellRef),
    #[error("cell {0:?} is the root and has no parent")]
    RootCell(CellRef),
    #[error("invalid cell {0:?}")]
    InvalidCell(CellRef),
    #[error("point ({x}, {y}) lies outside the tiling domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("address overflows {max_digits} digits")]
    AddressOverflow { max_digits: usize },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("target {target_index} coincides with source {source_index}")]
    Singular { source_index: usize, target_index: usize },
    #[error("expansions centred at {from} and {to} are not well separated")]
    NotSeparated {
        from: num_complex::Complex64,
        to: num_complex::Complex64,
    },
    #[error("degenerate polygon")]
    DegeneratePolygon,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
