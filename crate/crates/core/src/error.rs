use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("del Pezzo degree {0} out of range 1..=7")]
    DegreeOutOfRange(i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vector is not a root: {0}")]
    NotARoot(String),

    #[error("not a lattice isometry: {0}")]
    NotAnIsometry(String),

    #[error("enumeration cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },

    #[error("group is not fully enumerated")]
    NotEnumerated,

    #[error("group of order {order} is too large for {what} (limit {limit})")]
    TooLarge {
        what: &'static str,
        order: usize,
        limit: usize,
    },

    #[error("{0} is not the exact order of the element")]
    WrongOrder(usize),

    #[error("class image escapes the given set")]
    NotClosed,

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
