use thiserror::Error;

#[derive(Debug, Error)]
pub enum MzvError {
    #[error("index entries must be at least 1, got {0}")]
    InvalidIndexEntry(u64),
    #[error("invalid parameters (a,b,c)=({a},{b},{c}): {reason}")]
    InvalidParams {
        a: u32,
        b: u32,
        c: u32,
        reason: &'static str,
    },
    #[error("truncation bounds differ: {0:?} vs {1:?}")]
    BoundMismatch((usize, usize), (usize, usize)),
    #[error("coefficient ({p},{q}) lies outside the truncation bounds {bounds:?}")]
    OutOfBounds {
        p: usize,
        q: usize,
        bounds: (usize, usize),
    },
    #[error("closed forms are only known for (a,b,c)=(3,1,2)")]
    UnsupportedParams,
    #[error("m schedule must be strictly increasing")]
    NonIncreasingSchedule,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache file: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MzvError>;
