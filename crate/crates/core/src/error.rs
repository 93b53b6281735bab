use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("self-loop on vertex {vertex}{}", at_line(*.line))]
    SelfLoop { vertex: u64, line: Option<usize> },
    #[error("matrix is not symmetric: entry ({row}, {col}) has no mirror")]
    Asymmetric { row: u64, col: u64 },
    #[error("vertex index {index} out of range for {count} vertices")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("vector must have at least one positive entry")]
    ZeroVector,
    #[error("vector entries must be finite and non-negative (entry {index} = {value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entry {index} = {value} exceeds the cap {cap}")]
    EntryExceedsCap { index: usize, value: f64, cap: u64 },
    #[error("entry {index} = {value} is not an integer")]
    NonInteger { index: usize, value: f64 },
    #[error("graph has no edges")]
    Edgeless,
    #[error("{count} vertices exceed the exhaustive-search cap {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("{required} ordered adjacency pairs exceed the budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("exhaustive search exceeded its time limit after {scanned} subsets")]
    TimeLimit { scanned: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" (line {l})")).unwrap_or_default()
}

pub type Result<T> = std::result::Result<T, Error>;
