use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("horizon must be positive")]
    EmptyHorizon,

    #[error("element {element} lies outside the window [0, {horizon})")]
    OutOfWindow { element: usize, horizon: usize },

    #[error("elements are not strictly increasing at index {index}")]
    NotIncreasing { index: usize },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generator at index {index} is zero")]
    ZeroGenerator { index: usize },

    #[error("generators are not superincreasing at index {index}")]
    NotSuperincreasing { index: usize },

    #[error("invalid symbol {0:?} (expected '0' or '1')")]
    InvalidSymbol(char),

    #[error("block of length {block} does not fit in a window of length {horizon}")]
    BlockTooLong { block: usize, horizon: usize },

    #[error("{what} = {value} is out of range (bound {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("point is not recurrent to depth {depth} on the window")]
    NotRecurrent { depth: usize },

    #[error("window exhausted at stage {stage}: {reason}")]
    WindowExhausted { stage: usize, reason: String },

    #[error("coloring is undefined at {0}")]
    ColoringNotTotal(u64),

    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
