use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("terminal node {0} was relabeled")]
    TerminalMoved(usize),

    #[error("node {0} is a terminal and cannot be contracted")]
    TerminalContract(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("LP solution cannot be read as an assignment: {0}")]
    LpExtraction(String),

    #[error("fractional assignment violates the LP constraints: {0}")]
    Infeasible(String),

    #[error("edge ({0}, {1}) has endpoint vectors differing in more than two entries")]
    SubdivisionRequired(usize, usize),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("operation requires k = 2, instance has k = {0}")]
    RequiresTwoPartitions(usize),

    #[error("LP is {0}")]
    LpStatus(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
