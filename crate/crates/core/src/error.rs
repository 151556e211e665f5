pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate. Variants map onto the CLI exit codes:
/// input problems (parse, value, cycle, size, bad order) exit with 2,
/// solver failures (iteration limit, numerics, infeasibility) with 3.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("precedence cycle detected involving job {0}")]
    Cycle(usize),

    #[error("invalid value: {0}")]
    Value(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance too large: n={n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("iteration limit exceeded: {0}")]
    IterationLimit(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("LP relaxation reported infeasible; it is feasible by construction")]
    InfeasibleLp,

    #[error("order violates precedence: job {pred} must come before job {succ}")]
    OrderViolatesPrecedence { pred: usize, succ: usize },

    #[error("LP completion times violate precedence: C[{succ}] < C[{pred}] by {gap}")]
    PrecedenceViolation { pred: usize, succ: usize, gap: f64 },
}

impl Error {
    /// Exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Cycle(_)
            | Error::Value(_)
            | Error::Parse { .. }
            | Error::TooLarge { .. }
            | Error::OrderViolatesPrecedence { .. } => 2,
            Error::IterationLimit(_)
            | Error::Numerical(_)
            | Error::InfeasibleLp
            | Error::PrecedenceViolation { .. } => 3,
        }
    }
}
