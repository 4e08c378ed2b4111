use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} did not converge: reached {achieved:e}, wanted {requested:e}")]
    Convergence {
        what: String,
        achieved: f64,
        requested: f64,
    },
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("invalid discriminant splitting {d1} * {d2}")]
    InvalidSplitting { d1: i64, d2: i64 },
    #[error("alpha^(2t) is not unit invariant for D = {d}, t = {t}")]
    UnitInvariance { d: i64, t: u32 },
    #[error("branch {branch} out of range [0, {max})")]
    BranchOutOfRange { branch: usize, max: usize },
    #[error("points coincide")]
    Coincidence,
    #[error("tail estimate {estimate:e} exceeds budget {budget:e}")]
    TailBudget { estimate: f64, budget: f64 },
    #[error("no relation on the chosen support")]
    NoRelation,
    #[error("need coefficients up to {needed}, have {have}")]
    InsufficientCoefficients { needed: u64, have: u64 },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("multiplicativity fails: a({m})a({n}) != a({mn})", mn = m * n)]
    Multiplicativity { m: u64, n: u64 },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
