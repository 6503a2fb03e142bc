use thiserror::Error;

/// Errors surfaced by the solver library.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-physical state: {what} at node ({i}, {j}): {value}")]
    Positivity { what: &'static str, i: usize, j: usize, value: f64 },

    #[error("characteristic decomposition failed at interface ({i}, {j}): c^2 = {c2}")]
    EigenDecomposition { i: usize, j: usize, c2: f64 },

    #[error("linear solver stalled after {iters} iterations (relative residual {residual:e})")]
    SolverStall { iters: usize, residual: f64 },

    #[error("perturbation fields requested at eps = 0 before any elliptic solve")]
    MissingPerturbation,

    #[error("Butcher tableau rejected: {0}")]
    Tableau(String),

    #[error("unknown case '{0}'")]
    UnknownCase(String),

    #[error("time step failed at t = {t}, step {step}: {source}")]
    Step {
        t: f64,
        step: usize,
        #[source]
        source: Box<SolverError>,
    },

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SolverError>;
