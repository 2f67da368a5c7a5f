use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("accuracy not certified: estimate {estimate:e}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },
    #[error(
        "terminal time inadmissible: |E_(α,1)(-λ_{mode} T^α)| = {value:e} ≤ {eps:e} for mode {mode}; \
         choose a larger T or a smaller truncation J"
    )]
    TerminalTimeInadmissible { mode: usize, value: f64, eps: f64 },
    #[error("aliasing: {points} collocation points cannot resolve {modes} modes (need at least {required})")]
    Alias { points: usize, modes: usize, required: usize },
    #[error("grid error: {0}")]
    Grid(String),
    #[error("no convergence after {iterations} iterations (last ratio {last_ratio:e})")]
    NonConvergence { iterations: usize, last_ratio: f64, partial: Box<crate::solver::Trajectory> },
    #[error("degenerate fit window: {0}")]
    DegenerateWindow(String),
    #[error("input error: {0}")]
    Input(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "DomainError",
            Error::Accuracy { .. } => "AccuracyError",
            Error::TerminalTimeInadmissible { .. } => "TerminalTimeInadmissible",
            Error::Alias { .. } => "AliasError",
            Error::Grid(_) => "GridError",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::DegenerateWindow(_) => "DegenerateWindow",
            Error::Input(_) => "InputError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
