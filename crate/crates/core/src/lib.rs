//! Spectral solver for terminal value problems of time-fractional wave
//! equations `∂_t^α u = -A u + G(t, u)`, `1 < α < 2`, with final data
//! `u(T) = f`.

// `!(x > 0.0)` is the NaN-rejecting form used throughout; index loops
// walk several per-node arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod analysis;
pub mod error;
pub mod gamma;
pub mod integrate;
pub mod mittag_leffler;
pub mod nonlinearity;
pub mod operators;
pub mod quadrature;
pub mod solver;
pub mod spectral_basis;

pub use error::{Error, Result};
pub use mittag_leffler::{fit_bound_constants, ml, ml_kernel, MLBoundConstants, MLParams, MlEvaluator, MlValue};
pub use nonlinearity::{NonlinearityKind, NonlinearitySpec};
pub use operators::TerminalSetup;
pub use quadrature::{KernelTable, TimeGrid};
pub use solver::{ProblemSpec, Regularity, SolveMode, Trajectory, TvpSolver};
pub use spectral_basis::{CheckReport, SpectralBasis, SpectralField};
