//! Exact rational linear algebra and linear programming.
//!
//! Everything here works over [`Rat`]; there is no floating point path.
//! [`solve`] runs a two-phase simplex with Bland's rule and returns either a
//! feasible (optionally optimal) point or a checkable infeasibility
//! [`Certificate`]. [`affine_rank`] and [`vertex_test`] supply the polytope
//! geometry used by state-space computations.

mod geometry;
mod rat;
mod simplex;
mod system;

pub use geometry::{affine_rank, rank, vertex_test};
pub use rat::{ParseRatError, Rat};
pub use simplex::{solve, Certificate, FeasOutcome, Objective, Sense, Solved};
pub use system::{Bounds, LinSystem, Row};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("objective is unbounded over the feasible region")]
    Unbounded,
    #[error("variable {0} is not declared")]
    UndeclaredVariable(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}
