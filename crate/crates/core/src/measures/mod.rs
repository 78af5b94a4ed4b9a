//! Signed measures, the Jordan-measure lattice and discrete integral
//! representations of states.

mod decompose;
mod integral;
mod jordan;
mod strong;

pub use decompose::{decompositions, sup_construction, Decomposition, MeasureSpace};
pub use integral::{
    finite_morphism_id, integral_represent, integral_represent_symbolic, DiscreteMeasure,
};
pub use jordan::{jordan_lattice, leq_plus, JordanOp, JordanReport};
pub use strong::strong_join_t;

use ratlp::{LpError, Rat};

use crate::algebra::AlgebraError;
use crate::states::StatesError;
use crate::structure::StructureError;

/// Values indexed by the finite carrier; no sign or bound restriction.
pub type SignedMeasureVec = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasuresError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    States(#[from] StatesError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("expected {expected} values, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not subadditive: {detail}")]
    NotSubadditive { witness: Vec<String>, detail: String },
    #[error("not additive: {detail}")]
    NotAdditive { witness: Vec<String>, detail: String },
    #[error("measure has infinite support")]
    NotFiniteSupport,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("unsupported carrier: {0}")]
    UnsupportedCarrier(String),
    #[error("internal disagreement: {detail}")]
    Disagreement { detail: String, witness: Vec<String> },
}

impl MeasuresError {
    pub fn code(&self) -> &'static str {
        match self {
            MeasuresError::Algebra(e) => e.code(),
            MeasuresError::Structure(e) => e.code(),
            MeasuresError::States(e) => e.code(),
            MeasuresError::Lp(_) => "LpError",
            MeasuresError::DimensionMismatch { .. } => "DimensionMismatch",
            MeasuresError::NotSubadditive { .. } => "NotSubadditive",
            MeasuresError::NotAdditive { .. } => "NotAdditive",
            MeasuresError::NotFiniteSupport => "NotFiniteSupport",
            MeasuresError::InvalidMeasure(_) => "InvalidMeasure",
            MeasuresError::UnsupportedCarrier(_) => "UnsupportedCarrier",
            MeasuresError::Disagreement { .. } => "DisagreementBug",
        }
    }

    pub fn witness(&self) -> Vec<String> {
        match self {
            MeasuresError::Algebra(e) => e.witness(),
            MeasuresError::Structure(e) => e.witness(),
            MeasuresError::States(e) => e.witness(),
            MeasuresError::NotSubadditive { witness, .. }
            | MeasuresError::NotAdditive { witness, .. }
            | MeasuresError::Disagreement { witness, .. } => witness.clone(),
            _ => Vec::new(),
        }
    }
}
